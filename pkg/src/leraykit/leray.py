"""Covering double complexes, the maps λ and τ, contracting homotopies,
and the canonical Leray homomorphisms between nerve and space.

Block layout of ``K^{p,q} = ∏_{σ ∈ N_p} A^q(|σ|)``: nerve simplices in
sorted order, and inside each the local basis of ``A^q(|σ|)``. The
homological complex uses the dual bases, so every homological matrix is
the transpose of its cohomological partner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bicomplex import (
    DoubleComplex,
    DoubleComplexMorphism,
    TotalComplex,
    edge_reduce_cocycle,
)
from .coverings import Covering, CoveringMorphism, nerve_map
from .exactla import (
    Quotient,
    RatMatrix,
    Vector,
    is_invertible,
    matrix_inverse,
    zero_vector,
)
from .simplicial import (
    ChainComplex,
    SimplicialComplex,
    Subdivision,
    barycentric_subdivision,
    cohomology_basis,
    homology_basis,
    induced_map,
    induced_on_quotients,
)
from .systems import FULL, BoundSystem, CochainSystem, Key

__all__ = [
    "CoveringDoubleComplex",
    "LerayResult",
    "HomologyLerayResult",
    "FactorizationResult",
    "AcyclicityReport",
    "LerayError",
    "PreconditionError",
    "covering_double_complex",
    "homology_covering_complex",
    "lambda_map",
    "tau_map",
    "contracting_homotopy",
    "homotopy_matrix",
    "glue_matrix",
    "homology_homotopy_matrix",
    "leray_map",
    "homology_leray_map",
    "is_acyclic",
    "factorization_check",
    "homology_factorization_check",
    "vanishing_check",
    "TransformationResult",
    "leray_transformation_check",
    "choice_independence_check",
    "star_covering",
    "RealizationResult",
    "realization_check",
]


class LerayError(RuntimeError):
    """Two computations that must agree did not."""


class PreconditionError(ValueError):
    """An operation was called outside its hypotheses."""


# -- the covering double complex ---------------------------------------------


@dataclass
class CoveringDoubleComplex:
    covering: Covering
    system: BoundSystem
    double: DoubleComplex
    # (p, q) -> [(σ, offset, size)] inside K^{p,q}
    blocks: Dict[Tuple[int, int], List[Tuple[Key, int, int]]]

    @property
    def homological(self) -> bool:
        return self.double.homological

    @property
    def total(self) -> TotalComplex:
        return self.double.total

    @property
    def nerve(self):
        return self.covering.nerve

    def offset(self, p: int, q: int, sigma: Key) -> Tuple[int, int]:
        for s, off, size in self.blocks.get((p, q), []):
            if s == sigma:
                return off, size
        raise KeyError((p, q, sigma))

    def place(self, p: int, q: int, sigma: Key, local: Sequence[Fraction]) -> Vector:
        """Element of ``K^{p,q}`` supported on ``σ`` with the given local value."""
        out = zero_vector(self.double.dim(p, q))
        off, size = self.offset(p, q, tuple(sigma))
        out[off:off + size] = list(local)
        return out

    def local(self, p: int, q: int, v: Sequence[Fraction], sigma: Key) -> Vector:
        off, size = self.offset(p, q, tuple(sigma))
        return list(v[off:off + size])

    def provenance(self, p: int, q: int) -> List[Tuple[Tuple, int]]:
        """For every basis vector of ``K^{p,q}``: (σ as index names, local index)."""
        names = self.covering.names
        out = []
        for s, off, size in self.blocks.get((p, q), []):
            for k in range(size):
                out.append((tuple(names[i] for i in s), k))
        return out

    def degrees(self) -> List[int]:
        return self.total.complex.degrees()


def covering_double_complex(U: Covering, A: CochainSystem = FULL) -> CoveringDoubleComplex:
    """``C^p(N, A^q)`` with ``d`` from the system and δ the alternating sum
    of restrictions along the faces ``∂_i σ ⊂ σ``."""
    key = ("_cdc", id(A))
    cached = U.__dict__.get(key)
    if cached is not None and cached[0] is A:
        return cached[1]
    b = A.bind(U)
    N = U.nerve
    top = b.top()
    dims: Dict[Tuple[int, int], int] = {}
    blocks: Dict[Tuple[int, int], List[Tuple[Key, int, int]]] = {}
    for p in range(N.dim + 1):
        for q in range(top + 1):
            off = 0
            lay = []
            for s in N.simplices(p):
                n = b.dim(s, q)
                lay.append((s, off, n))
                off += n
            dims[(p, q)] = off
            blocks[(p, q)] = lay
    d: Dict[Tuple[int, int], RatMatrix] = {}
    delta: Dict[Tuple[int, int], RatMatrix] = {}
    for p in range(N.dim + 1):
        for q in range(top):
            d[(p, q)] = RatMatrix.block_diagonal([b.d(s, q) for s, _, _ in blocks[(p, q)]])
    for p in range(N.dim):
        for q in range(top + 1):
            src = {s: (off, n) for s, off, n in blocks[(p, q)]}
            rows: Dict[int, Dict[int, Fraction]] = {}
            for s, toff, _ in blocks[(p + 1, q)]:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    r = b.restriction(face, s, q)
                    foff, _ = src[face]
                    sign = -1 if i % 2 else 1
                    for a, c, v in r.entries():
                        row = rows.setdefault(toff + a, {})
                        row[foff + c] = row.get(foff + c, 0) + sign * v
            delta[(p, q)] = RatMatrix(dims[(p + 1, q)], dims[(p, q)], rows)
    K = DoubleComplex(dims, d, delta, commuting=True)
    out = CoveringDoubleComplex(U, b, K, blocks)
    U.__dict__[key] = (A, out)
    return out


def homology_covering_complex(U: Covering, A: CochainSystem = FULL) -> CoveringDoubleComplex:
    """``c_p(N, e_q) = ⊕_{σ ∈ N_p} e_q(|σ|)`` where ``e`` is the dual of ``A``.

    With the default system ``e_q`` is the simplicial ``q``-chains and δ
    sends ``s * σ`` to ``Σ (-1)^i s * ∂_i σ``.
    """
    key = ("_hcdc", id(A))
    cached = U.__dict__.get(key)
    if cached is not None and cached[0] is A:
        return cached[1]
    C = covering_double_complex(U, A)
    K = C.double
    d = {(p, q): K.d(p, q - 1).T for (p, q) in K.dims if q >= 1}
    delta = {(p, q): K.delta(p - 1, q).T for (p, q) in K.dims if p >= 1}
    H = DoubleComplex(K.dims, d, delta, homological=True)
    out = CoveringDoubleComplex(U, C.system, H, C.blocks)
    U.__dict__[key] = (A, out)
    return out


def lambda_map(K: CoveringDoubleComplex) -> Dict[int, RatMatrix]:
    """λ in every degree.

    Cohomological: ``C^p(N) -> T^p`` placing ``c_σ`` times the augmentation
    of ``A(|σ|)`` in the ``(σ, q=0)`` block. Homological: ``T_p -> C_p(N)``,
    the transpose.
    """
    T = K.total
    N = K.nerve
    out = {}
    for p in range(N.dim + 1):
        cols = []
        for s in N.simplices(p):
            if (p, 0) in T.offsets:
                cols.append(T.embed(p, 0, K.place(p, 0, s, K.system.augmentation(s))))
            else:
                cols.append(zero_vector(T.dim(p)))
        m = RatMatrix.from_columns(cols, T.dim(p))
        out[p] = m.T if K.homological else m
    return out


def tau_map(K: CoveringDoubleComplex) -> Dict[int, RatMatrix]:
    """τ in every degree.

    Cohomological: ``A^q(X) -> T^q`` restricting to each covering element
    in the ``p = 0`` blocks. Homological: ``T_q -> e_q(X)``, the transpose.
    """
    T = K.total
    b = K.system
    out = {}
    for q in range(0, max(T.complex.degrees(), default=0) + 1):
        dX = b.dim((), q)
        if (0, q) in T.offsets:
            parts = [b.restriction((), s, q) for s, _, _ in K.blocks[(0, q)]]
            m = T.block_embedding(0, q) @ RatMatrix.vstack(parts, ncols=dX)
        else:
            m = RatMatrix.zeros(T.dim(q), dX)
        out[q] = m.T if K.homological else m
    return out


# -- contracting homotopies (simplicial cochains only) -------------------------


def _layout(U: Covering, p: int, q: int):
    """Block layout of ``C^p(N, C^q)``: (σ, offset, simplices of |σ| in degree q)."""
    N = U.nerve
    out = []
    off = 0
    for s in N.simplices(p):
        simps = N.support(s).simplices(q)
        out.append((s, off, simps))
        off += len(simps)
    return out, off


def homotopy_matrix(U: Covering, p: int, q: int) -> RatMatrix:
    """``k_p: C^p(N, C^q) -> C^{p-1}(N, C^q)`` for ``p >= 1``.

    ``k_p(c)_τ(r)`` is 0 when ``u_r ∈ τ`` and ``(-1)^a c_σ(r)`` otherwise,
    where ``σ = τ ∪ {u_r}``, ``τ = ∂_a σ`` and ``u_r`` is the smallest
    covering index whose element contains ``r``.
    """
    if p < 1:
        raise ValueError("k_p is defined for p >= 1; use glue_matrix for p = 0")
    src, nsrc = _layout(U, p, q)
    tgt, ntgt = _layout(U, p - 1, q)
    where = {s: (off, {r: k for k, r in enumerate(simps)}) for s, off, simps in src}
    rows: Dict[int, Dict[int, int]] = {}
    for tau, toff, simps in tgt:
        for k, r in enumerate(simps):
            u = U.smallest_containing(r)
            if u in tau:
                continue
            sigma = tuple(sorted(tau + (u,)))
            a = sigma.index(u)
            soff, idx = where[sigma]
            rows[toff + k] = {soff + idx[r]: -1 if a % 2 else 1}
    return RatMatrix(ntgt, nsrc, rows)


def glue_matrix(U: Covering, q: int) -> RatMatrix:
    """``k_0: C^0(N, C^q) -> C^q(X)``, reading each simplex off its first element."""
    src, nsrc = _layout(U, 0, q)
    where = {s[0]: (off, {r: k for k, r in enumerate(simps)}) for s, off, simps in src}
    X = U.base
    rows = {}
    for j, r in enumerate(X.simplices(q)):
        u = U.smallest_containing(r)
        off, idx = where[u]
        rows[j] = {off + idx[r]: 1}
    return RatMatrix(X.count(q), nsrc, rows)


def homology_homotopy_matrix(U: Covering, p: int, q: int) -> RatMatrix:
    """``k_p: c_p(N, C_q) -> c_{p+1}(N, C_q)`` for ``p >= 0``, and
    ``k_{-1}: C_q(X) -> c_0(N, C_q)`` sending ``s`` to ``s * {u_s}``.

    For ``p >= 0``: ``k_p(s * σ)`` is 0 when ``u_s ∈ σ`` and
    ``(-1)^a s * ρ`` otherwise, with ``ρ = σ ∪ {u_s}`` and ``σ = ∂_a ρ``.
    """
    if p == -1:
        tgt, ntgt = _layout(U, 0, q)
        where = {s[0]: (off, {r: k for k, r in enumerate(simps)}) for s, off, simps in tgt}
        X = U.base
        rows: Dict[int, Dict[int, int]] = {}
        for j, s in enumerate(X.simplices(q)):
            u = U.smallest_containing(s)
            off, idx = where[u]
            rows.setdefault(off + idx[s], {})[j] = 1
        return RatMatrix(ntgt, X.count(q), rows)
    src, nsrc = _layout(U, p, q)
    tgt, ntgt = _layout(U, p + 1, q)
    where = {s: (off, {r: k for k, r in enumerate(simps)}) for s, off, simps in tgt}
    rows = {}
    for sigma, soff, simps in src:
        for k, s in enumerate(simps):
            u = U.smallest_containing(s)
            if u in sigma:
                continue
            rho = tuple(sorted(sigma + (u,)))
            a = rho.index(u)
            toff, idx = where[rho]
            rows.setdefault(toff + idx[s], {})[soff + k] = -1 if a % 2 else 1
    return RatMatrix(ntgt, nsrc, rows)


def contracting_homotopy(U: Covering, p: int, c: Sequence[Fraction], q: int = None) -> Vector:
    """Apply ``k_p`` to ``c ∈ C^p(N, C^q)``.

    ``q`` may be omitted when it is determined by the length of ``c``.
    For ``p = 0`` the result is the glued cochain in ``C^q(X)``.
    """
    if q is None:
        q = _infer_q(U, p, len(c))
    m = glue_matrix(U, q) if p == 0 else homotopy_matrix(U, p, q)
    return m @ list(c)


def _infer_q(U: Covering, p: int, n: int) -> int:
    hits = [q for q in range(U.base.dim + 1) if _layout(U, p, q)[1] == n]
    if len(hits) != 1:
        raise ValueError("cannot infer the cochain degree; pass q explicitly")
    return hits[0]


def restriction_matrix(U: Covering, q: int) -> RatMatrix:
    """``C^q(X) -> C^0(N, C^q)``, restriction to every covering element."""
    tgt, n = _layout(U, 0, q)
    X = U.base
    pos = {s: j for j, s in enumerate(X.simplices(q))}
    rows = {}
    for _, off, simps in tgt:
        for k, r in enumerate(simps):
            rows[off + k] = {pos[r]: 1}
    return RatMatrix(n, X.count(q), rows)


# -- the Leray homomorphism ---------------------------------------------------


@dataclass
class Witness:
    """One column of a Leray matrix: ``λ(c) - τ(x) = D w`` with ``x`` a cocycle of X."""

    nerve_cocycle: Vector
    lam: Vector
    w: Vector
    space_cocycle: Vector
    coordinates: Vector


@dataclass
class LerayResult:
    covering: Covering
    matrices: Dict[int, RatMatrix]
    edge_matrices: Dict[int, RatMatrix]
    witnesses: Dict[int, List[Witness]]
    double: CoveringDoubleComplex

    def matrix(self, n: int) -> RatMatrix:
        return self.matrices[n]

    @property
    def degrees(self) -> List[int]:
        return sorted(self.matrices)

    def replay(self) -> bool:
        """Re-evaluate every witness and compare with the stored matrix."""
        T = self.double.total
        tau = tau_map(self.double)
        X = self.covering.base
        for n, ws in self.witnesses.items():
            HX = cohomology_basis(X, n)
            cols = []
            for wt in ws:
                lhs = [a - b for a, b in zip(wt.lam, tau[n] @ wt.space_cocycle)] if T.dim(n) else []
                if T.dim(n) and lhs != T.differential(n - 1) @ wt.w:
                    return False
                if any(X.boundary_matrix(n + 1).T @ wt.space_cocycle):
                    return False
                cols.append(HX.coordinates(wt.space_cocycle))
            if RatMatrix.from_columns(cols, HX.dim) != self.matrices[n]:
                return False
        return True


def _space_degrees(U: Covering) -> List[int]:
    return list(range(0, max(U.nerve.dim, U.base.dim, 0) + 1))


def leray_map(U: Covering) -> LerayResult:
    """``l_U = τ_*^{-1} ∘ λ_*: H^n(N) -> H^n(X)``, computed two ways.

    The first route matches bases through ``H^n(T)``. The second starts
    from ``λ(c)`` for each basis cocycle ``c`` and walks it across the
    double complex to the ``p = 0`` column with the edge reduction of the
    transposed complex (whose rows are exact for any fine covering), then
    glues the result into a cocycle of ``X``.
    """
    C = covering_double_complex(U, FULL)
    T = C.total
    Kt = C.double.transpose()
    Tt = Kt.total
    lam = lambda_map(C)
    tau = tau_map(C)
    X, N = U.base, U.nerve.complex
    mats, edge_mats, wits = {}, {}, {}
    for n in _space_degrees(U):
        HN = cohomology_basis(N, n)
        HX = cohomology_basis(X, n)
        HT = T.homology(n)
        lam_n = lam.get(n, RatMatrix.zeros(T.dim(n), N.count(n)))
        tau_n = tau.get(n, RatMatrix.zeros(T.dim(n), X.count(n)))
        tau_star = induced_on_quotients(tau_n, HX, HT)
        if not is_invertible(tau_star):
            raise LerayError(f"τ_* is not invertible in degree {n}; the covering is not fine?")
        lam_star = induced_on_quotients(lam_n, HN, HT)
        mats[n] = matrix_inverse(tau_star) @ lam_star
        glue = glue_matrix(U, n) if n <= X.dim else RatMatrix.zeros(0, 0)
        cols, ws = [], []
        for c in HN.basis:
            z = lam_n @ c
            zt = T.relayout(z, n, Tt)
            y, wt = edge_reduce_cocycle(Kt, zt, n)
            x = glue @ y if n <= X.dim else []
            if list(tau_n @ x) != (T.embed(0, n, y) if (0, n) in T.offsets else zero_vector(T.dim(n))):
                raise LerayError(f"edge of the reduction is not a restricted cochain in degree {n}")
            w = Tt.relayout(wt, n - 1, T) if Tt.dim(n - 1) else zero_vector(T.dim(n - 1))
            coords = HX.coordinates(x)
            cols.append(coords)
            ws.append(Witness(list(c), z, w, list(x), coords))
        edge_mats[n] = RatMatrix.from_columns(cols, HX.dim)
        wits[n] = ws
        if edge_mats[n] != mats[n]:
            raise LerayError(f"the two computations of l_U disagree in degree {n}")
    return LerayResult(U, mats, edge_mats, wits, C)


@dataclass
class HomologyLerayResult:
    covering: Covering
    matrices: Dict[int, RatMatrix]
    lift_matrices: Dict[int, RatMatrix]
    double: CoveringDoubleComplex

    @property
    def degrees(self) -> List[int]:
        return sorted(self.matrices)


def homology_leray_map(U: Covering) -> HomologyLerayResult:
    """``λ_* ∘ τ_*^{-1}: H_n(X) -> H_n(N)``, computed two ways.

    The second route lifts a cycle ``z`` of ``X`` to a cycle of the total
    complex using the contracting homotopy: ``x_0 = k_{-1} z`` and
    ``x_{p+1} = -k_p(d x_p)``, then applies λ.
    """
    C = homology_covering_complex(U, FULL)
    K = C.double
    T = C.total
    lam = lambda_map(C)
    tau = tau_map(C)
    X, N = U.base, U.nerve.complex
    mats, lifts = {}, {}
    for n in _space_degrees(U):
        HN = homology_basis(N, n)
        HX = homology_basis(X, n)
        HT = T.homology(n)
        lam_n = lam.get(n, RatMatrix.zeros(N.count(n), T.dim(n)))
        tau_n = tau.get(n, RatMatrix.zeros(X.count(n), T.dim(n)))
        tau_star = induced_on_quotients(tau_n, HT, HX)
        if not is_invertible(tau_star):
            raise LerayError(f"τ_* is not invertible in degree {n}")
        mats[n] = induced_on_quotients(lam_n, HT, HN) @ matrix_inverse(tau_star)
        cols = []
        for z in HX.basis:
            x = _homotopy_lift(U, C, z, n)
            if T.dim(n - 1) and any(T.differential(n) @ x):
                raise LerayError(f"homotopy lift is not a cycle in degree {n}")
            if list(tau_n @ x) != list(z):
                raise LerayError(f"homotopy lift does not cover the cycle in degree {n}")
            cols.append(HN.coordinates(lam_n @ x))
        lifts[n] = RatMatrix.from_columns(cols, HN.dim)
        if lifts[n] != mats[n]:
            raise LerayError(f"the two computations of H_{n}(X) -> H_{n}(N) disagree")
    return HomologyLerayResult(U, mats, lifts, C)


def _homotopy_lift(U: Covering, C: CoveringDoubleComplex, z: Sequence[Fraction], n: int) -> Vector:
    K = C.double
    T = C.total
    x = zero_vector(T.dim(n))
    if n > U.base.dim:
        return x
    comp = homology_homotopy_matrix(U, -1, n) @ list(z)
    p, q = 0, n
    while True:
        if (p, q) in T.offsets:
            off, size = T.offsets[(p, q)]
            x[off:off + size] = comp
        if q == 0:
            break
        v = [-a for a in K.d(p, q) @ comp]
        comp = homology_homotopy_matrix(U, p, q - 1) @ v
        p, q = p + 1, q - 1
    return x


# -- acyclicity, factorization, vanishing --------------------------------------


@dataclass
class AcyclicityReport:
    acyclic: bool
    failures: Dict[str, List[int]]

    def __bool__(self) -> bool:
        return self.acyclic


def is_acyclic(U: Covering, A: CochainSystem = FULL) -> AcyclicityReport:
    """Whether every augmented ``A^•(|σ|)``, ``σ ≠ ∅``, is exact.

    ``failures`` maps each bad σ (index names joined by commas) to the
    degrees where exactness fails; degree ``-1`` means the augmentation
    is not injective.
    """
    b = A.bind(U)
    rep = b.acyclicity_report()
    fails = {b.label(k): v for k, v in rep.items() if v}
    return AcyclicityReport(not fails, fails)


@dataclass
class FactorizationResult:
    holds: bool
    phi_star: Dict[int, RatMatrix]
    composite: Dict[int, RatMatrix]
    leray: Dict[int, RatMatrix]
    lambda_star: Dict[int, RatMatrix]
    tau_star: Dict[int, RatMatrix]
    mismatched: List[int] = field(default_factory=list)


def _system_degrees(U: Covering, b: BoundSystem) -> List[int]:
    return list(range(0, max(b.top(), U.base.dim, U.nerve.dim, 0) + 1))


def _comparison_morphism(KA: CoveringDoubleComplex, KC: CoveringDoubleComplex) -> DoubleComplexMorphism:
    """``Φ: T(N, A) -> T(N, C)`` applying φ blockwise."""
    b = KA.system
    blocks = {}
    for (p, q), lay in KA.blocks.items():
        blocks[(p, q)] = RatMatrix.block_diagonal([b.phi(s, q) for s, _, _ in lay])
    if KA.homological:
        blocks = {k: m.T for k, m in blocks.items()}
        return DoubleComplexMorphism(KC.double, KA.double, blocks)
    return DoubleComplexMorphism(KA.double, KC.double, blocks)


def factorization_check(U: Covering, A: CochainSystem, leray: Optional[LerayResult] = None) -> FactorizationResult:
    """Compare ``φ_*: H_A^n(X) -> H^n(X)`` with ``l_U ∘ λ_A*^{-1} ∘ τ_A*``.

    Also checks the chain-level identities behind the comparison:
    ``Φ∘λ_A = λ_C`` and ``Φ∘τ_A = τ_C∘φ_X``.
    """
    rep = is_acyclic(U, A)
    if not rep:
        raise PreconditionError(f"covering is not acyclic for {A}: {rep.failures}")
    lr = leray or leray_map(U)
    KA = covering_double_complex(U, A)
    KC = covering_double_complex(U, FULL)
    b = KA.system
    Phi = _comparison_morphism(KA, KC)
    lamA, tauA = lambda_map(KA), tau_map(KA)
    lamC, tauC = lambda_map(KC), tau_map(KC)
    X, N = U.base, U.nerve.complex
    TA = KA.total
    AX = b.complex((), augmented=False)
    phi_s, comp, lam_s, tau_s = {}, {}, {}, {}
    bad = []
    for n in _system_degrees(U, b):
        if n in lamA and n in lamC and Phi.total_map(n) @ lamA[n] != lamC[n]:
            raise LerayError(f"Φ∘λ_A != λ_C in degree {n}")
        if n in tauA and n in tauC and Phi.total_map(n) @ tauA[n] != tauC[n] @ b.phi((), n):
            raise LerayError(f"Φ∘τ_A != τ_C∘φ in degree {n}")
        HA = AX.homology(n)
        HX = cohomology_basis(X, n)
        HN = cohomology_basis(N, n)
        HT = TA.homology(n)
        phi_s[n] = induced_on_quotients(b.phi((), n), HA, HX)
        ls = induced_on_quotients(lamA.get(n, RatMatrix.zeros(TA.dim(n), N.count(n))), HN, HT)
        if not is_invertible(ls):
            raise LerayError(f"λ_A* is not invertible in degree {n} although the covering is acyclic")
        ts = induced_on_quotients(tauA.get(n, RatMatrix.zeros(TA.dim(n), b.dim((), n))), HA, HT)
        lam_s[n], tau_s[n] = ls, ts
        l_n = lr.matrices.get(n, RatMatrix.zeros(HX.dim, HN.dim))
        comp[n] = l_n @ matrix_inverse(ls) @ ts
        if comp[n] != phi_s[n]:
            bad.append(n)
    return FactorizationResult(not bad, phi_s, comp, dict(lr.matrices), lam_s, tau_s, bad)


def homology_factorization_check(U: Covering, A: CochainSystem,
                                 hleray: Optional[HomologyLerayResult] = None) -> FactorizationResult:
    """Compare ``H_n(X) -> H^e_n(X)`` with ``τ_e* ∘ λ_e*^{-1} ∘ (H_n(X) -> H_n(N))``,
    where ``e`` is the chain system dual to ``A``."""
    rep = is_acyclic(U, A)
    if not rep:
        raise PreconditionError(f"covering is not acyclic for {A}: {rep.failures}")
    hl = hleray or homology_leray_map(U)
    Ke = homology_covering_complex(U, A)
    KC = homology_covering_complex(U, FULL)
    b = Ke.system
    Phi = _comparison_morphism(Ke, KC)
    lamE, tauE = lambda_map(Ke), tau_map(Ke)
    lamC, tauC = lambda_map(KC), tau_map(KC)
    X, N = U.base, U.nerve.complex
    TE = Ke.total
    AX = b.complex((), augmented=False)
    eX = ChainComplex(dict(AX.dims), {q + 1: m.T for q, m in AX.diffs.items()}, cohomological=False)
    phi_s, comp, lam_s, tau_s = {}, {}, {}, {}
    bad = []
    for n in _system_degrees(U, b):
        if n in lamE and n in lamC and lamE[n] @ Phi.total_map(n) != lamC[n]:
            raise LerayError(f"λ_e∘Φ != λ_C in degree {n}")
        if n in tauE and n in tauC and tauE[n] @ Phi.total_map(n) != b.phi((), n).T @ tauC[n]:
            raise LerayError(f"τ_e∘Φ != φ∘τ_C in degree {n}")
        HX = homology_basis(X, n)
        HE = eX.homology(n)
        HN = homology_basis(N, n)
        HT = TE.homology(n)
        phi_s[n] = induced_on_quotients(b.phi((), n).T, HX, HE)
        ls = induced_on_quotients(lamE.get(n, RatMatrix.zeros(N.count(n), TE.dim(n))), HT, HN)
        if not is_invertible(ls):
            raise LerayError(f"λ_e* is not invertible in degree {n} although the covering is acyclic")
        ts = induced_on_quotients(tauE.get(n, RatMatrix.zeros(b.dim((), n), TE.dim(n))), HT, HE)
        lam_s[n], tau_s[n] = ls, ts
        h_n = hl.matrices.get(n, RatMatrix.zeros(HN.dim, HX.dim))
        comp[n] = ts @ matrix_inverse(ls) @ h_n
        if comp[n] != phi_s[n]:
            bad.append(n)
    return FactorizationResult(not bad, phi_s, comp, dict(hl.matrices), lam_s, tau_s, bad)


def vanishing_check(U: Covering, A: CochainSystem, factorization: Optional[FactorizationResult] = None) -> List[int]:
    """Degrees ``p > dim N`` where ``H_A^p(X)`` or ``H^p(X)`` is nonzero and
    the map ``H_A^p(X) -> H^p(X)`` was verified to be zero."""
    fr = factorization or factorization_check(U, A)
    dimN = U.nerve.dim
    verified = []
    for n, m in sorted(fr.phi_star.items()):
        if n <= dimN or (m.nrows == 0 and m.ncols == 0):
            continue
        if not m.is_zero() or not fr.composite[n].is_zero():
            raise LerayError(f"H_A^{n}(X) -> H^{n}(X) is nonzero above the nerve dimension")
        verified.append(n)
    return verified


# -- functoriality ---------------------------------------------------------------


@dataclass
class TransformationResult:
    """Both sides of ``f^* ∘ l_V = l_U ∘ g^*`` per degree, ``g`` the nerve map."""

    holds: bool
    left: Dict[int, RatMatrix]
    right: Dict[int, RatMatrix]
    mismatched: List[int] = field(default_factory=list)


def _leray_in(lr: LerayResult, n: int) -> RatMatrix:
    U = lr.covering
    if n in lr.matrices:
        return lr.matrices[n]
    return RatMatrix.zeros(cohomology_basis(U.base, n).dim, cohomology_basis(U.nerve.complex, n).dim)


def leray_transformation_check(m: CoveringMorphism, choice: Optional[Sequence[int]] = None,
                               leray_source: Optional[LerayResult] = None,
                               leray_target: Optional[LerayResult] = None) -> TransformationResult:
    """Check that the Leray maps of source and target commute with the
    maps induced by ``m`` on spaces and on nerves."""
    lu = leray_source or leray_map(m.source)
    lv = leray_target or leray_map(m.target)
    g = nerve_map(m, choice)
    top = max(max(lu.matrices, default=0), max(lv.matrices, default=0))
    left, right, bad = {}, {}, []
    for n in range(top + 1):
        left[n] = induced_map(m.map, n, "cohomology") @ _leray_in(lv, n)
        right[n] = _leray_in(lu, n) @ induced_map(g, n, "cohomology")
        if left[n] != right[n]:
            bad.append(n)
    return TransformationResult(not bad, left, right, bad)


def choice_independence_check(m: CoveringMorphism, first: Sequence[int], second: Sequence[int]) -> List[int]:
    """Degrees where two admissible choices induce different maps on nerve cohomology."""
    g, h = nerve_map(m, first), nerve_map(m, second)
    top = max(g.source.dim, g.target.dim, 0)
    return [n for n in range(top + 1) if induced_map(g, n, "cohomology") != induced_map(h, n, "cohomology")]


# -- realizations ----------------------------------------------------------------


def star_covering(N: SimplicialComplex) -> Tuple[Subdivision, Covering]:
    """The closed stars of the vertices of ``N`` inside ``sd N``.

    The element for vertex ``v`` of ``N`` is the closure of every flag
    whose barycenters include ``v``; its index name is the name of ``v``.
    """
    sd = barycentric_subdivision(N)
    S = sd.complex
    names, elements = [], []
    for (v,) in N.simplices(0):
        b = sd.vertex_of((v,))
        names.append(N.vertices[v])
        elements.append([f for f in S.all_simplices() if b in f])
    return sd, Covering(S, names, elements)


@dataclass
class RealizationResult:
    """``composite[n]`` is ``H^n(N) -> H^n(sd N) -> H^n(N)``: the Leray map
    of the star covering followed by the subdivision isomorphism."""

    nerve_matches: bool
    composite: Dict[int, RatMatrix]

    @property
    def holds(self) -> bool:
        return self.nerve_matches and all(
            m == RatMatrix.identity(m.nrows) and m.nrows == m.ncols for m in self.composite.values()
        )


def realization_check(N: SimplicialComplex) -> RealizationResult:
    sd, U = star_covering(N)
    nerve = U.nerve.complex
    used = [N.vertices[v] for (v,) in N.simplices(0)]
    matches = nerve.vertices == tuple(used) and {nerve.names(s) for s in nerve.simplex_set} == {
        N.names(s) for s in N.simplex_set
    }
    comp = {}
    if matches:
        lr = leray_map(U)
        for n in range(N.dim + 1):
            back = induced_on_quotients(sd.chain_map(n).T, cohomology_basis(sd.complex, n), cohomology_basis(N, n))
            comp[n] = back @ lr.matrices[n]
    return RealizationResult(matches, comp)
