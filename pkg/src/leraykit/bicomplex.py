"""Bounded double complexes, their total complexes, and the edge reductions.

Internally every double complex has *anticommuting* squares,
``d∘δ + δ∘d = 0``, so the total differential is simply ``d + δ``.
Inputs whose squares commute are normalized on construction by replacing
``d`` on column ``p`` with ``(-1)**p d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactla import (
    DimensionError,
    Quotient,
    RatMatrix,
    Vector,
    is_invertible,
    kernel_basis,
    matrix_inverse,
    quotient_data,
    solve_particular,
    zero_vector,
)
from .simplicial import ChainComplex, induced_on_quotients

__all__ = [
    "DoubleComplex",
    "DoubleComplexError",
    "ExactnessError",
    "TotalComplex",
    "EdgeComplex",
    "DoubleComplexMorphism",
    "total",
    "edge_complex",
    "edge_reduce_cocycle",
    "edge_lift_cycle",
    "edge_iso_matrix",
    "edge_iso_matrix_homological",
    "compare_totals",
    "row_exactness_failures",
]

Bidegree = Tuple[int, int]


class DoubleComplexError(ValueError):
    pass


class ExactnessError(DoubleComplexError):
    """A row fails to be exact where a reduction needs a ``d``-preimage."""

    def __init__(self, p: int, q: int, what: str = "row is not exact"):
        super().__init__(f"{what} at (p={p}, q={q})")
        self.p = p
        self.q = q


class DoubleComplex:
    """A double complex ``K^{p,q}`` with ``p, q >= 0`` and finitely many nonzero spaces.

    Cohomological: ``d`` raises ``q`` and ``delta`` raises ``p``.
    Homological: both lower their index.
    ``d[(p, q)]`` and ``delta[(p, q)]`` are the maps *out of* ``K^{p,q}``;
    missing entries are zero maps.
    """

    def __init__(self, dims: Mapping[Bidegree, int], d: Mapping[Bidegree, RatMatrix],
                 delta: Mapping[Bidegree, RatMatrix], *, homological: bool = False,
                 commuting: bool = False, check: bool = True,
                 labels: Optional[Mapping[Bidegree, list]] = None):
        self.homological = homological
        self.dims: Dict[Bidegree, int] = {k: v for k, v in dims.items() if v}
        for (p, q) in self.dims:
            if p < 0 or q < 0:
                raise DoubleComplexError(f"bidegree {(p, q)} has a negative index")
        self._d: Dict[Bidegree, RatMatrix] = {}
        for (p, q), m in d.items():
            if commuting and p % 2:
                m = -m
            self._d[(p, q)] = m
        self._delta: Dict[Bidegree, RatMatrix] = dict(delta)
        self.labels = dict(labels or {})
        if check:
            self.validate()

    # -- structure ---------------------------------------------------------

    @property
    def step(self) -> int:
        return -1 if self.homological else 1

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def d(self, p: int, q: int) -> RatMatrix:
        m = self._d.get((p, q))
        if m is None:
            return RatMatrix.zeros(self.dim(p, q + self.step), self.dim(p, q))
        return m

    def delta(self, p: int, q: int) -> RatMatrix:
        m = self._delta.get((p, q))
        if m is None:
            return RatMatrix.zeros(self.dim(p + self.step, q), self.dim(p, q))
        return m

    @cached_property
    def p_range(self) -> range:
        ps = [p for p, _ in self.dims] or [0]
        return range(0, max(ps) + 1)

    @cached_property
    def q_range(self) -> range:
        qs = [q for _, q in self.dims] or [0]
        return range(0, max(qs) + 1)

    def bidegrees(self) -> List[Bidegree]:
        return [(p, q) for p in self.p_range for q in self.q_range]

    def validate(self) -> None:
        s = self.step
        for (p, q), m in self._d.items():
            if m.shape != (self.dim(p, q + s), self.dim(p, q)):
                raise DimensionError(f"d at {(p, q)} has shape {m.shape}")
        for (p, q), m in self._delta.items():
            if m.shape != (self.dim(p + s, q), self.dim(p, q)):
                raise DimensionError(f"delta at {(p, q)} has shape {m.shape}")
        for p, q in self.bidegrees():
            if not self.dim(p, q):
                continue
            if not (self.d(p, q + s) @ self.d(p, q)).is_zero():
                raise DoubleComplexError(f"d∘d != 0 at {(p, q)}")
            if not (self.delta(p + s, q) @ self.delta(p, q)).is_zero():
                raise DoubleComplexError(f"δ∘δ != 0 at {(p, q)}")
            if not (self.d(p + s, q) @ self.delta(p, q) + self.delta(p, q + s) @ self.d(p, q)).is_zero():
                raise DoubleComplexError(f"square at {(p, q)} does not anticommute")

    def transpose(self) -> "DoubleComplex":
        """Swap the roles of ``p`` and ``q`` (and of ``d`` and ``delta``)."""
        dims = {(q, p): n for (p, q), n in self.dims.items()}
        d = {(q, p): m for (p, q), m in self._delta.items()}
        delta = {(q, p): m for (p, q), m in self._d.items()}
        labels = {(q, p): v for (p, q), v in self.labels.items()}
        return DoubleComplex(dims, d, delta, homological=self.homological, check=False, labels=labels)

    def row(self, p: int) -> ChainComplex:
        """The complex ``(K^{p,•}, d)``."""
        dims = {q: self.dim(p, q) for q in self.q_range}
        diffs = {q: self.d(p, q) for q in self.q_range if self.dim(p, q)}
        diffs = {q: m for q, m in diffs.items() if q + self.step in dims}
        return ChainComplex(dims, diffs, cohomological=not self.homological)

    @cached_property
    def total(self) -> "TotalComplex":
        return TotalComplex(self)

    def to_json(self) -> dict:
        def key(b):
            return f"{b[0]},{b[1]}"

        return {
            "variance": "homological" if self.homological else "cohomological",
            "dims": {key(b): self.dims[b] for b in sorted(self.dims)},
            "d": {key(b): self._d[b].to_json() for b in sorted(self._d) if self.dim(*b)},
            "delta": {key(b): self._delta[b].to_json() for b in sorted(self._delta) if self.dim(*b)},
        }

    def __repr__(self) -> str:
        kind = "homological" if self.homological else "cohomological"
        return f"DoubleComplex({kind}, dims={dict(sorted(self.dims.items()))})"


def total(K: DoubleComplex) -> "TotalComplex":
    return K.total


class TotalComplex:
    """``T^n = ⊕_{p+q=n} K^{p,q}`` with blocks stacked in increasing ``p``."""

    def __init__(self, K: DoubleComplex):
        self.double = K
        layout: Dict[int, List[Tuple[int, int, int, int]]] = {}
        for p, q in K.bidegrees():
            size = K.dim(p, q)
            if not size:
                continue
            layout.setdefault(p + q, []).append((p, q, 0, size))
        self.offsets: Dict[Bidegree, Tuple[int, int]] = {}
        dims: Dict[int, int] = {}
        for n, blocks in layout.items():
            off = 0
            fixed = []
            for p, q, _, size in sorted(blocks):
                fixed.append((p, q, off, size))
                self.offsets[(p, q)] = (off, size)
                off += size
            layout[n] = fixed
            dims[n] = off
        self.layout = layout
        s = K.step
        diffs: Dict[int, RatMatrix] = {}
        for n in dims:
            if n + s not in dims:
                continue
            rows: Dict[int, Dict[int, Fraction]] = {}
            for p, q, off, size in layout[n]:
                for tgt, m in (((p, q + s), K.d(p, q)), ((p + s, q), K.delta(p, q))):
                    if tgt not in self.offsets:
                        continue
                    toff, _ = self.offsets[tgt]
                    for i, j, v in m.entries():
                        r = rows.setdefault(toff + i, {})
                        r[off + j] = r.get(off + j, 0) + v
            rows = {i: {j: v for j, v in r.items() if v} for i, r in rows.items()}
            diffs[n] = RatMatrix(dims[n + s], dims[n], rows)
        self.complex = ChainComplex(dims, diffs, cohomological=not K.homological)
        if not self.complex.is_complex():
            raise DoubleComplexError("total differential does not square to zero")

    def dim(self, n: int) -> int:
        return self.complex.dim(n)

    def differential(self, n: int) -> RatMatrix:
        return self.complex.differential(n)

    def homology(self, n: int) -> Quotient:
        return self.complex.homology(n)

    def blocks(self, n: int) -> List[Tuple[int, int, int, int]]:
        """``(p, q, offset, size)`` for each nonzero block of ``T^n``."""
        return self.layout.get(n, [])

    def embed(self, p: int, q: int, v: Sequence[Fraction]) -> Vector:
        n = p + q
        out = zero_vector(self.dim(n))
        if (p, q) not in self.offsets:
            if any(v):
                raise DimensionError(f"block {(p, q)} is zero")
            return out
        off, size = self.offsets[(p, q)]
        if len(v) != size:
            raise DimensionError(f"block {(p, q)} has dimension {size}, got {len(v)}")
        out[off:off + size] = list(v)
        return out

    def component(self, v: Sequence[Fraction], p: int, q: int) -> Vector:
        if (p, q) not in self.offsets:
            return []
        off, size = self.offsets[(p, q)]
        return list(v[off:off + size])

    def block_embedding(self, p: int, q: int) -> RatMatrix:
        """Matrix of the inclusion ``K^{p,q} -> T^{p+q}``."""
        n = p + q
        size = self.double.dim(p, q)
        if not size:
            return RatMatrix.zeros(self.dim(n), 0)
        off, _ = self.offsets[(p, q)]
        return RatMatrix(self.dim(n), size, {off + i: {i: 1} for i in range(size)})

    def relayout(self, v: Sequence[Fraction], n: int, other: "TotalComplex") -> Vector:
        """Move ``v`` in ``T^n`` of this layout into ``other``, which has the
        same blocks up to transposition of the bidegree."""
        out = zero_vector(other.dim(n))
        for p, q, off, size in self.blocks(n):
            o2, s2 = other.offsets[(q, p)]
            out[o2:o2 + s2] = v[off:off + size]
        return out


# -- exactness ----------------------------------------------------------------


def row_exactness_failures(K: DoubleComplex, q_min: int = 1) -> List[Bidegree]:
    """Bidegrees ``(p, q)`` with ``q >= q_min`` where the row ``(K^{p,•}, d)``
    has nonzero cohomology."""
    bad = []
    for p in K.p_range:
        row = K.row(p)
        for q in K.q_range:
            if q >= q_min and row.betti(q):
                bad.append((p, q))
    return bad


def _require_rows_exact(K: DoubleComplex) -> None:
    bad = row_exactness_failures(K, 1)
    if bad:
        raise ExactnessError(*bad[0])


# -- edge complexes -------------------------------------------------------------


@dataclass
class EdgeComplex:
    """``L^p = ker(d: K^{p,0} -> K^{p,1})`` (cohomological) or
    ``L_p = coker(d: K_{p,1} -> K_{p,0})`` (homological), with the
    differential induced by ``delta``.

    Cohomological: ``bases[p]`` has the kernel basis as columns.
    Homological: ``quotients[p]`` holds the cokernel data.
    """

    double: DoubleComplex
    complex: ChainComplex
    bases: Dict[int, RatMatrix]
    quotients: Dict[int, Quotient]

    def coordinates(self, p: int, v: Sequence[Fraction]) -> Vector:
        """Coordinates of ``v ∈ K^{p,0}`` in the edge complex basis."""
        if self.double.homological:
            return self.quotients[p].coordinates(v)
        x = solve_particular(self.bases[p], v)
        if x is None:
            raise ExactnessError(p, 0, "vector is not in ker d")
        return x

    def inclusion(self, n: int) -> RatMatrix:
        """``L^n -> T^n`` (cohomological only)."""
        T = self.double.total
        return T.block_embedding(n, 0) @ self.bases.get(n, RatMatrix.zeros(self.double.dim(n, 0), 0))

    def projection(self, n: int) -> RatMatrix:
        """``T_n -> L_n`` (homological only)."""
        K = self.double
        T = K.total
        Q = self.quotients.get(n)
        if Q is None or not K.dim(n, 0):
            return RatMatrix.zeros(0, T.dim(n))
        off, size = T.offsets[(n, 0)]
        cols: Dict[int, Dict[int, Fraction]] = {}
        for i in range(size):
            e = zero_vector(size)
            e[i] = Fraction(1)
            for r, v in enumerate(Q.coordinates(e)):
                if v:
                    cols.setdefault(r, {})[off + i] = v
        return RatMatrix(Q.dim, T.dim(n), cols)


def edge_complex(K: DoubleComplex) -> EdgeComplex:
    cached = K.__dict__.get("_edge")
    if cached is not None:
        return cached
    ps = list(K.p_range)
    dims: Dict[int, int] = {}
    bases: Dict[int, RatMatrix] = {}
    quots: Dict[int, Quotient] = {}
    if not K.homological:
        for p in ps:
            n0 = K.dim(p, 0)
            bases[p] = RatMatrix.from_columns(kernel_basis(K.d(p, 0)), n0)
            dims[p] = bases[p].ncols
        diffs = {}
        for p in ps:
            if p + 1 not in bases:
                continue
            img = K.delta(p, 0) @ bases[p]
            cols = []
            for j in range(img.ncols):
                x = solve_particular(bases[p + 1], img.column(j))
                if x is None:
                    raise DoubleComplexError("delta does not preserve ker d; squares do not anticommute")
                cols.append(x)
            diffs[p] = RatMatrix.from_columns(cols, dims[p + 1])
        cc = ChainComplex(dims, diffs, cohomological=True)
    else:
        for p in ps:
            n0 = K.dim(p, 0)
            quots[p] = quotient_data(RatMatrix.identity(n0), K.d(p, 1))
            dims[p] = quots[p].dim
        diffs = {}
        for p in ps:
            if p - 1 not in quots:
                continue
            cols = [quots[p - 1].coordinates(K.delta(p, 0) @ b) for b in quots[p].basis]
            diffs[p] = RatMatrix.from_columns(cols, dims[p - 1])
        cc = ChainComplex(dims, diffs, cohomological=False)
    E = EdgeComplex(K, cc, bases, quots)
    K.__dict__["_edge"] = E
    return E


def _vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return [x - y for x, y in zip(a, b)]


def edge_reduce_cocycle(K: DoubleComplex, z: Sequence[Fraction], n: int) -> Tuple[Vector, Vector]:
    """Push a cocycle of ``T^n`` down into the edge ``K^{n,0}``.

    Starting from the block with the smallest ``p``, each component is
    written as ``d`` of something one row lower and removed by subtracting
    the total coboundary. Returns ``(y, w)`` with ``y ∈ K^{n,0}``,
    ``d y = 0`` and ``z - incl(y) = D w``.
    """
    if K.homological:
        raise DoubleComplexError("edge_reduce_cocycle needs a cohomological double complex")
    T = K.total
    z = list(z)
    if len(z) != T.dim(n):
        raise DimensionError(f"T^{n} has dimension {T.dim(n)}, got {len(z)}")
    if any(T.differential(n) @ z):
        raise DoubleComplexError("input is not a cocycle")
    cur = list(z)
    w = zero_vector(T.dim(n - 1))
    for p, q, off, size in T.blocks(n):
        if q == 0:
            break
        comp = cur[off:off + size]
        if not any(comp):
            continue
        pre = solve_particular(K.d(p, q - 1), comp)
        if pre is None:
            raise ExactnessError(p, q)
        piece = T.embed(p, q - 1, pre)
        w = [a + b for a, b in zip(w, piece)]
        cur = _vsub(cur, T.differential(n - 1) @ piece)
    y = T.component(cur, n, 0) if (n, 0) in T.offsets else []
    rest = list(cur)
    if (n, 0) in T.offsets:
        off, size = T.offsets[(n, 0)]
        rest[off:off + size] = [Fraction(0)] * size
    if any(rest):
        raise DoubleComplexError("reduction left components outside the edge")
    # postcondition, exactly
    incl = T.embed(n, 0, y) if (n, 0) in T.offsets else zero_vector(T.dim(n))
    if _vsub(z, incl) != T.differential(n - 1) @ w:
        raise DoubleComplexError("reduction postcondition failed")
    return y, w


def edge_lift_cycle(K: DoubleComplex, y: Sequence[Fraction], n: int) -> Vector:
    """Lift ``y ∈ K_{n,0}`` whose class is an ``L_•``-cycle to a cycle of ``T_n``.

    Components are found one row at a time by solving ``d x_{p-1,q+1} = -δ x_{p,q}``.
    The class of the result in ``L_n`` is the class of ``y``.
    """
    if not K.homological:
        raise DoubleComplexError("edge_lift_cycle needs a homological double complex")
    T = K.total
    x = T.embed(n, 0, y) if (n, 0) in T.offsets else zero_vector(T.dim(n))
    comp = list(y)
    p, q = n, 0
    while p > 0:
        rhs = [-v for v in K.delta(p, q) @ comp]
        pre = solve_particular(K.d(p - 1, q + 1), rhs)
        if pre is None:
            raise ExactnessError(p - 1, q)
        x = [a + b for a, b in zip(x, T.embed(p - 1, q + 1, pre))]
        comp = pre
        p, q = p - 1, q + 1
    if T.dim(n - 1) and any(T.differential(n) @ x):
        raise DoubleComplexError("lift is not a cycle")
    return x


def edge_iso_matrix(K: DoubleComplex, n: int, method: str = "reduction") -> RatMatrix:
    """Matrix of ``H^n(L) -> H^n(T)`` induced by the inclusion of the edge.

    ``method="reduction"`` inverts the map obtained by reducing each basis
    cocycle of ``H^n(T)`` to the edge; ``method="inclusion"`` computes the
    induced map of the inclusion directly by basis matching.
    """
    if K.homological:
        raise DoubleComplexError("use edge_iso_matrix_homological")
    _require_rows_exact(K)
    E = edge_complex(K)
    HL = E.complex.homology(n)
    HT = K.total.homology(n)
    if method == "inclusion":
        return induced_on_quotients(E.inclusion(n), HL, HT)
    if method != "reduction":
        raise ValueError("method must be 'reduction' or 'inclusion'")
    cols = []
    for z in HT.basis:
        y, _ = edge_reduce_cocycle(K, z, n)
        cols.append(HL.coordinates(E.coordinates(n, y) if y else []))
    back = RatMatrix.from_columns(cols, HL.dim)
    if not is_invertible(back):
        raise DoubleComplexError("reduction map is not invertible")
    return matrix_inverse(back)


def edge_iso_matrix_homological(K: DoubleComplex, n: int) -> RatMatrix:
    """Matrix of ``H_n(T) -> H_n(L)`` induced by the quotient map.

    The inverse is built independently by lifting each edge cycle back to
    a total cycle; the two are checked to be mutually inverse.
    """
    if not K.homological:
        raise DoubleComplexError("use edge_iso_matrix for cohomological complexes")
    _require_rows_exact(K)
    E = edge_complex(K)
    HL = E.complex.homology(n)
    HT = K.total.homology(n)
    fwd = induced_on_quotients(E.projection(n), HT, HL)
    cols = []
    for b in HL.basis:
        y = E.quotients[n].lift(b) if n in E.quotients else []
        x = edge_lift_cycle(K, y, n)
        cols.append(HT.coordinates(x))
    back = RatMatrix.from_columns(cols, HT.dim)
    if fwd @ back != RatMatrix.identity(HL.dim) or back @ fwd != RatMatrix.identity(HT.dim):
        raise DoubleComplexError("projection and lift are not mutually inverse")
    return fwd


# -- morphisms ------------------------------------------------------------------


class DoubleComplexMorphism:
    """Blockwise maps ``f^{p,q}: K^{p,q} -> L^{p,q}`` commuting with ``d`` and ``delta``."""

    def __init__(self, source: DoubleComplex, target: DoubleComplex,
                 blocks: Mapping[Bidegree, RatMatrix], *, check: bool = True):
        if source.homological != target.homological:
            raise DoubleComplexError("variance mismatch")
        self.source = source
        self.target = target
        self._blocks = dict(blocks)
        if check:
            self.validate()

    def block(self, p: int, q: int) -> RatMatrix:
        m = self._blocks.get((p, q))
        if m is None:
            return RatMatrix.zeros(self.target.dim(p, q), self.source.dim(p, q))
        return m

    def validate(self) -> None:
        K, L = self.source, self.target
        s = K.step
        for p, q in set(K.bidegrees()) | set(L.bidegrees()):
            f = self.block(p, q)
            if f.shape != (L.dim(p, q), K.dim(p, q)):
                raise DimensionError(f"block {(p, q)} has shape {f.shape}")
            if L.d(p, q) @ f != self.block(p, q + s) @ K.d(p, q):
                raise DoubleComplexError(f"morphism does not commute with d at {(p, q)}")
            if L.delta(p, q) @ f != self.block(p + s, q) @ K.delta(p, q):
                raise DoubleComplexError(f"morphism does not commute with delta at {(p, q)}")

    def total_map(self, n: int) -> RatMatrix:
        TK, TL = self.source.total, self.target.total
        rows: Dict[int, Dict[int, Fraction]] = {}
        for p, q, off, size in TK.blocks(n):
            if (p, q) not in TL.offsets:
                continue
            toff, _ = TL.offsets[(p, q)]
            for i, j, v in self.block(p, q).entries():
                rows.setdefault(toff + i, {})[off + j] = v
        return RatMatrix(TL.dim(n), TK.dim(n), rows)

    def row_map_induced(self, p: int, q: int) -> RatMatrix:
        """Induced map on the cohomology of row ``p`` in degree ``q``."""
        return induced_on_quotients(self.block(p, q), self.source.row(p).homology(q),
                                    self.target.row(p).homology(q))


def compare_totals(f: DoubleComplexMorphism, n: int) -> RatMatrix:
    """Matrix of ``H^n(T_K) -> H^n(T_L)`` induced by ``f``."""
    return induced_on_quotients(f.total_map(n), f.source.total.homology(n), f.target.total.homology(n))
