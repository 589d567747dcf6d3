"""Seeded random generators for property tests and the ``verify`` command.

Every generator takes a :class:`random.Random` so results are reproducible
from a single seed. Objects that must satisfy a hypothesis are built to
satisfy it (and the hypothesis is re-checked), never sampled blindly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bicomplex import DoubleComplex, DoubleComplexMorphism
from .coverings import (
    Covering,
    CoveringMorphism,
    SetFamily,
    admissible_targets,
    is_barycentric_refinement,
    star,
)
from .exactla import RatMatrix, Vector, matrix_inverse
from .leray import is_acyclic
from .simplicial import (
    InvalidMapError,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    closure,
)

__all__ = [
    "random_vector",
    "random_invertible",
    "random_complex",
    "random_acyclic_covering",
    "random_refinement_morphism",
    "random_subdivision_morphism",
    "random_collapse_morphism",
    "random_covering_morphism",
    "alternative_choice",
    "random_morphism_with_alternative",
    "random_refinement_triple",
    "RowQuasiIso",
    "random_row_quasi_isomorphism",
]


def random_vector(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> Vector:
    return [Fraction(rng.randint(lo, hi)) for _ in range(n)]


def random_invertible(rng: random.Random, n: int) -> RatMatrix:
    """Permuted product of unit lower and unit upper triangular integer matrices."""
    lo = RatMatrix(n, n, {i: {j: (1 if i == j else rng.randint(-2, 2)) for j in range(i + 1)} for i in range(n)})
    up = RatMatrix(n, n, {i: {j: (1 if i == j else rng.randint(-2, 2)) for j in range(i, n)} for i in range(n)})
    perm = list(range(n))
    rng.shuffle(perm)
    return RatMatrix(n, n, {i: {perm[i]: 1} for i in range(n)}) @ lo @ up


# -- complexes and coverings -----------------------------------------------------


def random_complex(rng: random.Random, max_vertices: int = 6, max_dim: int = 2,
                   min_vertices: int = 3) -> SimplicialComplex:
    """Closure of a few random simplices on ``v0, v1, ...``; every vertex is used."""
    n = rng.randint(min_vertices, max_vertices)
    names = [f"v{i}" for i in range(n)]
    gens = []
    for _ in range(rng.randint(2, n + 1)):
        k = rng.randint(2, max_dim + 1)
        gens.append(rng.sample(names, min(k, n)))
    used = {v for g in gens for v in g}
    gens += [[v] for v in names if v not in used]
    return closure(gens, names)


def random_acyclic_covering(rng: random.Random, X: SimplicialComplex, merges: int = 3,
                            max_nerve_dim: int = 3) -> Covering:
    """A fine covering whose supports are all acyclic.

    Starts from the closed maximal simplices (every intersection is a
    closed face, hence acyclic) and then tries random unions of two
    elements, keeping a union only when the result is still acyclic and
    the nerve stays small. Unions stop once two elements are left.
    """
    elements = [frozenset(X.subcomplex([s]).simplex_set) for s in X.maximal_simplices()]

    def make(els):
        return Covering(X, [f"u{i}" for i in range(len(els))], [sorted(e) for e in els])

    U = make(elements)
    if U.nerve.dim > max_nerve_dim:
        # large vertex stars: merge greedily until the nerve is small enough
        while U.nerve.dim > max_nerve_dim:
            i, j = sorted(rng.sample(range(len(elements)), 2))
            trial = elements[:i] + elements[i + 1:j] + elements[j + 1:] + [elements[i] | elements[j]]
            V = make(trial)
            if is_acyclic(V):
                elements, U = trial, V
    for _ in range(merges):
        if len(elements) < 3:
            break
        i, j = sorted(rng.sample(range(len(elements)), 2))
        trial = elements[:i] + elements[i + 1:j] + elements[j + 1:] + [elements[i] | elements[j]]
        V = make(trial)
        if V.nerve.dim <= max_nerve_dim and is_acyclic(V):
            elements, U = trial, V
    return U


def _coarsening(rng: random.Random, U: Covering, parts: int, overlap: float = 0.5) -> Covering:
    """Group the elements of ``U`` into at most ``parts`` unions, each element
    used at least once and possibly twice."""
    n = len(U.elements)
    parts = max(1, min(parts, n))
    groups: List[set] = [set() for _ in range(parts)]
    for i in range(n):
        groups[rng.randrange(parts)].add(i)
        if rng.random() < overlap:
            groups[rng.randrange(parts)].add(i)
    groups = [g for g in groups if g]
    els = []
    for g in groups:
        acc = set()
        for i in g:
            acc |= U.elements[i].simplex_set
        els.append(sorted(acc))
    return Covering(U.base, [f"w{i}" for i in range(len(els))], els)


def random_refinement_morphism(rng: random.Random, U: Covering) -> CoveringMorphism:
    """Identity of the base from ``U`` to a random coarsening of ``U``."""
    V = _coarsening(rng, U, rng.randint(1, max(1, len(U.elements) - 1)))
    X = U.base
    return CoveringMorphism(SimplicialMap(X, X, list(range(len(X.vertices)))), U, V)


def _preimage_covering(f: SimplicialMap, V: Covering) -> Covering:
    X = f.source
    els = []
    for e in V.elements:
        els.append([s for s in X.all_simplices() if f.image(s)[0] in e.simplex_set])
    return Covering(X, [f"f*{nm}" for nm in V.names], els)


def random_subdivision_morphism(rng: random.Random, V: Covering) -> CoveringMorphism:
    """A last-vertex map ``sd X -> X`` from the pulled-back covering to ``V``.

    The barycenter of ``s`` goes to the vertex of ``s`` that is largest in a
    random order of the vertices of ``X``. A flag then lands inside its
    largest simplex, so the map is simplicial.
    """
    X = V.base
    sd = barycentric_subdivision(X)
    rank = list(range(len(X.vertices)))
    rng.shuffle(rank)
    vm = [max(s, key=lambda v: rank[v]) for s in sd.complex.vertices]
    f = SimplicialMap(sd.complex, X, vm)
    return CoveringMorphism(f, _preimage_covering(f, V), V)


def random_collapse_morphism(rng: random.Random, V: Covering, tries: int = 20) -> Optional[CoveringMorphism]:
    """An endomorphism of ``X`` sending one endpoint of an edge to the other."""
    X = V.base
    edges = list(X.simplices(1))
    rng.shuffle(edges)
    for a, b in edges[:tries]:
        if rng.random() < 0.5:
            a, b = b, a
        vm = list(range(len(X.vertices)))
        vm[a] = b
        try:
            f = SimplicialMap(X, X, vm)
        except InvalidMapError:
            continue
        return CoveringMorphism(f, _preimage_covering(f, V), V)
    return None


def random_covering_morphism(rng: random.Random, max_vertices: int = 5) -> CoveringMorphism:
    """One of: a refinement, a subdivision map, or an edge collapse."""
    while True:
        X = random_complex(rng, max_vertices=max_vertices, max_dim=2)
        U = random_acyclic_covering(rng, X)
        kind = rng.choice(["refinement", "subdivision", "collapse"])
        if kind == "refinement":
            return random_refinement_morphism(rng, U)
        if kind == "subdivision" and X.count(0) <= 4:
            return random_subdivision_morphism(rng, U)
        if kind == "collapse":
            m = random_collapse_morphism(rng, U)
            if m is not None:
                return m


def alternative_choice(rng: random.Random, m: CoveringMorphism) -> Optional[List[int]]:
    """A random admissible choice differing from the default, if one exists."""
    adm = admissible_targets(m)
    if all(len(a) == 1 for a in adm):
        return None
    while True:
        choice = [rng.choice(a) for a in adm]
        if choice != [a[0] for a in adm]:
            return choice


def random_morphism_with_alternative(rng: random.Random, max_vertices: int = 5) -> Tuple[CoveringMorphism, List[int]]:
    """A random covering morphism together with a non-default admissible choice."""
    while True:
        m = random_covering_morphism(rng, max_vertices)
        alt = alternative_choice(rng, m)
        if alt is not None:
            return m, alt


# -- finite-set families ---------------------------------------------------------


def _barycentric_coarsening(rng: random.Random, A: SetFamily, extra: int) -> SetFamily:
    """A family that ``A`` refines barycentrically: point stars, some merged or enlarged."""
    ground = sorted(A.ground, key=repr)
    members = [set(star({z}, A)) for z in ground]
    rng.shuffle(members)
    for _ in range(extra):
        kind = rng.random()
        if kind < 0.4 and len(members) > 1:
            i, j = rng.sample(range(len(members)), 2)
            members[i] |= members[j]
            if rng.random() < 0.5:
                members.pop(j)
        else:
            members[rng.randrange(len(members))].add(rng.choice(ground))
    return SetFamily.of(ground, [sorted(m, key=repr) for m in members])


def random_refinement_triple(rng: random.Random, max_points: int = 8) -> Tuple[SetFamily, SetFamily, SetFamily]:
    """Coverings ``A, B, C`` of a finite set with ``A`` barycentrically
    refining ``B`` and ``B`` barycentrically refining ``C``."""
    n = rng.randint(1, max_points)
    ground = list(range(n))
    members = [set(rng.sample(ground, rng.randint(1, min(3, n)))) for _ in range(rng.randint(1, n))]
    for z in ground:
        if not any(z in m for m in members):
            rng.choice(members).add(z)
    A = SetFamily.of(ground, [sorted(m) for m in members])
    B = _barycentric_coarsening(rng, A, rng.randint(0, 3))
    C = _barycentric_coarsening(rng, B, rng.randint(0, 3))
    assert is_barycentric_refinement(A, B) and is_barycentric_refinement(B, C)
    return A, B, C


# -- double complexes and row quasi-isomorphisms ----------------------------------


def _kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    rows: Dict[int, Dict[int, Fraction]] = {}
    for i, j, x in a.entries():
        for k, l, y in b.entries():
            rows.setdefault(i * b.nrows + k, {})[j * b.ncols + l] = x * y
    return RatMatrix(a.nrows * b.nrows, a.ncols * b.ncols, rows)


def _random_cochain_complex(rng: random.Random, length: int, acyclic: bool = False) -> Tuple[List[int], List[RatMatrix]]:
    """Dimensions and differentials of a random complex in degrees ``0..length-1``.

    It is a sum of one-dimensional pieces (cohomology classes) and exact
    pairs ``Q -> Q``, written in a random basis of every degree.
    """
    dims = [0] * length
    pairs = []
    if not acyclic:
        for q in range(length):
            dims[q] += rng.randint(0, 1)
    for _ in range(rng.randint(0 if not acyclic else 1, 2)):
        if length < 2:
            break
        q = rng.randrange(length - 1)
        pairs.append((q, dims[q], dims[q + 1]))
        dims[q] += 1
        dims[q + 1] += 1
    diffs = []
    for q in range(length - 1):
        rows = {dst: {src: 1} for (k, src, dst) in pairs if k == q}
        diffs.append(RatMatrix(dims[q + 1], dims[q], rows))
    change = [random_invertible(rng, n) for n in dims]
    diffs = [change[q + 1] @ m @ matrix_inverse(change[q]) for q, m in enumerate(diffs)]
    return dims, diffs


def _tensor(hdims, hdiffs, vdims, vdiffs) -> DoubleComplex:
    """``K^{p,q} = H^p ⊗ V^q`` with ``δ = d_H ⊗ 1`` and ``d = 1 ⊗ d_V`` (commuting squares)."""
    dims, d, delta = {}, {}, {}
    for p, a in enumerate(hdims):
        for q, b in enumerate(vdims):
            dims[(p, q)] = a * b
            if q + 1 < len(vdims):
                d[(p, q)] = _kron(RatMatrix.identity(a), vdiffs[q])
            if p + 1 < len(hdims):
                delta[(p, q)] = _kron(hdiffs[p], RatMatrix.identity(b))
    return DoubleComplex(dims, d, delta, commuting=True)


def _direct_sum(K: DoubleComplex, E: DoubleComplex) -> DoubleComplex:
    keys = set(K.bidegrees()) | set(E.bidegrees())
    dims = {k: K.dim(*k) + E.dim(*k) for k in keys}
    d = {k: RatMatrix.block_diagonal([K.d(*k), E.d(*k)]) for k in keys}
    delta = {k: RatMatrix.block_diagonal([K.delta(*k), E.delta(*k)]) for k in keys}
    return DoubleComplex(dims, d, delta)


def _conjugate(K: DoubleComplex, g: Dict[Tuple[int, int], RatMatrix]) -> DoubleComplex:
    inv = {k: matrix_inverse(m) for k, m in g.items()}
    keys = K.bidegrees()
    d = {(p, q): g[(p, q + 1)] @ K.d(p, q) @ inv[(p, q)] for p, q in keys if (p, q + 1) in g}
    delta = {(p, q): g[(p + 1, q)] @ K.delta(p, q) @ inv[(p, q)] for p, q in keys if (p + 1, q) in g}
    return DoubleComplex({k: K.dim(*k) for k in keys}, d, delta)


@dataclass
class RowQuasiIso:
    """A morphism of double complexes built to be a quasi-isomorphism on every row."""

    morphism: DoubleComplexMorphism
    kind: str


def random_row_quasi_isomorphism(rng: random.Random, width: int = 3, height: int = 3) -> RowQuasiIso:
    """``K -> L`` where ``L`` is ``K`` plus a row-exact summand, with the
    inclusion twisted by a random chain map into that summand and ``L``
    written in random bases.

    With probability one half the direction is reversed (a projection
    ``L -> K``), which is also a row quasi-isomorphism. The summand is
    ``H ⊗ E`` with ``E`` exact, so every row of it is exact.
    """
    hd, hm = _random_cochain_complex(rng, width)
    vd, vm = _random_cochain_complex(rng, height)
    K = _tensor(hd, hm, vd, vm)
    ed, em = _random_cochain_complex(rng, height, acyclic=True)
    E = _tensor(hd, hm, ed, em)
    S = _direct_sum(K, E)
    keys = set(K.bidegrees()) | set(E.bidegrees())
    g = _random_chain_map_into_exact(rng, vd, vm, ed, em)
    twist = {(p, q): _kron(RatMatrix.identity(hd[p]), g[q]) for (p, q) in keys}
    inc = {k: RatMatrix.vstack([RatMatrix.identity(K.dim(*k)), twist[k]], ncols=K.dim(*k)) for k in keys}
    g_change = {k: random_invertible(rng, S.dim(*k)) for k in keys}
    L = _conjugate(S, g_change)
    f_blocks = {k: g_change[k] @ inc[k] for k in keys}
    if rng.random() < 0.5:
        return RowQuasiIso(DoubleComplexMorphism(K, L, f_blocks), "inclusion")
    proj = {k: RatMatrix.hstack([RatMatrix.identity(K.dim(*k)), RatMatrix.zeros(K.dim(*k), E.dim(*k))],
                                nrows=K.dim(*k)) @ matrix_inverse(g_change[k]) for k in keys}
    return RowQuasiIso(DoubleComplexMorphism(L, K, proj), "projection")


def _random_chain_map_into_exact(rng, vd, vm, ed, em) -> Optional[List[RatMatrix]]:
    """A random chain map ``V -> E`` for an exact complex ``E``.

    Exact complexes are contractible, so ``g = d_E h + h d_V`` for a random
    graded map ``h`` of degree ``-1`` is a chain map.
    """
    n = len(vd)
    h = [RatMatrix.zeros(ed[q - 1], vd[q]) if q >= 1 else None for q in range(n)]
    for q in range(1, n):
        h[q] = RatMatrix(ed[q - 1], vd[q], {i: {j: rng.randint(-1, 1) for j in range(vd[q])} for i in range(ed[q - 1])})
    g = []
    for q in range(n):
        acc = RatMatrix.zeros(ed[q], vd[q])
        if q >= 1:
            acc = acc + em[q - 1] @ h[q]
        if q + 1 < n:
            acc = acc + h[q + 1] @ vm[q]
        g.append(acc)
    return g
