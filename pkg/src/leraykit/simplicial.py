"""Finite abstract simplicial complexes and their (co)homology over Q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactla import (
    DimensionError,
    Quotient,
    RatMatrix,
    Vector,
    kernel_basis,
    quotient_data,
    rank,
)

Simplex = Tuple[int, ...]

__all__ = [
    "Simplex",
    "SimplicialComplex",
    "ChainComplex",
    "SimplicialMap",
    "UnknownVertexError",
    "InvalidMapError",
    "closure",
    "boundary_matrix",
    "homology_basis",
    "cohomology_basis",
    "barycentric_subdivision",
    "induced_map",
    "induced_on_quotients",
    "simplex_image",
]


class UnknownVertexError(KeyError):
    pass


class InvalidMapError(ValueError):
    pass


def _faces(s: Simplex) -> Iterable[Simplex]:
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


class SimplicialComplex:
    """A finite abstract simplicial complex on a totally ordered vertex list.

    Simplices are stored as strictly increasing tuples of vertex *positions*
    in ``vertices``. Subcomplexes keep the vertex list of their parent, so
    simplex tuples can be compared across a complex and its subcomplexes.
    Vertices declared but not used by any simplex are allowed.
    """

    def __init__(self, vertices: Sequence[Hashable], simplices: Iterable[Simplex] = (), *, check: bool = True):
        self.vertices: Tuple[Hashable, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        simplex_set = frozenset(tuple(s) for s in simplices)
        if check:
            n = len(self.vertices)
            for s in simplex_set:
                if not s:
                    raise ValueError("the empty simplex is never stored")
                if any(b <= a for a, b in zip(s, s[1:])):
                    raise ValueError(f"simplex {s} is not strictly increasing")
                if s[0] < 0 or s[-1] >= n:
                    raise UnknownVertexError(s)
                for f in _faces(s):
                    if f not in simplex_set:
                        raise ValueError(f"face {f} of {s} missing; not closed under faces")
        self.simplex_set: FrozenSet[Simplex] = simplex_set

    # -- basic structure ----------------------------------------------

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplex_set), default=-1)

    @cached_property
    def _by_dim(self) -> Dict[int, List[Simplex]]:
        out: Dict[int, List[Simplex]] = {}
        for s in self.simplex_set:
            out.setdefault(len(s) - 1, []).append(s)
        for v in out.values():
            v.sort()
        return out

    def simplices(self, p: int) -> List[Simplex]:
        """The ``p``-simplices in the basis order used by every matrix."""
        return self._by_dim.get(p, [])

    def all_simplices(self) -> List[Simplex]:
        return [s for p in range(self.dim + 1) for s in self.simplices(p)]

    def count(self, p: int) -> int:
        return len(self._by_dim.get(p, ()))

    @cached_property
    def _index(self) -> Dict[int, Dict[Simplex, int]]:
        return {p: {s: i for i, s in enumerate(ss)} for p, ss in self._by_dim.items()}

    def index(self, p: int) -> Dict[Simplex, int]:
        return self._index.get(p, {})

    def used_vertices(self) -> List[int]:
        return [s[0] for s in self.simplices(0)]

    def names(self, s: Simplex) -> Tuple[Hashable, ...]:
        return tuple(self.vertices[i] for i in s)

    def position(self, name: Hashable) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise UnknownVertexError(name) from None

    @cached_property
    def _positions(self) -> Dict[Hashable, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplex_set

    def __len__(self) -> int:
        return len(self.simplex_set)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplex_set == other.simplex_set

    def __hash__(self):
        return hash((self.vertices, self.simplex_set))

    def __repr__(self) -> str:
        counts = [self.count(p) for p in range(self.dim + 1)]
        return f"SimplicialComplex(vertices={len(self.vertices)}, f-vector={counts})"

    def is_empty(self) -> bool:
        return not self.simplex_set

    def subcomplex(self, simplices: Iterable[Simplex]) -> "SimplicialComplex":
        """Closure of ``simplices`` inside this complex, on the same vertex list."""
        gens = set()
        for s in simplices:
            s = tuple(s)
            if s not in self.simplex_set:
                raise ValueError(f"{s} is not a simplex of the ambient complex")
            gens.add(s)
        closed = set()
        for s in gens:
            closed.update(_faces(s))
        return SimplicialComplex(self.vertices, closed, check=False)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.vertices == other.vertices and self.simplex_set <= other.simplex_set

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        if self.vertices != other.vertices:
            raise ValueError("intersection needs a shared vertex list")
        return SimplicialComplex(self.vertices, self.simplex_set & other.simplex_set, check=False)

    def maximal_simplices(self) -> List[Simplex]:
        out = []
        for s in sorted(self.simplex_set, key=lambda t: (len(t), t)):
            if not any(set(s) < set(t) for t in self.simplex_set if len(t) > len(s)):
                out.append(s)
        return out

    def disjoint_union(self, other: "SimplicialComplex", tags=("a", "b")) -> "SimplicialComplex":
        verts = [(tags[0], v) for v in self.vertices] + [(tags[1], v) for v in other.vertices]
        off = len(self.vertices)
        simps = list(self.simplex_set) + [tuple(i + off for i in s) for s in other.simplex_set]
        return SimplicialComplex(verts, simps, check=False)

    # -- chain level ----------------------------------------------------

    def boundary_matrix(self, p: int, augmented: bool = False) -> RatMatrix:
        return boundary_matrix(self, p, augmented)

    def chain_complex(self, augmented: bool = False) -> "ChainComplex":
        top = max(self.dim, 0)
        dims = {q: self.count(q) for q in range(0, top + 1)}
        diffs = {q: self.boundary_matrix(q) for q in range(1, top + 1)}
        if augmented:
            dims[-1] = 1
            diffs[0] = self.boundary_matrix(0, augmented=True)
        return ChainComplex(dims, diffs, cohomological=False)

    def cochain_complex(self, augmented: bool = False) -> "ChainComplex":
        top = max(self.dim, 0)
        dims = {q: self.count(q) for q in range(0, top + 1)}
        diffs = {q: self.boundary_matrix(q + 1).T for q in range(0, top)}
        if augmented:
            dims[-1] = 1
            diffs[-1] = self.boundary_matrix(0, augmented=True).T
        return ChainComplex(dims, diffs, cohomological=True)

    def to_json(self) -> dict:
        gens = self.maximal_simplices()
        return {
            "vertices": [str(v) for v in self.vertices],
            "simplices": [[str(self.vertices[i]) for i in s] for s in gens],
        }


def closure(generators: Iterable[Sequence[Hashable]], order: Sequence[Hashable]) -> SimplicialComplex:
    """Smallest simplicial complex on ``order`` containing every generator."""
    pos = {v: i for i, v in enumerate(order)}
    simps = set()
    for g in generators:
        try:
            s = tuple(sorted({pos[v] for v in g}))
        except KeyError as e:
            raise UnknownVertexError(e.args[0]) from None
        if not s:
            continue
        simps.update(_faces(s))
    return SimplicialComplex(order, simps, check=False)


def boundary_matrix(X: SimplicialComplex, p: int, augmented: bool = False) -> RatMatrix:
    """Matrix of the boundary map from ``p``-chains to ``(p-1)``-chains.

    Columns follow ``X.simplices(p)`` and rows ``X.simplices(p - 1)``; the
    face obtained by deleting the ``i``-th vertex carries sign ``(-1)**i``.
    For ``p == 0`` the target is zero, or the one-dimensional augmentation
    space when ``augmented`` is set.
    """
    if p < 0:
        raise ValueError("degree must be non-negative")
    cols = X.simplices(p)
    if p == 0:
        if augmented:
            return RatMatrix(1, len(cols), {0: {j: 1 for j in range(len(cols))}})
        return RatMatrix.zeros(0, len(cols))
    rows_idx = X.index(p - 1)
    rows: Dict[int, Dict[int, Fraction]] = {}
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            rows.setdefault(rows_idx[face], {})[j] = Fraction(-1 if i % 2 else 1)
    return RatMatrix(X.count(p - 1), len(cols), rows)


@dataclass
class ChainComplex:
    """A bounded complex of finite-dimensional Q-vector spaces.

    ``diffs[n]`` maps degree ``n`` to ``n + 1`` when ``cohomological`` and
    to ``n - 1`` otherwise. Missing degrees are zero spaces.
    """

    dims: Dict[int, int]
    diffs: Dict[int, RatMatrix]
    cohomological: bool = True
    labels: Dict[int, list] = field(default_factory=dict)

    def __post_init__(self):
        step = 1 if self.cohomological else -1
        for n, m in self.diffs.items():
            if m.shape != (self.dim(n + step), self.dim(n)):
                raise DimensionError(
                    f"differential in degree {n} has shape {m.shape}, "
                    f"expected {(self.dim(n + step), self.dim(n))}"
                )
        self._hcache: Dict[int, Quotient] = {}

    @property
    def step(self) -> int:
        return 1 if self.cohomological else -1

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> List[int]:
        return sorted(n for n, d in self.dims.items())

    def differential(self, n: int) -> RatMatrix:
        m = self.diffs.get(n)
        if m is None:
            return RatMatrix.zeros(self.dim(n + self.step), self.dim(n))
        return m

    def incoming(self, n: int) -> RatMatrix:
        return self.differential(n - self.step)

    def is_complex(self) -> bool:
        for n in self.diffs:
            if not (self.differential(n + self.step) @ self.differential(n)).is_zero():
                return False
        return True

    def homology(self, n: int) -> Quotient:
        """(Co)homology in degree ``n`` as ``ker / im``."""
        q = self._hcache.get(n)
        if q is None:
            out = self.differential(n)
            cyc = RatMatrix.from_columns(kernel_basis(out), self.dim(n))
            q = quotient_data(cyc, self.incoming(n))
            self._hcache[n] = q
        return q

    def betti(self, n: int) -> int:
        d = self.dim(n)
        if d == 0:
            return 0
        return d - rank(self.differential(n)) - rank(self.incoming(n))

    def is_exact_at(self, n: int) -> bool:
        return self.betti(n) == 0


def homology_basis(X: SimplicialComplex, p: int) -> Quotient:
    """``H_p(X; Q)`` as a quotient of cycles by boundaries."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    return _chain_cache(X, False).homology(p)


def cohomology_basis(X: SimplicialComplex, p: int) -> Quotient:
    """``H^p(X; Q)``; the coboundary is the transpose of the boundary."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    return _chain_cache(X, True).homology(p)


def _chain_cache(X: SimplicialComplex, cohomological: bool) -> ChainComplex:
    key = "_cochains" if cohomological else "_chains"
    cc = X.__dict__.get(key)
    if cc is None:
        cc = X.cochain_complex() if cohomological else X.chain_complex()
        X.__dict__[key] = cc
    return cc


# -- maps ------------------------------------------------------------------


def simplex_image(vertex_map: Sequence[int], s: Simplex) -> Tuple[Simplex, int]:
    """Sorted image of ``s`` and the sign of the sorting permutation.

    The sign is 0 when two vertices collapse.
    """
    img = [vertex_map[v] for v in s]
    if len(set(img)) < len(img):
        return tuple(sorted(set(img))), 0
    # parity via inversion count; simplices are tiny
    inv = sum(1 for a in range(len(img)) for b in range(a + 1, len(img)) if img[a] > img[b])
    return tuple(sorted(img)), (-1 if inv % 2 else 1)


class SimplicialMap:
    """A vertex map between complexes that sends simplices to simplices."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex,
                 vertex_map: Mapping[Hashable, Hashable] | Sequence[int]):
        self.source = source
        self.target = target
        if isinstance(vertex_map, Mapping):
            used = set(source.used_vertices())
            vm = []
            for i, v in enumerate(source.vertices):
                if v in vertex_map:
                    vm.append(target.position(vertex_map[v]))
                elif i in used:
                    raise InvalidMapError(f"vertex {v!r} has no image")
                else:
                    vm.append(-1)
        else:
            vm = list(vertex_map)
            if len(vm) != len(source.vertices):
                raise InvalidMapError("vertex map has wrong length")
        self.vertex_map: List[int] = vm
        for s in source.simplex_set:
            img = tuple(sorted({vm[v] for v in s}))
            if img not in target.simplex_set:
                raise InvalidMapError(f"simplex {source.names(s)} maps to non-simplex")

    def image(self, s: Simplex) -> Tuple[Simplex, int]:
        return simplex_image(self.vertex_map, s)

    def image_subcomplex(self, simplices: Iterable[Simplex]) -> FrozenSet[Simplex]:
        return frozenset(tuple(sorted({self.vertex_map[v] for v in s})) for s in simplices)

    def chain_map(self, p: int) -> RatMatrix:
        """Matrix of ``f_#`` on ``p``-chains; degenerate images go to zero."""
        tidx = self.target.index(p)
        rows: Dict[int, Dict[int, Fraction]] = {}
        for j, s in enumerate(self.source.simplices(p)):
            img, sign = self.image(s)
            if sign:
                rows.setdefault(tidx[img], {})[j] = Fraction(sign)
        return RatMatrix(self.target.count(p), self.source.count(p), rows)

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ first``."""
        if first.target is not self.source and first.target != self.source:
            raise InvalidMapError("maps are not composable")
        vm = [self.vertex_map[w] if w >= 0 else -1 for w in first.vertex_map]
        return SimplicialMap(first.source, self.target, vm)

    @classmethod
    def identity(cls, X: SimplicialComplex) -> "SimplicialMap":
        return cls(X, X, list(range(len(X.vertices))))


def induced_on_quotients(chain_matrix: RatMatrix, src: Quotient, tgt: Quotient) -> RatMatrix:
    """Matrix of the map a chain-level matrix induces between quotients."""
    cols = [tgt.coordinates(chain_matrix @ v) for v in src.basis]
    return RatMatrix.from_columns(cols, tgt.dim)


def induced_map(f: SimplicialMap, p: int, variance: str = "homology") -> RatMatrix:
    """Matrix of ``f_*`` on ``H_p`` or of ``f^*`` on ``H^p`` in the stored bases."""
    fp = f.chain_map(p)
    if variance == "homology":
        return induced_on_quotients(fp, homology_basis(f.source, p), homology_basis(f.target, p))
    if variance == "cohomology":
        return induced_on_quotients(fp.T, cohomology_basis(f.target, p), cohomology_basis(f.source, p))
    raise ValueError("variance must be 'homology' or 'cohomology'")


# -- barycentric subdivision ----------------------------------------------


@dataclass
class Subdivision:
    """``sd X`` together with the subdivision chain map ``C(X) -> C(sd X)``."""

    complex: SimplicialComplex
    base: SimplicialComplex
    chain_maps: Dict[int, RatMatrix]

    def chain_map(self, p: int) -> RatMatrix:
        m = self.chain_maps.get(p)
        if m is None:
            return RatMatrix.zeros(self.complex.count(p), self.base.count(p))
        return m

    def vertex_of(self, s: Simplex) -> int:
        """Position in ``sd X`` of the barycenter of the simplex ``s`` of ``X``."""
        return self._bary[s]

    @cached_property
    def _bary(self) -> Dict[Simplex, int]:
        return {name: i for i, name in enumerate(self.complex.vertices)}


def barycentric_subdivision(X: SimplicialComplex) -> Subdivision:
    """Barycentric subdivision with vertices ordered by dimension, then lexicographically.

    The chain map is built recursively as ``sd(s) = (-1)**p sd(∂s) * b_s``
    where ``* b_s`` appends the barycenter of ``s`` (the last vertex in the
    flag order), which makes it commute with the boundary.
    """
    order = [s for p in range(X.dim + 1) for s in X.simplices(p)]
    pos = {s: i for i, s in enumerate(order)}
    flags = set()
    for top in order:
        # every chain of faces ending at top
        def extend(chain: Tuple[Simplex, ...]):
            flags.add(tuple(pos[c] for c in chain))
            first = chain[0]
            for k in range(1, len(first)):
                for f in itertools.combinations(first, k):
                    extend((f,) + chain)

        extend((top,))
    sd = SimplicialComplex(order, flags, check=False)
    # images as sparse dicts flag -> coefficient
    images: Dict[Simplex, Dict[Simplex, int]] = {}
    for s in order:
        p = len(s) - 1
        b = pos[s]
        if p == 0:
            images[s] = {(b,): 1}
            continue
        acc: Dict[Simplex, int] = {}
        sign_p = -1 if p % 2 else 1
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            fsign = -1 if i % 2 else 1
            for flag, c in images[face].items():
                key = flag + (b,)
                acc[key] = acc.get(key, 0) + sign_p * fsign * c
        images[s] = {k: v for k, v in acc.items() if v}
    maps = {}
    for p in range(X.dim + 1):
        idx = sd.index(p)
        rows: Dict[int, Dict[int, Fraction]] = {}
        for j, s in enumerate(X.simplices(p)):
            for flag, c in images[s].items():
                rows.setdefault(idx[flag], {})[j] = Fraction(c)
        maps[p] = RatMatrix(sd.count(p), X.count(p), rows)
    return Subdivision(sd, X, maps)
