"""Coverings of simplicial complexes by subcomplexes, their nerves, and
finite-set refinement combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .simplicial import InvalidMapError, Simplex, SimplicialComplex, SimplicialMap

__all__ = [
    "Covering",
    "Nerve",
    "NotFineError",
    "SetFamily",
    "CoveringMorphism",
    "MorphismError",
    "nerve",
    "support",
    "is_combinatorial_refinement",
    "star",
    "is_barycentric_refinement",
    "is_star_refinement",
    "nerve_map",
    "admissible_targets",
]


class NotFineError(ValueError):
    """Some simplex of the base lies in no element of the covering."""

    def __init__(self, simplex: Tuple[Hashable, ...]):
        super().__init__(f"covering is not fine: simplex {list(simplex)} lies in no element")
        self.simplex = simplex


class MorphismError(ValueError):
    pass


class Covering:
    """An indexed family of subcomplexes of ``base`` covering every simplex.

    ``names`` fixes the index order; it is also the vertex order of the nerve.
    """

    def __init__(self, base: SimplicialComplex, names: Sequence[Hashable],
                 elements: Sequence[Iterable[Simplex]], *, require_fine: bool = True):
        if len(names) != len(elements):
            raise ValueError("one element per index name is required")
        if len(set(names)) != len(names):
            raise ValueError("duplicate index names")
        self.base = base
        self.names: Tuple[Hashable, ...] = tuple(names)
        elems = []
        for nm, el in zip(names, elements):
            sub = base.subcomplex(el)
            elems.append(sub)
        self.elements: Tuple[SimplicialComplex, ...] = tuple(elems)
        if require_fine:
            missing = self.uncovered()
            if missing:
                raise NotFineError(base.names(missing[0]))

    def uncovered(self) -> List[Simplex]:
        covered = set()
        for e in self.elements:
            covered |= e.simplex_set
        rest = self.base.simplex_set - covered
        return sorted(rest, key=lambda s: (-len(s), s))

    def __len__(self) -> int:
        return len(self.elements)

    def element(self, i: int) -> SimplicialComplex:
        return self.elements[i]

    def smallest_containing(self, s: Simplex) -> int:
        """Index of the first element containing the simplex ``s``."""
        for i, e in enumerate(self.elements):
            if s in e.simplex_set:
                return i
        raise NotFineError(self.base.names(s))

    @cached_property
    def nerve(self) -> "Nerve":
        return nerve(self)

    @classmethod
    def single(cls, X: SimplicialComplex, name: Hashable = "X") -> "Covering":
        return cls(X, [name], [X.all_simplices()])

    def __repr__(self) -> str:
        return f"Covering({len(self.elements)} elements of {self.base!r})"


class Nerve:
    """The nerve of a covering together with the supports ``|σ|``."""

    def __init__(self, covering: Covering, supports: Dict[Simplex, FrozenSet[Simplex]]):
        self.covering = covering
        self.complex = SimplicialComplex(covering.names, supports.keys(), check=False)
        self._supports = supports
        self._sub_cache: Dict[Simplex, SimplicialComplex] = {}

    @property
    def dim(self) -> int:
        return self.complex.dim

    def simplices(self, p: int) -> List[Simplex]:
        return self.complex.simplices(p)

    def support_set(self, sigma: Simplex) -> FrozenSet[Simplex]:
        sigma = tuple(sigma)
        if not sigma:
            return self.covering.base.simplex_set
        try:
            return self._supports[sigma]
        except KeyError:
            raise ValueError(f"{sigma} is not a simplex of the nerve") from None

    def support(self, sigma: Simplex) -> SimplicialComplex:
        sigma = tuple(sigma)
        if not sigma:
            return self.covering.base
        sub = self._sub_cache.get(sigma)
        if sub is None:
            sub = SimplicialComplex(self.covering.base.vertices, self.support_set(sigma), check=False)
            self._sub_cache[sigma] = sub
        return sub


def nerve(U: Covering) -> Nerve:
    """Nerve of ``U``: index sets whose elements share at least one simplex."""
    sets = [e.simplex_set for e in U.elements]
    supports: Dict[Simplex, FrozenSet[Simplex]] = {}
    frontier: List[Tuple[Simplex, FrozenSet[Simplex]]] = []
    for i, s in enumerate(sets):
        if s:
            supports[(i,)] = s
            frontier.append(((i,), s))
    while frontier:
        nxt = []
        for sigma, inter in frontier:
            for j in range(sigma[-1] + 1, len(sets)):
                if (j,) not in supports:
                    continue
                meet = inter & sets[j]
                if meet:
                    tau = sigma + (j,)
                    supports[tau] = meet
                    nxt.append((tau, meet))
        frontier = nxt
    return Nerve(U, supports)


def support(N: Nerve, sigma: Simplex) -> SimplicialComplex:
    """The subcomplex ``|σ|``; the empty simplex gives the whole base."""
    return N.support(sigma)


# -- families of subsets of a finite set ---------------------------------


@dataclass(frozen=True)
class SetFamily:
    ground: FrozenSet[Hashable]
    index: Tuple[Hashable, ...]
    members: Tuple[FrozenSet[Hashable], ...]

    @classmethod
    def of(cls, ground: Iterable[Hashable], members: Mapping[Hashable, Iterable[Hashable]] | Sequence[Iterable[Hashable]]):
        ground = frozenset(ground)
        if isinstance(members, Mapping):
            idx = tuple(members.keys())
            mem = tuple(frozenset(members[k]) for k in idx)
        else:
            mem = tuple(frozenset(m) for m in members)
            idx = tuple(range(len(mem)))
        for m in mem:
            if not m <= ground:
                raise ValueError(f"member {set(m)} is not a subset of the ground set")
        return cls(ground, idx, mem)

    def is_covering(self) -> bool:
        u = frozenset().union(*self.members) if self.members else frozenset()
        return u == self.ground

    def member(self, i: Hashable) -> FrozenSet[Hashable]:
        return self.members[self.index.index(i)]

    def nerve_simplices(self) -> set:
        out = set()
        n = len(self.members)

        def grow(sigma: Tuple[int, ...], inter: FrozenSet[Hashable]):
            out.add(sigma)
            for j in range(sigma[-1] + 1, n):
                m = inter & self.members[j]
                if m:
                    grow(sigma + (j,), m)

        for i, m in enumerate(self.members):
            if m:
                grow((i,), m)
        return out


def is_combinatorial_refinement(F: SetFamily, G: SetFamily) -> bool:
    if F.index != G.index:
        raise ValueError("families are indexed by different sets")
    return all(f <= g for f, g in zip(F.members, G.members))


def star(A: Iterable[Hashable], U: SetFamily) -> FrozenSet[Hashable]:
    A = frozenset(A)
    if not A <= U.ground:
        raise ValueError("A is not a subset of the ground set")
    out: set = set()
    for m in U.members:
        if m & A:
            out |= m
    return frozenset(out)


def _require_coverings(*fams: SetFamily) -> None:
    g = fams[0].ground
    for f in fams:
        if f.ground != g:
            raise ValueError("families live on different ground sets")
        if not f.is_covering():
            raise ValueError("family is not a covering of its ground set")


def is_barycentric_refinement(A: SetFamily, U: SetFamily) -> bool:
    """Every point star ``St(z, A)`` fits inside some member of ``U``."""
    _require_coverings(A, U)
    for z in A.ground:
        st = star({z}, A)
        if not any(st <= u for u in U.members):
            return False
    return True


def is_star_refinement(A: SetFamily, U: SetFamily) -> bool:
    """Every member star ``St(A_s, A)`` fits inside some member of ``U``."""
    _require_coverings(A, U)
    for a in A.members:
        st = star(a, A)
        if not any(st <= u for u in U.members):
            return False
    return True


# -- morphisms of coverings ----------------------------------------------


class CoveringMorphism:
    """A simplicial map of bases carrying each source element into a target element."""

    def __init__(self, map: SimplicialMap, source: Covering, target: Covering):
        if map.source != source.base or map.target != target.base:
            raise MorphismError("map does not go between the covering bases")
        self.map = map
        self.source = source
        self.target = target
        for i, targets in enumerate(admissible_targets(self)):
            if not targets:
                raise MorphismError(
                    f"image of element {source.names[i]!r} lies in no target element"
                )


def admissible_targets(m: CoveringMorphism) -> List[List[int]]:
    """For each source element, every target index whose element contains its image."""
    out = []
    tsets = [e.simplex_set for e in m.target.elements]
    for e in m.source.elements:
        img = m.map.image_subcomplex(e.simplex_set)
        out.append([j for j, t in enumerate(tsets) if img <= t])
    return out


def nerve_map(m: CoveringMorphism, choice: Optional[Sequence[int]] = None) -> SimplicialMap:
    """Simplicial map of nerves from a choice of containing target element.

    Without ``choice`` the smallest admissible target index is used.
    """
    adm = admissible_targets(m)
    if choice is None:
        choice = [a[0] for a in adm]
    else:
        choice = list(choice)
        for i, (c, a) in enumerate(zip(choice, adm)):
            if c not in a:
                raise MorphismError(f"choice {c} for element {i} does not contain its image")
    try:
        return SimplicialMap(m.source.nerve.complex, m.target.nerve.complex, choice)
    except InvalidMapError as e:  # cannot happen for a valid morphism
        raise MorphismError(str(e)) from e
