"""Generalized cochain systems on the supports of a covering.

A cochain system assigns to the whole space and to every support ``|σ|``
of a covering an augmented cochain complex ``Q -> A^0 -> A^1 -> ...``,
restriction maps along the inclusions ``|σ| ⊆ |τ|`` for ``τ ⊆ σ``, and a
natural transformation ``φ`` into simplicial cochains.

Supports are addressed by nerve simplices; the empty tuple ``()`` stands
for the whole space.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .coverings import Covering
from .exactla import (
    DimensionError,
    RatMatrix,
    Vector,
    kernel_basis,
    matrix_inverse,
    parse_rational,
    solve_particular,
)
from .simplicial import ChainComplex, SimplicialComplex

__all__ = [
    "CochainSystem",
    "BoundSystem",
    "FullSystem",
    "TruncatedSystem",
    "ExplicitSystem",
    "SystemError",
    "FULL",
    "parse_system",
    "support_key",
    "support_from_key",
]

Key = Tuple[int, ...]


class SystemError(ValueError):
    """A cochain system violates one of its structural invariants."""


def _solve_columns(basis: RatMatrix, m: RatMatrix, what: str) -> RatMatrix:
    """Coordinates of the columns of ``m`` in the (independent) columns of ``basis``."""
    cols = []
    for j in range(m.ncols):
        x = solve_particular(basis, m.column(j))
        if x is None:
            raise SystemError(f"{what}: column {j} leaves the target subspace")
        cols.append(x)
    return RatMatrix.from_columns(cols, basis.ncols)


def _selection(target: Sequence[tuple], source: Sequence[tuple]) -> RatMatrix:
    """Restriction of cochains from ``source`` simplices to the subset ``target``."""
    pos = {s: j for j, s in enumerate(source)}
    rows = {}
    for i, s in enumerate(target):
        j = pos.get(s)
        if j is None:
            raise SystemError(f"simplex {s} is not in the larger support")
        rows[i] = {j: 1}
    return RatMatrix(len(target), len(source), rows)


class BoundSystem:
    """A cochain system evaluated on the supports of one covering.

    Subclasses provide ``_dim``, ``_d``, ``_aug``, ``_phi`` and
    ``_restrict_step``; this class adds caching, composed restrictions,
    the augmented complexes and the acyclicity report.
    """

    def __init__(self, covering: Covering):
        self.covering = covering
        self.nerve = covering.nerve
        self._cache: Dict[tuple, object] = {}

    # -- to be provided -------------------------------------------------

    def top(self) -> int:
        raise NotImplementedError

    def _dim(self, key: Key, q: int) -> int:
        raise NotImplementedError

    def _d(self, key: Key, q: int) -> RatMatrix:
        raise NotImplementedError

    def _aug(self, key: Key) -> Vector:
        raise NotImplementedError

    def _phi(self, key: Key, q: int) -> RatMatrix:
        raise NotImplementedError

    def _restrict_step(self, small: Key, big: Key, q: int) -> RatMatrix:
        """Restriction ``A^q(|small|) -> A^q(|big|)`` where ``big = small ∪ {v}``."""
        raise NotImplementedError

    # -- cached public surface -------------------------------------------

    def _memo(self, tag, key, q, fn):
        k = (tag, key, q)
        v = self._cache.get(k)
        if v is None:
            v = fn()
            self._cache[k] = v
        return v

    def support(self, key: Key) -> SimplicialComplex:
        return self.nerve.support(key)

    def keys(self) -> List[Key]:
        return [()] + self.nerve.complex.all_simplices()

    def dim(self, key: Key, q: int) -> int:
        if q < 0:
            return 1 if q == -1 else 0
        if q > self.top():
            return 0
        return self._memo("dim", key, q, lambda: self._dim(key, q))

    def d(self, key: Key, q: int) -> RatMatrix:
        """``d_q: A^q -> A^{q+1}``; ``q = -1`` is the augmentation."""
        if q == -1:
            return RatMatrix.from_columns([self.augmentation(key)], self.dim(key, 0))
        if q < -1 or q >= self.top():
            return RatMatrix.zeros(self.dim(key, q + 1), self.dim(key, q))
        return self._memo("d", key, q, lambda: self._d(key, q))

    def augmentation(self, key: Key) -> Vector:
        return self._memo("aug", key, 0, lambda: list(self._aug(key)))

    def phi(self, key: Key, q: int) -> RatMatrix:
        if q < 0 or q > self.top():
            return RatMatrix.zeros(self.support(key).count(q) if q >= 0 else 0, self.dim(key, q))
        return self._memo("phi", key, q, lambda: self._phi(key, q))

    def restriction(self, small: Key, big: Key, q: int) -> RatMatrix:
        """``A^q(|small|) -> A^q(|big|)`` for ``small ⊆ big`` (so ``|big| ⊆ |small|``).

        Composed one added vertex at a time, in increasing order.
        """
        small, big = tuple(small), tuple(big)
        if not set(small) <= set(big):
            raise SystemError(f"{small} is not a face of {big}")
        if q < 0:
            return RatMatrix.identity(1) if q == -1 else RatMatrix.zeros(0, 0)
        if small == big:
            return RatMatrix.identity(self.dim(big, q))

        def build():
            extra = [v for v in big if v not in small]
            cur = small
            m = RatMatrix.identity(self.dim(small, q))
            for v in extra:
                nxt = tuple(sorted(cur + (v,)))
                m = self._restrict_step(cur, nxt, q) @ m
                cur = nxt
            return m

        return self._memo("res", (small, big), q, build)

    def complex(self, key: Key, augmented: bool = True) -> ChainComplex:
        """``A^•(|key|)``, augmented by default."""
        top = self.top()
        lo = -1 if augmented else 0
        dims = {q: self.dim(key, q) for q in range(lo, top + 1)}
        diffs = {q: self.d(key, q) for q in range(lo, top)}
        return ChainComplex(dims, diffs, cohomological=True)

    def acyclicity_report(self) -> Dict[Key, List[int]]:
        """For each nonempty nerve simplex, the degrees where the augmented complex is not exact."""
        out = {}
        for key in self.nerve.complex.all_simplices():
            cc = self.complex(key)
            bad = [q for q in range(-1, self.top() + 1) if cc.betti(q)]
            out[key] = bad
        return out

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        """Check every invariant of a cochain system on this covering."""
        top = self.top()
        for key in self.keys():
            Z = self.support(key)
            cc = self.complex(key)
            if not cc.is_complex():
                raise SystemError(f"d∘d != 0 on support {self.label(key)}")
            for q in range(0, top + 1):
                ph = self.phi(key, q)
                if ph.shape != (Z.count(q), self.dim(key, q)):
                    raise SystemError(f"phi^{q} on {self.label(key)} has shape {ph.shape}")
                dC = Z.boundary_matrix(q + 1).T
                if dC @ ph != self.phi(key, q + 1) @ self.d(key, q):
                    raise SystemError(f"phi is not a chain map on {self.label(key)} in degree {q}")
            if self.phi(key, 0) @ self.augmentation(key) != [Fraction(1)] * Z.count(0):
                raise SystemError(f"phi does not preserve the augmentation on {self.label(key)}")
        for small, big in _steps(self.covering):
            Zs, Zb = self.support(small), self.support(big)
            for q in range(0, top + 1):
                r = self._restrict_step(small, big, q)
                if r.shape != (self.dim(big, q), self.dim(small, q)):
                    raise SystemError(f"restriction {self.label(small)}->{self.label(big)} degree {q} has shape {r.shape}")
                if q < top and self.d(big, q) @ r != self._restrict_step(small, big, q + 1) @ self.d(small, q):
                    raise SystemError(f"restriction {self.label(small)}->{self.label(big)} is not a chain map in degree {q}")
                rc = _selection(Zb.simplices(q), Zs.simplices(q))
                if self.phi(big, q) @ r != rc @ self.phi(small, q):
                    raise SystemError(f"phi is not natural for {self.label(small)}->{self.label(big)} in degree {q}")
            if self._restrict_step(small, big, 0) @ self.augmentation(small) != self.augmentation(big):
                raise SystemError(f"restriction {self.label(small)}->{self.label(big)} does not fix the augmentation")
        # any two paths across a codimension-two step agree
        for p in range(0, self.nerve.dim + 1):
            for s in self.nerve.simplices(p):
                if len(s) < 2:
                    continue
                for i in range(len(s)):
                    for j in range(i + 1, len(s)):
                        low = tuple(v for k, v in enumerate(s) if k not in (i, j))
                        a = s[:i] + s[i + 1:]
                        b = s[:j] + s[j + 1:]
                        for q in range(0, top + 1):
                            via_a = self._restrict_step(a, s, q) @ self._restrict_step(low, a, q)
                            via_b = self._restrict_step(b, s, q) @ self._restrict_step(low, b, q)
                            if via_a != via_b:
                                raise SystemError(
                                    f"restrictions {self.label(low)}->{self.label(s)} depend on the path (degree {q})"
                                )

    def label(self, key: Key) -> str:
        return support_key(self.covering, key)


def support_key(U: Covering, key: Key) -> str:
    if not key:
        return "X"
    return ",".join(str(U.names[i]) for i in key)


def _require_unambiguous(U: Covering) -> None:
    if "X" in (str(n) for n in U.names):
        raise SystemError("a covering element named 'X' clashes with the name of the whole space")


def support_from_key(U: Covering, text: str) -> Key:
    if text == "X":
        return ()
    names = {str(n): i for i, n in enumerate(U.names)}
    try:
        return tuple(sorted(names[t] for t in text.split(",")))
    except KeyError as e:
        raise SystemError(f"unknown covering index {e.args[0]!r} in support name {text!r}") from None


class CochainSystem:
    """A rule producing a :class:`BoundSystem` for any covering."""

    name = "system"

    def bind(self, U: Covering) -> BoundSystem:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


# -- built-ins ------------------------------------------------------------------


class _BoundFull(BoundSystem):
    def top(self) -> int:
        return max(self.covering.base.dim, 0)

    def _dim(self, key, q):
        return self.support(key).count(q)

    def _d(self, key, q):
        return self.support(key).boundary_matrix(q + 1).T

    def _aug(self, key):
        return [Fraction(1)] * self.support(key).count(0)

    def _phi(self, key, q):
        return RatMatrix.identity(self.support(key).count(q))

    def _restrict_step(self, small, big, q):
        return _selection(self.support(big).simplices(q), self.support(small).simplices(q))


class FullSystem(CochainSystem):
    """Simplicial cochains themselves, with ``φ`` the identity."""

    name = "FULL"

    def bind(self, U: Covering) -> BoundSystem:
        return _BoundFull(U)


FULL = FullSystem()


class _BoundTrunc(_BoundFull):
    def __init__(self, U: Covering, m: int):
        super().__init__(U)
        self.m = m

    def top(self) -> int:
        return min(self.m, max(self.covering.base.dim, 0))

    def _kernel(self, key) -> RatMatrix:
        def build():
            Z = self.support(key)
            dm = Z.boundary_matrix(self.m + 1).T
            return RatMatrix.from_columns(kernel_basis(dm), Z.count(self.m))

        return self._memo("ker", key, self.m, build)

    def _truncated(self, q) -> bool:
        return q == self.m

    def _dim(self, key, q):
        if self._truncated(q):
            return self._kernel(key).ncols
        return super()._dim(key, q)

    def _d(self, key, q):
        base = super()._d(key, q)
        if self._truncated(q + 1):
            return _solve_columns(self._kernel(key), base, "coboundary into the cocycles")
        return base

    def _aug(self, key):
        ones = super()._aug(key)
        if self._truncated(0):
            x = solve_particular(self._kernel(key), ones)
            return x
        return ones

    def _phi(self, key, q):
        if self._truncated(q):
            return self._kernel(key)
        return super()._phi(key, q)

    def _restrict_step(self, small, big, q):
        r = super()._restrict_step(small, big, q)
        if self._truncated(q):
            return _solve_columns(self._kernel(big), r @ self._kernel(small), "restricted cocycle")
        return r


class TruncatedSystem(CochainSystem):
    """``A^q = C^q`` below ``m``, ``A^m`` the ``m``-cocycles, nothing above."""

    def __init__(self, m: int):
        if m < 0:
            raise ValueError("truncation level must be non-negative")
        self.m = m
        self.name = f"TRUNC:{m}"

    def bind(self, U: Covering) -> BoundSystem:
        return _BoundTrunc(U, self.m)


# -- explicit systems -----------------------------------------------------------


@dataclass
class SupportData:
    dims: List[int]
    augmentation: Vector
    differentials: List[RatMatrix]
    phi: List[RatMatrix]


class _BoundExplicit(BoundSystem):
    def __init__(self, U: Covering, system: "ExplicitSystem"):
        super().__init__(U)
        self.system = system

    def top(self) -> int:
        return self.system.top

    def _data(self, key) -> SupportData:
        try:
            return self.system.supports[key]
        except KeyError:
            raise SystemError(f"system has no data for support {self.label(key)}") from None

    def _dim(self, key, q):
        dims = self._data(key).dims
        return dims[q] if q < len(dims) else 0

    def _d(self, key, q):
        ds = self._data(key).differentials
        if q < len(ds):
            return ds[q]
        return RatMatrix.zeros(self.dim(key, q + 1), self.dim(key, q))

    def _aug(self, key):
        return self._data(key).augmentation

    def _phi(self, key, q):
        ph = self._data(key).phi
        if q < len(ph):
            return ph[q]
        return RatMatrix.zeros(self.support(key).count(q), self.dim(key, q))

    def _restrict_step(self, small, big, q):
        ms = self.system.restrictions.get((small, big))
        if ms is None:
            raise SystemError(f"missing restriction {self.label(small)}->{self.label(big)}")
        if q < len(ms):
            return ms[q]
        return RatMatrix.zeros(self.dim(big, q), self.dim(small, q))


class ExplicitSystem(CochainSystem):
    """A cochain system given by explicit matrices on the supports of a fixed covering."""

    def __init__(self, covering: Covering, supports: Mapping[Key, SupportData],
                 restrictions: Mapping[Tuple[Key, Key], List[RatMatrix]], *, name: str = "EXPLICIT",
                 validate: bool = True):
        self.covering = covering
        self.supports = dict(supports)
        self.restrictions = dict(restrictions)
        self.name = name
        self.top = max((len(s.dims) - 1 for s in self.supports.values()), default=0)
        if validate:
            self.bind(covering)

    def bind(self, U: Covering) -> BoundSystem:
        if U.base != self.covering.base or [e.simplex_set for e in U.elements] != [
            e.simplex_set for e in self.covering.elements
        ]:
            raise SystemError("explicit system was built for a different covering")
        b = _BoundExplicit(U, self)
        for key in b.keys():
            if key not in self.supports:
                raise SystemError(f"system has no data for support {b.label(key)}")
        b.validate()
        return b

    # -- construction helpers -------------------------------------------------

    @classmethod
    def materialize(cls, U: Covering, A: CochainSystem, name: str = "EXPLICIT") -> "ExplicitSystem":
        """Copy any system on ``U`` into explicit matrices."""
        b = A.bind(U)
        top = b.top()
        supports = {}
        for key in b.keys():
            supports[key] = SupportData(
                dims=[b.dim(key, q) for q in range(top + 1)],
                augmentation=list(b.augmentation(key)),
                differentials=[b.d(key, q) for q in range(top)],
                phi=[b.phi(key, q) for q in range(top + 1)],
            )
        restrictions = {}
        for small, big in _steps(U):
            restrictions[(small, big)] = [b._restrict_step(small, big, q) for q in range(top + 1)]
        return cls(U, supports, restrictions, name=name, validate=False)

    # -- serialization --------------------------------------------------------

    def to_json(self, covering_json: Optional[dict] = None) -> dict:
        U = self.covering
        _require_unambiguous(U)
        sup = {}
        for key in sorted(self.supports, key=lambda k: (len(k), k)):
            s = self.supports[key]
            sup[support_key(U, key)] = {
                "dims": list(s.dims),
                "augmentation": [str(x) for x in s.augmentation],
                "differentials": [m.to_json() for m in s.differentials],
                "phi": [m.to_json() for m in s.phi],
            }
        res = {}
        for (small, big) in sorted(self.restrictions, key=lambda k: (len(k[1]), k[1], k[0])):
            res[f"{support_key(U, small)}->{support_key(U, big)}"] = [m.to_json() for m in self.restrictions[(small, big)]]
        out = {"name": self.name}
        if covering_json is not None:
            out["covering"] = covering_json
        out["supports"] = sup
        out["restrictions"] = res
        return out

    @classmethod
    def from_json(cls, data: Mapping, covering: Covering, name: Optional[str] = None) -> "ExplicitSystem":
        _require_unambiguous(covering)
        try:
            raw_sup = data["supports"]
            raw_res = data["restrictions"]
        except KeyError as e:
            raise SystemError(f"explicit system is missing the {e.args[0]!r} section") from None
        supports: Dict[Key, SupportData] = {}
        for text, s in raw_sup.items():
            key = support_from_key(covering, text)
            Z = covering.nerve.support(key) if key else covering.base
            dims = [int(x) for x in s["dims"]]
            top = len(dims) - 1
            diffs = []
            for q, m in enumerate(s.get("differentials", [])):
                diffs.append(RatMatrix.from_json(m, dims[q + 1] if q + 1 <= top else 0, dims[q]))
            phis = [RatMatrix.from_json(m, Z.count(q), dims[q]) for q, m in enumerate(s.get("phi", []))]
            aug = [parse_rational(x) for x in s["augmentation"]]
            if len(aug) != (dims[0] if dims else 0):
                raise DimensionError(f"augmentation of {text} has length {len(aug)}")
            supports[key] = SupportData(dims, aug, diffs, phis)
        restrictions: Dict[Tuple[Key, Key], List[RatMatrix]] = {}
        for text, ms in raw_res.items():
            if "->" not in text:
                raise SystemError(f"restriction name {text!r} must look like 'X->u0'")
            a, b = text.split("->", 1)
            small, big = support_from_key(covering, a), support_from_key(covering, b)
            if not (set(small) < set(big) and len(big) == len(small) + 1):
                raise SystemError(f"restriction {text!r} is not a one-step face inclusion")
            ds, db = supports[small].dims, supports[big].dims
            restrictions[(small, big)] = [
                RatMatrix.from_json(m, db[q] if q < len(db) else 0, ds[q] if q < len(ds) else 0)
                for q, m in enumerate(ms)
            ]
        return cls(covering, supports, restrictions, name=name or data.get("name", "EXPLICIT"))

    # -- transformations used to engineer test systems ------------------------

    def rebased(self, seed: int) -> "ExplicitSystem":
        """The same system written in a random basis of every ``A^q(Z)``."""
        rng = random.Random(seed)
        change: Dict[Tuple[Key, int], RatMatrix] = {}
        for key, s in self.supports.items():
            for q, n in enumerate(s.dims):
                change[(key, q)] = _random_invertible(n, rng)
        inv = {k: matrix_inverse(m) for k, m in change.items()}
        supports = {}
        for key, s in self.supports.items():
            top = len(s.dims) - 1
            diffs = [inv[(key, q + 1)] @ s.differentials[q] @ change[(key, q)] for q in range(len(s.differentials))]
            phis = [s.phi[q] @ change[(key, q)] for q in range(len(s.phi))]
            aug = inv[(key, 0)] @ s.augmentation if top >= 0 else []
            supports[key] = SupportData(list(s.dims), list(aug), diffs, phis)
        restrictions = {}
        for (small, big), ms in self.restrictions.items():
            restrictions[(small, big)] = [inv[(big, q)] @ m @ change[(small, q)] for q, m in enumerate(ms)]
        return ExplicitSystem(self.covering, supports, restrictions, name=self.name + "-rebased", validate=False)


def _random_invertible(n: int, rng: random.Random) -> RatMatrix:
    """Unit lower times unit upper triangular with small integer entries."""
    lo = RatMatrix(n, n, {i: {j: (1 if i == j else rng.randint(-2, 2)) for j in range(i + 1)} for i in range(n)})
    up = RatMatrix(n, n, {i: {j: (1 if i == j else rng.randint(-2, 2)) for j in range(i, n)} for i in range(n)})
    perm = list(range(n))
    rng.shuffle(perm)
    P = RatMatrix(n, n, {i: {perm[i]: 1} for i in range(n)})
    return P @ lo @ up


def _steps(U: Covering) -> List[Tuple[Key, Key]]:
    N = U.nerve
    out = [((), (v,)) for (v,) in N.simplices(0)]
    for p in range(1, N.dim + 1):
        for s in N.simplices(p):
            for i in range(len(s)):
                out.append((s[:i] + s[i + 1:], s))
    return out


def parse_system(text: str, covering: Optional[Covering] = None) -> CochainSystem:
    """Parse ``FULL``, ``TRUNC:m`` or ``EXPLICIT:path``."""
    if text == "FULL":
        return FULL
    if text.startswith("TRUNC:"):
        try:
            m = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad truncation level in {text!r}") from None
        return TruncatedSystem(m)
    if text.startswith("EXPLICIT:"):
        if covering is None:
            raise ValueError("an explicit system needs the covering it lives on")
        path = text.split(":", 1)[1]
        with open(path) as fh:
            data = json.load(fh)
        return ExplicitSystem.from_json(data, covering)
    raise ValueError(f"unknown system {text!r}; expected FULL, TRUNC:m or EXPLICIT:path")
