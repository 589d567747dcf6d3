"""ℓ1 seminorms on simplicial homology, ℓ∞ seminorms on cohomology, the
Kronecker pairing, and the LP duality between them.

These are seminorms of the given triangulation's chain complex, a finite
analog of the singular ℓ1 theory. Each value comes with a certificate from
the dual program:

* for ``‖h‖₁`` a cocycle ``α`` with ``|α| ≤ 1`` everywhere and
  ``⟨z, α⟩ = ‖h‖₁``;
* for ``‖a‖∞`` a cycle ``w`` with ``‖w‖₁ ≤ 1`` and ``⟨w, α⟩ = ‖a‖∞``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .exactla import RatMatrix, Vector, format_rational, parse_rational, vec_add
from .lp import OPTIMAL, LPError, LPProblem, LPResult, lp_solve
from .simplicial import SimplicialComplex, boundary_matrix, cohomology_basis, homology_basis

__all__ = [
    "SeminormResult",
    "DualityReport",
    "InvalidClassError",
    "LPProblem",
    "LPResult",
    "lp_solve",
    "l1_seminorm",
    "linf_seminorm",
    "pairing",
    "max_pairing",
    "duality_check",
]


class InvalidClassError(ValueError):
    """Class coordinates do not match the dimension of the (co)homology group."""


@dataclass
class SeminormResult:
    value: Fraction
    optimizer: Vector
    dual: Vector

    def to_json(self) -> dict:
        return {
            "value": format_rational(self.value),
            "optimizer": [format_rational(x) for x in self.optimizer],
            "dual": [format_rational(x) for x in self.dual],
        }


def _coords(c: Sequence, dim: int, what: str) -> Vector:
    c = [parse_rational(x) for x in c]
    if len(c) != dim:
        raise InvalidClassError(f"{what} has dimension {dim}, got {len(c)} coordinates")
    return c


def _boundary(X: SimplicialComplex, p: int) -> RatMatrix:
    """``∂: C_p -> C_{p-1}``; zero map out of degree 0."""
    if p <= 0 or p > X.dim:
        return RatMatrix.zeros(X.count(p - 1) if p > 0 else 0, X.count(p))
    return boundary_matrix(X, p)


def _solve(v: Vector, D: RatMatrix, single_bound: bool) -> tuple:
    """Minimize the bounds in ``-t ≤ v + D u ≤ t`` over free ``u``.

    One bound per entry gives the ℓ1 problem (objective ``Σ t``), a single
    shared bound gives ℓ∞. Returns the value, the optimal ``v + D u`` and
    the certificate built from the multipliers.
    """
    n, k = len(v), D.ncols
    nb = 1 if single_bound else n
    rows: Dict[int, Dict[int, Fraction]] = {}
    for i, j, x in D.entries():
        rows.setdefault(i, {})[j] = x
        rows.setdefault(n + i, {})[j] = x
    for i in range(n):
        b = k + (0 if single_bound else i)
        rows.setdefault(i, {})[b] = Fraction(-1)
        rows.setdefault(n + i, {})[b] = Fraction(1)
    A = RatMatrix(2 * n, k + nb, rows)
    neg = [-x for x in v]
    prob = LPProblem([0] * k + [1] * nb, A, ["<="] * n + [">="] * n, neg + neg, [True] * k + [False] * nb)
    res = lp_solve(prob)
    if res.status != OPTIMAL:
        raise LPError(f"seminorm program ended {res.status}")
    u = res.primal[:k]
    opt = vec_add(v, D @ u) if k else list(v)
    cert = [-(res.dual[i] + res.dual[n + i]) for i in range(n)]
    return res.value, opt, cert


def l1_seminorm(X: SimplicialComplex, p: int, h: Sequence) -> SeminormResult:
    """``min ‖z + ∂b‖₁`` over ``b ∈ C_{p+1}(X)``, ``z`` the stored representative of ``h``."""
    H = homology_basis(X, p)
    h = _coords(h, H.dim, f"H_{p}")
    z = H.lift(h)
    value, opt, alpha = _solve(z, _boundary(X, p + 1), single_bound=False)
    return SeminormResult(value, opt, alpha)


def linf_seminorm(X: SimplicialComplex, p: int, a: Sequence) -> SeminormResult:
    """``min max |α + δc|`` over ``c ∈ C^{p-1}(X)``, ``α`` the stored representative of ``a``."""
    H = cohomology_basis(X, p)
    a = _coords(a, H.dim, f"H^{p}")
    alpha = H.lift(a)
    if not alpha:
        return SeminormResult(Fraction(0), [], [])
    value, opt, w = _solve(alpha, _boundary(X, p).T, single_bound=True)
    return SeminormResult(value, opt, w)


def pairing(X: SimplicialComplex, p: int, h: Sequence, a: Sequence, check: bool = True) -> Fraction:
    """``⟨z, α⟩`` for representatives of ``h ∈ H_p`` and ``a ∈ H^p``.

    With ``check`` the value is recomputed on shifted representatives
    ``z + ∂b`` and ``α + δc`` and required to agree.
    """
    Hh, Ha = homology_basis(X, p), cohomology_basis(X, p)
    z = Hh.lift(_coords(h, Hh.dim, f"H_{p}"))
    alpha = Ha.lift(_coords(a, Ha.dim, f"H^{p}"))
    value = sum((x * y for x, y in zip(z, alpha)), Fraction(0))
    if check and z:
        up, down = _boundary(X, p + 1), _boundary(X, p)
        z2 = vec_add(z, up @ ([Fraction(1)] * up.ncols)) if up.ncols else z
        a2 = vec_add(alpha, down.T @ ([Fraction(1)] * down.nrows)) if down.nrows else alpha
        if sum((x * y for x, y in zip(z2, a2)), Fraction(0)) != value:
            raise LPError("pairing depends on the representatives")
    return value


def max_pairing(X: SimplicialComplex, p: int, h: Sequence) -> SeminormResult:
    """``max ⟨z, α⟩`` over cocycles ``α ∈ C^p`` with ``|α| ≤ 1`` everywhere.

    The optimizer is the maximizing cocycle and the dual certificate the
    multipliers of the cocycle condition.
    """
    H = homology_basis(X, p)
    z = H.lift(_coords(h, H.dim, f"H_{p}"))
    n = len(z)
    cob = _boundary(X, p + 1).T
    m = cob.nrows
    rows: Dict[int, Dict[int, Fraction]] = {}
    for i, j, x in cob.entries():
        rows.setdefault(i, {})[j] = x
    for j in range(n):
        rows[m + j] = {j: Fraction(1)}
        rows[m + n + j] = {j: Fraction(1)}
    A = RatMatrix(m + 2 * n, n, rows)
    prob = LPProblem([-x for x in z], A, ["="] * m + ["<="] * n + [">="] * n,
                     [0] * m + [1] * n + [-1] * n, [True] * n)
    res = lp_solve(prob)
    if res.status != OPTIMAL:
        raise LPError(f"pairing program ended {res.status}")
    return SeminormResult(-res.value, res.primal, [-y for y in res.dual[:m]])


@dataclass
class DualityReport:
    degree: int
    holds: bool
    classes: List[dict]
    bound_violations: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "holds": self.holds,
            "classes": self.classes,
            "bound_violations": self.bound_violations,
        }


def duality_check(X: SimplicialComplex, p: int, random_pairs: int = 100,
                  rng: Optional[random.Random] = None) -> DualityReport:
    """For each basis class ``h`` of ``H_p``, compare ``‖h‖₁`` with the
    maximal pairing against classes of ℓ∞ seminorm at most 1, and check
    ``|⟨h, a⟩| ≤ ‖h‖₁ ‖a‖∞`` on random pairs."""
    rng = rng or random.Random(0)
    Hh, Ha = homology_basis(X, p), cohomology_basis(X, p)
    classes, ok = [], True
    for i in range(Hh.dim):
        h = [Fraction(int(i == j)) for j in range(Hh.dim)]
        l1 = l1_seminorm(X, p, h)
        mp = max_pairing(X, p, h)
        _check_l1_certificate(X, p, l1)
        equal = l1.value == mp.value
        ok = ok and equal
        classes.append({"class": [format_rational(x) for x in h], "l1": format_rational(l1.value),
                        "max_pairing": format_rational(mp.value), "equal": equal})
    bad = 0
    if Hh.dim and Ha.dim:
        for _ in range(random_pairs):
            h = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(Hh.dim)]
            a = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(Ha.dim)]
            lhs = abs(pairing(X, p, h, a, check=False))
            if lhs > l1_seminorm(X, p, h).value * linf_seminorm(X, p, a).value:
                bad += 1
    return DualityReport(p, ok and not bad, classes, bad)


def _check_l1_certificate(X: SimplicialComplex, p: int, r: SeminormResult) -> None:
    alpha = r.dual
    if any(abs(x) > 1 for x in alpha):
        raise LPError("ℓ1 certificate exceeds 1 in absolute value")
    up = _boundary(X, p + 1)
    if up.ncols and any(up.T @ alpha):
        raise LPError("ℓ1 certificate is not a cocycle")
    if sum((x * y for x, y in zip(r.optimizer, alpha)), Fraction(0)) != r.value:
        raise LPError("ℓ1 certificate does not attain the value")
