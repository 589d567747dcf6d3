"""Exact linear programming over the rationals.

A dense two-phase simplex method with Bland's rule. Problems are small
(a few dozen variables), so a full tableau of :class:`~fractions.Fraction`
entries is both simple and fast enough.

Every optimal answer carries a dual solution, and the solver checks
primal feasibility, dual feasibility and equality of the two objectives
before returning. A failed check is a bug and raises :class:`LPError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .exactla import RatMatrix, Vector, parse_rational

__all__ = ["LPProblem", "LPResult", "LPError", "lp_solve", "OPTIMAL", "INFEASIBLE", "UNBOUNDED"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "=", ">=")


class LPError(RuntimeError):
    """The solver produced a result that fails its own certificate check."""


@dataclass
class LPProblem:
    """Minimize ``objective · x`` subject to ``constraints[i] · x  rel[i]  rhs[i]``.

    ``free[j]`` marks variable ``j`` as unrestricted in sign; all other
    variables are nonnegative.
    """

    objective: Sequence[Fraction]
    constraints: RatMatrix
    relations: Sequence[str]
    rhs: Sequence[Fraction]
    free: Sequence[bool] = field(default_factory=list)

    def __post_init__(self):
        n = self.constraints.ncols
        m = self.constraints.nrows
        self.objective = [parse_rational(c) for c in self.objective]
        self.rhs = [parse_rational(b) for b in self.rhs]
        self.free = list(self.free) or [False] * n
        if len(self.objective) != n or len(self.free) != n:
            raise ValueError(f"objective and bounds need {n} entries")
        if len(self.relations) != m or len(self.rhs) != m:
            raise ValueError(f"relations and right-hand side need {m} entries")
        for r in self.relations:
            if r not in _RELATIONS:
                raise ValueError(f"unknown relation {r!r}")

    @property
    def num_variables(self) -> int:
        return self.constraints.ncols


@dataclass
class LPResult:
    """``dual[i]`` is the multiplier of constraint ``i``: nonnegative for
    ``>=`` rows, nonpositive for ``<=`` rows, free for equalities, with
    ``rhs · dual = value``."""

    status: str
    value: Optional[Fraction] = None
    primal: Optional[Vector] = None
    dual: Optional[Vector] = None


def lp_solve(problem: LPProblem) -> LPResult:
    """Solve ``problem`` exactly; see :class:`LPResult` for the certificate."""
    A = problem.constraints.to_dense()
    m, n = problem.constraints.nrows, problem.num_variables
    # columns of the standard form: x+ for every variable, x- for free ones,
    # one slack per inequality, one artificial per row
    cols: List[tuple] = [("x", j, 1) for j in range(n)]
    cols += [("x", j, -1) for j in range(n) if problem.free[j]]
    flip = [problem.rhs[i] < 0 for i in range(m)]
    rows = []
    rhs = []
    for i in range(m):
        s = -1 if flip[i] else 1
        rows.append([s * A[i][j] * sign for (_, j, sign) in cols])
        rhs.append(s * problem.rhs[i])
    for i, rel in enumerate(problem.relations):
        if rel == "=":
            continue
        direction = 1 if rel == "<=" else -1
        if flip[i]:
            direction = -direction
        cols.append(("slack", i, direction))
        for k in range(m):
            rows[k].append(Fraction(direction) if k == i else Fraction(0))
    n_real = len(cols)
    basis: List[int] = []
    for i in range(m):
        slack = next((c for c, (kind, r, d) in enumerate(cols) if kind == "slack" and r == i and d == 1), None)
        if slack is not None:
            basis.append(slack)
            continue
        cols.append(("art", i, 1))
        for k in range(m):
            rows[k].append(Fraction(1) if k == i else Fraction(0))
        basis.append(len(cols) - 1)
    tab = _Tableau(rows, rhs, basis)

    art = [c for c, col in enumerate(cols) if col[0] == "art"]
    if art:
        phase1 = [Fraction(1) if c in art else Fraction(0) for c in range(len(cols))]
        tab.optimize(phase1, allowed=range(len(cols)))
        if tab.objective_value(phase1) != 0:
            return LPResult(INFEASIBLE)
        tab.drive_out(set(art), n_real)
    cost = [Fraction(0)] * len(cols)
    for c, (kind, j, sign) in enumerate(cols):
        if kind == "x":
            cost[c] = problem.objective[j] * sign
    if not tab.optimize(cost, allowed=range(n_real)):
        return LPResult(UNBOUNDED)

    values = tab.solution(len(cols))
    x = [Fraction(0)] * n
    for c, (kind, j, sign) in enumerate(cols):
        if kind == "x":
            x[j] += sign * values[c]
    y_std = tab.duals(cost)
    dual = [Fraction(0)] * m
    for i, r in enumerate(tab.row_origin):
        dual[r] = -y_std[i] if flip[r] else y_std[i]
    value = sum((c * v for c, v in zip(problem.objective, x)), Fraction(0))
    _certify(problem, x, dual, value)
    return LPResult(OPTIMAL, value, x, dual)


class _Tableau:
    """Rows ``B^{-1} A | B^{-1} b`` kept explicitly; ``row_origin`` tracks the
    original constraint of every surviving row."""

    def __init__(self, rows, rhs, basis):
        self.rows = [list(r) for r in rows]
        self.rhs = list(rhs)
        self.basis = list(basis)
        self.row_origin = list(range(len(rows)))
        self._orig = [list(r) for r in rows]

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        prow = [v / piv for v in self.rows[r]]
        self.rows[r] = prow
        self.rhs[r] /= piv
        nz = [(j, v) for j, v in enumerate(prow) if v]
        for k, row in enumerate(self.rows):
            f = row[c]
            if k != r and f:
                for j, v in nz:
                    row[j] -= f * v
                self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost) -> List[Fraction]:
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, a in enumerate(self.rows[i]):
                    if a:
                        red[j] -= cb * a
        return red

    def objective_value(self, cost) -> Fraction:
        return sum((cost[b] * v for b, v in zip(self.basis, self.rhs)), Fraction(0))

    def optimize(self, cost, allowed) -> bool:
        """Bland's rule; False if the objective is unbounded below."""
        allowed = sorted(allowed)
        while True:
            red = self.reduced_costs(cost)
            enter = next((c for c in allowed if red[c] < 0 and c not in self.basis), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)

    def drive_out(self, artificial: set, n_real: int) -> None:
        """Pivot zero-level artificials out of the basis; drop redundant rows."""
        i = 0
        while i < len(self.rows):
            if self.basis[i] in artificial:
                c = next((c for c in range(n_real) if self.rows[i][c] != 0), None)
                if c is None:
                    for seq in (self.rows, self.rhs, self.basis, self.row_origin, self._orig):
                        del seq[i]
                    continue
                self.pivot(i, c)
            i += 1

    def solution(self, ncols: int) -> List[Fraction]:
        x = [Fraction(0)] * ncols
        for b, v in zip(self.basis, self.rhs):
            x[b] = v
        return x

    def duals(self, cost) -> List[Fraction]:
        """Solve ``B^T y = c_B`` on the original rows of the basis columns."""
        from .exactla import solve_particular

        Bt = RatMatrix.from_dense([[self._orig[i][b] for i in range(len(self._orig))] for b in self.basis],
                                  ncols=len(self._orig))
        y = solve_particular(Bt, [cost[b] for b in self.basis])
        if y is None:
            raise LPError("basis matrix is singular")
        return y


def _certify(p: LPProblem, x: Vector, y: Vector, value: Fraction) -> None:
    A = p.constraints
    Ax = A @ x
    for i, rel in enumerate(p.relations):
        ok = {"<=": Ax[i] <= p.rhs[i], "=": Ax[i] == p.rhs[i], ">=": Ax[i] >= p.rhs[i]}[rel]
        sign_ok = {"<=": y[i] <= 0, "=": True, ">=": y[i] >= 0}[rel]
        if not (ok and sign_ok):
            raise LPError(f"certificate check failed on constraint {i}")
    for j in range(A.ncols):
        if not p.free[j] and x[j] < 0:
            raise LPError(f"variable {j} is negative")
    Aty = A.T @ y
    for j in range(A.ncols):
        if p.free[j] and Aty[j] != p.objective[j]:
            raise LPError(f"dual constraint for free variable {j} fails")
        if not p.free[j] and Aty[j] > p.objective[j]:
            raise LPError(f"dual constraint for variable {j} fails")
    if sum((b * v for b, v in zip(p.rhs, y)), Fraction(0)) != value:
        raise LPError("primal and dual objectives differ")
