"""The verification suites behind ``leraykit verify`` and the acceptance tests.

Each suite checks one family of properties on the shipped fixtures and on
seeded random instances, and returns a :class:`SuiteResult`. A suite never
raises for a failed property: the first counterexample is recorded in the
result instead, in a JSON-serializable form.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import fixtures as shipped
from .bicomplex import compare_totals
from .coverings import Covering, is_star_refinement
from .exactla import RatMatrix, format_rational, is_invertible
from .io import InputError, covering_to_json, load_complex, load_covering, read_json
from .leray import (
    choice_independence_check,
    covering_double_complex,
    factorization_check,
    glue_matrix,
    homology_covering_complex,
    homology_factorization_check,
    homology_homotopy_matrix,
    homology_leray_map,
    homotopy_matrix,
    is_acyclic,
    leray_map,
    leray_transformation_check,
    realization_check,
    restriction_matrix,
    vanishing_check,
)
from .norms import duality_check, l1_seminorm, linf_seminorm, pairing
from .randomgen import (
    random_acyclic_covering,
    random_complex,
    random_covering_morphism,
    random_morphism_with_alternative,
    random_refinement_triple,
    random_row_quasi_isomorphism,
    random_vector,
)
from .simplicial import cohomology_basis, homology_basis
from .systems import FULL, CochainSystem, ExplicitSystem, TruncatedSystem

__all__ = ["SuiteResult", "FixtureSet", "SUITES", "run_suites"]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    seconds: float = 0.0
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def fail(self, detail: dict) -> None:
        self.failed += 1
        if self.counterexample is None:
            self.counterexample = detail

    def check(self, condition: bool, detail: Callable[[], dict]) -> None:
        if condition:
            self.passed += 1
        else:
            self.fail(detail())

    def to_json(self) -> dict:
        out = {"passed": self.passed, "failed": self.failed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _mat(m: RatMatrix) -> list:
    return m.to_json()


# -- fixtures ---------------------------------------------------------------------


class FixtureSet:
    """Complexes, coverings and explicit systems read from one directory tree
    with ``complexes/``, ``coverings/`` and ``systems/`` subdirectories.

    Files that fail to load are kept in ``errors`` so the suites can report
    them as failures.
    """

    def __init__(self, root: str = shipped.HERE):
        self.root = root
        self.errors: Dict[str, str] = {}
        self.complexes = self._load("complexes", load_complex)
        self.coverings: Dict[str, Covering] = self._load("coverings", load_covering)
        self.systems: Dict[str, Tuple[Covering, ExplicitSystem]] = self._load("systems", self._load_system)

    def _names(self, kind: str) -> List[str]:
        d = os.path.join(self.root, kind)
        if not os.path.isdir(d):
            return []
        return sorted(f[:-5] for f in os.listdir(d) if f.endswith(".json"))

    def _load(self, kind: str, loader) -> dict:
        out = {}
        for name in self._names(kind):
            path = os.path.join(self.root, kind, name + ".json")
            try:
                out[name] = loader(path)
            except (InputError, ValueError, KeyError) as e:
                self.errors[f"{kind}/{name}"] = str(e)
        return out

    @staticmethod
    def _load_system(path: str):
        data = read_json(path)
        U = load_covering(os.path.join(os.path.dirname(path), data["covering"]))
        return U, ExplicitSystem.from_json(data, U)

    def complex(self, name: str):
        return self.complexes[name]

    def acyclic_coverings(self) -> Dict[str, Covering]:
        return {k: U for k, U in self.coverings.items() if is_acyclic(U)}


# -- suites -----------------------------------------------------------------------


def suite_fixtures(fx: FixtureSet, rng: random.Random) -> SuiteResult:
    """Every fixture file loads and every explicit system passes its invariants."""
    r = SuiteResult("fixture-invariants")
    for name, msg in sorted(fx.errors.items()):
        r.fail({"fixture": name, "error": msg})
    r.passed += len(fx.complexes) + len(fx.coverings) + len(fx.systems)
    return r


def _random_coverings(rng: random.Random, count: int, max_vertices: int = 8) -> List[Covering]:
    return [random_acyclic_covering(rng, random_complex(rng, max_vertices=max_vertices)) for _ in range(count)]


def _describe(U: Covering) -> dict:
    return covering_to_json(U)


def suite_leray_isomorphism(fx: FixtureSet, rng: random.Random, count: int = 10) -> SuiteResult:
    """For acyclic coverings ``l_U`` is invertible in every degree."""
    r = SuiteResult("leray-isomorphism")
    cases = list(fx.acyclic_coverings().values()) + _random_coverings(rng, count)
    for U in cases:
        try:
            lr = leray_map(U)
            bad = [n for n, m in lr.matrices.items() if not is_invertible(m)]
        except Exception as e:  # noqa: BLE001 - reported as a counterexample
            r.fail({"covering": _describe(U), "error": str(e)})
            continue
        r.check(not bad, lambda: {"covering": _describe(U), "degrees": bad})
    return r


def suite_two_routes(fx: FixtureSet, rng: random.Random, count: int = 10) -> SuiteResult:
    """Basis matching and edge reduction give the same ``l_U``, also for
    coverings that are not acyclic; same for the homology map and its
    homotopy lift."""
    r = SuiteResult("two-route")
    for U in list(fx.coverings.values()) + _random_coverings(rng, count):
        try:
            lr = leray_map(U)
            hl = homology_leray_map(U)
            ok = lr.matrices == lr.edge_matrices and hl.matrices == hl.lift_matrices and lr.replay()
        except Exception as e:  # noqa: BLE001
            r.fail({"covering": _describe(U), "error": str(e)})
            continue
        r.check(ok, lambda: {"covering": _describe(U)})
    return r


def homotopy_defects(U: Covering, rng: random.Random, samples: int = 50) -> List[dict]:
    """Evaluate both contracting-homotopy identities on random elements.

    Cochains: ``δ k_p + k_{p+1} δ = id`` on ``C^p(N, C^q)`` for ``p >= 1``,
    ``δ̄ k_0 + k_1 δ = id`` on ``C^0(N, C^q)`` and ``k_0 δ̄ = id`` on ``C^q(X)``.
    Chains: ``δ k_p + k_{p-1} δ = id`` on ``c_p(N, C_q)`` for ``p >= 0``
    (``k_{-1} ε`` at ``p = 0``) and ``ε k_{-1} = id`` on ``C_q(X)``.
    """
    K = covering_double_complex(U, FULL).double
    H = homology_covering_complex(U, FULL).double
    X, N = U.base, U.nerve
    bad = []
    for q in range(X.dim + 1):
        rest = restriction_matrix(U, q)
        glue = glue_matrix(U, q)
        km1 = homology_homotopy_matrix(U, -1, q)
        for _ in range(samples):
            x = random_vector(rng, X.count(q))
            if glue @ (rest @ x) != x:
                bad.append({"identity": "k_0 restrict = id", "q": q})
            if rest.T @ (km1 @ x) != x:
                bad.append({"identity": "augment k_-1 = id", "q": q})
        for p in range(N.dim + 1):
            n = K.dim(p, q)
            if not n:
                continue
            k_next = homotopy_matrix(U, p + 1, q) if p + 1 <= N.dim else RatMatrix.zeros(n, K.dim(p + 1, q))
            first = rest @ glue if p == 0 else K.delta(p - 1, q) @ homotopy_matrix(U, p, q)
            left = first + k_next @ K.delta(p, q)
            h_up = homology_homotopy_matrix(U, p, q)
            h_down = km1 @ rest.T if p == 0 else homology_homotopy_matrix(U, p - 1, q) @ H.delta(p, q)
            hom = H.delta(p + 1, q) @ h_up + h_down
            for _ in range(samples):
                c = random_vector(rng, n)
                if left @ c != c:
                    bad.append({"identity": "cochain homotopy", "p": p, "q": q,
                                "element": [format_rational(v) for v in c]})
                if hom @ c != c:
                    bad.append({"identity": "chain homotopy", "p": p, "q": q,
                                "element": [format_rational(v) for v in c]})
    return bad


def suite_homotopy(fx: FixtureSet, rng: random.Random, samples: int = 50) -> SuiteResult:
    r = SuiteResult("homotopy-identities")
    for name, U in fx.coverings.items():
        bad = homotopy_defects(U, rng, samples)
        r.check(not bad, lambda: {"covering": name, **bad[0]})
    return r


def factorization_cases(fx: FixtureSet) -> List[Tuple[str, Covering, CochainSystem]]:
    """(A3, FULL), (A3, TRUNC:1) and every shipped explicit system."""
    cases: List[Tuple[str, Covering, CochainSystem]] = []
    if "c3_arcs" in fx.coverings:
        A3 = fx.coverings["c3_arcs"]
        cases += [("c3_arcs/FULL", A3, FULL), ("c3_arcs/TRUNC:1", A3, TruncatedSystem(1))]
    for name, (U, E) in sorted(fx.systems.items()):
        cases.append((f"EXPLICIT:{name}", U, E))
    return cases


def _factorization_suite(fx: FixtureSet, name: str, check) -> SuiteResult:
    r = SuiteResult(name)
    for label, U, A in factorization_cases(fx):
        try:
            fr = check(U, A)
        except Exception as e:  # noqa: BLE001
            r.fail({"case": label, "error": str(e)})
            continue
        r.check(fr.holds, lambda: {
            "case": label,
            "degrees": fr.mismatched,
            "phi_star": {n: _mat(fr.phi_star[n]) for n in fr.mismatched},
            "composite": {n: _mat(fr.composite[n]) for n in fr.mismatched},
        })
    return r


def suite_factorization(fx: FixtureSet, rng: random.Random) -> SuiteResult:
    return _factorization_suite(fx, "factorization", factorization_check)


def suite_homology_factorization(fx: FixtureSet, rng: random.Random) -> SuiteResult:
    return _factorization_suite(fx, "homology-factorization", homology_factorization_check)


def suite_realizations(fx: FixtureSet, rng: random.Random) -> SuiteResult:
    """Closed-star coverings of ``sd N`` for ``N`` in ∂Δ², ∂Δ³, C3 ⊔ point."""
    r = SuiteResult("realizations")
    for name in ("c3", "sphere2", "c3_point"):
        if name not in fx.complexes:
            r.fail({"complex": name, "error": "fixture missing"})
            continue
        res = realization_check(fx.complexes[name])
        r.check(res.holds, lambda: {"complex": name, "nerve_matches": res.nerve_matches,
                                    "composite": {n: _mat(m) for n, m in res.composite.items()}})
    return r


def suite_functoriality(fx: FixtureSet, rng: random.Random, count: int = 20) -> SuiteResult:
    """The Leray square commutes for random covering morphisms, and the
    nerve map does not depend on the choice of target elements in cohomology."""
    r = SuiteResult("functoriality")
    for _ in range(count):
        m = random_covering_morphism(rng)
        t = leray_transformation_check(m)
        r.check(t.holds, lambda: {"kind": "square", "source": _describe(m.source), "target": _describe(m.target),
                                  "vertex_map": list(m.map.vertex_map), "degrees": t.mismatched})
    for _ in range(count):
        m, alt = random_morphism_with_alternative(rng)
        bad = choice_independence_check(m, None, alt)
        r.check(not bad, lambda: {"kind": "choice", "source": _describe(m.source), "target": _describe(m.target),
                                  "choice": alt, "degrees": bad})
    return r


def suite_double_refinement(fx: FixtureSet, rng: random.Random, count: int = 200) -> SuiteResult:
    r = SuiteResult("double-refinement")
    for _ in range(count):
        A, B, C = random_refinement_triple(rng)
        r.check(is_star_refinement(A, C), lambda: {
            "ground": sorted(A.ground),
            "A": [sorted(A.member(i)) for i in A.index],
            "C": [sorted(C.member(i)) for i in C.index],
        })
    return r


def suite_norms(fx: FixtureSet, rng: random.Random, count: int = 10, pairs: int = 10) -> SuiteResult:
    """C3 reference values, then ℓ1/pairing duality on every homology basis
    class of random complexes."""
    r = SuiteResult("norms")
    if "c3" in fx.complexes:
        X = fx.complexes["c3"]
        a = cohomology_basis(X, 1).coordinates([1, 0, 0])
        l1 = l1_seminorm(X, 1, [1]).value
        li = linf_seminorm(X, 1, a).value
        pr = pairing(X, 1, [1], a)
        r.check(l1 == 3 and li == Fraction(1, 3) and l1 * li == 1 and abs(pr) == 1,
                lambda: {"complex": "c3", "l1": format_rational(l1), "linf": format_rational(li)})
    for _ in range(count):
        X = random_complex(rng, max_vertices=6)
        for p in range(X.dim + 1):
            if not homology_basis(X, p).dim:
                continue
            rep = duality_check(X, p, random_pairs=pairs, rng=rng)
            r.check(rep.holds, lambda: {"complex": X.to_json(), **rep.to_json()})
    return r


def vanishing_cases(fx: FixtureSet) -> List[Tuple[str, Covering, CochainSystem]]:
    cases = factorization_cases(fx)
    for name, U in sorted(fx.acyclic_coverings().items()):
        cases.append((f"{name}/FULL", U, FULL))
        for m in range(U.base.dim + 1):
            if is_acyclic(U, TruncatedSystem(m)):
                cases.append((f"{name}/TRUNC:{m}", U, TruncatedSystem(m)))
    return cases


def suite_vanishing(fx: FixtureSet, rng: random.Random) -> SuiteResult:
    """Above the nerve dimension the map ``H_A^p(X) -> H^p(X)`` is zero.

    ``passed`` counts cases; the number of degrees with nonzero spaces that
    were actually checked is recorded in ``nonvacuous``.
    """
    r = SuiteResult("vanishing")
    nonvacuous = 0
    for label, U, A in vanishing_cases(fx):
        try:
            nonvacuous += len(vanishing_check(U, A))
            r.passed += 1
        except Exception as e:  # noqa: BLE001
            r.fail({"case": label, "error": str(e)})
    if nonvacuous == 0:
        r.fail({"error": "no case has nonzero spaces above the nerve dimension"})
    return r


def suite_row_quasi_iso(fx: FixtureSet, rng: random.Random, count: int = 50) -> SuiteResult:
    r = SuiteResult("row-quasi-isomorphism")
    for _ in range(count):
        f = random_row_quasi_isomorphism(rng).morphism
        K, L = f.source, f.target
        top = max(K.p_range.stop + K.q_range.stop, L.p_range.stop + L.q_range.stop)
        bad = [n for n in range(top) if not is_invertible(compare_totals(f, n))]
        r.check(not bad, lambda: {"source": K.to_json(), "target": L.to_json(), "degrees": bad})
    return r


SUITES: List[Tuple[str, Callable[[FixtureSet, random.Random], SuiteResult]]] = [
    ("fixture-invariants", suite_fixtures),
    ("leray-isomorphism", suite_leray_isomorphism),
    ("two-route", suite_two_routes),
    ("homotopy-identities", suite_homotopy),
    ("factorization", suite_factorization),
    ("homology-factorization", suite_homology_factorization),
    ("realizations", suite_realizations),
    ("functoriality", suite_functoriality),
    ("double-refinement", suite_double_refinement),
    ("norms", suite_norms),
    ("vanishing", suite_vanishing),
    ("row-quasi-isomorphism", suite_row_quasi_iso),
]


def run_suites(seed: int = 0, root: str = shipped.HERE,
               only: Optional[List[str]] = None) -> List[SuiteResult]:
    """Run every suite; each gets its own generator seeded from ``seed`` and
    its name, so adding or skipping a suite does not change the others."""
    fx = FixtureSet(root)
    out = []
    for name, fn in SUITES:
        if only and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        start = time.perf_counter()
        res = fn(fx, rng)
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
