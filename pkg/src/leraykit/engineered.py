"""Hand-built explicit cochain systems exercising the factorization theorem.

Each builder starts from a materialized built-in system and edits it:

* ``c3-extra-top``: arcs of the triangle circle, simplicial cochains
  everywhere, plus a class ``e`` in degree 2 on the whole space that
  restricts to zero and maps to zero.
* ``sphere-hemispheres-locconst``: the 2-sphere covered by two disks,
  locally constant functions on every support, plus ``e`` in degree 2 on
  the whole space. Both ``H_A^2`` and ``H^2`` are nonzero above the
  one-dimensional nerve.
* ``c3-exact-pair``: simplicial cochains with an extra exact pair
  ``Q -> Q`` in degrees 1 and 2 on every support.
* ``c3-rebased``: simplicial cochains written in a random basis.
* ``sphere-triangles-cocycles``: the 2-sphere covered by its four
  triangles, simplicial cochains on supports, 1-truncated on the whole
  space.

Run ``python -m leraykit.engineered`` to rewrite the shipped JSON files.
"""

from __future__ import annotations

import os
import sys
from typing import Callable, Dict, Tuple

from . import fixtures
from .coverings import Covering
from .exactla import RatMatrix
from .io import dumps
from .systems import FULL, ExplicitSystem, SupportData, TruncatedSystem

__all__ = ["BUILDERS", "build", "write_all"]


def _c3_extra_top() -> Tuple[str, ExplicitSystem]:
    U = fixtures.covering("c3_arcs")
    E = ExplicitSystem.materialize(U, FULL, name="c3-extra-top")
    X = E.supports[()]
    n0, n1 = X.dims
    E.supports[()] = SupportData(
        [n0, n1, 1],
        X.augmentation,
        X.differentials + [RatMatrix.zeros(1, n1)],
        X.phi + [RatMatrix.zeros(U.base.count(2), 1)],
    )
    E.top = 2
    return "c3_arcs", E


def _sphere_hemispheres() -> Tuple[str, ExplicitSystem]:
    U = fixtures.covering("sphere2_hemispheres")
    E = ExplicitSystem.materialize(U, TruncatedSystem(0), name="sphere-hemispheres-locconst")
    X = E.supports[()]
    (n0,) = X.dims
    E.supports[()] = SupportData(
        [n0, 0, 1],
        X.augmentation,
        [RatMatrix.zeros(0, n0), RatMatrix.zeros(1, 0)],
        X.phi + [RatMatrix.zeros(U.base.count(1), 0), RatMatrix.zeros(U.base.count(2), 1)],
    )
    E.top = 2
    return "sphere2_hemispheres", E


def _c3_exact_pair() -> Tuple[str, ExplicitSystem]:
    U = fixtures.covering("c3_arcs")
    E = ExplicitSystem.materialize(U, FULL, name="c3-exact-pair")
    for key, s in list(E.supports.items()):
        n0, n1 = s.dims
        d0 = RatMatrix.vstack([s.differentials[0], RatMatrix.zeros(1, n0)])
        d1 = RatMatrix(1, n1 + 1, {0: {n1: 1}})
        Z = U.nerve.support(key)
        phi1 = RatMatrix.hstack([s.phi[1], RatMatrix.zeros(Z.count(1), 1)])
        E.supports[key] = SupportData(
            [n0, n1 + 1, 1], s.augmentation, [d0, d1], [s.phi[0], phi1, RatMatrix.zeros(Z.count(2), 1)]
        )
    for k, ms in list(E.restrictions.items()):
        E.restrictions[k] = [ms[0], RatMatrix.block_diagonal([ms[1], RatMatrix.identity(1)]), RatMatrix.identity(1)]
    E.top = 2
    return "c3_arcs", E


def _c3_rebased() -> Tuple[str, ExplicitSystem]:
    U = fixtures.covering("c3_arcs")
    E = ExplicitSystem.materialize(U, FULL).rebased(seed=7)
    E.name = "c3-rebased"
    return "c3_arcs", E


def _sphere_triangles() -> Tuple[str, ExplicitSystem]:
    U = fixtures.covering("sphere2_triangles")
    E = ExplicitSystem.materialize(U, FULL, name="sphere-triangles-cocycles")
    T = ExplicitSystem.materialize(U, TruncatedSystem(1))
    E.supports[()] = T.supports[()]
    ker = T.supports[()].phi[1]
    for (small, big), ms in list(E.restrictions.items()):
        if small == ():
            E.restrictions[(small, big)] = [ms[0], ms[1] @ ker, RatMatrix.zeros(ms[2].nrows, 0)]
    return "sphere2_triangles", E


BUILDERS: Dict[str, Callable[[], Tuple[str, ExplicitSystem]]] = {
    "c3-extra-top": _c3_extra_top,
    "sphere-hemispheres-locconst": _sphere_hemispheres,
    "c3-exact-pair": _c3_exact_pair,
    "c3-rebased": _c3_rebased,
    "sphere-triangles-cocycles": _sphere_triangles,
}


def build(name: str) -> Tuple[Covering, ExplicitSystem]:
    """Build and validate one engineered system."""
    cov_name, E = BUILDERS[name]()
    E.bind(E.covering)
    return E.covering, E


def write_all(directory: str = os.path.join(fixtures.HERE, "systems")) -> None:
    for name, fn in BUILDERS.items():
        cov_name, E = fn()
        E.bind(E.covering)
        data = E.to_json(covering_json=None)
        out = {"name": data["name"], "covering": f"../coverings/{cov_name}.json"}
        out.update({k: v for k, v in data.items() if k != "name"})
        with open(os.path.join(directory, name + ".json"), "w") as fh:
            fh.write(dumps(out))


if __name__ == "__main__":  # pragma: no cover
    write_all(*sys.argv[1:])
