"""Shipped example complexes, coverings and explicit cochain systems."""

from __future__ import annotations

import os
from typing import List

from ..coverings import Covering
from ..io import load_complex, load_covering, read_json
from ..simplicial import SimplicialComplex

HERE = os.path.dirname(os.path.abspath(__file__))

__all__ = ["path", "complex", "covering", "system_path", "explicit_system", "names"]


def path(kind: str, name: str) -> str:
    """Path of a shipped fixture; ``kind`` is complexes, coverings or systems."""
    return os.path.join(HERE, kind, name + ".json")


def names(kind: str) -> List[str]:
    return sorted(f[:-5] for f in os.listdir(os.path.join(HERE, kind)) if f.endswith(".json"))


def complex(name: str) -> SimplicialComplex:
    return load_complex(path("complexes", name))


def covering(name: str) -> Covering:
    return load_covering(path("coverings", name))


def system_path(name: str) -> str:
    return path("systems", name)


def explicit_system(name: str):
    """Load a shipped explicit system together with its covering."""
    from ..systems import ExplicitSystem

    data = read_json(system_path(name))
    U = load_covering(os.path.join(HERE, "systems", data["covering"]))
    return U, ExplicitSystem.from_json(data, U)
