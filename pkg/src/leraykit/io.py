"""JSON readers and writers for complexes and coverings."""

from __future__ import annotations

import json
import os
from typing import Any, Mapping, Optional, Union

from .coverings import Covering
from .simplicial import SimplicialComplex, UnknownVertexError, closure

__all__ = [
    "InputError",
    "read_json",
    "complex_from_json",
    "complex_to_json",
    "load_complex",
    "covering_from_json",
    "covering_to_json",
    "load_covering",
    "dumps",
]

Source = Union[str, os.PathLike, Mapping[str, Any]]


class InputError(ValueError):
    """A file could not be read or does not match the expected format."""


def read_json(path: Union[str, os.PathLike]) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys are *not* used; insertion order is kept)."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def complex_from_json(data: Mapping[str, Any]) -> SimplicialComplex:
    try:
        verts = [str(v) for v in data["vertices"]]
        gens = [[str(v) for v in s] for s in data.get("simplices", [])]
    except (KeyError, TypeError) as e:
        raise InputError(f"complex JSON needs 'vertices' and 'simplices': {e}") from None
    try:
        return closure(gens, verts)
    except UnknownVertexError as e:
        raise InputError(f"simplex uses undeclared vertex {e.args[0]!r}") from None
    except ValueError as e:
        raise InputError(str(e)) from None


def complex_to_json(X: SimplicialComplex) -> dict:
    return X.to_json()


def _resolve(source: Source, base_dir: Optional[str]) -> tuple:
    if isinstance(source, Mapping):
        return source, base_dir
    path = os.fspath(source)
    if base_dir and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    return read_json(path), os.path.dirname(os.path.abspath(path))


def load_complex(source: Source) -> SimplicialComplex:
    data, _ = _resolve(source, None)
    return complex_from_json(data)


def covering_from_json(data: Mapping[str, Any], base: Optional[SimplicialComplex] = None,
                       base_dir: Optional[str] = None) -> Covering:
    """Build a covering; the base comes from ``base`` or from the ``"base"`` entry.

    Raises :class:`~leraykit.coverings.NotFineError` if some simplex is uncovered.
    """
    if base is None:
        if "base" not in data:
            raise InputError("covering has no 'base' and no complex was supplied")
        bdata, _ = _resolve(data["base"], base_dir)
        base = complex_from_json(bdata)
    elif "base" in data:
        bdata, _ = _resolve(data["base"], base_dir)
        if complex_from_json(bdata) != base:
            raise InputError("covering's 'base' differs from the supplied complex")
    try:
        elements = data["elements"]
    except KeyError:
        raise InputError("covering JSON needs an 'elements' object") from None
    names, gens = [], []
    for name, el in elements.items():
        simps = el["simplices"] if isinstance(el, Mapping) else el
        tuples = []
        for s in simps:
            try:
                t = tuple(sorted(base.position(str(v)) for v in s))
            except UnknownVertexError as e:
                raise InputError(f"element {name!r} uses unknown vertex {e.args[0]!r}") from None
            if t not in base.simplex_set:
                raise InputError(f"element {name!r} lists {list(s)}, which is not a simplex of the base")
            tuples.append(t)
        names.append(str(name))
        gens.append(tuples)
    return Covering(base, names, gens)


def covering_to_json(U: Covering, include_base: bool = True) -> dict:
    out = {}
    if include_base:
        out["base"] = U.base.to_json()
    els = {}
    for name, e in zip(U.names, U.elements):
        els[str(name)] = {"simplices": [list(U.base.names(s)) for s in e.maximal_simplices()]}
    out["elements"] = els
    return out


def load_covering(source: Source, base: Optional[SimplicialComplex] = None) -> Covering:
    data, bdir = _resolve(source, None)
    return covering_from_json(data, base, bdir)
