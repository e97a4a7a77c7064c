"""Embedded constants: lattices, group generators, equations, conics.

Everything numeric lives in one versioned JSON file so there is a single
transcription point to audit.  Entries are stored as expression strings
and parsed on demand, which also lets a caller re-parse the same data
into a larger coefficient field when a computation needs one.
"""

from __future__ import annotations

import functools
import json
from importlib import resources

from .matgroup import MatGroup, parse_matrix
from .numberfield import Field, field_by_name
from .polyring import MPoly, parse_poly

__all__ = [
    "catalog_version",
    "lattice_gram",
    "lattice_isometry_generators",
    "group_names",
    "group_generators",
    "build_group",
    "matrix",
    "polynomial_names",
    "polynomials",
    "conic_names",
    "conic_forms",
]


@functools.cache
def _data() -> dict:
    with resources.files("k3m20.data").joinpath("builtins.json").open() as fh:
        return json.load(fh)


def catalog_version() -> int:
    return _data()["version"]


def lattice_gram(name: str = "l20") -> tuple:
    rows = _data()["lattices"][name]["gram"]
    return tuple(tuple(v) for v in rows)


def lattice_isometry_generators(name: str = "l20") -> list[tuple]:
    gens = _data()["lattices"][name]["isometry_generators"]
    return [tuple(tuple(v) for v in rows) for rows in gens]


def group_names() -> list[str]:
    return sorted(_data()["groups"])


def group_generators(name: str, field: Field | None = None):
    """Parsed generator matrices; field defaults to the entry's own."""
    try:
        entry = _data()["groups"][name]
    except KeyError:
        raise KeyError(
            f"unknown group {name!r}; known: {group_names()}") from None
    fld = field if field is not None else field_by_name(entry["field"])
    return fld, [parse_matrix(fld, rows) for rows in entry["generators"]]


def build_group(name: str, cache_dir: str | None = None,
                field: Field | None = None, **kwargs) -> MatGroup:
    fld, gens = group_generators(name, field)
    return MatGroup(fld, gens, cache_dir=cache_dir, **kwargs)


def matrix(name: str, field: Field | None = None):
    entry = _data()["matrices"][name]
    fld = field if field is not None else field_by_name(entry["field"])
    return parse_matrix(fld, entry["rows"])


def polynomial_names() -> list[str]:
    return sorted(_data()["polynomials"])


def polynomials(name: str, field: Field | None = None) -> list[MPoly]:
    try:
        entry = _data()["polynomials"][name]
    except KeyError:
        raise KeyError(
            f"unknown polynomial entry {name!r}; known: {polynomial_names()}"
        ) from None
    fld = field if field is not None else field_by_name(entry["field"])
    variables = tuple(entry["variables"])
    return [parse_poly(t, fld, variables) for t in entry["texts"]]


def conic_names() -> list[str]:
    return sorted(_data()["conics"])


def conic_forms(name: str, field: Field | None = None):
    """(linear forms, quadric) for a stored conic, as parsed polynomials."""
    try:
        entry = _data()["conics"][name]
    except KeyError:
        raise KeyError(
            f"unknown conic {name!r}; known: {conic_names()}") from None
    fld = field if field is not None else field_by_name(entry["field"])
    variables = tuple(entry["variables"])
    linear = [parse_poly(t, fld, variables) for t in entry["linear"]]
    quadric = parse_poly(entry["quadric"], fld, variables)
    return linear, quadric
