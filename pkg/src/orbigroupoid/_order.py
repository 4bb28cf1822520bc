"""Canonical ordering of vertex identifiers.

Identifiers are ints, strings, or arbitrarily nested tuples of those.  Mixed
collections cannot be sorted with ``<`` directly, so every public container in
the package sorts by :func:`sort_key` instead.  Ints come first, then strings,
then tuples ordered componentwise by the same rule.
"""
from __future__ import annotations

from typing import Union

VertexId = Union[int, str, tuple]


def sort_key(v: VertexId):
    if isinstance(v, bool):
        raise TypeError("booleans are not valid identifiers")
    if isinstance(v, int):
        return (0, (v,))
    if isinstance(v, str):
        return (1, (v,))
    if isinstance(v, tuple):
        return (2, tuple(sort_key(x) for x in v))
    raise TypeError(f"unsupported identifier type: {type(v).__name__}")


def sorted_ids(ids):
    return tuple(sorted(ids, key=sort_key))


def is_valid_id(v) -> bool:
    try:
        sort_key(v)
    except TypeError:
        return False
    return True
