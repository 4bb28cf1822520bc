"""Shared helpers: seeded RNG and single-entry table corruption.

Mutation helpers build a raw copy of a groupoid's tables, damage exactly one
entry, and rebuild.  The damaged value is always a genuinely different vertex
of the right space, so every sampled mutation is a real corruption.
"""
import random

import pytest

from orbigroupoid.groupoid import Groupoid


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def raw_tables(G: Groupoid):
    return {
        "src": dict(G.src.mapping),
        "tgt": dict(G.tgt.mapping),
        "unit": dict(G.unit.mapping),
        "inv": dict(G.inv.mapping),
        "comp": dict(G.comp),
    }


def rebuild(G: Groupoid, tables) -> Groupoid:
    return Groupoid.build(
        G.objects,
        G.arrows,
        tables["src"],
        tables["tgt"],
        tables["unit"],
        tables["inv"],
        tables["comp"],
    )


def mutate_one_entry(G: Groupoid, rng: random.Random) -> Groupoid:
    """Corrupt a single src/tgt/unit/inv/comp entry to a different valid id.

    Raises ValueError when no corruption exists (singleton id spaces leave
    nothing different to write into any table).
    """
    tables = raw_tables(G)
    objs = list(G.objects.vertices)
    arrs = list(G.arrows.vertices)
    candidates = []
    if len(objs) > 1:
        candidates += ["src", "tgt"]
    if len(arrs) > 1:
        candidates += ["unit", "inv", "comp"]
    if not candidates:
        raise ValueError("groupoid admits no single-entry corruption")
    while True:
        table = rng.choice(candidates)
        t = tables[table]
        key = rng.choice(sorted(t, key=repr))
        pool = objs if table in ("src", "tgt") else arrs
        wrong = rng.choice(pool)
        if wrong != t[key]:
            t[key] = wrong
            return rebuild(G, tables)
