"""Finite combinatorial models of spaces.

A space is a finite simple graph.  Vertices stand for sample points, edges for
"these two points are close".  Maps between spaces send vertices to vertices
and may collapse an edge to a single vertex, but may never tear one apart:
adjacent points must land on equal or adjacent points.  That nearness relation
``eq_or_adj`` is the combinatorial stand-in for continuity throughout the
package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence

from ._order import VertexId, is_valid_id, sort_key, sorted_ids
from .errors import CodomainMismatch, UndefinedVertex

__all__ = [
    "CombSpace",
    "ContinuousMap",
    "ContinuityReport",
    "FiberProduct",
    "check_continuous",
    "compose_maps",
    "components",
    "fiber_product",
    "identity_map",
    "tagged_union",
]


def _normalize_edge(u: VertexId, v: VertexId):
    if sort_key(u) <= sort_key(v):
        return (u, v)
    return (v, u)


@dataclass(frozen=True)
class CombSpace:
    """Finite simple graph with canonically ordered vertex and edge tuples.

    Use :meth:`build` rather than the raw constructor; it validates the data
    and puts it in canonical order, which makes equality of spaces structural
    equality.
    """

    vertices: tuple
    edges: tuple

    @staticmethod
    def build(vertices: Iterable[VertexId], edges: Iterable[Sequence[VertexId]] = ()) -> "CombSpace":
        # keys are computed once per vertex and reused for edge ordering;
        # nested ids make repeated sort_key calls expensive
        keys = {}
        for v in vertices:
            try:
                k = sort_key(v)
            except TypeError:
                raise UndefinedVertex(
                    f"invalid vertex identifier {v!r}", witness=v) from None
            if v in keys:
                raise UndefinedVertex(f"duplicate vertex {v!r}", witness=v)
            keys[v] = k
        vert_tuple = tuple(sorted(keys, key=keys.__getitem__))
        edge_set = set()
        for e in edges:
            u, v = e
            if u not in keys:
                raise UndefinedVertex(f"edge endpoint {u!r} is not a vertex", witness=u)
            if v not in keys:
                raise UndefinedVertex(f"edge endpoint {v!r} is not a vertex", witness=v)
            if u == v:
                raise UndefinedVertex(f"self loop at {u!r} not allowed", witness=u)
            edge_set.add((u, v) if keys[u] <= keys[v] else (v, u))
        edge_tuple = tuple(sorted(edge_set, key=lambda e: (keys[e[0]], keys[e[1]])))
        return CombSpace(vert_tuple, edge_tuple)

    # -- cached lookups -------------------------------------------------

    @property
    def _adj(self) -> Mapping[VertexId, tuple]:
        cached = self.__dict__.get("_adj_cache")
        if cached is None:
            nbrs = {v: [] for v in self.vertices}
            for u, v in self.edges:
                nbrs[u].append(v)
                nbrs[v].append(u)
            cached = {v: sorted_ids(ns) for v, ns in nbrs.items()}
            object.__setattr__(self, "_adj_cache", cached)
        return cached

    @property
    def _edge_set(self) -> frozenset:
        # both orientations, so membership tests skip normalization
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges) | frozenset((v, u) for u, v in self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached

    @property
    def index(self) -> Mapping[VertexId, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {v: i for i, v in enumerate(self.vertices)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    # -- queries ---------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_vertex(self, v) -> bool:
        return v in self.index

    def has_edge(self, u, v) -> bool:
        return (u, v) in self._edge_set

    def eq_or_adj(self, u, v) -> bool:
        """The nearness relation: equal or joined by an edge."""
        return u == v or (u, v) in self._edge_set

    def neighbors(self, v) -> tuple:
        return self._adj[v]

    def closed_nbhd(self, v) -> tuple:
        return sorted_ids(self._adj[v] + (v,))

    def degree(self, v) -> int:
        return len(self._adj[v])

    def ball(self, v, radius: int) -> tuple:
        """All vertices within graph distance ``radius`` of ``v``."""
        if v not in self.index:
            raise UndefinedVertex(f"unknown vertex {v!r}", witness=v)
        seen = {v}
        frontier = [v]
        for _ in range(radius):
            nxt = []
            for u in frontier:
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if not nxt:
                break
            frontier = nxt
        return sorted_ids(seen)

    def components(self) -> tuple:
        """Connected components, each a sorted vertex tuple, ordered by their
        least vertex."""
        seen = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(sorted_ids(comp))
        return tuple(out)

    def component_of(self, v) -> tuple:
        if v not in self.index:
            raise UndefinedVertex(f"unknown vertex {v!r}", witness=v)
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        return sorted_ids(comp)

    def induced(self, verts: Iterable[VertexId]) -> "CombSpace":
        """Induced subgraph on the given vertex set."""
        keep = set(verts)
        for v in keep:
            if v not in self.index:
                raise UndefinedVertex(f"unknown vertex {v!r}", witness=v)
        edges = [e for e in self.edges if e[0] in keep and e[1] in keep]
        return CombSpace.build(keep, edges)

    def relabel(self, fn: Callable[[VertexId], VertexId]) -> "CombSpace":
        new = {v: fn(v) for v in self.vertices}
        if len(set(new.values())) != len(new):
            raise UndefinedVertex("relabeling is not injective")
        return CombSpace.build(new.values(), [(new[u], new[v]) for u, v in self.edges])


def path_space(n: int, offset: int = 0) -> CombSpace:
    """Path with ``n`` vertices labelled ``offset .. offset+n-1``."""
    verts = range(offset, offset + n)
    return CombSpace.build(verts, [(i, i + 1) for i in range(offset, offset + n - 1)])


def cycle_space(n: int) -> CombSpace:
    """Cycle with ``n`` vertices labelled ``0 .. n-1``; needs n >= 3."""
    if n < 3:
        raise UndefinedVertex("a cycle needs at least three vertices")
    return CombSpace.build(range(n), [(i, (i + 1) % n) for i in range(n)])


def tagged_union(parts: Sequence[tuple]) -> CombSpace:
    """Disjoint union of ``(tag, space)`` pairs, vertices relabelled
    ``(tag, v)``."""
    verts = []
    edges = []
    for tag, sp in parts:
        verts.extend((tag, v) for v in sp.vertices)
        edges.extend(((tag, u), (tag, v)) for u, v in sp.edges)
    return CombSpace.build(verts, edges)


def components(space: CombSpace) -> tuple:
    return space.components()


@dataclass(frozen=True, eq=True)
class ContinuousMap:
    """A vertex map between spaces; edges may collapse but never tear."""

    domain: CombSpace
    codomain: CombSpace
    mapping: Mapping

    @staticmethod
    def build(domain: CombSpace, codomain: CombSpace, mapping: Mapping) -> "ContinuousMap":
        m = dict(mapping)
        for v in domain.vertices:
            if v not in m:
                raise UndefinedVertex(f"map undefined at vertex {v!r}", witness=v)
        for k, img in m.items():
            if not domain.has_vertex(k):
                raise UndefinedVertex(f"map defined at unknown vertex {k!r}", witness=k)
            if not codomain.has_vertex(img):
                raise UndefinedVertex(
                    f"image {img!r} of {k!r} is not in the codomain", witness=(k, img)
                )
        return ContinuousMap(domain, codomain, m)

    def __call__(self, v):
        try:
            return self.mapping[v]
        except KeyError:
            raise UndefinedVertex(f"map undefined at vertex {v!r}", witness=v) from None

    def __hash__(self):
        return hash((self.domain, self.codomain, tuple(self.mapping[v] for v in self.domain.vertices)))

    def is_injective(self) -> bool:
        vals = list(self.mapping.values())
        return len(set(vals)) == len(vals)

    def image(self) -> tuple:
        return sorted_ids(set(self.mapping.values()))


class ContinuityReport(NamedTuple):
    ok: bool
    edge: Optional[tuple]  # first violating domain edge, None when ok


def check_continuous(m: ContinuousMap) -> ContinuityReport:
    """Check the edge condition; returns the first violating edge if any."""
    for u, v in m.domain.edges:
        if not m.codomain.eq_or_adj(m.mapping[u], m.mapping[v]):
            return ContinuityReport(False, (u, v))
    return ContinuityReport(True, None)


def identity_map(space: CombSpace) -> ContinuousMap:
    return ContinuousMap(space, space, {v: v for v in space.vertices})


def compose_maps(first: ContinuousMap, then: ContinuousMap) -> ContinuousMap:
    """Apply ``first``, then ``then``."""
    if first.codomain != then.domain:
        raise CodomainMismatch("maps do not compose: codomain differs from domain")
    return ContinuousMap(
        first.domain,
        then.codomain,
        {v: then.mapping[first.mapping[v]] for v in first.domain.vertices},
    )


class FiberProduct(NamedTuple):
    space: CombSpace
    to_left: ContinuousMap
    to_right: ContinuousMap


def fiber_product(f: ContinuousMap, g: ContinuousMap) -> FiberProduct:
    """Fibre product of ``f: A -> C`` and ``g: B -> C``.

    Vertices are pairs ``(a, b)`` with ``f(a) = g(b)``.  Two pairs are
    adjacent when both coordinates are equal or adjacent and the pairs differ,
    so projections to either factor are continuous.
    """
    if f.codomain != g.codomain:
        raise CodomainMismatch("fibre product needs a shared codomain")
    by_image = {}
    for b in g.domain.vertices:
        by_image.setdefault(g.mapping[b], []).append(b)
    pairs = []
    for a in f.domain.vertices:
        for b in by_image.get(f.mapping[a], ()):
            pairs.append((a, b))
    edges = []
    for i, (a, b) in enumerate(pairs):
        for (a2, b2) in pairs[i + 1:]:
            if f.domain.eq_or_adj(a, a2) and g.domain.eq_or_adj(b, b2):
                edges.append(((a, b), (a2, b2)))
    space = CombSpace.build(pairs, edges)
    left = ContinuousMap(space, f.domain, {p: p[0] for p in pairs})
    right = ContinuousMap(space, g.domain, {p: p[1] for p in pairs})
    return FiberProduct(space, left, right)
