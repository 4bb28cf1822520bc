"""Plain-text formats for groupoids and named bundles.

A ``.grpd`` file holds one groupoid::

    groupoid v1

    [objects]
    vertex 0
    vertex 1
    edge 0 1

    [arrows]
    vertex u0
    ...

    [src]
    u0 0

followed by ``[tgt]``, ``[unit]`` (rows ``object arrow``), ``[inv]``
(rows ``arrow arrow``) and ``[comp]`` (rows ``g1 g2 g3`` meaning
``g3 = comp(g1, g2)``).  Identifiers are integers (``-3``), bare words
(``c0``), quoted strings (``"4"``, ``"two words"``) or tuples of those
(``(t,r0,(A,0))``).  ``#`` starts a comment.  The serializer emits
canonical order only, so output is byte-stable and round-trips.

An ``.orbi`` file holds a named collection.  Sections refer back to
earlier sections by name::

    orbi v1

    [groupoid G]
    object 0
    arrow u
    src u 0
    tgt u 0
    unit 0 u
    inv u u
    comp u u u

    [hom f G H]
    obj 0 1
    arr u v

    [span S f g]

    [cell C top bottom nu nup]
    alpha <object> <arrow>
    beta <object> <arrow>

    [witness W lam1 lam2]
    gamma <object> <arrow>
    gammap <object> <arrow>

A cell's ``alpha`` table compares ``nu;top.left`` with
``nu';bottom.left`` and ``beta`` the right-leg composites.  A witness
stores only its comparison tables; :meth:`Bundle.realize_witness` types
them against a concrete pair of diagrams.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .bicat import Span, TwoCellDiagram, TwoCellWitness
from .combspace import CombSpace
from .errors import BadWitness, DanglingId, OrbiError, ParseError
from .groupoid import Groupoid
from .morphism import Homomorphism, NatTrans, compose_homomorphisms

__all__ = [
    "Bundle",
    "WitnessData",
    "format_id",
    "parse_bundle",
    "parse_groupoid",
    "parse_id_text",
    "serialize_bundle",
    "serialize_groupoid",
]

_BARE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


# -- identifier text -------------------------------------------------------

def format_id(v) -> str:
    """Render an identifier in the form the parsers accept."""
    if isinstance(v, bool):
        raise TypeError("booleans are not valid identifiers")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        if _BARE.fullmatch(v):
            return v
        quoted = (v.replace("\\", "\\\\").replace('"', '\\"')
                  .replace("\n", "\\n").replace("\t", "\\t"))
        return f'"{quoted}"'
    if isinstance(v, tuple):
        if len(v) == 1:
            return f"({format_id(v[0])},)"
        return "(" + ",".join(format_id(x) for x in v) + ")"
    raise TypeError(f"unsupported identifier type: {type(v).__name__}")


class _Tok(NamedTuple):
    kind: str  # "word" | "int" | "str" | "punct" | "nl" | "eof"
    value: object
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        i, n = 0, len(raw)
        while i < n:
            ch = raw[i]
            if ch in " \t\r":
                i += 1
                continue
            if ch == "#":
                break
            col = i + 1
            if ch in "[](),":
                toks.append(_Tok("punct", ch, lineno, col))
                i += 1
            elif ch == '"':
                out = []
                i += 1
                while True:
                    if i >= n:
                        raise ParseError("unterminated string", lineno, col)
                    c = raw[i]
                    if c == '"':
                        i += 1
                        break
                    if c == "\\":
                        if i + 1 >= n or raw[i + 1] not in _ESCAPES:
                            raise ParseError("bad escape in string", lineno, i + 1)
                        out.append(_ESCAPES[raw[i + 1]])
                        i += 2
                    else:
                        out.append(c)
                        i += 1
                toks.append(_Tok("str", "".join(out), lineno, col))
            elif ch == "-" or ch.isdigit():
                m = re.match(r"-?[0-9]+", raw[i:])
                if m is None:
                    raise ParseError(f"unexpected character {ch!r}", lineno, col)
                toks.append(_Tok("int", int(m.group()), lineno, col))
                i += m.end()
            else:
                m = _BARE.match(raw, i)
                if m is None:
                    raise ParseError(f"unexpected character {ch!r}", lineno, col)
                toks.append(_Tok("word", m.group(), lineno, col))
                i = m.end()
        toks.append(_Tok("nl", None, lineno, n + 1))
    toks.append(_Tok("eof", None, len(text.split("\n")) + 1, 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, message: str, tok=None):
        t = tok or self.peek()
        raise ParseError(message, t.line, t.col)

    def skip_blank(self):
        while self.peek().kind == "nl":
            self.advance()

    def eol(self):
        t = self.advance()
        if t.kind not in ("nl", "eof"):
            self.fail("expected end of line", t)

    def word(self, expected=None) -> _Tok:
        t = self.advance()
        if t.kind != "word":
            self.fail("expected a word", t)
        if expected is not None and t.value != expected:
            self.fail(f"expected {expected!r}, got {t.value!r}", t)
        return t

    def punct(self, ch: str) -> _Tok:
        t = self.advance()
        if t.kind != "punct" or t.value != ch:
            self.fail(f"expected {ch!r}", t)
        return t

    def parse_id(self):
        t = self.advance()
        if t.kind in ("int", "str", "word"):
            return t.value
        if t.kind == "punct" and t.value == "(":
            items = []
            if self.peek().kind == "punct" and self.peek().value == ")":
                self.advance()
                return ()
            while True:
                items.append(self.parse_id())
                nxt = self.advance()
                if nxt.kind == "punct" and nxt.value == ")":
                    return tuple(items)
                if nxt.kind == "punct" and nxt.value == ",":
                    if self.peek().kind == "punct" and self.peek().value == ")":
                        self.advance()
                        return tuple(items)
                    continue
                self.fail("expected ',' or ')' in tuple", nxt)
        self.fail("expected an identifier", t)

    def header(self, magic: str):
        self.skip_blank()
        self.word(magic)
        self.word("v1")
        self.eol()

    def at_section(self) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.value == "["

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"


def parse_id_text(text: str):
    """Parse a single identifier from command-line style text."""
    p = _Parser(text)
    p.skip_blank()
    v = p.parse_id()
    p.skip_blank()
    if not p.at_eof():
        p.fail("trailing input after identifier")
    return v


# -- groupoid assembly shared by both formats ------------------------------

class _GroupoidSink:
    """Accumulates declaration rows, then checks references and totality."""

    def __init__(self, where: str):
        self.where = where
        self.verts = {"object": [], "arrow": []}
        self.edges = {"object": [], "arrow": []}
        self.maps = {"src": [], "tgt": [], "unit": [], "inv": []}
        self.comp = []

    def vertex(self, which, v, tok):
        self.verts[which].append((v, tok))

    def edge(self, which, u, v, tok):
        self.edges[which].append((u, v, tok))

    def map_row(self, table, k, v, tok):
        self.maps[table].append((k, v, tok))

    def comp_row(self, g1, g2, g3, tok):
        self.comp.append((g1, g2, g3, tok))

    def _vertex_set(self, which):
        seen = set()
        for v, tok in self.verts[which]:
            if v in seen:
                raise ParseError(f"{self.where}: duplicate {which} {format_id(v)}",
                                 tok.line, tok.col)
            seen.add(v)
        return seen

    def _check(self, v, pool, kind, tok):
        if v not in pool:
            raise DanglingId(
                f"{self.where}: {format_id(v)} is not a declared {kind}",
                tok.line, tok.col, witness=v)

    def finish(self) -> Groupoid:
        objs = self._vertex_set("object")
        arrs = self._vertex_set("arrow")
        pools = {"object": objs, "arrow": arrs}
        edges = {}
        for which in ("object", "arrow"):
            rows = []
            for u, v, tok in self.edges[which]:
                self._check(u, pools[which], which, tok)
                self._check(v, pools[which], which, tok)
                if u == v:
                    raise ParseError(f"{self.where}: self loop at {format_id(u)}",
                                     tok.line, tok.col)
                rows.append((u, v))
            edges[which] = rows
        # (table, key pool/kind, value pool/kind)
        shape = {"src": ("arrow", "object"), "tgt": ("arrow", "object"),
                 "unit": ("object", "arrow"), "inv": ("arrow", "arrow")}
        tables = {}
        for name, (kk, vk) in shape.items():
            table = {}
            for k, v, tok in self.maps[name]:
                self._check(k, pools[kk], kk, tok)
                self._check(v, pools[vk], vk, tok)
                if k in table:
                    raise ParseError(
                        f"{self.where}: duplicate {name} row for {format_id(k)}",
                        tok.line, tok.col)
                table[k] = v
            for k in pools[kk]:
                if k not in table:
                    raise ParseError(
                        f"{self.where}: missing {name} row for {format_id(k)}")
            tables[name] = table
        comp = {}
        for g1, g2, g3, tok in self.comp:
            for g in (g1, g2, g3):
                self._check(g, arrs, "arrow", tok)
            if (g1, g2) in comp:
                raise ParseError(
                    f"{self.where}: duplicate comp row for "
                    f"{format_id(g1)} {format_id(g2)}", tok.line, tok.col)
            comp[(g1, g2)] = g3
        return Groupoid.build(
            CombSpace.build([v for v, _ in self.verts["object"]], edges["object"]),
            CombSpace.build([v for v, _ in self.verts["arrow"]], edges["arrow"]),
            tables["src"], tables["tgt"], tables["unit"], tables["inv"], comp)


def _groupoid_rows(G: Groupoid):
    """Canonical row stream shared by both serializers."""
    rows = []
    for v in G.objects.vertices:
        rows.append(("object", (v,)))
    for u, v in G.objects.edges:
        rows.append(("oedge", (u, v)))
    for g in G.arrows.vertices:
        rows.append(("arrow", (g,)))
    for u, v in G.arrows.edges:
        rows.append(("aedge", (u, v)))
    for g in G.arrows.vertices:
        rows.append(("src", (g, G.src.mapping[g])))
    for g in G.arrows.vertices:
        rows.append(("tgt", (g, G.tgt.mapping[g])))
    for x in G.objects.vertices:
        rows.append(("unit", (x, G.unit.mapping[x])))
    for g in G.arrows.vertices:
        rows.append(("inv", (g, G.inv.mapping[g])))
    idx = G.arrows.index
    for (g1, g2), g3 in sorted(G.comp.items(),
                               key=lambda kv: (idx[kv[0][0]], idx[kv[0][1]])):
        rows.append(("comp", (g1, g2, g3)))
    return rows


# -- .grpd ------------------------------------------------------------------

_GRPD_SECTIONS = ("objects", "arrows", "src", "tgt", "unit", "inv", "comp")


def parse_groupoid(text: str) -> Groupoid:
    """Parse ``.grpd`` text.  Checks references and totality, not axioms;
    run :func:`~orbigroupoid.groupoid.validate_groupoid` for those."""
    p = _Parser(text)
    p.header("groupoid")
    sink = _GroupoidSink("groupoid")
    seen = set()
    while True:
        p.skip_blank()
        if p.at_eof():
            break
        tok = p.punct("[")
        name = p.word().value
        p.punct("]")
        p.eol()
        if name not in _GRPD_SECTIONS:
            p.fail(f"unknown section [{name}]", tok)
        if name in seen:
            p.fail(f"duplicate section [{name}]", tok)
        seen.add(name)
        while True:
            p.skip_blank()
            if p.at_eof() or p.at_section():
                break
            if name in ("objects", "arrows"):
                which = "object" if name == "objects" else "arrow"
                kw = p.word()
                if kw.value == "vertex":
                    sink.vertex(which, p.parse_id(), kw)
                elif kw.value == "edge":
                    sink.edge(which, p.parse_id(), p.parse_id(), kw)
                else:
                    p.fail(f"expected 'vertex' or 'edge', got {kw.value!r}", kw)
            elif name == "comp":
                tok0 = p.peek()
                sink.comp_row(p.parse_id(), p.parse_id(), p.parse_id(), tok0)
            else:
                tok0 = p.peek()
                sink.map_row(name, p.parse_id(), p.parse_id(), tok0)
            p.eol()
    for name in _GRPD_SECTIONS:
        if name not in seen:
            raise ParseError(f"missing section [{name}]")
    return sink.finish()


def serialize_groupoid(G: Groupoid) -> str:
    """Canonical ``.grpd`` text; byte-stable for equal groupoids."""
    section_of = {"object": "objects", "oedge": "objects",
                  "arrow": "arrows", "aedge": "arrows"}
    keyword_of = {"object": "vertex", "oedge": "edge",
                  "arrow": "vertex", "aedge": "edge"}
    bodies = {name: [] for name in _GRPD_SECTIONS}
    for tag, ids in _groupoid_rows(G):
        section = section_of.get(tag, tag)
        parts = [keyword_of[tag]] if tag in keyword_of else []
        parts.extend(format_id(v) for v in ids)
        bodies[section].append(" ".join(parts))
    lines = ["groupoid v1", ""]
    for name in _GRPD_SECTIONS:
        lines.append(f"[{name}]")
        lines.extend(bodies[name])
        lines.append("")
    return "\n".join(lines)


# -- .orbi ------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessData:
    """Witness legs plus raw comparison tables, before typing against a
    concrete pair of diagrams."""

    lambda1: Homomorphism
    lambda2: Homomorphism
    gamma: dict
    gamma_prime: dict


@dataclass
class Bundle:
    """Named entities parsed from an ``.orbi`` document."""

    groupoids: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    spans: dict = field(default_factory=dict)
    cells: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    order: tuple = ()

    def entries(self) -> tuple:
        """The parsed entities as ``(kind, name, object)`` triples, in
        document order; feeding them to :func:`serialize_bundle`
        reproduces the canonical text."""
        pools = {"groupoid": self.groupoids, "hom": self.homs,
                 "span": self.spans, "cell": self.cells,
                 "witness": self.witnesses}
        return tuple((kind, name, pools[kind][name]) for kind, name in self.order)

    def realize_witness(self, name: str, d1: TwoCellDiagram,
                        d2: TwoCellDiagram) -> TwoCellWitness:
        """Type a stored witness against two diagrams.  Tables that do not
        fit the diagrams raise :class:`~orbigroupoid.errors.BadWitness`."""
        data = self.witnesses[name]
        try:
            gamma = NatTrans.build(
                compose_homomorphisms(data.lambda1, d1.nu),
                compose_homomorphisms(data.lambda2, d2.nu), data.gamma)
            gamma_prime = NatTrans.build(
                compose_homomorphisms(data.lambda1, d1.nu_prime),
                compose_homomorphisms(data.lambda2, d2.nu_prime),
                data.gamma_prime)
        except OrbiError as err:
            raise BadWitness(
                f"witness {name} does not fit the diagrams: {err}") from None
        return TwoCellWitness(data.lambda1.source, data.lambda1, data.lambda2,
                              gamma, gamma_prime)


def _hom_pools(h: Homomorphism):
    return (set(h.source.objects.vertices), set(h.source.arrows.vertices),
            set(h.target.objects.vertices), set(h.target.arrows.vertices))


class _TableReader:
    """Keyword-tagged component rows (hom obj/arr, cell alpha/beta,
    witness gamma/gammap) with dangling and totality checks."""

    def __init__(self, p: _Parser, where: str, keywords: tuple):
        self.p = p
        self.where = where
        self.tables = {kw: {} for kw in keywords}

    def read_rows(self):
        p = self.p
        while True:
            p.skip_blank()
            if p.at_eof() or p.at_section():
                return
            kw = p.word()
            if kw.value not in self.tables:
                expected = " or ".join(repr(k) for k in self.tables)
                p.fail(f"expected {expected}, got {kw.value!r}", kw)
            k, v = p.parse_id(), p.parse_id()
            p.eol()
            table = self.tables[kw.value]
            if k in table:
                raise ParseError(
                    f"{self.where}: duplicate {kw.value} row for {format_id(k)}",
                    kw.line, kw.col)
            table[k] = (v, kw)

    def typed(self, keyword: str, keys: set, key_kind: str,
              values: set = None, value_kind: str = ""):
        table = self.tables[keyword]
        for k, (v, tok) in table.items():
            if k not in keys:
                raise DanglingId(
                    f"{self.where}: {format_id(k)} is not a {key_kind}",
                    tok.line, tok.col, witness=k)
            if values is not None and v not in values:
                raise DanglingId(
                    f"{self.where}: {format_id(v)} is not a {value_kind}",
                    tok.line, tok.col, witness=v)
        for k in keys:
            if k not in table:
                raise ParseError(
                    f"{self.where}: missing {keyword} row for {format_id(k)}")
        return {k: v for k, (v, _) in table.items()}


def _resolve(pool: dict, name_tok: _Tok, kind: str):
    if name_tok.value not in pool:
        raise DanglingId(f"{name_tok.value!r} is not a declared {kind}",
                         name_tok.line, name_tok.col, witness=name_tok.value)
    return pool[name_tok.value]


def parse_bundle(text: str) -> Bundle:
    p = _Parser(text)
    p.header("orbi")
    bundle = Bundle()
    arity = {"groupoid": 1, "hom": 3, "span": 3, "cell": 5, "witness": 3}
    pools = {"groupoid": bundle.groupoids, "hom": bundle.homs,
             "span": bundle.spans, "cell": bundle.cells,
             "witness": bundle.witnesses}
    order = []
    while True:
        p.skip_blank()
        if p.at_eof():
            break
        p.punct("[")
        kind_tok = p.word()
        kind = kind_tok.value
        if kind not in arity:
            p.fail(f"unknown section kind {kind!r}", kind_tok)
        args = [p.word() for _ in range(arity[kind])]
        p.punct("]")
        p.eol()
        name = args[0].value
        if name in pools[kind]:
            p.fail(f"duplicate {kind} {name!r}", args[0])
        where = f"{kind} {name}"

        if kind == "groupoid":
            sink = _GroupoidSink(where)
            handlers = {
                "object": lambda t: sink.vertex("object", p.parse_id(), t),
                "oedge": lambda t: sink.edge("object", p.parse_id(), p.parse_id(), t),
                "arrow": lambda t: sink.vertex("arrow", p.parse_id(), t),
                "aedge": lambda t: sink.edge("arrow", p.parse_id(), p.parse_id(), t),
                "comp": lambda t: sink.comp_row(
                    p.parse_id(), p.parse_id(), p.parse_id(), t),
            }
            for table in ("src", "tgt", "unit", "inv"):
                handlers[table] = (lambda t, _n=table:
                                   sink.map_row(_n, p.parse_id(), p.parse_id(), t))
            while True:
                p.skip_blank()
                if p.at_eof() or p.at_section():
                    break
                kw = p.word()
                if kw.value not in handlers:
                    p.fail(f"unknown row keyword {kw.value!r}", kw)
                handlers[kw.value](kw)
                p.eol()
            bundle.groupoids[name] = sink.finish()

        elif kind == "hom":
            src = _resolve(bundle.groupoids, args[1], "groupoid")
            dst = _resolve(bundle.groupoids, args[2], "groupoid")
            reader = _TableReader(p, where, ("obj", "arr"))
            reader.read_rows()
            f0 = reader.typed("obj", set(src.objects.vertices), "source object",
                              set(dst.objects.vertices), "target object")
            f1 = reader.typed("arr", set(src.arrows.vertices), "source arrow",
                              set(dst.arrows.vertices), "target arrow")
            bundle.homs[name] = Homomorphism.build(src, dst, f0, f1)

        elif kind == "span":
            left = _resolve(bundle.homs, args[1], "hom")
            right = _resolve(bundle.homs, args[2], "hom")
            if left.source is not right.source:
                p.fail(f"span {name!r}: legs do not share an apex", args[0])
            bundle.spans[name] = Span(left, right)

        elif kind == "cell":
            top = _resolve(bundle.spans, args[1], "span")
            bottom = _resolve(bundle.spans, args[2], "span")
            nu = _resolve(bundle.homs, args[3], "hom")
            nu_prime = _resolve(bundle.homs, args[4], "hom")
            reader = _TableReader(p, where, ("alpha", "beta"))
            reader.read_rows()
            apex_objs = set(nu.source.objects.vertices)
            try:
                alpha = NatTrans.build(
                    compose_homomorphisms(nu, top.left),
                    compose_homomorphisms(nu_prime, bottom.left),
                    reader.typed("alpha", apex_objs, "apex object",
                                 set(top.left.target.arrows.vertices),
                                 "left-target arrow"))
                beta = NatTrans.build(
                    compose_homomorphisms(nu, top.right),
                    compose_homomorphisms(nu_prime, bottom.right),
                    reader.typed("beta", apex_objs, "apex object",
                                 set(top.right.target.arrows.vertices),
                                 "right-target arrow"))
            except (DanglingId, ParseError):
                raise
            except OrbiError as err:
                raise ParseError(f"{where}: {err}",
                                 args[0].line, args[0].col) from None
            bundle.cells[name] = TwoCellDiagram(
                top, bottom, nu.source, nu, nu_prime, alpha, beta)

        else:  # witness
            lam1 = _resolve(bundle.homs, args[1], "hom")
            lam2 = _resolve(bundle.homs, args[2], "hom")
            if lam1.source is not lam2.source:
                p.fail(f"witness {name!r}: legs do not share an apex", args[0])
            reader = _TableReader(p, where, ("gamma", "gammap"))
            reader.read_rows()
            apex_objs = set(lam1.source.objects.vertices)
            gamma = reader.typed("gamma", apex_objs, "apex object")
            gammap = reader.typed("gammap", apex_objs, "apex object")
            bundle.witnesses[name] = WitnessData(lam1, lam2, gamma, gammap)

        order.append((kind, name))
    bundle.order = tuple(order)
    return bundle


def serialize_bundle(entries) -> str:
    """Canonical ``.orbi`` text for ``(kind, name, object)`` triples.

    Cross references are resolved by identity, so a hom's source groupoid
    (for example) must itself appear among the entries.  Sections are
    emitted grouped by kind so every reference points backwards.
    """
    buckets = {"groupoid": [], "hom": [], "span": [], "cell": [], "witness": []}
    for kind, name, obj in entries:
        if kind not in buckets:
            raise ValueError(f"unknown entry kind {kind!r}")
        if not _BARE.fullmatch(name):
            raise ValueError(f"entry name {name!r} must be a bare word")
        if any(n == name for n, _ in buckets[kind]):
            raise ValueError(f"duplicate {kind} name {name!r}")
        buckets[kind].append((name, obj))
    names = {kind: {id(obj): name for name, obj in rows}
             for kind, rows in buckets.items()}

    def ref(kind, obj, owner):
        name = names[kind].get(id(obj))
        if name is None:
            raise ValueError(f"{owner} refers to a {kind} that is not in the bundle")
        return name

    lines = ["orbi v1", ""]

    def emit(header_parts, rows):
        lines.append("[" + " ".join(header_parts) + "]")
        for parts in rows:
            lines.append(" ".join(parts))
        lines.append("")

    for name, G in buckets["groupoid"]:
        rows = [(tag, *map(format_id, ids)) for tag, ids in _groupoid_rows(G)]
        emit(("groupoid", name), rows)
    for name, h in buckets["hom"]:
        rows = [("obj", format_id(x), format_id(h.f0.mapping[x]))
                for x in h.source.objects.vertices]
        rows += [("arr", format_id(g), format_id(h.f1.mapping[g]))
                 for g in h.source.arrows.vertices]
        emit(("hom", name, ref("groupoid", h.source, f"hom {name}"),
              ref("groupoid", h.target, f"hom {name}")), rows)
    for name, s in buckets["span"]:
        emit(("span", name, ref("hom", s.left, f"span {name}"),
              ref("hom", s.right, f"span {name}")), ())
    for name, d in buckets["cell"]:
        rows = [("alpha", format_id(x), format_id(d.alpha.at(x)))
                for x in d.apex.objects.vertices]
        rows += [("beta", format_id(x), format_id(d.beta.at(x)))
                 for x in d.apex.objects.vertices]
        emit(("cell", name, ref("span", d.top, f"cell {name}"),
              ref("span", d.bottom, f"cell {name}"),
              ref("hom", d.nu, f"cell {name}"),
              ref("hom", d.nu_prime, f"cell {name}")), rows)
    for name, w in buckets["witness"]:
        if isinstance(w, TwoCellWitness):
            w = WitnessData(w.lambda1, w.lambda2,
                            dict(w.gamma.alpha.mapping),
                            dict(w.gamma_prime.alpha.mapping))
        rows = [("gamma", format_id(x), format_id(w.gamma[x]))
                for x in w.lambda1.source.objects.vertices]
        rows += [("gammap", format_id(x), format_id(w.gamma_prime[x]))
                 for x in w.lambda1.source.objects.vertices]
        emit(("witness", name, ref("hom", w.lambda1, f"witness {name}"),
              ref("hom", w.lambda2, f"witness {name}")), rows)
    return "\n".join(lines)
