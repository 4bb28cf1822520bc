"""Text format tests: identifier syntax, .grpd round-trips, .orbi bundles."""
import pytest

from orbigroupoid import fixtures
from orbigroupoid.bicat import Span, two_cells_equal, validate_two_cell
from orbigroupoid.errors import BadWitness, DanglingId, ParseError
from orbigroupoid.groupoid import validate_groupoid
from orbigroupoid.morphism import identity_homomorphism
from orbigroupoid.textfmt import (
    WitnessData,
    format_id,
    parse_bundle,
    parse_groupoid,
    parse_id_text,
    serialize_bundle,
    serialize_groupoid,
)

from seagull import bundle_entries as seagull_bundle_entries


def same_presentation(G, H):
    return (G.objects == H.objects and G.arrows == H.arrows
            and G.src.mapping == H.src.mapping
            and G.tgt.mapping == H.tgt.mapping
            and G.unit.mapping == H.unit.mapping
            and G.inv.mapping == H.inv.mapping
            and G.comp == H.comp)


# -- identifiers ------------------------------------------------------------

def test_format_id_forms():
    assert format_id(7) == "7"
    assert format_id(-3) == "-3"
    assert format_id("c0") == "c0"
    assert format_id("two words") == '"two words"'
    assert format_id("4") == '"4"'  # all-digit strings stay strings
    assert format_id('say "hi"\n') == '"say \\"hi\\"\\n"'
    assert format_id(()) == "()"
    assert format_id(("x",)) == "(x,)"
    assert format_id(("g", 0, ("A", 1))) == "(g,0,(A,1))"


def test_format_id_rejects_non_identifiers():
    with pytest.raises(TypeError):
        format_id(True)
    with pytest.raises(TypeError):
        format_id(1.5)


@pytest.mark.parametrize("value", [
    0, -12, "word", "4", "two words", 'q"uote', (), ("x",),
    ("t", "s0", ("A", 0)), (("a", 1), ("b", -2)),
])
def test_id_text_round_trip(value):
    assert parse_id_text(format_id(value)) == value


def test_parse_id_text_is_lenient_about_whitespace():
    assert parse_id_text("( a , 1 , ( b , 2 ) )") == ("a", 1, ("b", 2))
    assert parse_id_text("(a)") == ("a",)


@pytest.mark.parametrize("bad", ["", "a b", '"open', '"\\q"', "-", "(a,,b)", "(a"])
def test_parse_id_text_errors(bad):
    with pytest.raises(ParseError):
        parse_id_text(bad)


# -- .grpd ------------------------------------------------------------------

@pytest.mark.parametrize("name", fixtures.fixture_names())
def test_grpd_round_trip(name):
    G = fixtures.fixture(name)
    text = serialize_groupoid(G)
    H = parse_groupoid(text)
    assert same_presentation(G, H)
    assert serialize_groupoid(H) == text
    assert validate_groupoid(H) == ()


PT_Z2_TEXT = """groupoid v1

[objects]
vertex pt

[arrows]
vertex 0
vertex 1

[src]
0 pt
1 pt

[tgt]
0 pt
1 pt

[unit]
pt 0

[inv]
0 0
1 1

[comp]
0 0 0
0 1 1
1 0 1
1 1 0
"""


def test_grpd_canonical_text_is_frozen():
    assert serialize_groupoid(fixtures.fixture("pt_z2")) == PT_Z2_TEXT


def test_grpd_parser_tolerates_comments_and_spacing():
    text = PT_Z2_TEXT.replace("[src]", "# the source table\n[src]")
    text = text.replace("0 pt", "0    pt  # padded row", 1)
    assert same_presentation(parse_groupoid(text), fixtures.fixture("pt_z2"))


@pytest.mark.parametrize("mangle,fragment", [
    (lambda t: t.replace("groupoid v1", "groupoid v2"), "expected 'v1'"),
    (lambda t: t.replace("groupoid v1", "orbifold v1"), "expected 'groupoid'"),
    (lambda t: t.replace("[src]", "[sources]"), "unknown section"),
    (lambda t: t + "\n[comp]\n", "duplicate section"),
    (lambda t: t.replace("[inv]\n0 0\n1 1\n", ""), "missing section [inv]"),
    (lambda t: t.replace("vertex pt", "point pt"), "expected 'vertex' or 'edge'"),
    (lambda t: t.replace("pt 0", "pt 0 0"), "expected end of line"),
    (lambda t: t.replace("vertex 0\n", "vertex 0\nvertex 0\n"), "duplicate arrow"),
    (lambda t: t.replace("0 0 0", "0 0 0\n0 0 1"), "duplicate comp row"),
    (lambda t: t.replace("[unit]\npt 0", "[unit]"), "missing unit row"),
])
def test_grpd_parse_errors(mangle, fragment):
    with pytest.raises(ParseError) as err:
        parse_groupoid(mangle(PT_Z2_TEXT))
    assert fragment in str(err.value)


@pytest.mark.parametrize("mangle,witness", [
    (lambda t: t.replace("0 pt\n1 pt\n\n[tgt]", "0 pt\n2 pt\n\n[tgt]"), 2),
    (lambda t: t.replace("pt 0", "pt 9"), 9),
    (lambda t: t.replace("1 1 0", "1 1 5"), 5),
    (lambda t: t.replace("vertex pt\n", "vertex pt\nedge pt qt\n"), "qt"),
])
def test_grpd_dangling_ids(mangle, witness):
    with pytest.raises(DanglingId) as err:
        parse_groupoid(mangle(PT_Z2_TEXT))
    assert err.value.witness == witness
    assert err.value.line > 0


def test_grpd_self_loop_rejected():
    text = PT_Z2_TEXT.replace("vertex pt\n", "vertex pt\nedge pt pt\n")
    with pytest.raises(ParseError, match="self loop"):
        parse_groupoid(text)


def test_grpd_error_reports_position():
    bad = PT_Z2_TEXT.replace("1 1 0", "1 1 ]")
    with pytest.raises(ParseError) as err:
        parse_groupoid(bad)
    assert err.value.line == len(PT_Z2_TEXT.splitlines())
    assert "line" in str(err.value)


# -- .orbi ------------------------------------------------------------------

def interval_entries():
    fine = fixtures.fixture("i2")
    coarse = fixtures.fixture("i1")
    from orbigroupoid.atlas import chart_collapse

    collapse = chart_collapse(fine, coarse)
    idf = identity_homomorphism(fine)
    return [
        ("groupoid", "fine", fine),
        ("groupoid", "coarse", coarse),
        ("hom", "collapse", collapse),
        ("hom", "idf", idf),
        ("hom", "idc", identity_homomorphism(coarse)),
        ("span", "S", Span(idf, collapse)),
    ]


def test_demo_bundle_round_trips():
    entries = fixtures.demo_bundle_entries()
    text = serialize_bundle(entries)
    b = parse_bundle(text)
    assert serialize_bundle(b.entries()) == text
    cell = b.cells["C"]
    assert validate_two_cell(cell) == ()
    w = b.realize_witness("W", cell, cell)
    assert two_cells_equal(cell, cell, w) == (True, None)


def test_bundle_round_trip_basic():
    entries = interval_entries()
    text = serialize_bundle(entries)
    b = parse_bundle(text)
    assert b.order == (("groupoid", "fine"), ("groupoid", "coarse"),
                       ("hom", "collapse"), ("hom", "idf"), ("hom", "idc"),
                       ("span", "S"))
    assert serialize_bundle(b.entries()) == text
    assert same_presentation(b.groupoids["fine"], fixtures.fixture("i2"))
    s = b.spans["S"]
    assert s.left is b.homs["idf"] and s.right is b.homs["collapse"]
    assert s.apex is b.groupoids["fine"]


def test_bundle_cell_and_witness_round_trip():
    entries = seagull_bundle_entries()
    text = serialize_bundle(entries)
    b = parse_bundle(text)
    assert serialize_bundle(b.entries()) == text
    cell = b.cells["C1"]
    assert validate_two_cell(cell) == ()
    assert cell.apex is b.groupoids["M"]
    assert cell.nu is b.homs["nu"] and cell.nu_prime is b.homs["nup"]
    w = b.realize_witness("W", cell, cell)
    assert w.lambda1 is b.homs["idm"]
    assert two_cells_equal(cell, cell, w) == (True, None)
    # the corner diagrams share their nus, so the same witness applies
    assert two_cells_equal(b.cells["Ch1"], b.cells["Ch2"],
                           b.realize_witness("W", b.cells["Ch1"],
                                             b.cells["Ch2"])) == (False, 4)


def test_realize_witness_rejects_untypable_tables():
    entries = seagull_bundle_entries()
    kind, name, wit = entries[-1]
    broken = WitnessData(wit.lambda1, wit.lambda2,
                         {m: ("c0", 0) for m in wit.gamma},  # objects, not arrows
                         wit.gamma_prime)
    b = parse_bundle(serialize_bundle(entries[:-1] + [(kind, name, broken)]))
    cell = b.cells["C1"]
    with pytest.raises(BadWitness):
        b.realize_witness("W", cell, cell)


def bundle_text(entries=None):
    return serialize_bundle(interval_entries() if entries is None else entries)


@pytest.mark.parametrize("mangle,fragment", [
    (lambda t: t.replace("orbi v1", "orb v1"), "expected 'orbi'"),
    (lambda t: t.replace("[span S idf collapse]", "[span S idf]"), "expected"),
    (lambda t: t.replace("[span S idf collapse]", "[ribbon S idf collapse]"),
     "unknown section kind"),
    (lambda t: t.replace("[groupoid coarse]", "[groupoid fine]"),
     "duplicate groupoid"),
    (lambda t: t.replace("[span S idf collapse]", "[span S idc collapse]"),
     "legs do not share an apex"),
    (lambda t: t.replace("obj (c0,0) (c0,0)\n", "", 1), "missing obj row"),
    (lambda t: t.replace("src (t,0,(c0,0)) (c0,0)\n", "", 1), "missing src row"),
])
def test_bundle_parse_errors(mangle, fragment):
    with pytest.raises(ParseError) as err:
        parse_bundle(mangle(bundle_text()))
    assert fragment in str(err.value)


@pytest.mark.parametrize("mangle", [
    lambda t: t.replace("[hom collapse fine coarse]", "[hom collapse fine missing]"),
    lambda t: t.replace("[span S idf collapse]", "[span S idf nothom]"),
    lambda t: t.replace("obj (c0,0) (c0,0)", "obj (c9,9) (c0,0)"),
    lambda t: t.replace("arr (t,0,(c0,0)) (t,0,(c0,0))",
                        "arr (t,0,(c0,0)) (t,9,(c0,0))"),
])
def test_bundle_dangling_ids(mangle):
    with pytest.raises(DanglingId):
        parse_bundle(mangle(bundle_text()))


def test_serialize_bundle_input_checks():
    entries = interval_entries()
    with pytest.raises(ValueError, match="unknown entry kind"):
        serialize_bundle([("module", "x", None)])
    with pytest.raises(ValueError, match="bare word"):
        serialize_bundle([("groupoid", "no spaces", entries[0][2])])
    with pytest.raises(ValueError, match="duplicate"):
        serialize_bundle([entries[0], ("groupoid", "fine", entries[1][2])])
    with pytest.raises(ValueError, match="not in the bundle"):
        serialize_bundle([e for e in entries if e[1] != "coarse"])


def test_bundle_accepts_two_cell_witness_objects():
    entries = seagull_bundle_entries()
    text = serialize_bundle(entries)
    b = parse_bundle(text)
    cell = b.cells["C1"]
    realized = b.realize_witness("W", cell, cell)
    swapped = [e if e[1] != "W" else ("witness", "W", realized)
               for e in b.entries()]
    assert serialize_bundle(swapped) == text
