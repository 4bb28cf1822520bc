"""Command line front end.

Every command reads ``.grpd`` or ``.orbi`` files produced by
:mod:`orbigroupoid.textfmt` and prints a deterministic report (``--json``
for machine-readable form).  Exit codes: 0 the command ran and any check
it performs passed, 1 a check failed (axiom violation, non-etale map,
non-equivalence, unequal two-cells), 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import pathlib
import sys

from .bicat import compose_spans, morita_equivalent, two_cells_equal, validate_span
from .dot import export_dot
from .errors import OrbiError
from .gmap import build_gmap, component_report, enumerate_homomorphisms
from .groupoid import check_etale, quotient, validate_groupoid
from .inertia import build_inertia, minimal_exponent, verify_phi_properties
from .textfmt import format_id, parse_bundle, parse_groupoid, parse_id_text

__all__ = ["entry", "main"]


def _id_text(v) -> str:
    try:
        return format_id(v)
    except TypeError:
        return repr(v)


def _load_groupoid(path: str):
    return parse_groupoid(pathlib.Path(path).read_text())


def _load_bundle(path: str):
    return parse_bundle(pathlib.Path(path).read_text())


def _emit(out, ns, payload: dict, lines):
    if getattr(ns, "json", False):
        print(json.dumps(payload, indent=2), file=out)
    else:
        for line in lines:
            print(line, file=out)


def _violation_rows(violations):
    return [{"axiom": v.axiom, "message": v.message,
             "witness": _id_text(v.witness)} for v in violations]


def _cmd_validate(ns, out) -> int:
    G = _load_groupoid(ns.file)
    violations = validate_groupoid(G)
    payload = {"ok": not violations, "objects": G.n_objects,
               "arrows": G.n_arrows, "violations": _violation_rows(violations)}
    lines = [f"{ns.file}: {G.n_objects} objects, {G.n_arrows} arrows"]
    lines += [f"violation [{v.axiom}] {v.message}" for v in violations]
    lines.append("ok" if not violations else f"invalid: {len(violations)} violations")
    _emit(out, ns, payload, lines)
    return 0 if not violations else 1


def _cmd_quotient(ns, out) -> int:
    G = _load_groupoid(ns.file)
    rows = quotient(G).summary()
    payload = {"orbits": [
        {"rep": _id_text(rep), "size": size, "isotropy_order": order,
         "element_orders": list(orders)}
        for rep, size, (order, orders) in rows]}
    lines = [f"{len(rows)} orbits"]
    for rep, size, (order, orders) in rows:
        lines.append(f"orbit {_id_text(rep)}: size {size}, isotropy {order} "
                     + "(" + ",".join(map(str, orders)) + ")")
    _emit(out, ns, payload, lines)
    return 0


def _cmd_isotropy(ns, out) -> int:
    G = _load_groupoid(ns.file)
    x = parse_id_text(ns.object)
    if not G.objects.has_vertex(x):
        raise OrbiError(f"unknown object {ns.object}")
    q = quotient(G)
    rep = q.projection[x]
    order, orders = q.label(rep)
    payload = {"object": _id_text(x), "orbit_rep": _id_text(rep),
               "orbit_size": len(q.members[rep]), "isotropy_order": order,
               "element_orders": list(orders)}
    _emit(out, ns, payload, [
        f"object {_id_text(x)}: orbit {_id_text(rep)} "
        f"(size {len(q.members[rep])}), isotropy {order} "
        + "(" + ",".join(map(str, orders)) + ")"])
    return 0


def _cmd_etale(ns, out) -> int:
    report = check_etale(_load_groupoid(ns.file))
    payload = {"ok": report.ok,
               "witness": None if report.ok else _id_text(report.witness)}
    if report.ok:
        _emit(out, ns, payload, ["etale: yes"])
        return 0
    _emit(out, ns, payload, [f"etale: no, witness {_id_text(report.witness)}"])
    return 1


def _parse_pins(pin_args):
    if not pin_args:
        return None
    return {parse_id_text(k): parse_id_text(v) for k, v in pin_args}


def _cmd_hom_enum(ns, out) -> int:
    G = _load_groupoid(ns.source)
    H = _load_groupoid(ns.target)
    homs = enumerate_homomorphisms(G, H, pin_objects=_parse_pins(ns.pin),
                                   limit=ns.limit)
    payload = {"count": len(homs), "functors": [
        {_id_text(x): _id_text(f.f0.mapping[x]) for x in G.objects.vertices}
        for f in homs]}
    _emit(out, ns, payload, [f"{len(homs)} functors"])
    return 0


def _cmd_gmap(ns, out) -> int:
    G = _load_groupoid(ns.source)
    H = _load_groupoid(ns.target)
    M = build_gmap(G, H)
    comps = component_report(M)
    payload = {"objects": M.base.n_objects, "arrows": M.base.n_arrows,
               "components": [
                   {"size": c.size, "identity_like": c.identity_like,
                    "isotropy_labels": [[o, list(e)] for o, e in c.isotropy_labels],
                    "target_hits": list(c.target_hits)} for c in comps]}
    lines = [f"mapping groupoid: {M.base.n_objects} objects, "
             f"{M.base.n_arrows} arrows, {len(comps)} components"]
    for i, c in enumerate(comps):
        labels = " ".join(f"{o}(" + ",".join(map(str, e)) + ")"
                          for o, e in c.isotropy_labels)
        tag = " identity-like" if c.identity_like else ""
        lines.append(f"component {i}: size {c.size}{tag}, isotropy {labels}")
    _emit(out, ns, payload, lines)
    return 0


def _cmd_inertia(ns, out) -> int:
    G = _load_groupoid(ns.file)
    L = build_inertia(G)
    n = minimal_exponent(G)
    payload = {"objects": L.n_objects, "arrows": L.n_arrows,
               "minimal_exponent": n}
    _emit(out, ns, payload, [
        f"inertia groupoid: {L.n_objects} objects, {L.n_arrows} arrows",
        f"minimal exponent: {n}"])
    return 0


def _cmd_phi(ns, out) -> int:
    G = _load_groupoid(ns.file)
    n = ns.n if ns.n is not None else minimal_exponent(G)
    report = verify_phi_properties(G, n)
    payload = {"n": report.n, "valid": report.valid,
               "injective_on_objects": report.injective_on_objects,
               "surjective_on_objects": report.surjective_on_objects,
               "full": report.full, "faithful": report.faithful,
               "gmap_objects": report.gmap_objects,
               "gmap_arrows": report.gmap_arrows,
               "inertia_objects": report.inertia_objects,
               "inertia_arrows": report.inertia_arrows,
               "embedding": report.embedding,
               "isomorphism": report.isomorphism}
    lines = [f"comparison functor at n={report.n}: "
             f"{report.gmap_objects}/{report.gmap_arrows} maps into "
             f"{report.inertia_objects}/{report.inertia_arrows} loops",
             f"valid={report.valid} injective={report.injective_on_objects} "
             f"surjective={report.surjective_on_objects} "
             f"full={report.full} faithful={report.faithful}",
             f"embedding={report.embedding} isomorphism={report.isomorphism}"]
    _emit(out, ns, payload, lines)
    return 0 if report.embedding else 1


def _cmd_morita(ns, out) -> int:
    G = _load_groupoid(ns.left)
    H = _load_groupoid(ns.right)
    report = morita_equivalent(G, H, bound=ns.bound)
    payload = {"verdict": report.verdict, "detail": report.detail}
    _emit(out, ns, payload, [f"{report.verdict}: {report.detail}"
                             if report.detail else report.verdict])
    return 0 if report.verdict == "EQUIVALENT" else 1


def _cmd_span_compose(ns, out) -> int:
    bundle = _load_bundle(ns.bundle)
    for name in (ns.first, ns.second):
        if name not in bundle.spans:
            raise OrbiError(f"no span named {name!r} in {ns.bundle}")
    composed = compose_spans(bundle.spans[ns.first], bundle.spans[ns.second])
    apex = composed.span.apex
    violations = validate_span(composed.span)
    payload = {"apex_objects": apex.n_objects, "apex_arrows": apex.n_arrows,
               "violations": _violation_rows(violations)}
    lines = [f"composite apex: {apex.n_objects} objects, {apex.n_arrows} arrows"]
    lines += [f"violation [{v.axiom}] {v.message}" for v in violations]
    _emit(out, ns, payload, lines)
    return 0 if not violations else 1


def _cmd_two_cell_verify(ns, out) -> int:
    bundle = _load_bundle(ns.bundle)
    for name, pool in ((ns.first, bundle.cells), (ns.second, bundle.cells),
                       (ns.witness, bundle.witnesses)):
        if name not in pool:
            raise OrbiError(f"{name!r} is not in {ns.bundle}")
    d1, d2 = bundle.cells[ns.first], bundle.cells[ns.second]
    witness = bundle.realize_witness(ns.witness, d1, d2)
    equal, failed = two_cells_equal(d1, d2, witness)
    payload = {"equal": equal, "failed_condition": failed}
    _emit(out, ns, payload,
          ["equal: yes" if equal else f"equal: no (condition {failed})"])
    return 0 if equal else 1


def _cmd_export_dot(ns, out) -> int:
    G = _load_groupoid(ns.file)
    text = export_dot(G, name=pathlib.Path(ns.file).stem)
    if ns.output:
        pathlib.Path(ns.output).write_text(text)
        print(f"wrote {ns.output}", file=out)
    else:
        out.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbigroupoid",
        description="Finite combinatorial orbigroupoid toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    def with_json(p):
        p.add_argument("--json", action="store_true",
                       help="machine readable output")
        return p

    p = with_json(add("validate", _cmd_validate, "check the groupoid axioms"))
    p.add_argument("file")
    p = with_json(add("quotient", _cmd_quotient, "orbit space summary"))
    p.add_argument("file")
    p = with_json(add("isotropy", _cmd_isotropy, "isotropy label at an object"))
    p.add_argument("file")
    p.add_argument("object", help="object id, e.g. '(A,0)'")
    p = with_json(add("etale", _cmd_etale, "source/target local injectivity"))
    p.add_argument("file")
    p = with_json(add("hom-enum", _cmd_hom_enum, "enumerate homomorphisms"))
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--pin", nargs=2, action="append", metavar=("OBJ", "IMAGE"),
                   help="require OBJ to map to IMAGE (repeatable)")
    p = with_json(add("gmap", _cmd_gmap, "mapping groupoid summary"))
    p.add_argument("source")
    p.add_argument("target")
    p = with_json(add("inertia", _cmd_inertia, "inertia groupoid summary"))
    p.add_argument("file")
    p = with_json(add("phi", _cmd_phi, "comparison functor into the inertia"))
    p.add_argument("file")
    p.add_argument("--n", type=int, default=None,
                   help="cyclic order (default: minimal exponent)")
    p = with_json(add("morita", _cmd_morita, "search for an equivalence span"))
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--bound", type=int, default=None)
    p = with_json(add("span-compose", _cmd_span_compose,
                      "compose two spans from a bundle"))
    p.add_argument("bundle")
    p.add_argument("first")
    p.add_argument("second")
    p = with_json(add("two-cell-verify", _cmd_two_cell_verify,
                      "compare two cells under a bundled witness"))
    p.add_argument("bundle")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("witness")
    p = add("export-dot", _cmd_export_dot, "Graphviz object graph")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    try:
        return ns.func(ns, out)
    except OrbiError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry():  # pragma: no cover
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    entry()
