"""Command-line driver: ``trilie <command> [subcommand] <path> [options]``.

Exit codes: 0 when every requested check passes, 1 when a check fails (or an
extension is obstructed), 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Optional

from .cochains import DEFAULT_MAX_DEGREE, CochainComplex
from .deformations import TruncatedDeformation, check_deformation, extend, extended, obstruction
from .extensions import (
    ExtensionCocycle,
    ExtensionData,
    Section,
    build_extension,
    check_extension,
    cocycle_report,
    extensions_equivalent,
    extract_cocycle,
)
from .lie2 import (
    CrossedModule,
    Lie2DerPair,
    SkeletalTriple,
    ThreeLie2Algebra,
    TwoDerivation,
    check_2derivation,
    check_crossed_module,
    check_lie2,
    check_triple,
    crossed_to_strict,
    skeletal_to_triple,
    strict_to_crossed,
    triple_to_skeletal,
)
from .qarray import QArray
from .report import Report
from .representations import PairRepresentation, Representation, adjoint, check_pair_representation, check_representation
from .serialize import (
    DocumentError,
    _at,
    _count,
    _field,
    dumps,
    entries_doc,
    loads,
    matrix_doc,
    pair_cochain_doc,
    pair_doc,
    parse_entries,
    parse_matrix,
    parse_pair,
    parse_pair_cochain,
    parse_representation,
    representation_doc,
    vector_doc,
    _index_list,
)
from .threelie import LieDerPair, check_derivation, check_fundamental_identity, check_pair, derivation_space, pair_arrays


class InputError(Exception):
    pass


def report_doc(r: Report) -> dict:
    d: dict[str, Any] = {"name": r.name, "ok": r.ok}
    if r.witness is not None:
        d["witness"] = _witness(r.witness)
    if r.parts:
        d["parts"] = [report_doc(p) for p in r.parts]
    return d


def _witness(w):
    if isinstance(w, tuple):
        return [_witness(x) for x in w]
    if isinstance(w, QArray):
        return vector_doc(w.ravel())
    return w if isinstance(w, (int, str, float, type(None))) else str(w)


class Outcome:
    """What a command produced: a pass/fail flag plus either a report or a document."""

    def __init__(self, ok: bool, report: Optional[Report] = None, document: Optional[dict] = None,
                 summary: Optional[dict] = None, text: Optional[list] = None):
        self.ok = ok
        self.report = report
        self.document = document
        self.summary = summary or {}
        self.text = text or []

    def render(self, command: str, fmt: str) -> str:
        if self.document is not None and self.report is None and not self.summary:
            return dumps(self.document)
        if fmt == "structured":
            out: dict[str, Any] = {"command": command, "ok": self.ok}
            if self.report is not None:
                out["report"] = report_doc(self.report)
            out.update(self.summary)
            if self.document is not None:
                out["document"] = self.document
            return dumps(out)
        lines = list(self.text)
        if self.report is not None:
            lines.extend(self.report.lines())
        if self.document is not None:
            lines.append(dumps(self.document).rstrip("\n"))
        return "\n".join(lines) + "\n"


# document pieces -----------------------------------------------------------------


def _pair_and_rep(doc: dict, default_adjoint: bool = True) -> tuple[LieDerPair, Optional[PairRepresentation]]:
    pair = parse_pair(doc)
    raw = _field(doc, "representation", "", dict, required=False)
    if raw is None:
        return pair, (adjoint(pair) if default_adjoint else None)
    return pair, parse_representation(raw, pair.dim, "representation")


def _structure_report(pair: LieDerPair, prep: Optional[PairRepresentation]) -> Report:
    parts = [check_pair(pair)]
    if prep is not None:
        parts.append(check_pair_representation(pair, prep))
    return Report.combine("input", parts)


def _parse_deformation(doc: dict) -> TruncatedDeformation:
    base = parse_pair(doc)
    n = base.dim
    raw = _field(doc, "deformation", "", dict)
    terms = _field(raw, "terms", "deformation", list)
    f, g = [base.algebra.structure], [base.theta]
    for i, t in enumerate(terms):
        p = _at("deformation.terms", i)
        f.append(parse_entries(_field(t, "f", p, list), [3], n, n, _at(p, "f")))
        g.append(parse_matrix(_field(t, "g", p, list), n, n, _at(p, "g")))
    return TruncatedDeformation(base, f, g)


def _deformation_doc(d: TruncatedDeformation) -> dict:
    doc = pair_doc(d.base)
    doc["deformation"] = {
        "terms": [{"f": entries_doc(f, [3]), "g": matrix_doc(g)} for f, g in zip(d.f[1:], d.g[1:])]
    }
    return doc


def _extension_doc(e: ExtensionData) -> dict:
    return {
        "base": pair_doc(e.base),
        "total": pair_doc(e.total),
        "incl": matrix_doc(e.incl),
        "proj": matrix_doc(e.proj),
        "theta_A": matrix_doc(e.theta_A),
    }


def _parse_extension_data(doc: dict, path: str) -> ExtensionData:
    base = parse_pair(_field(doc, "base", path, dict), _at(path, "base"))
    total = parse_pair(_field(doc, "total", path, dict), _at(path, "total"))
    N = total.dim
    nA = N - base.dim
    if nA < 0:
        raise DocumentError(_at(path, "total"), "total space is smaller than the base")
    incl = parse_matrix(_field(doc, "incl", path, list), N, nA, _at(path, "incl"))
    proj = parse_matrix(_field(doc, "proj", path, list), base.dim, N, _at(path, "proj"))
    theta_A = parse_matrix(_field(doc, "theta_A", path, list), nA, nA, _at(path, "theta_A"))
    return ExtensionData(total, incl, proj, base, theta_A)


def _cocycle_doc(coc: ExtensionCocycle) -> dict:
    return {"psi": entries_doc(coc.psi, [3]), "lambda": matrix_doc(coc.lam)}


def _parse_lie2(doc: dict, path: str = "lie2") -> Lie2DerPair:
    n0 = _count(doc, "V0_dim", path)
    n1 = _count(doc, "V1_dim", path)

    def grid(key, r, c):
        raw = _field(doc, key, path, list, required=False)
        return None if raw is None else parse_matrix(raw, r, c, _at(path, key))

    def entries(key, groups, out):
        raw = _field(doc, key, path, list, required=False)
        return None if raw is None else parse_entries(raw, groups, n0, out, _at(path, key))

    l3_001 = None
    raw = _field(doc, "l3_001", path, list, required=False)
    if raw is not None:
        blocks = {}
        rp = _at(path, "l3_001")
        for e, item in enumerate(raw):
            ep = _at(rp, e)
            i, j = _index_list(_field(item, "pair", ep, list), 2, n0, _at(ep, "pair"))
            blocks[(i, j)] = parse_matrix(_field(item, "matrix", ep, list), n1, n1, _at(ep, "matrix"))
        l3_001 = Representation(n0, n1, blocks).full.transpose(0, 1, 3, 2)
    alg = ThreeLie2Algebra(n1, n0, grid("d", n0, n1), entries("l3_000", [3], n0), l3_001, entries("l5", [2, 3], n1))
    X0 = grid("X0", n0, n0)
    X1 = grid("X1", n1, n1)
    der = TwoDerivation(QArray.zeros((n0, n0)) if X0 is None else X0, QArray.zeros((n1, n1)) if X1 is None else X1,
                        entries("lX", [3], n1))
    return Lie2DerPair(alg, der)


def _lie2_doc(p: Lie2DerPair) -> dict:
    a, x = p.algebra, p.der
    a_idx, b_idx = pair_arrays(a.V0_dim)
    l3_001 = []
    for i, j in zip(a_idx, b_idx):
        mat = a.l3_001[int(i), int(j)].T
        if not mat.is_zero():
            l3_001.append({"pair": [int(i), int(j)], "matrix": matrix_doc(mat)})
    return {"lie2": {
        "V0_dim": a.V0_dim,
        "V1_dim": a.V1_dim,
        "d": matrix_doc(a.d),
        "l3_000": entries_doc(a.l3_000, [3]),
        "l3_001": l3_001,
        "l5": entries_doc(a.l5, [2, 3]),
        "X0": matrix_doc(x.X0),
        "X1": matrix_doc(x.X1),
        "lX": entries_doc(x.lX, [3]),
    }}


def _parse_triple(doc: dict) -> SkeletalTriple:
    pair, prep = _pair_and_rep(doc, default_adjoint=False)
    if prep is None:
        raise DocumentError("representation", "missing field")
    c = parse_pair_cochain(_field(doc, "cochain", "", dict), pair.dim, prep.module_dim, "cochain")
    if c.degree != 3:
        raise DocumentError("cochain.degree", "a triple needs a degree-3 cochain")
    return SkeletalTriple(pair, prep, c)


def _triple_doc(t: SkeletalTriple) -> dict:
    doc = pair_doc(t.pair)
    doc["representation"] = representation_doc(t.prep)
    doc["cochain"] = pair_cochain_doc(t.cocycle)
    return doc


def _parse_crossed(doc: dict, path: str = "crossed") -> CrossedModule:
    A = parse_pair(_field(doc, "A", path, dict), _at(path, "A"))
    B = parse_pair(_field(doc, "B", path, dict), _at(path, "B"))
    rep = parse_representation({"module_dim": A.dim, "rho": _field(doc, "rho", path, list, required=False) or []},
                               B.dim, path)
    eta = parse_matrix(_field(doc, "eta", path, list), B.dim, A.dim, _at(path, "eta"))
    return CrossedModule(A, B, PairRepresentation(rep.rep, A.theta), eta)


def _crossed_doc(c: CrossedModule) -> dict:
    rep = representation_doc(c.rho)
    return {"crossed": {"A": pair_doc(c.A_pair), "B": pair_doc(c.B_pair), "rho": rep["rho"], "eta": matrix_doc(c.eta)}}


# commands ------------------------------------------------------------------------


def cmd_check(doc: dict, args) -> Outcome:
    pair = parse_pair(doc)
    parts = [check_fundamental_identity(pair.algebra)]
    if "derivation" in doc:
        parts.append(check_derivation(pair.algebra, pair.theta))
    raw = _field(doc, "representation", "", dict, required=False)
    if raw is not None:
        prep = parse_representation(raw, pair.dim, "representation")
        parts.append(check_representation(pair.algebra, prep.rep))
        parts.append(check_pair_representation(pair, prep).renamed("pair representation"))
    rep = Report.combine("check", parts)
    return Outcome(rep.ok, rep)


def cmd_derivations(doc: dict, args) -> Outcome:
    L = parse_pair(doc).algebra
    fi = check_fundamental_identity(L)
    basis = derivation_space(L)
    text = [f"dim {len(basis)}"]
    for k, D in enumerate(basis):
        text.append(f"D{k}:")
        text.extend("  " + " ".join(row) for row in matrix_doc(D))
    if not fi.ok:
        text.insert(0, "warning: the bracket violates the Fundamental Identity")
    return Outcome(fi.ok, None, None, {"dim": len(basis), "basis": [matrix_doc(D) for D in basis],
                                        "fundamental_identity": fi.ok}, text)


def cmd_cohomology(doc: dict, args) -> Outcome:
    p = args.degree
    if p < 1 or p > args.max_degree:
        raise InputError(f"degree {p} outside 1..{args.max_degree} (see --max-degree)")
    pair, prep = _pair_and_rep(doc)
    valid = _structure_report(pair, prep)
    if not valid.ok:
        return Outcome(False, valid)
    cx = CochainComplex(pair, prep, max_degree=args.max_degree)
    h = cx.cohomology(p)
    text = [f"degree {p}", f"cocycles {h['cocycles']}", f"coboundaries {h['coboundaries']}",
            f"cohomology {h['cohomology']}"]
    return Outcome(True, None, None, {"degree": p, **h}, text)


def cmd_deform(doc: dict, args) -> Outcome:
    d = _parse_deformation(doc)
    rep = check_deformation(d)
    if args.sub == "verify" or not rep.ok:
        return Outcome(rep.ok, rep)
    if args.sub == "obstruction":
        om = obstruction(d)
        return Outcome(True, None, None, {"obstruction": pair_cochain_doc(om), "zero": om.is_zero()},
                       [f"obstruction is {'zero' if om.is_zero() else 'nonzero'}",
                        dumps(pair_cochain_doc(om)).rstrip("\n")])
    res = extend(d)
    if res.extensible:
        f, g = res.witness
        nxt = extended(d, f, g)
        again = check_deformation(nxt)
        summary = {"extensible": True, "witness": {"f": entries_doc(f, [3]), "g": matrix_doc(g)},
                   "deformation": _deformation_doc(nxt), "reverified": again.ok}
        text = [f"extensible to order {nxt.order}", f"re-verified: {'pass' if again.ok else 'FAIL'}",
                dumps(summary["witness"]).rstrip("\n")]
        return Outcome(again.ok, None, None, summary, text)
    summary = {"extensible": False, "obstructed": True, "in_full_image": res.in_image}
    text = ["obstructed"]
    if res.certificate is not None:
        summary["certificate"] = vector_doc(res.certificate)
        text.append("certificate: y with y.partial_2 = 0 and y.obstruction != 0")
    else:
        text.append("the obstruction is exact but has no totally skew primitive")
    return Outcome(False, None, None, summary, text)


def cmd_extension(doc: dict, args) -> Outcome:
    if args.sub == "build":
        B = parse_pair(doc)
        raw = _field(doc, "representation", "", dict)
        prep = parse_representation(raw, B.dim, "representation")
        c = _field(doc, "extension", "", dict, required=False)
        if c is None:
            coc = None
        else:
            nA = prep.module_dim
            psi = parse_entries(_field(c, "psi", "extension", list, required=False) or [], [3], B.dim, nA,
                                "extension.psi")
            lam_raw = _field(c, "lambda", "extension", list, required=False)
            lam = QArray.zeros((nA, B.dim)) if lam_raw is None else parse_matrix(lam_raw, nA, B.dim, "extension.lambda")
            coc = ExtensionCocycle(psi, lam)
        ext = build_extension(B, prep, coc)
        rep = check_extension(ext)
        if coc is not None:
            rep = Report.combine("build", [rep, cocycle_report(B, prep, coc)])
        out = Outcome(rep.ok, None, {"extension_data": _extension_doc(ext)})
        out.diagnostic = None if rep.ok else rep
        return out
    if args.sub == "extract":
        ext = _parse_extension_data(_field(doc, "extension_data", "", dict), "extension_data")
        raw = _field(doc, "section", "", list, required=False)
        s = None if raw is None else Section(parse_matrix(raw, ext.total.dim, ext.base.dim, "section"))
        prep, coc = extract_cocycle(ext, s)
        body = pair_doc(ext.base)
        body["representation"] = representation_doc(prep)
        body["extension"] = _cocycle_doc(coc)
        return Outcome(True, None, body)
    items = _field(doc, "extension_data", "", list)
    if len(items) != 2:
        raise DocumentError("extension_data", "expected exactly two extensions")
    e1, e2 = (_parse_extension_data(x, _at("extension_data", i)) for i, x in enumerate(items))
    rep = extensions_equivalent(e1, e2)
    summary: dict[str, Any] = {"equivalent": rep.ok}
    if rep.ok:
        summary["lambda"] = matrix_doc(rep.details["lam"])
        summary["eta"] = matrix_doc(rep.details["eta"])
        text = ["equivalent: yes", "lambda:"] + ["  " + " ".join(r) for r in summary["lambda"]]
        text += ["eta:"] + ["  " + " ".join(r) for r in summary["eta"]]
    elif "certificate" in rep.details:
        summary["certificate"] = vector_doc(rep.details["certificate"])
        text = ["equivalent: no", "certificate: y with y.partial_1 = 0 and y.(difference) != 0"]
    else:
        text = ["equivalent: no (the constructed map failed verification)"]
    return Outcome(rep.ok, rep if not rep.ok and rep.parts else None, None, summary, text)


def cmd_lie2(doc: dict, args) -> Outcome:
    sub = args.sub
    if sub == "check":
        if "lie2" in doc:
            p = _parse_lie2(_field(doc, "lie2", "", dict))
            rep = Report.combine("3-Lie2Der pair", [check_lie2(p.algebra), check_2derivation(p.algebra, p.der)])
        elif "crossed" in doc:
            rep = check_crossed_module(_parse_crossed(_field(doc, "crossed", "", dict)))
        elif "cochain" in doc:
            rep = check_triple(_parse_triple(doc))
        else:
            raise DocumentError("", "expected a 'lie2', 'crossed' or 'cochain' payload")
        return Outcome(rep.ok, rep)
    if sub == "to-triple":
        t = skeletal_to_triple(_parse_lie2(_field(doc, "lie2", "", dict)))
        return _converted(_triple_doc(t), check_triple(t))
    if sub == "from-triple":
        p = triple_to_skeletal(_parse_triple(doc))
        return _converted(_lie2_doc(p), Report.combine("3-Lie2Der pair", [check_lie2(p.algebra),
                                                                           check_2derivation(p.algebra, p.der)]))
    if sub == "to-crossed":
        c = strict_to_crossed(_parse_lie2(_field(doc, "lie2", "", dict)))
        return _converted(_crossed_doc(c), check_crossed_module(c))
    p = crossed_to_strict(_parse_crossed(_field(doc, "crossed", "", dict)))
    return _converted(_lie2_doc(p), Report.combine("3-Lie2Der pair", [check_lie2(p.algebra),
                                                                       check_2derivation(p.algebra, p.der)]))


def _converted(document: dict, validation: Report) -> Outcome:
    out = Outcome(validation.ok, None, document)
    out.diagnostic = None if validation.ok else validation
    return out


# entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    ap = argparse.ArgumentParser(prog="trilie", description="Exact computations with 3-Lie algebras and derivations.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("check", "run the structure checks on an algebra document"),
                        ("derivations", "basis of the derivation algebra")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("path")
    p = sub.add_parser("cohomology", parents=[common], help="dimensions of cocycles, coboundaries and cohomology")
    p.add_argument("path")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    for name, choices, help_ in (
            ("deform", ["verify", "obstruction", "extend"], "truncated deformations of a pair"),
            ("extension", ["build", "extract", "equivalent"], "abelian extensions and their cocycles"),
            ("lie2", ["check", "to-triple", "to-crossed", "from-triple", "from-crossed"],
             "3-Lie 2-algebras, skeletal triples and crossed modules")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("sub", choices=choices)
        p.add_argument("path")
        if name == "deform":
            p.add_argument("--order", type=int, default=None, help="expected order of the input deformation")
    return ap


_COMMANDS = {
    "check": cmd_check,
    "derivations": cmd_derivations,
    "cohomology": cmd_cohomology,
    "deform": cmd_deform,
    "extension": cmd_extension,
    "lie2": cmd_lie2,
}


def run(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.path == "-":
            text = sys.stdin.read()
        else:
            with open(args.path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.path}: {exc.strerror}", file=stderr)
        return 2
    try:
        doc = loads(text)
        if args.command == "deform" and args.order is not None:
            terms = ((doc.get("deformation") or {}).get("terms")) if isinstance(doc.get("deformation"), dict) else None
            if not isinstance(terms, list) or len(terms) != args.order:
                raise InputError(f"--order {args.order} does not match the number of deformation terms")
        outcome = _COMMANDS[args.command](doc, args)
    except DocumentError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    label = args.command if not hasattr(args, "sub") else f"{args.command} {args.sub}"
    stdout.write(outcome.render(label, args.format))
    diag = getattr(outcome, "diagnostic", None)
    if diag is not None:
        print("\n".join(diag.lines()), file=stderr)
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
