"""Command-line front end: parse a script, run its commands, emit reports.

Exit codes: 0 all commands completed, 1 usage or parse error,
2 validation or axiom failure, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .complexes import sup_inf_amp
from .constructions import (
    DEFAULT_CAP,
    DEFAULT_FIELD,
    adjoin_variable,
    artinian_ring,
    exterior_algebra,
    expr_in_algebra,
    expr_to_poly,
    fiber_from_dg_resolution,
    koszul_module,
    koszul_on_maximal_ideal,
    koszul_resolution_data,
    koszul_sequence,
    taylor_resolution_data,
)
from .dg import (
    AxiomFailure,
    DgAlgebra,
    DgModule,
    check_dga,
    h0,
    maximal_ideal_module,
    shift_module,
    validate_dga,
    validate_module,
)
from .dsl import COMMANDS, DslNameError, DslSyntaxError, Script, parse
from .fixtures import fixture
from .gorenstein import (
    InternalInconsistency,
    audit_theorem,
    condition7_test,
    gorenstein_bass,
    gorenstein_pairing,
    is_mcm,
)
from .linalg import PrimeField, RationalField
from .resolutions import (
    _jsonable,
    bass_table,
    depth,
    dual,
    ext,
    injdim_sup,
    projdim_verdict,
    regular,
    residue,
    resolution,
)

CONVENTIONS = [
    "dimensions are over the ground field",
    "cohomological grading; algebras live in degrees <= 0",
    "projdim = least n with Ext^i(M,N) = 0 for i > n + sup N",
    "Ext tables indexed by cohomological degree; entries beyond exact_upto are truncated",
]

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INCONSISTENT = 0, 1, 2, 3


@dataclass
class Config:
    window: int = 12
    seed: int = 0
    family: tuple | None = None
    fmt: str = "json"
    cap: int = DEFAULT_CAP


class ScriptError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(to_jsonable(v) for v in x)
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if hasattr(x, "to_json"):
        return to_jsonable(x.to_json())
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


# ---------------------------------------------------------------------------
# interpreter


class Interpreter:
    def __init__(self, config: Config):
        self.config = config
        self.field = None
        self.env: dict = {}

    def _field(self):
        return self.field or DEFAULT_FIELD

    def algebra(self, name: str) -> DgAlgebra:
        obj = self.env[name]
        if not isinstance(obj, DgAlgebra):
            raise ScriptError(EXIT_INVALID, f"{name} is not an algebra")
        return obj

    def module(self, name: str) -> DgModule:
        obj = self.env[name]
        if not isinstance(obj, DgModule):
            raise ScriptError(EXIT_INVALID, f"{name} is not a module")
        return obj

    # declarations
    def declare(self, it):
        if it.kind == "field":
            self.field = PrimeField(it.body[1]) if it.body[0] == "Fp" else RationalField()
        elif it.kind == "ring":
            names, rels = it.body
            self.env[it.name] = artinian_ring(names, list(rels), self._field(), self.config.cap, name=it.name)
        elif it.kind == "algebra":
            self.env[it.name] = self.build_algebra(it.name, it.body)
        elif it.kind == "module":
            self.env[it.name] = self.build_module(it.body)

    def build_algebra(self, name, b) -> DgAlgebra:
        tag = b[0]
        F = self._field()
        if tag == "ref":
            return self.algebra(b[1])
        if tag == "fixture":
            try:
                return fixture(b[1], F)
            except KeyError as e:
                raise ScriptError(EXIT_USAGE, str(e)) from None
        if tag == "koszul":
            a = self.algebra(b[1])
            if b[2] is None:
                out = koszul_on_maximal_ideal(a)
            else:
                ha = h0(a)
                xs = []
                for e in b[2]:
                    v = expr_in_algebra(e, a, getattr(a, "named", {}))
                    if any(a.degrees[i] != 0 for i in v):
                        raise ScriptError(EXIT_INVALID, "Koszul elements must have degree 0")
                    xs.append(ha.reduce(v))
                out = koszul_sequence(a, xs)
        elif tag == "exterior":
            out = exterior_algebra(list(b[1]), b[2], F)
        elif tag == "fiber":
            method, names, gens = b[1], b[2], b[3]
            polys = [expr_to_poly(e, F, names) for e in gens]
            if method == "koszul":
                data = koszul_resolution_data(F, names, polys)
            elif method == "taylor":
                monos = []
                for f in polys:
                    if len(f.terms) != 1:
                        raise ScriptError(EXIT_INVALID, "Taylor resolutions need monomial generators")
                    monos.append(next(iter(f.terms)))
                data = taylor_resolution_data(F, names, monos)
            else:
                raise ScriptError(EXIT_USAGE, f"unknown resolution method {method!r}")
            out = fiber_from_dg_resolution(data)
        elif tag == "adjoin":
            out = self.algebra(b[1])
            for gname, deg, nil, d in b[2]:
                dvec = expr_in_algebra(d, out, out.named) if d is not None else {}
                out = adjoin_variable(out, gname, deg, dvec, nil, check=False)
            out = check_dga(out)
        else:  # pragma: no cover - the parser admits no other forms
            raise ScriptError(EXIT_USAGE, f"unknown algebra form {tag!r}")
        out.name = name
        return out

    def build_module(self, b) -> DgModule:
        tag = b[0]
        if tag == "dual":
            return dual(self.build_module(b[1]))
        if tag == "shift":
            return shift_module(self.build_module(b[1]), b[2])
        if tag == "koszul":
            return koszul_module(self.algebra(b[1]))
        if tag == "builtin":
            a = self.algebra(b[2])
            return {"residue": residue, "regular": regular, "maximal": maximal_ideal_module}[b[1]](a)
        return self.module(b[1])

    def family(self, a: DgAlgebra, names) -> list | None:
        if names is None:
            return None
        out = []
        for nm in names:
            if nm == "A":
                out.append(regular(a))
            elif nm == "k":
                out.append(residue(a))
            elif nm == "dual":
                out.append(dual(regular(a)))
            elif nm == "koszul":
                out.append(koszul_module(a))
            elif nm == "maximal":
                out.append(maximal_ideal_module(a))
            else:
                m = self.module(nm)
                if m.algebra is not a:
                    raise ScriptError(EXIT_INVALID, f"family member {nm} lives over another algebra")
                out.append(m)
        return out

    # commands
    def command(self, it) -> tuple:
        opts = dict(it.opts)
        window = opts.get("window", self.config.window)
        seed = opts.get("seed", self.config.seed)
        family = opts.get("family", self.config.family)
        rep = {
            "command": it.kind,
            "target": " ".join(it.body),
            "verdict": None,
            "value": None,
            "tables": {},
            "witnesses": {},
            "window": window,
            "seed": seed,
            "caveats": [],
            "conventions": CONVENTIONS,
            "user_asserted": {},
        }
        code = EXIT_OK
        objs = [self.env[n] for n in it.body]
        for o in objs:
            alg = o if isinstance(o, DgAlgebra) else o.algebra
            if hasattr(alg, "user_asserted_exact"):
                rep["user_asserted"]["resolution_exactness"] = alg.user_asserted_exact
        k = it.kind
        if k == "validate":
            o = objs[0]
            r = validate_dga(o) if isinstance(o, DgAlgebra) else validate_module(o)
            rep["verdict"] = r.ok
            rep["witnesses"] = {"violations": [str(v) for v in r.violations]}
            if not r.ok:
                code = EXIT_INVALID
        elif k == "cohomology":
            hd = objs[0].cohomology_dims()
            sup, inf, amp = sup_inf_amp(hd)
            rep["tables"] = {"H": _jsonable(hd)}
            rep["value"] = {"sup": sup, "inf": inf, "amp": amp}
        elif k == "bass":
            t = bass_table(objs[0], window)
            rep["tables"] = {"bass": t}
            rep["value"] = t.total()
        elif k == "ext":
            m, n = objs
            lo = n.n_min - max(m.cohomology_dims())
            t = ext(m, n, (lo, max(lo, window)))
            rep["tables"] = {"ext": t}
        elif k == "depth":
            rep["value"] = depth(objs[0])
        elif k == "projdim":
            v = projdim_verdict(objs[0], window)
            rep["verdict"] = v.value
            rep["value"] = v.witness.get("projdim")
            rep["witnesses"] = v.witness
        elif k == "injdim":
            r = injdim_sup(objs[0], window)
            rep["verdict"] = True if r.certified else "Unknown"
            rep["value"] = r.sup
            rep["tables"] = {"bass": r.table}
            rep["witnesses"] = r.witness
            if not r.certified:
                rep["caveats"].append("value is a lower bound from the window")
        elif k == "resolve":
            m = objs[0]
            g_min = m.n_min - window
            res = resolution(m, g_min)
            # the cached resolution may already reach further down
            rep["tables"] = {"betti": _jsonable({t: c for t, c in res.betti().items() if t >= g_min})}
            rep["value"] = {"finite": res.finite, "complete_below": res.complete_below}
        elif k == "mcm":
            v = is_mcm(objs[0])
            rep["verdict"] = v.value
            rep["witnesses"] = v.witness
        elif k == "gorenstein":
            a = objs[0]
            pv = gorenstein_pairing(a, seed)
            bv = gorenstein_bass(a, window, seed, pairing=pv)
            rep["verdict"] = pv.value
            rep["value"] = pv.witness.get("shift") if pv.is_true else None
            rep["witnesses"] = {"pairing": pv.witness, "bass": bv.to_json()}
        elif k == "condition7":
            a = objs[0]
            K = koszul_on_maximal_ideal(a)
            v = condition7_test(K, residue(K), window)
            rep["verdict"] = v.value
            rep["witnesses"] = v.witness
            rep["caveats"].append("filtration taken from the minimal semifree resolution")
        elif k == "audit":
            a = objs[0]
            r = audit_theorem(a, window, self.family(a, family), seed)
            rep["verdict"] = r.consistent
            rep["value"] = r.verdicts()
            rep["witnesses"] = r.to_json()
            rep["caveats"].append("universal conditions are checked over the declared family only")
            rep["caveats"].append("the pairing criterion is the working decision procedure for condition 1")
            if not r.consistent:
                code = EXIT_INCONSISTENT
        return to_jsonable(rep), code


def run(script: Script, config: Config | None = None) -> tuple:
    """``(exit_code, reports)``; reports are JSON-ready dicts in script order."""
    config = config or Config()
    it_ = Interpreter(config)
    reports = []
    code = EXIT_OK
    for item in script.items:
        try:
            if item.kind in ("field", "ring", "algebra", "module"):
                it_.declare(item)
                continue
            rep, c = it_.command(item)
        except InternalInconsistency as e:
            reports.append(_error_report(item, "internal inconsistency", e, config))
            return EXIT_INCONSISTENT, reports
        except ScriptError as e:
            reports.append(_error_report(item, "error", e, config))
            return e.code, reports
        except (AxiomFailure, ValueError, ArithmeticError, NameError) as e:
            reports.append(_error_report(item, "validation failure", e, config))
            return EXIT_INVALID, reports
        reports.append(rep)
        code = max(code, c)
    return code, reports


def _error_report(item, kind, err, config) -> dict:
    return to_jsonable({
        "command": item.kind,
        "target": item.name or (" ".join(item.body) if item.kind in COMMANDS else ""),
        "verdict": None,
        "value": None,
        "tables": {},
        "witnesses": {"error": kind, "message": str(err), "line": item.line},
        "window": config.window,
        "seed": config.seed,
        "caveats": [],
    })


# ---------------------------------------------------------------------------
# output


def render_json(reports: list) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in reports)


def render_md(reports: list) -> str:
    out = []
    for r in reports:
        out.append(f"## {r['command']} {r['target']}\n")
        out.append(f"- verdict: {r['verdict']}")
        out.append(f"- value: {json.dumps(r['value'], sort_keys=True)}")
        out.append(f"- window: {r['window']}, seed: {r['seed']}")
        for name, t in sorted(r["tables"].items()):
            out.append(f"- table {name}: {json.dumps(t, sort_keys=True)}")
        for c in r["caveats"]:
            out.append(f"- caveat: {c}")
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_arg_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dgaudit", description="Run a dgaudit script and print reports.")
    ap.add_argument("script", nargs="?", default="-", help="script file, or - for stdin")
    ap.add_argument("--window", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--family", default=None, help="comma-separated family: A,k,dual,koszul,maximal or module names")
    ap.add_argument("--format", choices=("json", "md"), default="json")
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP)
    ap.add_argument("--output", default=None, help="write reports to this file instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.script == "-":
            text = sys.stdin.read()
        else:
            with open(args.script, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"dgaudit: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        script = parse(text)
    except (DslSyntaxError, DslNameError) as e:
        print(f"dgaudit: {e}", file=sys.stderr)
        return EXIT_USAGE
    family = tuple(s for s in args.family.split(",") if s) if args.family else None
    config = Config(args.window, args.seed, family, args.format, args.cap)
    code, reports = run(script, config)
    text = render_json(reports) if args.format == "json" else render_md(reports)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
