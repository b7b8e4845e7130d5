"""Command-line front end.

Exit codes: 0 when every requested item is solved and verified, 1 when
residuals remain or a check fails, 2 on malformed input or other errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .curvature import CurvatureEngine, DegenerateMetric, signature_index
from .exact import QSqrt3, SqrtExt, format_rational, simplify_scalar
from .poly import PolynomialSyntaxError, VariableTable, parse_polynomial

SCHEMA = "curvlie.report/1"


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    cases: list = field(default_factory=list)
    det_sign: int = 1
    r_samples: list = field(default_factory=list)
    max_pairs: int | None = None
    max_monomials: int | None = None
    jobs: int = 1
    fmt: str = "json"
    output: str | None = None
    verbose: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.det_sign not in (1, -1):
            raise InputError("--det-sign must be +1 or -1")
        for b in (self.max_pairs, self.max_monomials):
            if b is not None and b <= 0:
                raise InputError("budgets must be positive")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


@dataclass
class Report:
    command: str
    items: list = field(default_factory=list)
    exit_code: int = 0
    timing: dict = field(default_factory=dict)

    def to_json(self, with_timing: bool = False) -> dict:
        out = {"schema": SCHEMA, "version": __version__, "command": self.command,
               "exit_code": self.exit_code, "items": self.items}
        if with_timing:
            out["timing"] = self.timing
        return out


# ---------------------------------------------------------------------------
# Scalars and metric files


_S3_TABLE = VariableTable(["sqrt3"])


def parse_scalar(value):
    """Exact scalar from JSON: ``"p/q"``, an int, ``{"a", "b"}`` for
    ``a + b*sqrt3``, or text such as ``"1/2 - 2/3*sqrt3"``."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"not an exact scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, dict):
        if "sqrt" in value:
            return simplify_scalar(SqrtExt(parse_scalar(value["a"]), parse_scalar(value["b"]),
                                           parse_scalar(value["sqrt"])))
        try:
            return simplify_scalar(QSqrt3(parse_scalar(value.get("a", 0)), parse_scalar(value.get("b", 0))))
        except TypeError as exc:
            raise InputError(str(exc)) from None
    if isinstance(value, str):
        try:
            p = parse_polynomial(value.replace("√3", "sqrt3"), _S3_TABLE)
        except (PolynomialSyntaxError, KeyError, ValueError) as exc:
            raise InputError(f"cannot parse scalar {value!r}: {exc}") from None
        return simplify_scalar(p.evaluate({"sqrt3": QSqrt3(0, 1)}))
    raise InputError(f"not an exact scalar: {value!r}")


def format_scalar(x) -> str:
    """Text form that :func:`parse_scalar` reads back."""
    x = simplify_scalar(x)
    if isinstance(x, (QSqrt3, SqrtExt)):
        return str(x)
    return format_rational(x)


def load_metric_file(path) -> tuple[list, object, object]:
    """Read ``{"metric": [[...]], "lambda": ..., "algebra": {...}}``.

    ``algebra`` is optional and defaults to sl(2,R) + sl(2,R).
    """
    from .liealg import LieAlgebra, LieAlgebraError, sl2_sum

    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read metric file {path}: {exc}") from None
    if not isinstance(data, dict) or "metric" not in data:
        raise InputError("metric file must be an object with a 'metric' field")
    rows = data["metric"]
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) or len(r) != len(rows) for r in rows):
        raise InputError("metric must be a square list of rows")
    g = [[parse_scalar(x) for x in row] for row in rows]
    if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
        raise InputError("metric must be symmetric")
    try:
        algebra = LieAlgebra.from_json(data["algebra"]) if "algebra" in data else sl2_sum()
    except LieAlgebraError as exc:
        raise InputError(f"bad algebra: {exc}") from None
    if algebra.dim != len(g):
        raise InputError("metric size does not match the algebra dimension")
    lam = parse_scalar(data["lambda"]) if "lambda" in data else None
    return g, lam, algebra


def metric_text(g) -> str:
    return "\n".join("  ".join(format_scalar(x) for x in row) for row in g)


# ---------------------------------------------------------------------------
# Subcommands


def _budget(cfg: RunConfig):
    from .groebner import Budget

    return Budget.from_env(cfg.max_pairs, cfg.max_monomials)


def _solve_job(args):
    label, r, det_sign, max_pairs, max_monomials = args
    from .einstein import parse_case, make_case, solve_case
    from .groebner import Budget

    case = make_case(label, r) if r is not None else parse_case(label)
    t0 = time.perf_counter()
    res = solve_case(case, det_sign, budget=Budget.from_env(max_pairs, max_monomials))
    data = res.to_json()
    data.pop("stats", None)
    return data, time.perf_counter() - t0


def _expand_cases(cfg: RunConfig) -> list:
    from .einstein import FAMILIES, TABLE_CASES

    labels = cfg.cases or list(TABLE_CASES)
    jobs = []
    for label in labels:
        label = label.replace(" ", "")
        if label in FAMILIES and "r" in label:
            if not cfg.r_samples:
                raise InputError(f"{label} needs --r")
            jobs.extend((label, r, cfg.det_sign, cfg.max_pairs, cfg.max_monomials) for r in cfg.r_samples)
        else:
            jobs.append((label, None, cfg.det_sign, cfg.max_pairs, cfg.max_monomials))
    return jobs


def cmd_solve(cfg: RunConfig) -> Report:
    from .einstein import CaseError, make_case, parse_case

    jobs = _expand_cases(cfg)
    for label, r, *_ in jobs:  # validate before any heavy work
        try:
            make_case(label, r) if r is not None else parse_case(label)
        except CaseError as exc:
            raise InputError(str(exc)) from None
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_solve_job, jobs))
    else:
        results = [_solve_job(j) for j in jobs]
    rep = Report("solve")
    for data, dt in results:
        rep.items.append(data)
        rep.timing[data["case"]] = round(dt, 3)
    ok = all(d["status"] == "solved" for d, _ in results)
    rep.exit_code = 0 if ok else 1
    return rep


def cmd_invariant_space(cfg: RunConfig) -> Report:
    from .einstein import CaseError, make_case, invariant_tensor_space, parse_case

    rep = Report("invariant-space")
    for label in cfg.cases:
        rs = cfg.r_samples or [None]
        for r in rs:
            try:
                case = make_case(label, r) if r is not None else parse_case(label)
            except CaseError as exc:
                raise InputError(str(exc)) from None
            space = invariant_tensor_space(case.element)
            rep.items.append({
                "case": case.label,
                "dimension": space.dimension,
                "parameters": space.free,
                "template": [[str(p) for p in row] for row in space.template],
            })
    return rep


def cmd_verify(cfg: RunConfig) -> Report:
    from . import catalog as cat
    from .einstein import verify_einstein

    rep = Report("verify")
    if cfg.options.get("catalog"):
        for fam in cat.catalog_families():
            recs = cat.verify_family_samples(fam)
            symbolic = fam.verify_symbolic() if (fam.free or fam.discrete) else None
            ok = all(r.verified and r.det == 1 and r.index == 2 for r in recs) and symbolic is not False
            rep.items.append({
                "name": fam.name, "case": fam.case, "samples": len(recs),
                "symbolic": symbolic, "verified": ok,
                "lambda": recs[0].to_json()["lambda"] if recs else None,
            })
    if cfg.options.get("metric"):
        g, lam, algebra = load_metric_file(cfg.options["metric"])
        if cfg.options.get("lambda") is not None:
            lam = parse_scalar(cfg.options["lambda"])
        if lam is None:
            raise InputError("--lambda is required (or a 'lambda' field in the file)")
        try:
            ok = verify_einstein(g, lam, algebra)
        except DegenerateMetric:
            raise InputError("metric is degenerate") from None
        from . import linalg as la

        neg, pos, zero = signature_index(g)
        rep.items.append({"metric": [[format_scalar(x) for x in row] for row in g],
                          "lambda": format_scalar(lam), "det": format_scalar(la.det(g)),
                          "index": neg, "verified": ok})
    if not rep.items:
        raise InputError("verify needs --catalog or --metric")
    rep.exit_code = 0 if all(i["verified"] for i in rep.items) else 1
    return rep


def cmd_catalog(cfg: RunConfig) -> Report:
    from .catalog import known_solution_catalog

    rep = Report("catalog")
    recs = known_solution_catalog(symbolic=cfg.options.get("symbolic", False))
    rep.items = [r.to_json() for r in recs]
    rep.exit_code = 0 if all(r.verified for r in recs) else 1
    return rep


def cmd_curvature(cfg: RunConfig) -> Report:
    g, lam, algebra = load_metric_file(cfg.options["metric"])
    try:
        engine = CurvatureEngine(algebra, g)
    except DegenerateMetric:
        raise InputError("metric is degenerate") from None
    ric = engine.ricci_matrix()
    nonzero_dr = engine.nabla_riemann.nonzero_components() if cfg.options.get("nabla") else None
    item = {
        "ricci": [[format_scalar(x) for x in row] for row in ric],
        "riemann_nonzero": len(engine.riemann.nonzero_components()),
        "index": signature_index(g)[0],
    }
    if lam is not None:
        item["einstein"] = engine.is_einstein(lam)
    if nonzero_dr is not None:
        item["nabla_riemann_zero"] = not nonzero_dr
    rep = Report("curvature", [item])
    return rep


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def cmd_groebner(cfg: RunConfig) -> Report:
    from .groebner import BudgetExceeded, buchberger, certificate

    texts = cfg.cases
    if not texts:
        raise InputError("groebner needs at least one polynomial")
    names = cfg.options.get("vars")
    if names:
        names = [v.strip() for v in names.split(",") if v.strip()]
    else:
        names = []
        for t in texts:
            for m in _IDENT.findall(t):
                if m not in names:
                    names.append(m)
    table = VariableTable(names or ["x"])
    try:
        gens = [parse_polynomial(t, table) for t in texts]
    except (PolynomialSyntaxError, KeyError, ValueError) as exc:
        raise InputError(f"cannot parse polynomial: {exc}") from None
    rep = Report("groebner")
    try:
        B = buchberger(gens, cfg.options.get("order", "lex"), budget=_budget(cfg), jobs=cfg.jobs)
    except BudgetExceeded as exc:
        rep.items.append({"status": "partial", "message": str(exc),
                          "partial": [str(p) for p in exc.partial]})
        rep.exit_code = 1
        return rep
    item = {"status": "solved", "order": B.order.name,
            "basis": B.to_strings()}
    if cfg.options.get("certificate"):
        cert = certificate(B, gens)
        item["certificate"] = cert
        if not cert["valid"]:
            rep.exit_code = 1
    rep.items.append(item)
    return rep


COMMANDS = {
    "solve": cmd_solve,
    "invariant-space": cmd_invariant_space,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "curvature": cmd_curvature,
    "groebner": cmd_groebner,
}


def run(cfg: RunConfig) -> Report:
    return COMMANDS[cfg.subcommand](cfg)


def emit_report(rep: Report, fmt: str = "json", with_timing: bool = False) -> bytes:
    if fmt == "json":
        return (json.dumps(rep.to_json(with_timing), indent=2) + "\n").encode()
    lines = [f"# {rep.command} (exit {rep.exit_code})"]
    for item in rep.items:
        head = item.get("case") or item.get("name") or item.get("status") or ""
        lines.append(f"== {head}")
        for key, val in item.items():
            if key in ("metric", "template", "ricci") and isinstance(val, list):
                lines.append(f"{key}:")
                lines.extend("  " + "  ".join(_text_cell(x) for x in row) for row in val)
            elif key == "solutions":
                for s in val:
                    lines.append(f"solution lambda={_text_cell(s['lambda'])} det={_text_cell(s['det'])} "
                                 f"index={s['index']} verified={s['verified']}")
                    lines.extend("  " + "  ".join(_text_cell(x) for x in row) for row in s["metric"])
            elif key not in ("case", "name"):
                lines.append(f"{key}: {json.dumps(val) if isinstance(val, (list, dict)) else val}")
    if with_timing and rep.timing:
        lines.append(f"timing: {json.dumps(rep.timing)}")
    return ("\n".join(lines) + "\n").encode()


def _text_cell(x) -> str:
    if isinstance(x, dict):
        return format_scalar(parse_scalar(x))
    return str(x)


# ---------------------------------------------------------------------------
# Argument parsing


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget-pairs", type=int)
    p.add_argument("--budget-monomials", type=int)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.add_argument("-v", "--verbose", action="count", default=0)


def _sign(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError("must be +1 or -1")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvlie", description="Left-invariant Einstein metrics on SL(2,R) x SL(2,R).")
    ap.add_argument("--version", action="version", version=f"curvlie {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="solve the Einstein system for generator cases")
    p.add_argument("cases", nargs="*", help='e.g. "(E1,rE1)" or "(N,N)"; default: all table cases')
    p.add_argument("--det-sign", type=_sign, default=1)
    p.add_argument("--r", action="append", default=[], help="value of r (repeatable)")
    _common(p)

    p = sub.add_parser("invariant-space", help="ad-invariant symmetric forms for a generator")
    p.add_argument("cases", nargs="+")
    p.add_argument("--r", action="append", default=[])
    _common(p)

    p = sub.add_parser("verify", help="verify catalog entries or a metric file")
    p.add_argument("--catalog", action="store_true")
    p.add_argument("--metric")
    p.add_argument("--lambda", dest="lam")
    _common(p)

    p = sub.add_parser("catalog", help="print the catalog of known solutions")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.add_argument("--symbolic", action="store_true", help="parametric rows with their relations")
    _common(p)

    p = sub.add_parser("curvature", help="curvature of a metric file")
    p.add_argument("--metric", required=True)
    p.add_argument("--nabla", action="store_true", help="also test whether the covariant derivative of R vanishes")
    _common(p)

    p = sub.add_parser("groebner", help="reduced Groebner basis of polynomials")
    p.add_argument("cases", nargs="+", metavar="poly")
    p.add_argument("--order", choices=("lex", "grlex", "grevlex"), default="lex")
    p.add_argument("--vars", help="comma-separated variable order")
    p.add_argument("--certificate", action="store_true")
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = {}
    for key in ("catalog", "metric", "symbolic", "nabla", "order", "vars", "certificate"):
        if hasattr(ns, key):
            opts[key] = getattr(ns, key)
    if hasattr(ns, "lam"):
        opts["lambda"] = ns.lam
    fmt = ns.format
    if getattr(ns, "json", False):
        fmt = "json"
    return RunConfig(
        subcommand=ns.subcommand,
        cases=list(getattr(ns, "cases", []) or []),
        det_sign=getattr(ns, "det_sign", 1),
        r_samples=list(getattr(ns, "r", []) or []),
        max_pairs=ns.budget_pairs,
        max_monomials=ns.budget_monomials,
        jobs=ns.jobs,
        fmt=fmt,
        output=ns.output,
        verbose=ns.verbose,
        options=opts,
    )


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from_args(ns)
        rep = run(cfg)
    except (InputError, ValueError) as exc:
        print(f"curvlie: error: {exc}", file=sys.stderr)
        return 2
    data = emit_report(rep, cfg.fmt, ns.timings)
    if cfg.output:
        Path(cfg.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
