"""Command-line frontend.

Exit codes: 0 success, 1 invalid input or usage, 2 an audit found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import audit, cnd as cnd_mod, discrete, figures, logconcave
from .noise import SpecError, noise_from_json, pmf_from_json
from .report import AuditReport
from .specs import family_from_json, tradeoff_from_json
from .tradeoff import scalar_summaries

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


@dataclass
class CommandResult:
    exit_code: int
    paths: list[Path] = field(default_factory=list)
    summary: str = ""


class UsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())

    def exit(self, status=0, message=None):
        # only reached after --help has printed its text
        raise _HelpShown(message or "")


class _HelpShown(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _read_json(value: str, what: str):
    """JSON given inline or as a path to a file."""
    text = value
    if not value.lstrip().startswith(("{", "[")):
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise SpecError(what, f"cannot read {value!r} ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(what, f"invalid JSON ({exc.msg})") from None


def _base_dir(value: str) -> Path:
    p = Path(value)
    return p.parent if not value.lstrip().startswith("{") else Path(".")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fdpnoise", description="Canonical noise distributions for f-DP.")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def spec_arg(sp):
        sp.add_argument("--spec", required=True, help="tradeoff spec JSON or file")

    def report_args(sp):
        sp.add_argument("--json", action="store_true", help="print the report as JSON")
        sp.add_argument("--limit", type=int, default=None, help="max table rows")

    tr = sub.add_parser("tradeoff").add_subparsers(dest="cmd", required=True,
                                                    parser_class=_Parser)
    sp = tr.add_parser("eval")
    spec_arg(sp)
    sp.add_argument("--alpha", required=True, type=_float_list)
    spec_arg(tr.add_parser("summary"))

    cn = sub.add_parser("cnd").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = cn.add_parser("cdf")
    spec_arg(sp)
    sp.add_argument("--x", required=True, type=_float_list)
    sp = cn.add_parser("quantile")
    spec_arg(sp)
    sp.add_argument("--u", required=True, type=_float_list)
    sp = cn.add_parser("sample")
    spec_arg(sp)
    sp.add_argument("--seed", required=True, type=int)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--out")
    sp = cn.add_parser("table")
    spec_arg(sp)
    sp.add_argument("--xmin", type=float, default=-5.0)
    sp.add_argument("--xmax", type=float, default=5.0)
    sp.add_argument("--step", type=float, default=0.1)
    sp.add_argument("--out", required=True)
    sp = cn.add_parser("qtable")
    spec_arg(sp)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--out", required=True)

    ds = sub.add_parser("discrete").add_subparsers(dest="cmd", required=True,
                                                    parser_class=_Parser)
    sp = ds.add_parser("pmf")
    spec_arg(sp)
    sp.add_argument("--delta", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp = ds.add_parser("verify")
    spec_arg(sp)
    sp.add_argument("--pmf", required=True, help="pmf JSON {\"lo\": ..., \"mass\": [...]}")
    sp.add_argument("--delta", type=int, default=1)
    report_args(sp)

    au = sub.add_parser("audit").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = au.add_parser("anti")
    spec_arg(sp)
    sp.add_argument("--noise", required=True, help="noise spec JSON or file")
    sp.add_argument("--tmax", type=int, default=10)
    report_args(sp)
    sp = au.add_parser("dominance")
    spec_arg(sp)
    sp.add_argument("--noise", required=True, help="noise spec JSON or file")
    sp.add_argument("--family", action="store_true",
                    help="use the log-concave CND of the spec's divisible family")
    sp.add_argument("--tmax", type=int, default=10, help="integer t range for pmf rivals")
    report_args(sp)

    fg = sub.add_parser("figures")
    fg.add_argument("name", choices=figures.FIGURES)
    fg.add_argument("--out", required=True)
    return p


def _values(xs) -> str:
    return "\n".join(figures.fmt(v) for v in np.atleast_1d(xs))


def _report_result(rep: AuditReport, args) -> CommandResult:
    text = rep.to_json() if args.json else rep.to_table(args.limit)
    return CommandResult(EXIT_VIOLATION if rep.violations else EXIT_OK, [], text)


def _dispatch(args) -> CommandResult:
    if args.group == "figures":
        path = figures.write_figure(args.name, args.out)
        return CommandResult(EXIT_OK, [path], f"wrote {path}")

    f = tradeoff_from_json(_read_json(args.spec, "spec"))
    if args.group == "tradeoff":
        if args.cmd == "eval":
            return CommandResult(EXIT_OK, [], _values(f(np.array(args.alpha))))
        s = scalar_summaries(f)
        return CommandResult(EXIT_OK, [], "\n".join([
            f"c_f {figures.fmt(s.c)}", f"TV {figures.fmt(s.tv)}", f"eps_f {figures.fmt(s.eps)}"]))

    if args.group == "cnd":
        c = cnd_mod.construct(f)
        if args.cmd == "cdf":
            return CommandResult(EXIT_OK, [], _values(c.cdf(np.array(args.x))))
        if args.cmd == "quantile":
            return CommandResult(EXIT_OK, [], _values(c.quantile(np.array(args.u))))
        if args.cmd == "sample":
            xs = cnd_mod.sample(c, args.seed, args.n)
            if args.out:
                path = figures.write_csv(args.out, ["x"], [xs])
                return CommandResult(EXIT_OK, [path], f"wrote {path}")
            return CommandResult(EXIT_OK, [], _values(xs))
        if args.cmd == "table":
            if not args.step > 0 or args.xmax < args.xmin:
                raise SpecError("step", "need step > 0 and xmin <= xmax")
            n = int(np.floor((args.xmax - args.xmin) / args.step + 1e-9)) + 1
            x = args.xmin + args.step * np.arange(n)
            path = figures.write_csv(args.out, ["x", "F"], [x, c.cdf(x)])
            return CommandResult(EXIT_OK, [path], f"wrote {path}")
        if not 0 < args.step < 1:
            raise SpecError("step", "must lie in (0, 1)")
        u = np.arange(1, int(np.ceil(1 / args.step))) * args.step
        u = u[u < 1]
        path = figures.write_csv(args.out, ["u", "quantile"], [u, c.quantile(u)])
        return CommandResult(EXIT_OK, [path], f"wrote {path}")

    if args.group == "discrete":
        if args.delta < 1:
            raise SpecError("delta", "must be a positive integer")
        if args.cmd == "pmf":
            pmf = discrete.round_cnd(cnd_mod.construct(f), args.delta).pmf
            x = pmf.support
            path = figures.write_csv(args.out, ["x", "pmf", "cdf"], [x, pmf.mass, pmf.cdf(x)])
            return CommandResult(EXIT_OK, [path], f"wrote {path}")
        pmf = pmf_from_json(_read_json(args.pmf, "pmf"))
        rep = discrete.verify_discrete_cnd(discrete.DiscreteCND(pmf, f, args.delta))
        return _report_result(rep, args)

    spec = noise_from_json(_read_json(args.noise, "noise"), _base_dir(args.noise))
    if args.cmd == "anti":
        return _report_result(audit.audit_noise(spec, f, args.tmax), args)
    rival = spec.noise
    if rival.is_discrete:
        rep = discrete.dominance_audit_discrete(discrete.unique_sens1(f), rival.pmf,
                                                t_max=args.tmax)
    else:
        if args.family:
            c = logconcave.construct_logconcave_cnd(family_from_json(_read_json(args.spec, "spec")))
        else:
            c = cnd_mod.construct(f)
        rep = logconcave.dominance_audit(c, rival)
    return _report_result(rep, args)


def run(argv: Optional[Sequence[str]] = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        return CommandResult(EXIT_INVALID, [], f"error: {exc}\n{exc.usage}".rstrip())
    except _HelpShown:
        return CommandResult(EXIT_OK, [], "")
    try:
        return _dispatch(args)
    except SpecError as exc:
        return CommandResult(EXIT_INVALID, [], f"invalid input: {exc}")
    except (ValueError, OSError) as exc:
        return CommandResult(EXIT_INVALID, [], f"error: {exc}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run(argv)
    stream = sys.stderr if result.exit_code == EXIT_INVALID else sys.stdout
    if result.summary:
        print(result.summary, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
