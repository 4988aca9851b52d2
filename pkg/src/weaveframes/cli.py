"""Command-line interface.

Exit codes: 0 verdict affirmative, 1 verdict negative, 2 parse error,
3 validation error, 4 exhaustive cap exceeded. Every run prints exactly one
JSON report on standard output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import theorems
from .bounds import is_bessel, optimal_bounds, satisfies_lower
from .corpus import K_MODES, OMEGA_MODES, paper_example, random_instance, random_scaled_pair
from .exceptions import CapExceededError, FrameError
from .model import WeavingInstance
from .numerics import DEFAULT_TOL, Tolerances
from .problem import ProblemParseError, ProblemValidationError, digest_of, problem_to_dict, read_problem, write_json_atomic
from .theorems import AtomicSystem
from .validation import indices_from_mask
from .weaving import universal_bounds_exhaustive, universal_bounds_sampled

EXIT_YES, EXIT_NO, EXIT_PARSE, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3, 4
THEOREMS = ("bessel-sum", "characterization", "perturbation", "cross-synthesis", "atomic", "positive-gap")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ProblemParseError(f"usage: {message}")


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and getattr(x, "ndim", None) == 0:
        return _jsonable(x.item())
    return x


def _report(command, verdict, lower, upper, tol, digest, worst_subset=None, **extra) -> dict:
    out = {"command": command, "verdict": bool(verdict), "lower": lower, "upper": upper,
           "worst_subset": worst_subset, "tolerances": tol.as_dict(), "instance_digest": digest}
    out.update(extra)
    return out


def _cert_summary(cert) -> dict:
    return {"lower": cert.lower, "upper": cert.upper, "verdict": cert.verdict, "advisories": list(cert.advisories)}


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weaveframes", description="Certified bounds for controlled K-g-frames and weavings.")
    p.add_argument("--tol-psd", type=float, default=DEFAULT_TOL.psd_tol)
    p.add_argument("--tol-bisect", type=float, default=DEFAULT_TOL.bisect_tol)
    p.add_argument("--tol-commute", type=float, default=DEFAULT_TOL.commute_tol)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="optimal bounds of one family")
    c.add_argument("problem")
    c.add_argument("--family", choices=("lambda", "omega"), default="lambda")
    c.add_argument("--stated-lower", type=float)
    c.add_argument("--stated-upper", type=float)

    wv = sub.add_parser("weave", help="universal bounds over member subsets")
    wv.add_argument("problem")
    g = wv.add_mutually_exclusive_group(required=True)
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sample", type=int, metavar="N")
    wv.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("theorem", help="run a theorem checker")
    t.add_argument("name", choices=THEOREMS)
    t.add_argument("problem")
    t.add_argument("--candidate", type=float, help="lower bound tested by characterization")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--direction", choices=("forward", "backward"), default="forward")
    t.add_argument("--mode", choices=("per_index", "all_subsets"), default="per_index")
    t.add_argument("--omega-upper", type=float, help="stated Omega upper bound for perturbation")
    t.add_argument("--orthonormal-atoms", action="store_true",
                   help="use orthonormal local frames when the file has no atoms")

    e = sub.add_parser("example", help="emit the truncated worked example")
    e.add_argument("--dim", type=int, default=12)
    e.add_argument("--emit", required=True, metavar="PATH")

    gen = sub.add_parser("gen", help="emit a seeded random weaving pair")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--m", type=int, default=4)
    gen.add_argument("--dims", type=int, nargs="+")
    gen.add_argument("--spread", type=float, default=2.0)
    gen.add_argument("--dense", action="store_true", help="drop the commuting construction")
    gen.add_argument("--k-mode", choices=K_MODES, default="random")
    gen.add_argument("--omega-mode", choices=OMEGA_MODES, default="independent")
    gen.add_argument("--emit", required=True, metavar="PATH")
    return p


def _check(args, tol):
    prob = read_problem(args.problem, tol)
    inst = prob.instance
    if isinstance(inst, WeavingInstance):
        target = inst.lambda_instance() if args.family == "lambda" else inst.omega_instance()
    elif args.family == "omega":
        raise ProblemValidationError("omega: the problem has no Omega family")
    else:
        target = inst
    cert = optimal_bounds(target, tol)
    verdict = cert.verdict
    extra = {"family": args.family, "advisories": list(cert.advisories)}
    if args.stated_lower is not None:
        extra["stated_lower_holds"] = satisfies_lower(target, args.stated_lower, tol)
        verdict &= extra["stated_lower_holds"]
    if args.stated_upper is not None:
        extra["stated_upper_holds"] = is_bessel(target, args.stated_upper, tol)
        verdict &= extra["stated_upper_holds"]
    if isinstance(inst, WeavingInstance):
        other = inst.omega_instance() if args.family == "lambda" else inst.lambda_instance()
        extra["other_family"] = _cert_summary(optimal_bounds(other, tol))
    return _report("check", verdict, cert.lower, cert.upper, tol, prob.digest, **extra)


def _weave(args, tol):
    prob = read_problem(args.problem, tol)
    w = prob.instance
    if not isinstance(w, WeavingInstance):
        raise ProblemValidationError("omega: weave needs both a lambda and an omega family")
    if args.exhaustive:
        cert = universal_bounds_exhaustive(w, tol)
    else:
        cert = universal_bounds_sampled(w, args.sample, args.seed, tol)
    return _report("weave", cert.verdict, cert.lower, cert.upper, tol, prob.digest,
                   worst_subset=indices_from_mask(cert.worst_subset, w.m),
                   upper_subset=indices_from_mask(cert.upper_subset, w.m),
                   sampled=cert.sampled, subsets_evaluated=cert.subsets_evaluated,
                   advisories=list(cert.advisories))


def _theorem(args, tol):
    prob = read_problem(args.problem, tol)
    w = prob.instance
    if not isinstance(w, WeavingInstance):
        raise ProblemValidationError("omega: theorem checkers need a weaving pair")
    name = args.name
    if name == "bessel-sum":
        rep = theorems.check_bessel_sum(w, tol)
    elif name == "characterization":
        if args.candidate is None:
            raise ProblemParseError("usage: characterization needs --candidate")
        rep = theorems.check_characterization(w, args.candidate, tol, seed=args.seed)
    elif name == "perturbation":
        if prob.expansion is None:
            raise ProblemValidationError("expansion: perturbation needs an 'expansion' field")
        rep = theorems.check_perturbation_scalars(w, prob.expansion, tol, omega_upper=args.omega_upper)
    elif name == "cross-synthesis":
        rep = theorems.check_cross_synthesis(w, tol)
    elif name == "atomic":
        atoms = prob.atoms
        if atoms is None:
            if not args.orthonormal_atoms:
                raise ProblemValidationError("atoms: atomic needs an 'atoms' field or --orthonormal-atoms")
            atoms = AtomicSystem.orthonormal(w)
        rep = theorems.check_atomic_equivalence(w, atoms, args.direction, tol)
    else:
        rep = theorems.check_positive_gap(w, args.mode, tol)
    verdict = rep.hypotheses_hold and rep.oracle_agrees is not False
    body = rep.to_dict(w.m)
    failing = body.pop("failing_subset")
    return _report(f"theorem {name}", verdict, rep.claimed_lower, rep.claimed_upper, tol, prob.digest,
                   worst_subset=failing, **body)


def _emit(command, path, data, tol, **extra):
    write_json_atomic(path, data)
    return _report(command, True, None, None, tol, digest_of(data), path=path, **extra)


def _example(args, tol):
    w, expansion = paper_example(args.dim, tol)
    data = problem_to_dict(w, expansion, AtomicSystem.orthonormal(w))
    return _emit("example", args.emit, data, tol, dim=args.dim)


def _gen(args, tol):
    kwargs = dict(dims=args.dims, spectrum_spread=args.spread, k_mode=args.k_mode, tol=tol)
    try:
        if args.omega_mode == "scaled":
            if args.dense:
                raise ValueError("scaled Omega members need the commuting construction")
            w, expansion = random_scaled_pair(args.seed, args.n, args.m, **kwargs)
        else:
            w = random_instance(args.seed, args.n, args.m, commuting=not args.dense, **kwargs)
            expansion = None
    except ValueError as exc:
        if isinstance(exc, FrameError):
            raise
        raise ProblemParseError(f"usage: {exc}") from None
    data = problem_to_dict(w, expansion)
    return _emit("gen", args.emit, data, tol, seed=args.seed)


_COMMANDS = {"check": _check, "weave": _weave, "theorem": _theorem, "example": _example, "gen": _gen}


def run_command(argv=None, stdout=None, stderr=None) -> int:
    """Run one subcommand; returns the exit code after printing the report."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        try:
            tol = Tolerances(args.tol_psd, args.tol_bisect, args.tol_commute)
        except ValueError as exc:
            raise ProblemParseError(f"usage: {exc}") from None
        report = _COMMANDS[args.command](args, tol)
        code = EXIT_YES if report["verdict"] else EXIT_NO
    except ProblemParseError as exc:
        report, code = {"command": None, "error": "parse", "message": str(exc)}, EXIT_PARSE
    except CapExceededError as exc:
        report, code = {"command": None, "error": "cap", "message": str(exc)}, EXIT_CAP
    except (ProblemValidationError, FrameError) as exc:
        report, code = {"command": None, "error": "validation", "message": str(exc)}, EXIT_INVALID
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    text = json.dumps(_jsonable(report), indent=2)
    stdout.write(text + "\n")
    if code >= EXIT_PARSE:
        stderr.write(report["message"] + "\n")
    return code


def main() -> None:
    sys.exit(run_command())
