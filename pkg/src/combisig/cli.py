"""Command-line entry point.

Subcommands: ``solve`` (full / reduced / relaxed-obedience solvers),
``enumerate`` (best-response catalog), ``validate`` (exact persuasiveness
check plus a Monte Carlo estimate of the sender value), ``gen`` (compile a
linear system or public-persuasion spec into an instance), and
``check-nondegeneracy``.

Reports are canonical JSON on stdout and contain no wall-clock fields, so
the same instance, flags, and seed always produce byte-identical output.
Effort counters (pivots, cut rounds, ellipsoid iterations) stand in for
timing; ``--json-logs`` adds timestamped progress lines on stderr.

Exit codes: 0 success, 1 usage error (bad flags, unreadable input),
2 solver-level refusal (infeasible, too large, unsupported combination).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from math import sqrt

from . import best_response, cce, jsonio, persuasion, reductions
from .errors import CombisigError, InstanceFormatError, ParameterError
from .model import Instance, Posterior, Sense, expected_value, posterior, signal_mass
from .rationals import ZERO

USAGE_EXIT = 1
SOLVER_EXIT = 2
DEFAULT_SAMPLES = 10_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        self.print_usage(sys.stderr)
        raise SystemExit(
            self.prog + ": error: " + message
        ) from None


def _fail_usage(message: str) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="combisig", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the primary artifact to this path")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (Monte Carlo)")
    common.add_argument(
        "--max-actions", type=int, default=None, help="cap on enumerated actions"
    )
    common.add_argument(
        "--json-logs", action="store_true", help="emit progress lines on stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", parents=[common], help="solve an instance")
    p_solve.add_argument("instance", help="instance JSON path")
    p_solve.add_argument(
        "--mode", choices=("full", "reduced", "cce"), default="full"
    )
    p_solve.add_argument("--alpha", default="1", help="oracle factor, p/q")
    p_solve.add_argument("--epsilon", default="1/10", help="tolerance, p/q")
    p_solve.add_argument("--oracle", choices=("exact", "half-greedy"), default="exact")
    p_solve.add_argument(
        "--engine", choices=("cutting-plane", "ellipsoid"), default="cutting-plane"
    )

    p_enum = sub.add_parser("enumerate", parents=[common], help="best-response catalog")
    p_enum.add_argument("instance")

    p_val = sub.add_parser("validate", parents=[common], help="check a scheme")
    p_val.add_argument("instance")
    p_val.add_argument("scheme")
    p_val.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    p_gen = sub.add_parser("gen", parents=[common], help="generate an instance")
    p_gen.add_argument("spec", help="system / public-persuasion spec JSON path")
    p_gen.add_argument(
        "--from", dest="source", choices=("lineq", "public"), required=True
    )
    p_gen.add_argument(
        "--target", choices=("uniform", "graphic", "path", "partition"), required=True
    )

    p_nd = sub.add_parser(
        "check-nondegeneracy", parents=[common], help="audit utility-vector families"
    )
    p_nd.add_argument("instance")
    return parser


def _log(args, message: str) -> None:
    if args.json_logs:
        line = {"ts": round(time.time(), 3), "msg": message}
        print(json.dumps(line), file=sys.stderr)


def _load_instance(path: str) -> Instance:
    try:
        raw = jsonio.load_json(path)
    except FileNotFoundError:
        raise _fail_usage(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise _fail_usage(f"{path} is not valid JSON: {exc}")
    return jsonio.instance_from_json(raw)


def _emit_report(report: dict, args) -> None:
    print(jsonio.dumps_canonical(report))


def _fraction_str(v: Fraction) -> str | int:
    return jsonio.format_rational(v)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    digest = jsonio.instance_digest(instance)
    _log(args, f"solving {args.instance} mode={args.mode}")
    warnings: list[str] = []
    if args.mode == "full":
        result = persuasion.solve_full(instance, max_actions=args.max_actions)
    elif args.mode == "reduced":
        result = persuasion.solve_reduced(instance)
    else:
        view = cce.make_view(
            instance,
            oracle=args.oracle,
            epsilon=Fraction(args.epsilon),
            max_actions=args.max_actions,
        )
        if Fraction(args.alpha) != view.alpha:
            warnings.append(
                f"--alpha {args.alpha} ignored: the {view.oracle.kind} oracle "
                f"has factor {view.alpha}"
            )
        if args.engine == "cutting-plane":
            result = cce.solve_cce_exact(view)
        else:
            result = cce.solve_cce_approx(view)
    scheme_json = jsonio.scheme_to_json(result.scheme, digest)
    report = {
        "command": "solve",
        "mode": args.mode,
        "instance": args.instance,
        "digest": digest,
        "value": _fraction_str(result.sender_value),
        "method": result.method,
        "catalog_size": result.catalog_size,
        "effort": {
            k: v for k, v in sorted(result.lp_stats.items()) if k != "trace"
        },
        "warnings": warnings,
    }
    if args.out:
        jsonio.save_json(args.out, scheme_json)
        report["scheme_path"] = args.out
    else:
        report["scheme"] = scheme_json
    _emit_report(report, args)
    return 0


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    instance = _load_instance(args.instance)
    digest = jsonio.instance_digest(instance)
    _log(args, f"enumerating best responses for {args.instance}")
    catalog = best_response.enumerate_best_responses(instance)
    body = {
        "command": "enumerate",
        "instance": args.instance,
        "digest": digest,
        "actions": [list(a) for a in catalog.actions],
        "witnesses": [
            [_fraction_str(x) for x in w] for w in catalog.witnesses
        ],
        "num_cells": catalog.num_cells,
        "perturbed": catalog.perturbed,
        "degeneracy": {
            "clean": catalog.degeneracy.clean,
            "method": catalog.degeneracy.method,
            "families_checked": catalog.degeneracy.families_checked,
        },
        "warnings": [],
    }
    if args.out:
        jsonio.save_json(args.out, body)
        body = {"command": "enumerate", "catalog_path": args.out, "digest": digest}
    _emit_report(body, args)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _draw(rng: random.Random, pairs) -> int:
    """Index into ``pairs`` (item, Fraction weight) by exact cumulative draw."""
    r = Fraction(rng.getrandbits(53), 1 << 53)
    acc = ZERO
    for idx, (_, w) in enumerate(pairs):
        acc += w
        if r < acc:
            return idx
    return len(pairs) - 1


def _tie_broken_response(instance: Instance, xi: Posterior):
    actions = persuasion.enumerate_actions(instance.constraint, instance.num_elements)
    maximize = instance.sense is Sense.MAX
    r_vals = [(S, expected_value(instance.receiver, xi, S)) for S in actions]
    best_r = max(v for _, v in r_vals) if maximize else min(v for _, v in r_vals)
    ties = [S for S, v in r_vals if v == best_r]
    s_vals = [(S, expected_value(instance.sender, xi, S)) for S in ties]
    best_s = max(v for _, v in s_vals) if maximize else min(v for _, v in s_vals)
    return min(S for S, v in s_vals if v == best_s)


def cmd_validate(args) -> int:
    instance = _load_instance(args.instance)
    digest = jsonio.instance_digest(instance)
    try:
        raw = jsonio.load_json(args.scheme)
        scheme, scheme_digest = jsonio.scheme_from_json(raw)
    except FileNotFoundError:
        raise _fail_usage(f"no such file: {args.scheme}")
    except json.JSONDecodeError as exc:
        raise _fail_usage(f"{args.scheme} is not valid JSON: {exc}")
    warnings = []
    if scheme_digest is not None and scheme_digest != digest:
        raise _fail_usage("scheme was computed for a different instance (digest mismatch)")

    _log(args, f"validating {args.scheme} with {args.samples} samples")
    report_exact = persuasion.check_persuasive(instance, scheme)
    lp_value = persuasion.expected_sender_value(instance, scheme)

    # The receiver best-responds to each recommendation's posterior with
    # sender-favoring ties; sample (state, recommendation) and score.
    responses = {}
    for action in scheme.support:
        mass = signal_mass(instance, scheme, action)
        if mass == 0:
            continue
        xi = posterior(instance, scheme, action)
        responses[action] = _tie_broken_response(instance, xi)

    rng = random.Random(args.seed)
    prior_pairs = [(t, instance.prior[t]) for t in range(instance.num_states)]
    per_state = {
        t: [(a, p) for (tt, a), p in sorted(scheme.phi.items()) if tt == t and p > 0]
        for t in range(instance.num_states)
    }
    total = ZERO
    total_sq = ZERO
    n = args.samples
    for _ in range(n):
        t = prior_pairs[_draw(rng, prior_pairs)][0]
        action = per_state[t][_draw(rng, per_state[t])][0]
        value = instance.sender.value(t, responses[action])
        total += value
        total_sq += value * value
    mean = total / n
    var = total_sq / n - mean * mean
    se = sqrt(max(float(var), 0.0) / n)
    gap = abs(float(mean - lp_value))
    disagree = gap > 4 * se if se > 0 else mean != lp_value
    if disagree:
        warnings.append(
            f"empirical mean {float(mean):.6f} deviates from exact value "
            f"{float(lp_value):.6f} by more than 4 standard errors"
        )
    report = {
        "command": "validate",
        "instance": args.instance,
        "digest": digest,
        "samples": n,
        "seed": args.seed,
        "exact_value": _fraction_str(lp_value),
        "empirical_mean": _fraction_str(mean),
        "standard_error": repr(se),
        "ci95": [repr(float(mean) - 1.96 * se), repr(float(mean) + 1.96 * se)],
        "within_4se": not disagree,
        "persuasive": report_exact.persuasive,
        "violations": [
            [list(S), list(alt), _fraction_str(gap_)]
            for S, alt, gap_ in report_exact.violations[:10]
        ],
        "warnings": warnings,
    }
    _emit_report(report, args)
    return 0


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    try:
        raw = jsonio.load_json(args.spec)
    except FileNotFoundError:
        raise _fail_usage(f"no such file: {args.spec}")
    except json.JSONDecodeError as exc:
        raise _fail_usage(f"{args.spec} is not valid JSON: {exc}")
    warnings = []
    if args.source == "lineq":
        if args.target == "partition":
            raise _fail_usage("partition instances come from --from public")
        spec = jsonio.lineq_spec_from_json(raw)
        if spec.zeta < 1 and Fraction(spec.n_var - 1, spec.n_var) <= (
            (1 - 2 * spec.zeta) / (1 - spec.zeta)
        ):
            warnings.append(
                "n_var too small for the promise gap: "
                "(n_var-1)/n_var <= (1-2*zeta)/(1-zeta)"
            )
        instance = reductions.TARGETS[args.target](spec)
    else:
        if args.target != "partition":
            raise _fail_usage("--from public only generates --target partition")
        spec = jsonio.public_spec_from_json(raw)
        instance = reductions.gen_partition_from_public(spec)
    _log(args, f"generated {args.target} instance from {args.spec}")
    body = jsonio.instance_to_json(instance)
    digest = jsonio.instance_digest(instance)
    report = {
        "command": "gen",
        "source": args.source,
        "target": args.target,
        "digest": digest,
        "num_states": instance.num_states,
        "num_elements": instance.num_elements,
        "warnings": warnings,
    }
    if args.out:
        jsonio.save_json(args.out, body)
        report["instance_path"] = args.out
    else:
        report["instance"] = body
    _emit_report(report, args)
    return 0


# ---------------------------------------------------------------------------
# check-nondegeneracy
# ---------------------------------------------------------------------------


def cmd_check_nondegeneracy(args) -> int:
    instance = _load_instance(args.instance)
    _log(args, f"auditing utility families for {args.instance}")
    report = best_response.check_nondegeneracy(instance)
    body = {
        "command": "check-nondegeneracy",
        "instance": args.instance,
        "digest": jsonio.instance_digest(instance),
        "clean": report.clean,
        "method": report.method,
        "families_checked": report.families_checked,
        "violations": [
            {"permutation": list(perm), "positions": list(pos)}
            for perm, pos in report.violations[:10]
        ],
        "warnings": [],
    }
    _emit_report(body, args)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "validate": cmd_validate,
    "gen": cmd_gen,
    "check-nondegeneracy": cmd_check_nondegeneracy,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return USAGE_EXIT
        return USAGE_EXIT if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    except (InstanceFormatError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CombisigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return SOLVER_EXIT


if __name__ == "__main__":
    sys.exit(main())
