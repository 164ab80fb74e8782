"""Command-line surface: load a state file, run a protocol, emit a report.

Commands: distill, nowaste, entangle, figure2, sample, verify.
Exit codes: 0 success, 2 parse/usage error, 3 invalid state,
4 infeasible preprocessing, 5 I/O error.

State files are JSON documents with an integer ``dim`` and exactly one
of ``amps`` (amplitudes), ``probs`` (squared amplitudes) or ``schmidt``
(Schmidt coefficients), each an array of ``dim`` nonnegative decimals.
No numeric logic lives here; every report number comes from the core
modules.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .entanglement import SchmidtState, ent_distill, ent_intermediate, max_distilled_entanglement
from .nowaste import Infeasible, two_step_distill
from .protocol import (
    ATOL,
    apply_kraus,
    average_output_coherence,
    build_channel,
    coherence_loss,
    max_success_probability,
    outcome_probabilities,
    verify_sio,
)
from .sampling import sample_outcomes, z_scores
from .states import RawPureState, canonicalize, l1_coherence, majorizes, max_coherent
from .tradeoff import figure2_sweep, sweep_csv_bytes

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_INFEASIBLE = 4
EXIT_IO = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read state file: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"state file is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "state file must be a JSON object")
    return doc


def _parse_state(path: str, allowed: tuple[str, ...]):
    """Returns (canonical state, echo block).  The state is canonicalized
    (sorted, renormalized); the echo records the file as given."""
    doc = _load_document(path)
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise CliError(EXIT_PARSE, "field 'dim' must be a positive integer")
    present = [f for f in ("amps", "probs", "schmidt") if f in doc]
    if len(present) != 1:
        raise CliError(
            EXIT_PARSE,
            "state file must contain exactly one of 'amps', 'probs', 'schmidt'",
        )
    field = present[0]
    if field not in allowed:
        raise CliError(
            EXIT_PARSE, f"field '{field}' is not accepted by this command"
        )
    values = doc[field]
    if (
        not isinstance(values, list)
        or len(values) != dim
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
    ):
        raise CliError(EXIT_PARSE, f"field '{field}' must be an array of {dim} numbers")
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise CliError(EXIT_INVALID, f"'{field}' values must be finite and nonnegative")
    mags = np.sqrt(arr) if field == "probs" else arr
    total = float(np.sum(mags * mags))
    try:
        state = canonicalize(RawPureState(mags, np.zeros(dim)))
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"invalid state: {exc}")
    echo = {
        "path": path,
        "dim": dim,
        "field": field,
        "values": [float(v) for v in values],
        "renormalized": abs(total - 1.0) > 1e-12,
        "canonical_amps": [float(a) for a in state.amps],
    }
    return state, echo


def _round_floats(obj):
    # 12 significant digits: enough to read the 1e-12 invariants off a report
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(text: str, out_path) -> None:
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write output: {exc}")
    else:
        sys.stdout.write(text)


def _emit_report(report: dict, csv_rows, args) -> None:
    if args.format == "csv":
        lines = [",".join(csv_rows[0])]
        for row in csv_rows[1:]:
            lines.append(",".join(str(c) for c in row))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(_round_floats(report), indent=2) + "\n", args.out)


def _ensemble_rows(ensemble, extra_entanglement: bool = False):
    rows = []
    for q, p in ensemble.entries:
        row = {"q": q, "probability": p, "output_coherence": q - 1}
        if extra_entanglement:
            row["output_entanglement"] = math.log(q)
        rows.append(row)
    return rows


def _coherence_block(c_in: float, c_out_avg: float) -> dict:
    return {"c_in": c_in, "c_out_avg": c_out_avg, "loss": c_in - c_out_avg}


def _ensemble_csv(ensemble):
    head = ["q", "probability", "output_coherence"]
    rows = [[q, repr(p), q - 1] for q, p in ensemble.entries]
    return [head] + rows


def cmd_distill(args) -> int:
    state, echo = _parse_state(args.state_file, allowed=("amps", "probs"))
    ensemble = outcome_probabilities(state)
    channel = build_channel(state)
    report = {
        "command": "distill",
        "input": echo,
        "ensemble": _ensemble_rows(ensemble),
        "max_success_probability": max_success_probability(state),
        "coherence": _coherence_block(l1_coherence(state), average_output_coherence(state)),
        "verification": verify_sio(channel).as_dict(),
    }
    _emit_report(report, _ensemble_csv(ensemble), args)
    return EXIT_OK


def cmd_nowaste(args) -> int:
    state, echo = _parse_state(args.state_file, allowed=("amps", "probs"))
    try:
        plan, ensemble = two_step_distill(state)
    except Infeasible as exc:
        raise CliError(EXIT_INFEASIBLE, f"infeasible: {exc.reason}")
    channel = build_channel(plan.chi)
    report = {
        "command": "nowaste",
        "input": echo,
        "plan": {
            "k": plan.k,
            "psi_prime": plan.psi_prime,
            "psi_prime_sq": plan.psi_prime_sq,
            "feasible": plan.feasible,
        },
        "intermediate": {
            "amps": [float(a) for a in plan.chi.amps],
            "probs": [float(x) for x in plan.chi.squared],
        },
        "ensemble": _ensemble_rows(ensemble),
        "max_success_probability": max_success_probability(state),
        "coherence": _coherence_block(
            l1_coherence(state), average_output_coherence(plan.chi)
        ),
        "verification": verify_sio(channel).as_dict(),
    }
    _emit_report(report, _ensemble_csv(ensemble), args)
    return EXIT_OK


def cmd_entangle(args) -> int:
    state, echo = _parse_state(args.state_file, allowed=("schmidt", "probs"))
    schmidt = SchmidtState(state.amps)
    try:
        interm = ent_intermediate(schmidt)
        ensemble = ent_distill(schmidt)
    except Infeasible as exc:
        raise CliError(EXIT_INFEASIBLE, f"infeasible: {exc.reason}")
    channel = build_channel(interm.as_coherent())
    report = {
        "command": "entangle",
        "input": echo,
        "intermediate": {
            "coeffs": [float(c) for c in interm.coeffs],
            "spectrum": [float(x) for x in interm.spectrum],
        },
        "ensemble": _ensemble_rows(ensemble, extra_entanglement=True),
        "entanglement": {
            "max_distilled_source": max_distilled_entanglement(schmidt),
            "max_distilled_intermediate": max_distilled_entanglement(interm),
        },
        "verification": verify_sio(channel).as_dict(),
    }
    _emit_report(report, _ensemble_csv(ensemble), args)
    return EXIT_OK


def cmd_figure2(args) -> int:
    if args.dim < 2:
        raise CliError(EXIT_PARSE, "--dim must be >= 2")
    if args.points < 2:
        raise CliError(EXIT_PARSE, "--points must be >= 2")
    pairs = figure2_sweep(args.dim, args.points, seed=args.seed)
    payload = sweep_csv_bytes(pairs)
    if args.out:
        try:
            with open(args.out, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write output: {exc}")
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 1:
        raise CliError(EXIT_PARSE, "--n must be >= 1")
    state, echo = _parse_state(args.state_file, allowed=("amps", "probs"))
    counts = sample_outcomes(state, args.n, args.seed, workers=args.workers)
    probs = outcome_probabilities(state).probs
    z = z_scores(counts, probs)
    rows = []
    for i, (c, p) in enumerate(zip(counts, probs)):
        degenerate = math.isnan(z[i])
        rows.append(
            {
                "q": i + 1,
                "count": int(c),
                "frequency": c / args.n,
                "expected_probability": float(p),
                "z": None if degenerate else float(z[i]),
                "exact_match": (int(c) == round(args.n * float(p))) if degenerate else None,
            }
        )
    finite = z[~np.isnan(z)]
    report = {
        "command": "sample",
        "input": echo,
        "n": args.n,
        "seed": args.seed,
        "workers": args.workers,
        "counts": rows,
        "max_abs_z": float(np.max(np.abs(finite))) if finite.size else 0.0,
    }
    csv_rows = [["q", "count", "frequency", "expected_probability", "z"]]
    for row in rows:
        csv_rows.append(
            [
                row["q"],
                row["count"],
                repr(row["frequency"]),
                repr(row["expected_probability"]),
                "" if row["z"] is None else repr(row["z"]),
            ]
        )
    _emit_report(report, csv_rows, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    state, echo = _parse_state(args.state_file, allowed=("amps", "probs", "schmidt"))
    checks = []

    def add(name, passed, **detail):
        checks.append({"name": name, "passed": bool(passed), **detail})

    d = state.dim
    ensemble = outcome_probabilities(state)
    probs = ensemble.probs
    add(
        "ensemble_normalized",
        abs(float(np.sum(probs)) - 1.0) <= ATOL,
        sum=float(np.sum(probs)),
    )
    add("probabilities_nonnegative", bool(np.all(probs >= 0.0)))
    p_top = float(probs[-1])
    p_star = max_success_probability(state)
    add("optimality_top_outcome", abs(p_top - p_star) <= ATOL, p_d=p_top, max_success=p_star)

    channel = build_channel(state)
    support = int(np.count_nonzero(state.amps > 0.0))
    rep = verify_sio(channel)
    if support == d:
        add(
            "channel_completeness",
            rep.completeness_deviation <= ATOL,
            deviation=rep.completeness_deviation,
        )
    else:
        cols = np.sum(channel.diag_stack() ** 2, axis=0)
        add(
            "channel_completeness_on_support",
            bool(np.all(np.abs(cols[:support] - 1.0) <= ATOL)),
            support=support,
            deviation=float(np.max(np.abs(cols[:support] - 1.0))),
        )
    add("strictly_incoherent", rep.sio_ok, offdiagonal=rep.sio_offdiagonal)

    action_ok = True
    for q in range(1, d + 1):
        prob, post = apply_kraus(channel.kraus[q - 1], state)
        if abs(prob - probs[q - 1]) > ATOL:
            action_ok = False
        if post is not None and not post.isclose(max_coherent(q).padded(d), atol=ATOL):
            action_ok = False
        if post is None and probs[q - 1] != 0.0:
            action_ok = False
    add("kraus_action_matches_formulas", action_ok)

    c_in = l1_coherence(state)
    c_out = average_output_coherence(state)
    loss = coherence_loss(state)
    add("coherence_monotonicity", c_in >= c_out - ATOL, c_in=c_in, c_out_avg=c_out)
    add("loss_nonnegative", loss >= 0.0, loss=loss)
    add(
        "loss_closed_form",
        abs((c_in - c_out) - loss) <= ATOL,
        difference=c_in - c_out,
        closed_form=loss,
    )

    if d >= 2:
        try:
            plan, two_step = two_step_distill(state)
            ok = bool(np.all(two_step.probs[: plan.k - 1] == 0.0)) and majorizes(
                plan.chi, state
            )
            add("nowaste_consistency", ok, feasible=True, k=plan.k)
        except Infeasible as exc:
            add("nowaste_consistency", True, feasible=False, reason=exc.reason)

    all_passed = all(c["passed"] for c in checks)
    report = {
        "command": "verify",
        "input": echo,
        "checks": checks,
        "all_passed": all_passed,
    }
    _emit_report(report, [["name", "passed"]] + [[c["name"], c["passed"]] for c in checks], args)
    return EXIT_OK if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, metavar="U64", help="random seed")
    common.add_argument("--out", default=None, metavar="PATH", help="write output to a file")
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="report format"
    )

    parser = argparse.ArgumentParser(
        prog="cohdistill",
        description="One-shot probabilistic coherence distillation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distill", parents=[common], help="single-step outcome ensemble")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("nowaste", parents=[common], help="two-step protocol with zero failure")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_nowaste)

    p = sub.add_parser("entangle", parents=[common], help="entanglement analog on Schmidt coefficients")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("figure2", parents=[common], help="trade-off sweep as CSV")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--points", type=int, default=50)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo outcome counts")
    p.add_argument("state_file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite on a state")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not (0 <= args.seed < (1 << 64)):
        sys.stderr.write("error: --seed must fit in an unsigned 64-bit integer\n")
        return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
