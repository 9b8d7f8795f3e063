"""Command-line entry point binding every layer of the package.

Exit codes: 0 success, 1 domain error (bad model, no path, unknown state),
2 usage error.  Every subcommand takes ``--format text|structured``;
structured mode emits the same figures as JSON.  All randomness flows from
explicit ``--seed`` flags, never the wall clock.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bridge import ccb_audit
from .core import reach_probability, viterbi_decode
from .errors import WhmmError
from .estimation import estimate_weights
from .experiment import AgentConfig, plot_rows, run_cohort, summarize, summary_text
from .eventlog import append_records, read_records
from .formulas import atoms_of, parse_formula
from .kripke import Evaluator
from .serialization import (
    load_frame,
    load_model,
    load_problem,
    load_trajectories,
)


def _emit(args, data: dict, text: str) -> None:
    if args.format == "structured":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _resolve_state(model, token: str) -> int:
    return model.states.index_of(token)


def _resolve_targets(model, token: str) -> tuple[int, ...]:
    if token == "goal":
        return model.states.goal_states
    if token == "anti_goal":
        return model.states.anti_goal_states
    return tuple(model.states.index_of(t) for t in token.split(","))


# --- subcommand handlers -----------------------------------------------------

def cmd_validate(args) -> int:
    model = load_model(args.model)
    data = {
        "valid": True,
        "states": list(model.states.labels),
        "goal_states": [model.states.labels[i] for i in model.states.goal_states],
        "anti_goal_states": [model.states.labels[i] for i in model.states.anti_goal_states],
    }
    _emit(args, data, f"OK: {args.model} is a valid model with {model.n} states")
    return 0


def cmd_reach(args) -> int:
    model = load_model(args.model)
    start = _resolve_state(model, getattr(args, "from"))
    targets = _resolve_targets(model, args.targets)
    prob = reach_probability(model, start, targets, args.horizon, args.subjective)
    kernel = "subjective" if args.subjective else "true"
    data = {"probability": prob, "from": getattr(args, "from"),
            "targets": [model.states.labels[t] for t in targets],
            "horizon": args.horizon, "kernel": kernel}
    _emit(args, data,
          f"P(reach {{{', '.join(data['targets'])}}} within {args.horizon} steps "
          f"| start {data['from']}, {kernel} kernel) = {prob:.10f}")
    return 0


def cmd_viterbi(args) -> int:
    model = load_model(args.model)
    start = _resolve_state(model, getattr(args, "from"))
    end = _resolve_state(model, args.to)
    result = viterbi_decode(model, start, end, args.horizon, args.subjective)
    path_labels = [model.states.labels[s] for s in result.path.states]
    data = {"path": path_labels, "log_prob": result.log_prob,
            "kernel": "subjective" if args.subjective else "true"}
    _emit(args, data,
          "best path: " + " -> ".join(path_labels) + f"   log-prob {result.log_prob:.10f}")
    return 0


def cmd_check(args) -> int:
    frame = load_frame(args.frame)
    formula = parse_formula(args.formula)
    undeclared = sorted(atoms_of(formula) - frame.atoms())
    if undeclared:
        print(f"warning: atoms not valuated anywhere in the frame "
              f"(treated as false): {', '.join(undeclared)}", file=sys.stderr)
    ev = Evaluator(frame)
    worlds = [args.world] if args.world else list(frame.worlds)
    truth = {w: ev.eval(w, formula) for w in worlds}
    data = {"formula": args.formula, "truth": truth}
    lines = [f"{w}: {str(v).lower()}" for w, v in truth.items()]
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_audit(args) -> int:
    problem = load_problem(args.problem)
    report = ccb_audit(problem, args.theta)
    lines = [f"problem: {report.problem_id}   theta: {report.theta}"]
    for entry in report.policies:
        profile = entry.profile
        verdict = entry.verdict
        lines.append(
            f"  policy {entry.policy} [{entry.flag}] {entry.text}\n"
            f"    true:       p_goal {profile.p_goal_true:.4f}  "
            f"p_anti {profile.p_antigoal_true:.4f}  -> {profile.classification}\n"
            f"    subjective: p_goal {profile.p_goal_subjective:.4f}  "
            f"p_anti {profile.p_antigoal_subjective:.4f}\n"
            f"    necessity claim holds: {str(verdict.relaxed_claim_holds).lower()}   "
            f"probable case: {str(verdict.probable_case_holds).lower()}")
    lines.append(f"subjective argmax: {', '.join(report.subjective_argmax)}"
                 + ("   (tie)" if report.tie else ""))
    lines.append(f"ccb footprint: {str(report.ccb_footprint).lower()}")
    _emit(args, report.as_dict(), "\n".join(lines))
    return 0


def cmd_simulate(args) -> int:
    problem = load_problem(args.problem)
    weights = None
    if args.weights:
        weights = np.array([float(w) for w in args.weights.split(",")])
    agent = AgentConfig(weights=weights, sharpness=args.gamma)
    records = run_cohort(problem, agent, args.n, args.seed, cohort_id=args.cohort)
    if args.out:
        append_records(args.out, records)
    summary = summarize(records, problem)
    data = summary.as_dict()
    data["plot_data"] = plot_rows(summary)
    _emit(args, data, summary_text(summary))
    return 0


def cmd_summarize(args) -> int:
    problem = load_problem(args.problem)
    records = list(read_records(args.log))
    if args.cohort:
        records = [r for r in records if r.cohort_id == args.cohort]
    summary = summarize(records, problem)
    data = summary.as_dict()
    data["plot_data"] = plot_rows(summary)
    _emit(args, data, summary_text(summary))
    return 0


def cmd_fit_weights(args) -> int:
    model = load_model(args.model)
    paths = load_trajectories(args.log, model)
    estimate = estimate_weights(paths, model, max_iterations=args.max_iter)
    data = {
        "weights": {label: w for label, w in
                    zip(model.states.labels, estimate.values.tolist())},
        "log_likelihood": estimate.log_likelihood,
        "converged": estimate.converged,
        "iterations": estimate.iterations,
    }
    lines = [f"fitted weights over {len(paths)} paths "
             f"({'converged' if estimate.converged else 'NOT converged; best so far'}):"]
    lines += [f"  {label}: {w:.6f}" for label, w in data["weights"].items()]
    lines.append(f"log-likelihood: {estimate.log_likelihood:.6f}")
    _emit(args, data, "\n".join(lines))
    return 0 if estimate.converged else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ProblemStore, create_app

    store = ProblemStore(args.fixtures) if args.fixtures else None
    app = create_app(store=store, log_path=args.log)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whmm",
        description="Weighted Markov models, modal policy audits, choice experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--format", choices=("text", "structured"), default="text",
                       help="output as human text or machine-readable JSON")
        return p

    p = add("validate", cmd_validate, "validate a model file")
    p.add_argument("model")

    p = add("reach", cmd_reach, "probability of reaching target states within a horizon")
    p.add_argument("model")
    p.add_argument("--from", required=True, metavar="STATE")
    p.add_argument("--targets", required=True,
                   help="comma-separated state labels, or 'goal' / 'anti_goal'")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--subjective", action="store_true",
                   help="use the weight-modulated kernel")

    p = add("viterbi", cmd_viterbi, "most probable path between two states")
    p.add_argument("model")
    p.add_argument("--from", required=True, metavar="STATE")
    p.add_argument("--to", required=True, metavar="STATE")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--subjective", action="store_true")

    p = add("check", cmd_check, "evaluate a modal formula on a frame")
    p.add_argument("frame")
    p.add_argument("formula", help="surface syntax, e.g. '[](B -> C)'")
    p.add_argument("--world", help="evaluate at one world only")

    p = add("audit", cmd_audit, "per-policy outcome profiles and verdicts")
    p.add_argument("problem")
    p.add_argument("--theta", type=float, default=0.0,
                   help="edge threshold for the possibility frame (default 0)")

    p = add("simulate", cmd_simulate, "run a simulated cohort on a problem")
    p.add_argument("problem")
    p.add_argument("--n", type=int, required=True, help="number of agents")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--gamma", type=float, default=1.0, help="choice sharpness")
    p.add_argument("--weights", help="override the problem's somatic overlay (comma-separated)")
    p.add_argument("--cohort", help="cohort id recorded on every record")
    p.add_argument("--out", help="append records to this JSONL file")

    p = add("summarize", cmd_summarize, "summarize a JSONL record log")
    p.add_argument("log")
    p.add_argument("--problem", required=True, help="problem file the records answer")
    p.add_argument("--cohort", help="restrict to one cohort id")

    p = add("fit-weights", cmd_fit_weights, "recover somatic weights from trajectories")
    p.add_argument("log", help="JSONL trajectory file ({'states': [...]} per line)")
    p.add_argument("model", help="model file fixing transitions and initial distribution")
    p.add_argument("--max-iter", type=int, default=500)

    p = add("serve", cmd_serve, "host the live three-phase session service")
    p.add_argument("--host", default=os.environ.get("WHMM_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(os.environ.get("WHMM_PORT", "8000")))
    p.add_argument("--fixtures", default=os.environ.get("WHMM_FIXTURES"),
                   help="directory of *.problem.json files (default: bundled)")
    p.add_argument("--log", default=os.environ.get("WHMM_LOG", "choices.jsonl"),
                   help="JSONL record log path")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except WhmmError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
