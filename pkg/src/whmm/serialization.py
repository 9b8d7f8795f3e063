"""JSON file formats for models, frames, problems and trajectories.

All parsers reject unknown fields so schema drift fails loudly.

Model document::

    {"states": [{"label": "broke", "role": "plain"}, ...],   # role optional
     "transitions": [[...], ...],                             # row-major
     "initial": [...],
     "weights": [...]}                                        # optional, default neutral

Frame document::

    {"worlds": ["A", "B"],
     "edges": [["A", "B"], ...],
     "valuation": {"A": ["p"], ...}}      # omitted worlds get the empty set

Problem document embeds the model schema (with neutral weights) plus::

    {"id": ..., "description": ..., "model": {...},
     "subjective_weights": [...], "current": "state label",
     "policies": [{"label": "A", "text": ..., "first_action_state": "state label",
                   "flag": "correct|inverse|arbitrary"}, ...],
     "horizon": 6}

Trajectory logs are JSON Lines, one ``{"states": [...]}`` object per line,
entries being state labels or indices.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .bridge import Policy, Problem
from .core import StateSpace, Trajectory, WeightedMarkovModel, build_model
from .errors import SchemaError
from .kripke import KripkeFrame

_ROLES = ("plain", "goal", "anti_goal")


def _require(data: dict, where: str, required: tuple[str, ...],
             optional: tuple[str, ...] = ()) -> None:
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected an object, got {type(data).__name__}")
    unknown = set(data) - set(required) - set(optional)
    if unknown:
        raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")
    missing = [k for k in required if k not in data]
    if missing:
        raise SchemaError(f"{where}: missing fields {missing}")


# --- models --------------------------------------------------------------

def model_from_dict(data: dict) -> WeightedMarkovModel:
    _require(data, "model", ("states", "transitions", "initial"), ("weights",))
    if not isinstance(data["states"], list) or not data["states"]:
        raise SchemaError("model.states: expected a non-empty list")
    labels, roles = [], []
    for i, entry in enumerate(data["states"]):
        _require(entry, f"model.states[{i}]", ("label",), ("role",))
        role = entry.get("role", "plain")
        if role not in _ROLES:
            raise SchemaError(f"model.states[{i}].role: expected one of {_ROLES}, got {role!r}")
        labels.append(entry["label"])
        roles.append(role)
    weights = data.get("weights")
    return build_model(StateSpace(labels, roles), data["transitions"], data["initial"], weights)


def model_to_dict(model: WeightedMarkovModel) -> dict:
    return {
        "states": [{"label": lbl, "role": role}
                   for lbl, role in zip(model.states.labels, model.states.roles)],
        "transitions": model.transitions.entries.tolist(),
        "initial": model.initial.probs.tolist(),
        "weights": model.weights.weights.tolist(),
    }


# --- frames -----------------------------------------------------------------

def frame_from_dict(data: dict) -> KripkeFrame:
    _require(data, "frame", ("worlds",), ("edges", "valuation"))
    edges = data.get("edges", [])
    for i, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError(f"frame.edges[{i}]: expected a [from, to] pair")
    valuation = data.get("valuation", {})
    return KripkeFrame(data["worlds"], [tuple(e) for e in edges], valuation)


def frame_to_dict(frame: KripkeFrame) -> dict:
    return {
        "worlds": list(frame.worlds),
        "edges": sorted([a, b] for a, b in frame.access),
        "valuation": {w: sorted(atoms) for w, atoms in frame.valuation.items()},
    }


# --- problems -----------------------------------------------------------------

def problem_from_dict(data: dict) -> Problem:
    _require(data, "problem",
             ("id", "description", "model", "subjective_weights",
              "current", "policies", "horizon"))
    model = model_from_dict(data["model"])
    if not isinstance(data["policies"], list):
        raise SchemaError("problem.policies: expected a list")
    policies = []
    for i, entry in enumerate(data["policies"]):
        _require(entry, f"problem.policies[{i}]",
                 ("label", "text", "first_action_state", "flag"))
        policies.append(Policy(
            label=entry["label"],
            text=entry["text"],
            first_action_state=model.states.index_of(entry["first_action_state"]),
            flag=entry["flag"],
        ))
    return Problem(
        problem_id=data["id"],
        description=data["description"],
        model_true=model,
        subjective_weights=data["subjective_weights"],
        current=model.states.index_of(data["current"]),
        policies=tuple(policies),
        horizon=data["horizon"],
    )


def problem_to_dict(problem: Problem) -> dict:
    labels = problem.model_true.states.labels
    return {
        "id": problem.problem_id,
        "description": problem.description,
        "model": model_to_dict(problem.model_true),
        "subjective_weights": list(problem.subjective_weights),
        "current": labels[problem.current],
        "policies": [
            {"label": p.label, "text": p.text,
             "first_action_state": labels[p.first_action_state], "flag": p.flag}
            for p in problem.policies
        ],
        "horizon": problem.horizon,
    }


# --- file helpers ----------------------------------------------------------

def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def load_model(path) -> WeightedMarkovModel:
    return model_from_dict(_load_json(path))


def load_frame(path) -> KripkeFrame:
    return frame_from_dict(_load_json(path))


def load_problem(path) -> Problem:
    return problem_from_dict(_load_json(path))


def save_json(obj: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=2, sort_keys=False)
        handle.write("\n")


# --- trajectory logs ---------------------------------------------------------

def _coerce_state(value, states: StateSpace) -> int:
    if isinstance(value, str):
        return states.index_of(value)
    if isinstance(value, int):
        return value
    raise SchemaError(f"trajectory state must be a label or index, got {value!r}")


def load_trajectories(path, model: WeightedMarkovModel) -> list[Trajectory]:
    """Read a JSON Lines trajectory log; states may be labels or indices."""
    out = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
            _require(data, f"{path}:{lineno}", ("states",))
            out.append(Trajectory(_coerce_state(s, model.states) for s in data["states"]))
    return out


def save_trajectories(paths, model: WeightedMarkovModel, out_path) -> None:
    labels = model.states.labels
    with open(out_path, "w", encoding="utf-8") as handle:
        for path in paths:
            states = path.states if isinstance(path, Trajectory) else tuple(path)
            handle.write(json.dumps({"states": [labels[s] for s in states]}) + "\n")


# --- bundled fixtures --------------------------------------------------------

def fixture_path(name: str) -> Path:
    """Path of a bundled fixture file, e.g. ``war_on_drugs.problem.json``."""
    root = resources.files("whmm") / "fixtures" / name
    path = Path(str(root))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def fixture_dir() -> Path:
    return Path(str(resources.files("whmm") / "fixtures"))
