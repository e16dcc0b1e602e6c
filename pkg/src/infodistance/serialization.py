"""JSON forms of distributions, observables, states and scenarios.

Distribution specs may be literal tables or references::

    {"variables": ["A", "B"], "probabilities": {"++": 0.5, "--": 0.5}}
    {"canonical": "pm_quantum_products"}
    {"mix": {"lambda": 0.5, "first": <spec>, "second": <spec>}}

Scenario files look like::

    {"name": "...", "inequality": "tripartite", "parties": [...],
     "settings": {...},
     "binding": {"quantum": {"state": {"ghz": 3},
                             "observables": {"A1": {"xy_angle": 0.5236, "qubit": 0}}}}}

with ``binding`` alternatively ``{"distribution": <spec>}`` or
``{"products": {"distribution": <spec>, "terms": [{"term": [...], "variable": "q1"}]}}``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import qsim
from .distance import JointDistribution, ProductTerm, mix_distributions
from .inequalities import ProductBinding, QuantumBinding, Scenario, canonical_distribution

__all__ = [
    "ScenarioFile",
    "distribution_from_json",
    "observable_from_json",
    "observable_to_json",
    "state_from_json",
    "scenario_from_json",
    "load_scenario",
    "bundled_scenarios",
    "resolve_scenario_path",
    "schema",
]


def distribution_from_json(spec: Mapping) -> JointDistribution:
    if "canonical" in spec:
        return canonical_distribution(spec["canonical"])
    if "mix" in spec:
        m = spec["mix"]
        return mix_distributions(distribution_from_json(m["first"]),
                                 distribution_from_json(m["second"]), float(m["lambda"]))
    if "variables" in spec and "probabilities" in spec:
        return JointDistribution.from_json_dict(spec)
    raise ValueError(f"unrecognized distribution spec with keys {sorted(spec)}")


def observable_from_json(spec: Mapping):
    if "pauli" in spec:
        return qsim.PauliString.parse(spec["pauli"], str(spec.get("phase", "+1")))
    if "xy_angle" in spec:
        return qsim.XYMeasurement(float(spec["xy_angle"]), int(spec.get("qubit", 0)))
    raise ValueError(f"unrecognized observable spec with keys {sorted(spec)}")


def observable_to_json(obs) -> dict:
    if isinstance(obs, qsim.PauliString):
        return {"pauli": obs.factors, "phase": obs.phase_name}
    if isinstance(obs, qsim.XYMeasurement):
        return {"xy_angle": obs.angle, "qubit": obs.qubit}
    raise TypeError(f"cannot serialize observable {obs!r}")


def _complex_array(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_json(spec: Mapping):
    if "ghz" in spec:
        return qsim.ghz_state(int(spec["ghz"]))
    if "amplitudes" in spec:
        return qsim.StateVector(_complex_array(spec["amplitudes"]))
    if "density" in spec:
        return qsim.DensityMatrix(_complex_array(spec["density"]))
    raise ValueError(f"unrecognized state spec with keys {sorted(spec)}")


@dataclass(frozen=True, eq=False)
class ScenarioFile:
    """A parsed scenario plus the raw JSON it came from."""

    scenario: Scenario
    raw: dict
    inequality: str | None
    n: int | None

    def with_lambda(self, lam: float) -> "ScenarioFile":
        """Copy with the mixing weight of the (first) ``mix`` node replaced."""
        raw = copy.deepcopy(self.raw)
        node = _find_mix(raw["binding"])
        if node is None:
            raise ValueError("scenario has no mixed distribution to sweep")
        node["lambda"] = float(lam)
        return scenario_from_json(raw)

    def with_angle(self, label: str, angle: float) -> "ScenarioFile":
        raw = copy.deepcopy(self.raw)
        try:
            obs = raw["binding"]["quantum"]["observables"][label]
        except KeyError:
            raise ValueError(f"scenario has no quantum observable {label!r}") from None
        if "xy_angle" not in obs:
            raise ValueError(f"observable {label!r} is not an XY measurement")
        obs["xy_angle"] = float(angle)
        return scenario_from_json(raw)


def _find_mix(node):
    if isinstance(node, dict):
        if "mix" in node and isinstance(node["mix"], dict) and "lambda" in node["mix"]:
            return node["mix"]
        for v in node.values():
            found = _find_mix(v)
            if found is not None:
                return found
    elif isinstance(node, list):
        for v in node:
            found = _find_mix(v)
            if found is not None:
                return found
    return None


def scenario_from_json(raw: Mapping[str, Any]) -> ScenarioFile:
    try:
        binding_spec = raw["binding"]
    except KeyError:
        raise ValueError("scenario has no 'binding'") from None
    if "quantum" in binding_spec:
        q = binding_spec["quantum"]
        state = state_from_json(q["state"])
        observables = {lab: observable_from_json(o) for lab, o in q["observables"].items()}
        binding = QuantumBinding(state, observables)
    elif "distribution" in binding_spec:
        binding = distribution_from_json(binding_spec["distribution"])
    elif "products" in binding_spec:
        p = binding_spec["products"]
        dist = distribution_from_json(p["distribution"])
        products = {ProductTerm(t["term"]): t["variable"] for t in p["terms"]}
        binding = ProductBinding(dist, products)
    else:
        raise ValueError(f"unrecognized binding with keys {sorted(binding_spec)}")
    scenario = Scenario(
        raw.get("name", "scenario"),
        binding,
        parties=tuple(raw.get("parties", ())),
        settings={k: tuple(v) for k, v in raw.get("settings", {}).items()},
        seed=raw.get("seed"),
    )
    n = raw.get("n")
    return ScenarioFile(scenario, dict(raw), raw.get("inequality"), int(n) if n is not None else None)


def _scenario_dir():
    return resources.files("infodistance") / "scenarios"


def bundled_scenarios() -> list[str]:
    return sorted(p.name for p in _scenario_dir().iterdir() if p.name.endswith(".json"))


def resolve_scenario_path(name_or_path: str | Path) -> Path:
    """Existing file path, else a bundled scenario file of that name."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = _scenario_dir() / path.name
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"no scenario file {str(name_or_path)!r} (bundled: {', '.join(bundled_scenarios())})")


def load_scenario(name_or_path: str | Path) -> ScenarioFile:
    path = resolve_scenario_path(name_or_path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return scenario_from_json(raw)


def schema(name: str) -> dict:
    """A JSON schema shipped under ``schemas/`` (e.g. ``"report"``)."""
    ref = resources.files("infodistance") / "schemas" / f"{name}.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))
