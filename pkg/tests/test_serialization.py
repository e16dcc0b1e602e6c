import json
import math

import pytest

from infodistance import JointDistribution
from infodistance.chains import chain_to_json_dict, pm_chain
from infodistance.inequalities import evaluate, get_inequality
from infodistance.qsim import PauliString, XYMeasurement
from infodistance.serialization import (
    bundled_scenarios,
    distribution_from_json,
    load_scenario,
    observable_from_json,
    observable_to_json,
    resolve_scenario_path,
    scenario_from_json,
    state_from_json,
)

EXPECTED_VIOLATION = {
    "tripartite_eq8.json": 1.0,
    "multipartite_n4.json": 1.0,
    "multipartite_n6.json": 1.0,
    "multipartite_n8.json": 1.0,
    "multipartite_n10.json": 1.0,
    "pm_mix_half.json": 1.0,
    "mermin_ghz.json": 2.0,
    "pm_square.json": 2.0,
}


def test_bundled_list():
    names = bundled_scenarios()
    assert set(EXPECTED_VIOLATION) <= set(names)
    assert "classical_fig1a.json" in names


@pytest.mark.parametrize("name", bundled_scenarios())
def test_bundled_scenarios_validate(name, validate):
    raw = json.loads(resolve_scenario_path(name).read_text(encoding="utf-8"))
    validate(raw, "scenario")


@pytest.mark.parametrize("name", sorted(EXPECTED_VIOLATION))
def test_bundled_scenarios_evaluate(name):
    sf = load_scenario(name)
    rep = evaluate(get_inequality(sf.inequality, sf.n), sf.scenario)
    assert rep.violation == pytest.approx(EXPECTED_VIOLATION[name], abs=1e-9)


def test_distribution_specs(validate):
    lit = {"variables": ["A", "B"], "probabilities": {"++": 0.5, "--": 0.5}}
    validate(lit, "distribution")
    d = distribution_from_json(lit)
    assert d.probability((1, 1)) == 0.5
    mix = {"mix": {"lambda": 0.25, "first": {"canonical": "pm_quantum_products"},
                   "second": {"canonical": "pm_classical_products"}}}
    validate(mix, "distribution")
    assert distribution_from_json(mix).probability((1, 1, 1, 1, 1, -1)) == 0.25
    with pytest.raises(ValueError):
        distribution_from_json({"table": []})


def test_distribution_json_ascii(validate):
    d = JointDistribution.uniform(["A", "B"])
    data = d.to_json_dict()
    validate(data, "distribution")
    assert all(set(k) <= {"+", "-"} for k in data["probabilities"])


def test_observable_roundtrip():
    for obs in (PauliString("XY", 2), XYMeasurement(math.pi / 6, 2)):
        assert observable_from_json(observable_to_json(obs)) == obs
    with pytest.raises(ValueError):
        observable_from_json({"matrix": []})


def test_states():
    assert state_from_json({"ghz": 3}).num_qubits == 3
    s = state_from_json({"amplitudes": [[1, 0], [0, 0]]})
    assert s.num_qubits == 1
    rho = state_from_json({"density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})
    assert rho.num_qubits == 1
    with pytest.raises(ValueError):
        state_from_json({"amplitudes": [1, 0]})
    with pytest.raises(ValueError):
        state_from_json({"bloch": [0, 0, 1]})


def test_with_lambda_and_angle():
    sf = load_scenario("pm_mix_half.json")
    rep = evaluate(get_inequality("pm"), sf.with_lambda(0.0).scenario)
    assert rep.violation == 0.0
    tri = load_scenario("tripartite_eq8.json")
    moved = tri.with_angle("A1", 0.0)
    assert evaluate(get_inequality("tripartite"), moved.scenario).violation < 1.0
    with pytest.raises(ValueError):
        tri.with_lambda(0.5)
    with pytest.raises(ValueError):
        tri.with_angle("Z9", 0.0)


def test_scenario_errors():
    with pytest.raises(ValueError):
        scenario_from_json({"name": "x"})
    with pytest.raises(ValueError):
        scenario_from_json({"binding": {"oracle": {}}})
    with pytest.raises(FileNotFoundError):
        resolve_scenario_path("does_not_exist.json")


def test_chain_schema(validate):
    validate(chain_to_json_dict(pm_chain()), "chain")
