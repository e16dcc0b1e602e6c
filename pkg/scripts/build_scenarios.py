"""Regenerate the bundled scenario files in src/infodistance/scenarios/."""

import json
from pathlib import Path

import numpy as np

from infodistance.inequalities import (
    PM_LABELS,
    PM_OBSERVABLES,
    PM_TRIPLES,
    build_mermin_correlation,
    build_multipartite_entropic,
    build_tripartite_entropic,
    canonical_distribution,
    eq8_angles,
    ghz_scenario,
    mermin_angles,
    standard_multipartite_angles,
)
from infodistance.serialization import observable_to_json

OUT = Path(__file__).resolve().parents[1] / "src" / "infodistance" / "scenarios"


def ghz_file(ineq, angles, name, inequality, n=None):
    sc = ghz_scenario(ineq, angles, name)
    d = {"name": name, "inequality": inequality}
    if n:
        d["n"] = n
    d["parties"] = list(sc.parties)
    d["settings"] = {k: list(v) for k, v in sc.settings.items()}
    d["binding"] = {"quantum": {
        "state": {"ghz": sc.binding.num_qubits},
        "observables": {lab: observable_to_json(sc.binding.observables[lab]) for lab in ineq.order},
    }}
    return d


def main():
    files = {
        "tripartite_eq8.json": ghz_file(build_tripartite_entropic(), eq8_angles(),
                                        "tripartite_eq8", "tripartite"),
        "mermin_ghz.json": ghz_file(build_mermin_correlation(), mermin_angles(), "mermin_ghz", "mermin"),
    }
    for n in (4, 6, 8, 10):
        files[f"multipartite_n{n}.json"] = ghz_file(
            build_multipartite_entropic(n), standard_multipartite_angles(n),
            f"multipartite_n{n}", "multipartite", n)

    mixed = (np.eye(4) / 4).tolist()
    files["pm_square.json"] = {
        "name": "pm_square",
        "inequality": "cabello",
        "binding": {"quantum": {
            "state": {"density": [[[x, 0.0] for x in row] for row in mixed]},
            "observables": {lab: observable_to_json(PM_OBSERVABLES[lab]) for lab in PM_LABELS},
        }},
    }
    files["pm_mix_half.json"] = {
        "name": "pm_mix_half",
        "inequality": "pm",
        "binding": {"products": {
            "distribution": {"mix": {"lambda": 0.5,
                                     "first": {"canonical": "pm_quantum_products"},
                                     "second": {"canonical": "pm_classical_products"}}},
            "terms": [{"term": list(t), "variable": f"q{i + 1}"} for i, t in enumerate(PM_TRIPLES)],
        }},
    }
    for fname, cname in [("classical_fig1a.json", "fig1a_classical"),
                         ("fig1b_anticorrelated.json", "fig1b_anticorrelated"),
                         ("fig1b_uncorrelated.json", "fig1b_uncorrelated"),
                         ("classical_fig2a.json", "fig2a_classical"),
                         ("fig2b_ghz_paradox.json", "fig2b_ghz_paradox"),
                         ("fig2b_uncorrelated.json", "fig2b_uncorrelated")]:
        files[fname] = {"name": cname,
                        "binding": {"distribution": canonical_distribution(cname).to_json_dict()}}

    for fname, data in files.items():
        (OUT / fname).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print("wrote", fname)


if __name__ == "__main__":
    main()
