"""Smoke test for the mingraph extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import json
import math

import mingraph


def main():
    grid = mingraph.Grid(0.02)
    assert len(grid) == len(grid.nodes())

    seed = mingraph.Seed.stripe(6.0)
    v = seed.sample(grid)
    assert abs(mingraph.predicted_nodal_length(10.0) - 10.2464) < 1e-4

    run = mingraph.picard(v, epsilon=0.05)
    assert run.converged, run.report_json
    report = json.loads(run.report_json)
    assert abs(run.u.ck_norm(2) - report["final_u_norm"]) < 1e-12
    assert report["final_u_norm"] < 0.05

    ls = mingraph.zero_set(run.u)
    predicted = seed.predicted_nodal_length()
    assert abs(ls.total_length - predicted) < 0.05 * predicted, (ls.total_length, predicted)
    area = mingraph.graph_area(run.u)
    assert math.pi - 1e-9 <= area <= math.pi * (1 + 2 * 0.05**2)

    fitted, fit_json = mingraph.fit_curve("segment", 6)
    assert json.loads(fit_json)["residual_value"] < 1e-8
    assert mingraph.Seed.from_json(fitted.to_json()).to_json() == fitted.to_json()

    failed = mingraph.picard(mingraph.Seed.stripe(10.0).sample(mingraph.Grid(0.04)), epsilon=100.0)
    assert not failed.converged
    assert json.loads(failed.report_json)["failure"]

    try:
        mingraph.Grid(-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative spacing should be rejected")

    print(f"ok: {len(ls)} chains, length {ls.total_length:.4f}, area {area:.6f}")


if __name__ == "__main__":
    main()
