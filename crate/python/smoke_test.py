"""Smoke test for the evpos_py extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml`, then run this file.
"""

import json
import math
import sys

import evpos_py as ev


def main():
    names = ev.examples()
    assert "complex-diagonal" in names, names

    report = ev.classify_example("complex-diagonal")
    statuses = dict(report.statuses())
    assert statuses["uniform-asymptotic"] == "confirmed", statuses
    assert statuses["uniform-eventual"] == "refuted", statuses
    assert report.contradictions == 0
    assert report.exit_code == 0
    checks = {name: (ok, app) for name, ok, app in report.checks()}
    assert checks["spr-in-spectrum"] == (True, True), checks

    again = ev.Report.from_json(report.to_json())
    assert again.to_json() == report.to_json()

    op = ev.Operator.example("complex-diagonal")
    assert op.dim == 2
    assert abs(op.spectral_radius() - 1.0) < 1e-12
    y = op.power_apply(2, [0, 1])
    assert abs(y[1] - (-0.25)) < 1e-12, y

    m = ev.Operator.dense([[2, 1], [1, 2]])
    assert all(s == "confirmed" for _, s in m.eventual())

    rows, v, w, n0 = ev.make_eventually_positive(4, 0.5, 0)
    assert len(rows) == 4 and len(v) == 4 and len(w) == 4
    gen = ev.classify_generated(json.dumps({"kind": "eventually_positive", "dim": 4, "gap": 0.5, "seed": 0}))
    assert gen.status("uniform-eventual") == "confirmed"

    d, n = ev.cone_distance_of([1, -2, 3])
    assert math.isclose(d, 2.0) and math.isclose(n, 6.0)

    failures, contradictions, _, _ = ev.run_suite("random", seed=7, trials=3)
    assert not failures and contradictions == 0

    try:
        ev.classify_example("no-such-example")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("evpos_py", ev.__version__, "smoke test ok")


if __name__ == "__main__":
    sys.exit(main())
