"""Smoke test for the cfq extension module.

Build it first with `pip install --no-build-isolation -e crates/python`.
"""

from fractions import Fraction
from pathlib import Path

import cfq

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    mix = cfq.FunctionDistribution(2, 2, {"01": "1/2", "10": "1/2"})
    assert mix == cfq.FunctionDistribution.load(DATA / "mixIF.json")
    assert mix.conditional(0) == ["1/2", "1/2"]
    assert mix.conditional_counterfactual(0, 0, 1, 0) == "0/1"
    assert cfq.FunctionDistribution.from_json(mix.to_json()) == mix

    b = cfq.bounds(mix, "0:0,1:0", level="one-way")
    assert not b["identifiable"]
    assert b["witness_hi"] == {"00": "1/2", "11": "1/2"}
    assert cfq.bounds(mix, "0:0,1:0", level="two-way")["identifiable"]

    c00, c01, bell = cfq.binary_measurements(mix)
    assert abs(bell - 0.5) < 1e-12
    assert cfq.solve_binary_pf(c00, c01, bell) == mix

    for x, x_prime, y, y_prime, value in cfq.tomography(mix):
        exact = Fraction(mix.joint(f"{x}:{y},{x_prime}:{y_prime}"))
        assert abs(value - float(exact)) < 1e-9

    log = cfq.simulate(cfq.FunctionDistribution.uniform(2, 2), 1000, seed=7)
    assert len(log) == 1000 and all(x_in == x_out for x_in, x_out, _ in log)

    model_a = cfq.FunctionDistribution.load(DATA / "modelA.json")
    assert model_a.joint("0:0,1:1,2:2") == "1/27"

    for example in ["binary", "appendix_b", "model_ab", "appendix_e", "appendix_e_general", "toy"]:
        report = cfq.reproduce(example)
        assert report["passed"], report["name"]

    assert all(row["equal"] for row in cfq.toy_check())

    try:
        cfq.FunctionDistribution(2, 2, {"01": "1/2"})
    except ValueError as e:
        assert "sum" in str(e)
    else:
        raise AssertionError("unnormalized weights accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
