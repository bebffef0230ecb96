"""Smoke test for the pyaqabound extension module.

Build and install first, e.g. `maturin build --release` in crates/py and
`pip install` the wheel, then run `python python/smoke_test.py`.
"""

import math

import pyaqabound as aq


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    wei = aq.Problem.dj_wei(4, "balanced:1")
    assert close(wei.overlap(), 0.5)
    assert close(wei.uncertainty(), 0.5)
    report = aq.compute_bound(wei, epsilon=0.1)
    assert close(report["tLower"], math.asin(0.4) / 0.5)
    assert report["asymptoticClass"] == "Valid"

    grover = aq.Problem.grover(2, [3])
    report = aq.compute_bound(grover, epsilon=0.2, lambda_bar=0.5)
    assert close(report["tLower"], 2.689825195999442)
    projector = aq.Problem.grover(2, [3], projector=True)
    assert close(aq.compute_bound(projector, 0.2, 0.5)["tLower"], report["tLower"])

    holds, residual = aq.moments_check(aq.Problem.bernstein_vazirani("101"))
    assert holds and residual < 1e-12

    ising = aq.Problem.ising(9)
    assert ising.overlap() is None
    assert close(ising.uncertainty(), 3.0, 1e-10)
    try:
        aq.compute_bound(ising)
    except aq.AqaboundError:
        pass
    else:
        raise AssertionError("missing overlap must raise")

    mf = aq.kclique_meanfield(10, 5, 0.5)
    assert (mf["eH"], mf["eH2"]) == (5.0, 27.5)
    comb = aq.kclique_combinatorial(10, 5, 0.5)
    assert close(comb["eH2"], mf["eH2"])
    mc = aq.kclique_montecarlo(6, 3, 0.5, seed=1, trials=2000)
    assert abs(mc["sampleMeanH"] - 1.5) <= 3 * mc["stderrH"]

    triangle = [(0, 1), (1, 2), (0, 2), (2, 3)]
    assert aq.count_kcliques(4, triangle, 3) == 1
    deformed = aq.Problem.kclique(4, triangle, 3, deformed=True)
    assert aq.moments_check(deformed)[0]

    profile = aq.gap_sweep(grover, grid=21)
    assert close(profile["gMin"], 0.5, 1e-9)

    run = aq.simulate(grover, 50.0)
    assert run["fidelity"] > 0.99
    assert run["chain"]["minSlackLeft"] >= -1e-8
    assert run["csv"].startswith("t,lambda,fidelity")

    t = aq.min_adiabatic_time(grover, 0.2)
    assert t["converged"] and t["tMin"] >= report["tLower"]

    again = aq.Problem.from_json(grover.to_json())
    assert again.name == grover.name and again.dim == 4
    print(f"pyaqabound {aq.__version__}: all smoke checks passed")


if __name__ == "__main__":
    main()
