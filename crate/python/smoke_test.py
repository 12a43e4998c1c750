"""Smoke test of the bnsf_py extension module.

Run after `pip install -e . --no-build-isolation` from the repository root:

    python3 python/smoke_test.py
"""

import math

import bnsf_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    gas = bnsf_py.Gas(r=1.0, gamma=1.4, tau0=1.0)
    approx(gas.tau(2.0), 5.0)  # tau0 + theta^2
    approx(gas.pressure(2.0, 0.0, 0.5), 0.25)  # R theta / v
    approx(gas.sigma_star(1.0, 0.0, 0.1), math.sqrt(0.14))

    # End states satisfy the jump relations qualitatively: a 3-shock
    # expands the volume and slows the flow.
    left, right, sigma = bnsf_py.end_state(gas, 1.0, 0.0, 0.1, eps=0.1)
    assert right[0] > left[0] and right[1] < left[1] and right[2] < left[2]
    assert sigma > 0

    # Profile: monotone, correct end states, strict interior slope.
    prof = bnsf_py.profile(gas, 1.0, 0.0, 0.1, eps=0.1)
    approx(prof.sigma, sigma)
    tails = prof.verify_tails()
    assert tails["monotone_v_increasing"]
    assert tails["monotone_u_decreasing"]
    assert tails["monotone_theta_decreasing"]
    assert tails["inf_dv_core"] > 0
    (v0, _, _), (dv0, _, _) = prof.value_at(0.0)
    approx(v0, 0.5 * (left[0] + right[0]), 1e-9)
    assert dv0 > 0

    # Unperturbed monitored run: entropy starts at zero and stays tiny.
    samples = bnsf_py.contract(gas, prof, e0=0.0, t_end=0.02, sample_dt=0.01)
    assert samples[0][3] == 0.0
    assert max(s[3] for s in samples) <= 1e-6

    # Convexity function and its exact zero.
    approx(bnsf_py.phi(1.0), 0.0, 0.0)
    assert bnsf_py.phi(2.0) > 0 and bnsf_py.phi(0.5) > 0

    # Degenerate-weight functional: the constant 1 has a negative value
    # dominated by the mass-coupling term.
    w = [1.0] * 64
    assert bnsf_py.r_delta(w, 0.01) < -800

    # Violation search stays nonpositive at a small budget.
    worst = bnsf_py.search_poincare(
        delta=0.01, c1=1.0, n_grid=32, random_starts=20, ascent_steps=5, seed=1
    )
    assert worst <= 1e-6, worst

    # Polynomial gap: zero at the origin, negative on the scanned region
    # for small delta.
    approx(bnsf_py.poly_gap(0.0, 0.0, 0.01), 0.0, 0.0)
    max_gap, _, _ = bnsf_py.scan_poly(0.001, 0.001, 1000)
    assert max_gap <= 1e-9, max_gap

    # Quartic helper: anchors (x = -2 to roundoff, x = 0 exact).
    approx(bnsf_py.quartic_h(-2.0), -4.0 / 3.0, 1e-14)
    approx(bnsf_py.quartic_h(0.0), 0.0, 0.0)
    assert bnsf_py.quartic_h(-1.0) < 0

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
