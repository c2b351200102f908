"""Build and inspect the weight sequence behind the bound functional.

The functional weights theta_0..theta_p must satisfy two structural
conditions: the squared ratio theta^2 has to exceed (a+b)^2/(4ab) so the
gradient quadratics T_i are positive semidefinite, and theta_0/theta_1
has to stay below the mass-control constant mu.  This script builds the
sequence for a few diffusion pairs, prints it, verifies the conditions,
and spot-checks the quadratics on random gradient pairs.
"""

import numpy as np

from rdcertify import build_params, check_conditions, quadratic_Ti, theta_at

ZEROS = np.zeros(3)

for a, b, mu in ((1.0, 1.0, 1.0), (1.0, 4.0, 0.5), (0.2, 3.0, 0.1)):
    params = build_params(a, b, mu, 0.0, 4, ZEROS, ZEROS)
    rep = check_conditions(params, a, b)
    print(f"a={a} b={b} mu={mu}")
    print(f"  lower bound (a+b)^2/(4ab) = {rep.theta_sq_bound:.6g},"
          f" default theta^2 = {rep.theta_sq:.6g}")
    seq = [theta_at(params, i) for i in range(params.p + 1)]
    print("  weights:", ", ".join(f"{tv.value:.6g}" for tv in seq))
    print("  log-weights:", ", ".join(f"{tv.log:.6g}" for tv in seq))
    print(f"  conditions pass: {rep.passed}"
          f" (recurrence residual {rep.recurrence_residual:.2e})")

    rng = np.random.default_rng(0)
    xi = rng.uniform(-10, 10, 5000)
    eta = rng.uniform(-10, 10, 5000)
    worst = min(np.min(quadratic_Ti(params, i, a, b, 1, 1, xi, eta))
                for i in range(params.p - 1))
    print(f"  min T_i over 5000 random gradient pairs: {worst:.6g} (>= 0)")
    print()

# a deliberately bad ratio parameter is rejected with the violated
# condition in the message
try:
    build_params(1.0, 4.0, 0.5, 0.0, 4, ZEROS, ZEROS, theta=1.2)
except ValueError as exc:
    print("rejected theta=1.2 for a=1, b=4:", exc)
