"""Tracking an unstable plant while keeping an eavesdropper in the dark.

The receiver's error stays bounded; the eavesdropper's set of plausible
states grows like lam^t.
"""
from fractions import Fraction

from uwc import DisturbanceSource, build_scheme, decoding_error_bound, load_channel, security_rate, simulate
from uwc.estimation import security_k0

from _paths import channel_path

cases = [("blind3.uwc", 2, 3), ("fig1.uwc", 2, 3), ("half_exposed.uwc", 3, 1)]
for name, lam, n_max in cases:
    W = load_channel(channel_path(name))
    scheme = build_scheme(W, lam, 1, n_max=n_max)
    bounds = decoding_error_bound(scheme)
    trace = simulate(scheme, DisturbanceSource.seeded(1, 42), 60)
    print(f"{name}, lam={lam}: {scheme.kind}, phases "
          + ", ".join(f"(n={p.n}, M={p.M}, L={p.L}, blocks={p.blocks})" for p in scheme.phases))
    print(f"  sup error {float(trace.sup_error):.4f} <= kappa {float(bounds.kappa):.4f}")
    k0 = security_k0(scheme)
    rate = security_rate(scheme, k0)
    print(f"  eavesdropper spread / lam^t at block {k0}: {float(rate.measured):.4f}"
          f" (guaranteed {float(rate.analytic):.4f})")
    last = trace.steps[-1]
    print(f"  t={last.t}: eavesdropper interval width {float(last.diameter):.3e}, "
          f"receiver error {float(last.err):.3e}\n")

print("first rows of the blind-eavesdropper trace:")
trace = simulate(build_scheme(load_channel(channel_path("blind3.uwc")), 2, 1), DisturbanceSource.extremal(1, "alternate"), 6)
print(trace.to_csv())
print("exact values, e.g. final estimate:", Fraction(trace.steps[-1].xhat))
