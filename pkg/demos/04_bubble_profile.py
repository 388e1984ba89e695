"""Shooting-method solution of the nonlinear radial profile equation.

Starts from rest at eta(0) = eta_0 and bisects on the overshoot /
undershoot classifier until the single regular starting value is pinned
down; then inspects the Yukawa tail and the derived field profiles.
"""

import math

from naqlab import shooting

params = shooting.CouplingParams(lambda_tilde=1.0, m=0.1)
print(f"true vacuum eta_v = {params.eta_vacuum:.6f}")

print()
print("classifier across the bracket:")
for eta0 in (0.3, 0.7, 0.9, 1.1, 1.5):
    traj = shooting.integrate_profile(eta0, params)
    print(f"  eta0 = {eta0:4.2f}: {traj.reason.value}")

result = shooting.find_regular_eta0(params, tol=1e-8)
print()
print(f"regular starting value eta0* = {result.eta0:.8f}  (reference 0.9083)")

tight = shooting.find_regular_eta0(params, tol=1e-12)
mu = shooting.decay_rate(tight.trajectory, (20.0, 50.0))
print(f"tail decay rate mu = {mu:.6f}  (expected m sqrt(lambda) = {params.m * math.sqrt(params.lambda_tilde)})")

profile = shooting.derive_fields(tight.trajectory)
print()
print(f"{'r':>6} {'eta':>12} {'phi_scaled':>12} {'E_scaled':>12}")
for target in (0.5, 2.0, 5.0, 10.0, 20.0):
    i = int(abs(profile.r - target).argmin())
    print(
        f"{profile.r[i]:6.2f} {profile.eta[i]:12.6f} "
        f"{profile.phi_scaled[i]:12.6f} {profile.E_scaled[i]:12.6f}"
    )
