"""Entanglement generated from the product state |10> by a shared near-horizon bath.

Prints mu^2 t against concurrence and discord for a few detector radii, and the
equilibrium value the trajectory relaxes to.
"""
import numpy as np

from kerrqc.bath import BathSpectrum, dissipation_coeffs
from kerrqc.geometry import BlackHoleParams, DetectorPosition, local_acceleration
from kerrqc.gksl import build_common_bath_liouvillian, equilibrium_steady_state, evolve_rk4
from kerrqc.measures import concurrence, discord_xstate
from kerrqc.states import product_state

OMEGA, MU = 0.1, 0.01


def main():
    bh = BlackHoleParams(10.01, 10.0)
    rho0 = product_state([0, 0, 1], [0, 0, -1])
    t_scaled = np.linspace(0, 20, 11)
    for factor in (1.01, 1.05, 1.5):
        kr = local_acceleration(bh, DetectorPosition(factor))
        c = dissipation_coeffs(BathSpectrum.unruh(kr), OMEGA, MU)
        traj = evolve_rk4(build_common_bath_liouvillian(c), rho0, t_scaled / MU**2, 1e-3 / MU**2)
        eq = equilibrium_steady_state(c.R, -1.0).to_density()
        print(f"# r/r+={factor} kappa_r={kr:.6g} R={c.R:.6g} C_eq={concurrence(eq):.6g}")
        print("mu2t,concurrence,discord")
        for t, rho in zip(t_scaled, traj):
            print(f"{t:g},{concurrence(rho):.6g},{discord_xstate(rho).discord:.6g}")


if __name__ == "__main__":
    main()
