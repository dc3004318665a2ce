"""Superradiance and subradiance of the entangled pair in the de Sitter vacuum.

Prepares the pair in each collective state, integrates the master equation at
two separations, and prints how fast the populations leave.  At separations
far below the curvature scale the antisymmetric state decouples from the
field (its decay rate scales with 1 - f(omega0, L/2)) while the symmetric
state radiates at twice the single-atom rate.
"""

import numpy as np

from rcpi.dicke import DickeState, projector
from rcpi.geometry import DeSitterPatch
from rcpi.liouvillian import assemble_generator, build_coefficients, dicke_population_rate, evolve

OMEGA0 = 1.0
MU = 0.5


def main():
    patch = DeSitterPatch(alpha=1.0, r=0.0)
    for L in (1e-3, 1.0):
        coeffs = build_coefficients(patch, OMEGA0, MU, L)
        gen = assemble_generator(coeffs, OMEGA0)
        rate_s = dicke_population_rate(gen, DickeState.S)
        rate_a = dicke_population_rate(gen, DickeState.A)
        print(f"L = {L:g}  (f-weighted cross coefficients at2/at1 = {coeffs.at2/coeffs.at1:.6f})")
        print(f"  initial dp/dtau from |S>: {rate_s:+.3e}")
        print(f"  initial dp/dtau from |A>: {rate_a:+.3e}   (ratio {abs(rate_a/rate_s):.2e})")

        tau = np.linspace(0.0, 200.0, 9)
        for state in (DickeState.S, DickeState.A):
            traj = evolve(projector(state), gen, tau)
            pops = traj.populations[:, 2 if state is DickeState.S else 3]
            print(f"  population of |{state.value}> along tau = {tau[::4].tolist()}: "
                  + ", ".join(f"{p:.6f}" for p in pops[::4]))
        print()


if __name__ == "__main__":
    main()
