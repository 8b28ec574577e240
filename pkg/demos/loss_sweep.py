"""Gate fidelity vs emitter loss for all four basis states.

The stored photon spends the whole parking window in the exciton, so
the aa state pays for gamma twice (storage plus biexciton reflection)
and degrades first.

    python3 demos/loss_sweep.py
"""

import phasegate as pg

RATIOS = (0.0, 0.001, 0.005, 0.01, 0.05, 0.1, 0.2)


def main():
    base = pg.make_scenario("aa", width=pg.CALIBRATED_WIDTH,
                            n_modes=800, bandwidth=12.0)
    sweep = pg.gamma_sweep(base, RATIOS)
    print("gamma/kappa  F_aa     F_ab     F_ba     F_bb")
    for i, ratio in enumerate(sweep.axis):
        cols = "  ".join(f"{sweep.fidelities[s][i]:.5f}"
                         for s in pg.INPUT_STATES)
        print(f"{ratio:<12g} {cols}")


if __name__ == "__main__":
    main()
