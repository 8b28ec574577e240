"""Conditional-phase robustness: the pi is set by interference, not tuning.

Reflect photon 2 off the bare cavity (ba state) at three overall rate
scales g = kappa and print the acquired phase and how flat it stays
across the pulse.  Pulse width and schedule scale with 1/g, so all
three runs are the same physics in rescaled time.

    python3 demos/phase_robustness.py
"""

import numpy as np

import phasegate as pg


def fwhm_deviation(result):
    profile = pg.phase_profile(result.photon2_in, result.photon2_out,
                               result.delay2)
    mags = np.abs(result.photon2_in.values)
    ref = np.interp(profile.times - result.delay2, result.photon2_in.times, mags)
    sel = ref >= mags.max() / np.sqrt(2)
    return float(np.max(np.abs(pg.wrap_angle(profile.phase[sel] - np.pi))))


def main():
    print("g=kappa  phase2     |phase-pi|  FWHM deviation  F2")
    for g in (0.5, 1.0, 2.0):
        scenario = pg.make_scenario("ba", g=g, kappa=g,
                                    width=pg.CALIBRATED_WIDTH / g,
                                    n_modes=800, bandwidth=12.0 * g)
        r = pg.run_scenario(scenario)
        off = abs(pg.wrap_angle(r.phase2 - np.pi))
        print(f"{g:<8g} {r.phase2:+.5f}   {off:.5f}     {fwhm_deviation(r):.5f}"
              f"         {r.fidelity2:.5f}")
    print()
    print("the reflection phase sits at pi to < 0.001 rad at every scale;")
    print("it comes from the sign flip of the bare-cavity response, so it")
    print("needs no fine tuning of g, kappa, or the pulse")


if __name__ == "__main__":
    main()
