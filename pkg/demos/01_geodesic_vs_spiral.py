"""When is a speed-limit estimate the actual travel time?

Two qubit trajectories with the same machinery applied to both:

* amplitude damping follows a Bures geodesic, so the traveled length
  equals the geodesic distance and every estimate lands exactly on the
  true horizon;
* adding a drive turns the path into a spiral that is strictly longer
  than the geodesic chord, so the same formulas return times that are
  smaller than the horizon and no longer attainable by this dynamics.
"""

import numpy as np

from qslpath import amplitude_damping, report_for_model, spiral


def show(title, model, tau, steps=4000):
    report = report_for_model(model, model.rho0, tau, steps)
    print(f"\n--- {title} (horizon tau = {tau:.4f}) ---")
    print(f"geodesic distance B       : {report.bures:.6f}")
    print(f"traveled path length      : {report.length:.6f}")
    print(f"ratio B / length          : {report.ratio:.6f}")
    print(f"tau_min (distance-matched): {report.tau_min:.6f}")
    print(f"tau_av  (mean-speed)      : {report.tau_av:.6f}")
    print(f"verdict                   : {report.verdict.kind}"
          f" (gap {report.verdict.gap:.2e}, tolerance {report.verdict.tolerance})")


def main():
    tau = float(np.log(4.0))
    show("amplitude damping, gamma = 1", amplitude_damping(1.0), tau)
    print("\nOn the geodesic the length equals the distance (both arccos(1/2) ="
          "\npi/3 here), so tau_min and tau_av recover the horizon exactly:"
          "\nthe estimates are attained by the dynamics itself.")

    show("spiral, gamma = 0.5, omega = 5", spiral(0.5, 5.0), 2.0, steps=8000)
    print("\nThe spiral travels much farther than the chord, so both estimates"
          "\nfall well below the horizon.  They are still valid lower bounds,"
          "\nbut no state following this dynamics reaches the target in that"
          "\ntime: the verdict marks them unattainable.")


if __name__ == "__main__":
    main()
