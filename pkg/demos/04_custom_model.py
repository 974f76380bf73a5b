"""Bring your own model: the JSON wire format end to end.

Builds a driven-dissipative qubit (Rabi drive along x, decay to the
ground state), writes it to the JSON schema the command line accepts,
loads it back, and runs the full analysis from the library API.
"""

import json
import tempfile

import numpy as np

from qslpath import build_report, evolve, load_model, speed_profile, path_length


def wire(matrix):
    return [[float(x.real), float(x.imag)] for x in np.asarray(matrix).reshape(-1)]


def main():
    drive = 0.8
    decay = 0.4
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sigma_minus = np.array([[0, 1], [0, 0]], dtype=complex)

    doc = {
        "name": "driven-decay",
        "dim": 2,
        "hamiltonian": wire(0.5 * drive * sx),
        "jumps": [{"matrix": wire(sigma_minus), "rate": decay}],
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(doc, fh)
        path = fh.name
    print(f"model document written to {path}:")
    print(json.dumps(doc, indent=2)[:240] + " ...\n")

    model = load_model(path)
    rho0 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)  # excited state
    traj = evolve(model, rho0, 6.0, 4000)
    report = build_report(traj)

    print(f"model           : {model.name} (dim {model.dim}, "
          f"{len(model.jumps)} jump operator)")
    print(f"geodesic B      : {report.bures:.6f}")
    print(f"path length     : {report.length:.6f}")
    print(f"tau_min / tau_av: {report.tau_min:.6f} / {report.tau_av:.6f}")
    print(f"norm bounds     : op {report.tau_op:.4f}, hs {report.tau_hs:.4f}, "
          f"tr {report.tau_tr:.4f}")
    print(f"verdict         : {report.verdict.kind} (gap {report.verdict.gap:.4f})")

    pl = path_length(speed_profile(traj))
    print(f"\nmean Bures speed over the run: {pl.length[-1] / traj.tau:.4f}")
    print("The drive bends the path away from a geodesic, so the estimates"
          "\ncome out unattainable, exactly as for the built-in spiral.")


if __name__ == "__main__":
    main()
