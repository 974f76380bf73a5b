"""Self-check suite behind the ``verify`` CLI command.

Each check returns ``(ok, detail)``; ``run_all`` evaluates every group and
reports the first counterexample's inputs on failure.  The groups mirror
the core contracts of the library: the path-length inequality, the
mean-speed algebraic identity, the geodesic collapse of the estimates,
Schatten-norm ordering, closed-form oracle agreement, and the metric
sandwich between fidelity and trace distance.
"""

import numpy as np

from .bounds import build_report
from .dynamics import (
    amplitude_damping,
    catalog,
    evolve,
    lindblad_rhs,
    LindbladModel,
)
from .geometry import path_length, speed_profile
from .states import bures_angle, fidelity, trace_distance

__all__ = ["run_all", "CHECKS"]


def _random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _random_model(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    ham = 0.5 * (g + g.conj().T)
    jumps = []
    for _ in range(rng.integers(1, 3)):
        j = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        jumps.append((j / np.sqrt(dim), float(rng.uniform(0.1, 1.0))))
    return LindbladModel(name="random", dim=dim, hamiltonian=ham, jumps=jumps)


def check_path_inequality():
    """Geodesic distance never exceeds the traveled path length (to the
    quadrature budget 1e-4), at every grid point of every catalog model."""
    models = catalog(gamma=1.0, omega=5.0) + [catalog(gamma=0.5, omega=5.0)[3]]
    worst = -np.inf
    worst_at = ""
    for model in models:
        scale = max(model.gamma, model.omega, 0.5)
        traj = evolve(model, model.rho0, 6.0 / scale, 2000)
        pl = path_length(speed_profile(traj))
        for i in range(0, len(traj.times)):
            gap = bures_angle(traj.states[0], traj.states[i]) - pl.length[i]
            if gap > worst:
                worst = gap
                worst_at = f"{model.name} (gamma={model.gamma}, omega={model.omega}) t={traj.times[i]:.4f}"
        if worst > 1e-4:
            return False, f"violated by {worst:.3e} at {worst_at}"
    return True, f"max (distance - length) = {worst:.3e} at {worst_at}"


def check_mean_speed_identity():
    """tau_av equals (B / length) * tau to 1e-12 relative on randomized
    trajectories."""
    rng = np.random.default_rng(20240811)
    worst = 0.0
    for k in range(40):
        dim = int(rng.integers(2, 5))
        model = _random_model(rng, dim)
        rho0 = _random_density(rng, dim)
        tau = float(rng.uniform(0.5, 2.0))
        report = build_report(evolve(model, rho0, tau, 64))
        lhs = report.tau_av
        rhs = report.ratio * report.tau
        rel = abs(lhs - rhs) / report.tau
        if rel > worst:
            worst = rel
        if rel > 1e-12:
            return False, f"case {k} (dim {dim}): relative deviation {rel:.3e}"
    return True, f"max relative deviation {worst:.3e} over 40 random trajectories"


def check_geodesic_collapse():
    """On geodesic paths all estimates collapse onto the true horizon, and
    the damping path length hits its arccos closed form (pi/3 check)."""
    tau = float(np.log(4.0))
    report = build_report(evolve(amplitude_damping(1.0), amplitude_damping(1.0).rho0, tau, 4000))
    err_len = abs(report.length - np.pi / 3.0)
    if err_len > 1e-4:
        return False, f"damping length {report.length!r} vs pi/3: error {err_len:.3e}"
    if not report.verdict.attainable:
        return False, f"damping verdict unattainable (gap {report.verdict.gap:.3e})"
    if abs(report.tau_min - tau) > 1e-3 * tau or abs(report.tau_av - tau) > 1e-3 * tau:
        return False, (
            f"collapse failed: tau_min={report.tau_min!r}, tau_av={report.tau_av!r}, tau={tau!r}"
        )
    return True, (
        f"length error {err_len:.3e}; |tau_min - tau| = {abs(report.tau_min - tau):.3e}"
    )


def check_norm_ordering():
    """Schatten speeds order op <= hs <= tr pointwise, so the bound family
    orders tau_op >= tau_hs >= tau_tr."""
    for model in catalog(gamma=0.7, omega=3.0):
        traj = evolve(model, model.rho0, 2.0, 400)
        prof = speed_profile(traj)
        if not (
            np.all(prof.norm_speed_op <= prof.norm_speed_hs)
            and np.all(prof.norm_speed_hs <= prof.norm_speed_tr)
        ):
            return False, f"pointwise norm ordering broken on {model.name}"
        report = build_report(traj)
        if not (report.tau_op >= report.tau_hs >= report.tau_tr):
            return False, f"bound ordering broken on {model.name}: {report}"
    return True, "op <= hs <= tr pointwise and tau_op >= tau_hs >= tau_tr on the catalog"


def check_oracle_agreement():
    """RK4 trajectories match the closed-form catalog states to 1e-6 in
    trace distance at 2000 steps."""
    worst = 0.0
    worst_at = ""
    for model in catalog(gamma=1.0, omega=2.0):
        traj = evolve(model, model.rho0, 4.0, 2000)
        for i in range(0, len(traj.times), 50):
            d = trace_distance(traj.states[i], model.oracles.state(traj.times[i]))
            if d > worst:
                worst, worst_at = d, f"{model.name} t={traj.times[i]:.3f}"
    if worst > 1e-6:
        return False, f"max trace-distance error {worst:.3e} at {worst_at}"
    return True, f"max trace-distance error {worst:.3e} at {worst_at}"


def check_metric_sandwich():
    """1 - F <= D <= sqrt(1 - F^2) on 100 random pairs, plus fidelity
    symmetry."""
    rng = np.random.default_rng(11)
    for k in range(100):
        dim = int(rng.integers(2, 5))
        rho = _random_density(rng, dim)
        sigma = _random_density(rng, dim)
        f = fidelity(rho, sigma)
        d = trace_distance(rho, sigma)
        if not (1.0 - f <= d + 1e-9 and d <= np.sqrt(max(0.0, 1.0 - f * f)) + 1e-9):
            return False, f"pair {k} (dim {dim}): F={f!r}, D={d!r}"
        if abs(f - fidelity(sigma, rho)) > 1e-10:
            return False, f"pair {k}: fidelity asymmetric"
    return True, "holds on 100 random pairs (dims 2-4)"


def check_generator_contract():
    """The generator output is Hermitian and traceless on random inputs."""
    rng = np.random.default_rng(5)
    for k in range(25):
        dim = int(rng.integers(2, 5))
        model = _random_model(rng, dim)
        rho = _random_density(rng, dim)
        out = lindblad_rhs(model, rho)
        herm = np.max(np.abs(out - out.conj().T))
        tr = abs(np.trace(out))
        if herm > 1e-12 or tr > 1e-12:
            return False, f"case {k}: hermiticity {herm:.3e}, trace {tr:.3e}"
    return True, "Hermitian and traceless to 1e-12 on 25 random cases"


CHECKS = [
    ("path-length inequality", check_path_inequality),
    ("mean-speed identity", check_mean_speed_identity),
    ("geodesic collapse", check_geodesic_collapse),
    ("schatten ordering", check_norm_ordering),
    ("oracle agreement", check_oracle_agreement),
    ("metric sandwich", check_metric_sandwich),
    ("generator contract", check_generator_contract),
]


def run_all():
    """Evaluate all invariant groups; returns a list of
    (name, ok, detail)."""
    results = []
    for name, check in CHECKS:
        ok, detail = check()
        results.append((name, ok, detail))
    return results
