"""Built-in verification suites.

Each suite re-derives a family of analytically checkable properties of the
sampling model and reports one pass/fail entry per check. They are the same
properties the test suite pins down, packaged for the command line.
"""

import numpy as np

from .distribution import (
    POL_INSENSITIVE,
    bunched_mass,
    bunching_oracle,
    distinguishable_marginal,
    full_distribution,
    time_marginal,
)
from .errors import ValidationError
from .events import DetectionEvent, covering_grid, sinc_tiled_grid
from .permanent import permanent_fast, permanent_naive
from .photons import Polarization, SpectralAmplitude
from .probabilities import (
    MBCSInstance,
    different_colors_probability,
    event_probability,
)
from .sampling import gaussian_phase_test
from .unitaries import ginibre, haar_unitary, submatrix


def _check(name: str, description: str, statistic: float, threshold: float,
           larger_is_failure: bool = True) -> dict:
    passed = statistic < threshold if larger_is_failure else statistic >= threshold
    return {
        "name": name,
        "description": description,
        "statistic": float(statistic),
        "threshold": float(threshold),
        "passed": bool(passed),
    }


def _suite(name: str, checks: list) -> dict:
    return {"suite": name, "passed": all(c["passed"] for c in checks), "checks": checks}


def _sinc_photon(color: float, bandwidth: float = 1.0, emission_time: float = 0.0,
                 pol_index: int = 1) -> SpectralAmplitude:
    return SpectralAmplitude(
        shape="sinc",
        bandwidth=bandwidth,
        central_frequency=color,
        emission_time=emission_time,
        polarization=Polarization.basis(pol_index),
    )


def _balanced_splitter() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def verify_hom() -> dict:
    """Two identical photons on a balanced splitter never coincide in the
    same time bin, for every polarization setting."""
    photon = SpectralAmplitude(
        shape="gaussian",
        bandwidth=1.0,
        central_frequency=50.0,
        emission_time=0.0,
        polarization=Polarization.linear(0.3),
    )
    grid = covering_grid([photon, photon], 0.0, 0.05)
    inst = MBCSInstance(
        unitary=_balanced_splitter(),
        input_ports=(0, 1),
        spectra=(photon, photon),
        grid=grid,
    )
    worst = 0.0
    for k in range(grid.k_min, grid.k_max + 1):
        for pols in ((1, 1), (1, 2), (2, 1), (2, 2)):
            worst = max(
                worst, event_probability(inst, DetectionEvent((0, 1), (k, k), pols))
            )
    checks = [
        _check(
            "coincidence_suppression",
            "max equal-bin coincidence probability for identical photons on a "
            "balanced two-port splitter",
            worst,
            1e-12,
        )
    ]
    return _suite("hom", checks)


def verify_beat(color_gap: float = 4.05, theta: float = 0.05) -> dict:
    """Two-color coincidences on a balanced splitter beat as
    sin^2(gap * dt / 2) in the bin-time difference."""
    photons = (_sinc_photon(100.0), _sinc_photon(100.0 + color_gap))
    bound = theta / color_gap
    grid = sinc_tiled_grid(photons, 0.0, max_half_width=bound)
    inst = MBCSInstance(
        unitary=_balanced_splitter(),
        input_ports=(0, 1),
        spectra=photons,
        grid=grid,
        theta=theta,
    )
    scale = (photons[0].bandwidth * grid.half_width) ** 2
    worst = 0.0
    for k1 in range(grid.k_min, grid.k_max + 1):
        t1 = grid.center(k1)
        for k2 in range(grid.k_min, grid.k_max + 1):
            t2 = grid.center(k2)
            got = different_colors_probability(inst, (0, 1), (k1, k2))
            expected = scale * np.sin(color_gap * (t1 - t2) / 2.0) ** 2
            worst = max(worst, abs(got - expected))
    checks = [
        _check(
            "quantum_beat",
            "max absolute deviation of two-color coincidences from the "
            "hand-expanded sin^2 beat curve over all bin pairs",
            worst,
            1e-9,
        )
    ]
    return _suite("beat", checks)


def verify_marginals(separations=(10.0, 100.0, 1000.0)) -> dict:
    """Time-summed port-set probabilities: equal colors reproduce the bare
    submatrix permanents; far-separated colors approach the classical
    squared-modulus permanent."""
    checks = []
    for m, n, seed, theta in ((6, 2, 21, 0.25), (7, 3, 22, 0.25)):
        u = haar_unitary(m, seed)
        ports = tuple(range(n))
        photons = tuple(_sinc_photon(20.0) for _ in range(n))
        grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
        inst = MBCSInstance(u, ports, photons, grid=grid, theta=theta)
        marginal = time_marginal(full_distribution(inst, POL_INSENSITIVE))
        worst = 0.0
        for d, got in marginal.items():
            expected = abs(permanent_fast(submatrix(u, d, ports))) ** 2
            worst = max(worst, abs(got - expected))
        checks.append(
            _check(
                f"equal_colors_identity_m{m}_n{n}",
                "max deviation of the time-summed port-set probability from "
                "|perm of the routing submatrix|^2, equal-color photons",
                worst,
                1e-9,
            )
        )

    u = haar_unitary(2, 23)
    ports = (0, 1)
    errors = []
    for sep in separations:
        photons = (_sinc_photon(50.0), _sinc_photon(50.0 + sep))
        theta = 0.5
        grid = sinc_tiled_grid(photons, 0.0, max_half_width=theta / sep)
        inst = MBCSInstance(u, ports, photons, grid=grid, theta=theta)
        marginal = time_marginal(full_distribution(inst, POL_INSENSITIVE))
        expected = distinguishable_marginal(u, ports, ports)
        errors.append(abs(marginal[ports] - expected) / expected)
    checks.append(
        _check(
            "distinguishable_limit",
            f"relative error of the time-summed coincidence probability "
            f"against the classical squared-modulus permanent at color "
            f"separation {separations[-1]} bandwidths",
            errors[-1],
            1e-2,
        )
    )
    monotone = all(errors[i + 1] < errors[i] for i in range(len(errors) - 1))
    checks.append(
        _check(
            "distinguishable_error_monotone",
            f"error decreases across separations {tuple(separations)} "
            f"(observed {tuple(round(e, 10) for e in errors)})",
            1.0 if monotone else 0.0,
            0.5,
            larger_is_failure=False,
        )
    )
    return _suite("marginals", checks)


def verify_normalization() -> dict:
    """All output mass is accounted for: the bunching-inclusive distribution
    sums to one, and its bunched part complements the collision-free mass."""
    checks = []
    for m, n, seed in ((5, 2, 31), (6, 3, 32)):
        u = haar_unitary(m, seed)
        dist = bunching_oracle(u, tuple(range(n)))
        checks.append(
            _check(
                f"bunching_total_mass_m{m}_n{n}",
                "deviation of the bunching-inclusive total mass from 1",
                abs(dist.total_mass - 1.0),
                1e-9,
            )
        )

    m, n, seed = 5, 2, 33
    u = haar_unitary(m, seed)
    ports = tuple(range(n))
    photons = tuple(_sinc_photon(20.0) for _ in range(n))
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    inst = MBCSInstance(u, ports, photons, grid=grid, theta=0.25)
    dist = full_distribution(inst, POL_INSENSITIVE)
    oracle = bunching_oracle(u, ports)
    checks.append(
        _check(
            "mass_balance",
            "deviation of collision-free mass plus bunched mass from 1",
            abs(dist.total_mass + bunched_mass(oracle) - 1.0),
            1e-9,
        )
    )
    marginal = time_marginal(dist)
    worst = 0.0
    for ev, p in oracle.items():
        if len(set(ev)) == len(ev):
            worst = max(worst, abs(marginal[tuple(ev)] - p))
    checks.append(
        _check(
            "cross_oracle_agreement",
            "max deviation between collision-free bunching-oracle "
            "probabilities and the time-summed enumeration",
            worst,
            1e-9,
        )
    )
    return _suite("normalization", checks)


def verify_gaussian(n_matrices: int = 20, draws: int = 10**5) -> dict:
    """Entry-wise phase rotations leave complex Gaussian matrices looking
    Gaussian; a unit-modulus control is caught by the fourth moment."""
    checks = []
    rng = np.random.Generator(np.random.Philox(key=41))
    n = 3
    failures = 0
    for i in range(n_matrices):
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(n, n))
        report = gaussian_phase_test(n, phases, draws, seed=500 + i)
        if not report.passed:
            failures += 1
    checks.append(
        _check(
            "rotated_gaussian_moments",
            f"number of failing moment reports over {n_matrices} random "
            "phase matrices",
            float(failures),
            0.5,
        )
    )
    control = gaussian_phase_test(
        n,
        rng.uniform(0.0, 2.0 * np.pi, size=(n, n)),
        draws,
        seed=999,
        entry_distribution="unit-circle",
    )
    checks.append(
        _check(
            "unit_circle_control_fails",
            "the unit-modulus control must fail the fourth-moment check",
            0.0 if control.check("abs_fourth").passed else 1.0,
            0.5,
            larger_is_failure=False,
        )
    )
    return _suite("gaussian", checks)


def verify_perm(n_matrices: int = 200) -> dict:
    """The subset-sum permanent agrees with the permutation-sum reference."""
    rng = np.random.Generator(np.random.Philox(key=51))
    worst = 0.0
    for _ in range(n_matrices):
        n = int(rng.integers(2, 9))
        seed = int(rng.integers(0, 2**32))
        a = ginibre(n, n, seed)
        fast = permanent_fast(a)
        ref = permanent_naive(a)
        worst = max(worst, abs(fast - ref) / abs(ref))
    checks = [
        _check(
            "fast_vs_reference",
            f"max relative disagreement between the two permanent "
            f"evaluators over {n_matrices} random complex matrices",
            worst,
            1e-10,
        )
    ]
    return _suite("perm", checks)


SUITES = {
    "hom": verify_hom,
    "beat": verify_beat,
    "marginals": verify_marginals,
    "normalization": verify_normalization,
    "gaussian": verify_gaussian,
    "perm": verify_perm,
}


def run_suite(name: str) -> dict:
    if name not in SUITES:
        raise ValidationError(
            f"unknown suite {name!r}; choose from {sorted(SUITES)}"
        )
    return SUITES[name]()
