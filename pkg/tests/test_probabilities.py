import numpy as np
import pytest

from mbcs import (
    DetectionEvent,
    MBCSInstance,
    Polarization,
    SpectralAmplitude,
    TimeGrid,
    covering_grid,
    detection_matrix,
    different_colors_probability,
    equal_time_pol_probability,
    event_probability,
    event_rate,
    haar_unitary,
    permanent_fast,
    permanent_naive,
    pol_insensitive_probability,
    sinc_tiled_grid,
    submatrix,
)
from mbcs.errors import ValidationError

E1 = Polarization.basis(1)

BALANCED = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def sinc_photon(color=20.0, bandwidth=1.0, t0=0.0, pol=E1):
    return SpectralAmplitude("sinc", bandwidth, color, t0, pol)


def gaussian_photon(color=20.0, bandwidth=1.0, t0=0.0, pol=E1):
    return SpectralAmplitude("gaussian", bandwidth, color, t0, pol)


def hom_instance(pol=E1):
    photons = (sinc_photon(pol=pol), sinc_photon(pol=pol))
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    return MBCSInstance(BALANCED, (0, 1), photons, grid=grid, theta=0.25)


def single_photon_instance():
    photon = sinc_photon()
    grid = sinc_tiled_grid([photon], 0.0, half_width=0.2)
    return MBCSInstance(np.eye(1, dtype=complex), (0,), [photon], grid=grid, theta=0.25)


def random_three_photon_instance(seed=4):
    u = haar_unitary(5, seed)
    photons = (
        gaussian_photon(color=20.0, t0=-0.1, pol=Polarization.linear(0.4)),
        gaussian_photon(color=21.0, t0=0.0, pol=Polarization.linear(1.1)),
        gaussian_photon(color=22.0, t0=0.15, pol=E1),
    )
    grid = covering_grid(photons, 0.0, 0.1)
    return MBCSInstance(u, (0, 2, 3), photons, grid=grid, theta=0.25)


def test_instance_rejects_non_unitary():
    with pytest.raises(ValidationError):
        MBCSInstance(
            np.ones((2, 2), dtype=complex),
            (0, 1),
            (sinc_photon(), sinc_photon()),
            grid=TimeGrid(0.2, -2, 2),
            theta=0.25,
        )


def test_instance_rejects_duplicate_ports():
    with pytest.raises(ValidationError):
        MBCSInstance(
            BALANCED, (0, 0), (sinc_photon(), sinc_photon()),
            grid=TimeGrid(0.2, -2, 2), theta=0.25,
        )


def test_instance_enforces_integration_time_bound():
    photons = (sinc_photon(color=20.0), sinc_photon(color=30.0))  # gap 10
    with pytest.raises(ValidationError):
        MBCSInstance(BALANCED, (0, 1), photons, grid=TimeGrid(0.2, -2, 2), theta=0.25)
    # fine once T_I respects theta / gap
    grid = sinc_tiled_grid(photons, 0.0, max_half_width=0.25 / 10.0)
    MBCSInstance(BALANCED, (0, 1), photons, grid=grid, theta=0.25)


def test_instance_accepts_mapping_spectra():
    photons = (sinc_photon(), sinc_photon(color=21.0))
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    a = MBCSInstance(BALANCED, (0, 1), photons, grid=grid, theta=0.25)
    b = MBCSInstance(
        BALANCED, (1, 0), {0: photons[0], 1: photons[1]}, grid=grid, theta=0.25
    )
    ev = DetectionEvent((0, 1), (0, 1), (1, 1))
    assert abs(event_probability(a, ev) - event_probability(b, ev)) < 1e-15


def test_detection_matrix_single_port():
    inst = single_photon_instance()
    ev = DetectionEvent((0,), (1,), (1,))
    t = inst.grid.center(1)
    expected = inst.amplitudes[0].projected(1, t)
    assert abs(detection_matrix(inst, ev)[0, 0] - expected) < 1e-15


def test_detection_matrix_orthogonal_polarization_zeroes_column():
    inst = hom_instance(pol=E1)
    ev = DetectionEvent((0, 1), (0, 0), (2, 2))
    assert np.all(detection_matrix(inst, ev) == 0.0)


def test_detection_matrix_hom_permanent_vanishes():
    inst = hom_instance()
    ev = DetectionEvent((0, 1), (0, 0), (1, 1))
    assert abs(permanent_fast(detection_matrix(inst, ev))) == 0.0


def test_event_rate_hom_coincidence():
    inst = hom_instance()
    for k in range(inst.grid.k_min, inst.grid.k_max + 1):
        assert event_rate(inst, DetectionEvent((0, 1), (k, k), (1, 1))) < 1e-12


def test_event_rate_single_photon_is_envelope_density():
    inst = single_photon_instance()
    for k in range(inst.grid.k_min, inst.grid.k_max + 1):
        got = event_rate(inst, DetectionEvent((0,), (k,), (1,)))
        assert abs(got - 0.5) < 1e-15  # |envelope|^2 = dw/2


def test_event_rate_matches_reference_permanent():
    inst = random_three_photon_instance()
    rng = np.random.default_rng(0)
    for _ in range(8):
        ports = tuple(sorted(rng.choice(5, size=3, replace=False)))
        bins = tuple(rng.integers(inst.grid.k_min, inst.grid.k_max + 1, size=3))
        pols = tuple(rng.integers(1, 3, size=3))
        ev = DetectionEvent(ports, bins, pols)
        ref = abs(permanent_naive(detection_matrix(inst, ev))) ** 2
        assert abs(event_rate(inst, ev) - ref) <= 1e-10 * max(ref, 1e-300)


def test_event_probability_prefactor_and_uniformity():
    inst = single_photon_instance()
    probs = [
        event_probability(inst, DetectionEvent((0,), (k,), (1,)))
        for k in range(inst.grid.k_min, inst.grid.k_max + 1)
    ]
    # flat envelope: every in-window bin carries 1/L
    assert np.allclose(probs, 1.0 / inst.grid.size, atol=1e-15)
    assert abs(sum(probs) - 1.0) < 1e-9


def test_equal_time_pol_matches_general_path():
    inst = random_three_photon_instance()
    ports = (1, 2, 4)
    for k in (-2, 0, 3):
        for pol in (1, 2):
            ev = DetectionEvent(ports, (k, k, k), (pol, pol, pol))
            general = event_probability(inst, ev)
            reduced = equal_time_pol_probability(inst, ports, k, pol)
            # absolute floor: probabilities that vanish exactly leave only
            # cancellation residue on the general path
            assert abs(reduced - general) <= 1e-10 * general + 1e-30


def test_equal_time_pol_hom_suppression():
    inst = hom_instance()
    assert equal_time_pol_probability(inst, (0, 1), 0, 1) < 1e-14


def test_equal_time_pol_trivial_routing():
    # identity interferometer: permanent of the routing block is 1
    photons = (sinc_photon(), sinc_photon())
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    inst = MBCSInstance(np.eye(2, dtype=complex), (0, 1), photons, grid=grid, theta=0.25)
    got = equal_time_pol_probability(inst, (0, 1), 0, 1)
    amp = inst.amplitudes[0].projected(1, 0.0)
    expected = (2 * grid.half_width) ** 2 * abs(amp) ** 4
    assert abs(got - expected) <= 1e-12 * expected


def test_pol_insensitive_single_photon_completeness():
    photon = sinc_photon(pol=Polarization.linear(0.6))
    grid = sinc_tiled_grid([photon], 0.0, half_width=0.2)
    inst = MBCSInstance(np.eye(1, dtype=complex), (0,), [photon], grid=grid, theta=0.25)
    got = pol_insensitive_probability(inst, (0,), (0,))
    expected = 2 * grid.half_width * abs(inst.amplitudes[0].scalar(0.0)) ** 2
    assert abs(got - expected) <= 1e-12 * expected


def test_pol_insensitive_identical_photons_closed_form():
    pol = Polarization.linear(0.7)
    photons = (gaussian_photon(pol=pol), gaussian_photon(pol=pol))
    grid = covering_grid(photons, 0.0, 0.1)
    u = haar_unitary(3, 8)
    inst = MBCSInstance(u, (0, 1), photons, grid=grid, theta=0.25)
    for ports in ((0, 1), (0, 2), (1, 2)):
        for bins in ((0, 0), (-1, 2)):
            got = pol_insensitive_probability(inst, ports, bins)
            sub = submatrix(u, ports, (0, 1))
            dens = [abs(inst.amplitudes[0].scalar(inst.grid.center(k))) ** 2 for k in bins]
            expected = (
                abs(permanent_fast(sub)) ** 2
                * (2 * grid.half_width) ** 2
                * dens[0]
                * dens[1]
            )
            assert abs(got - expected) <= 1e-10 * max(expected, 1e-300)


def test_pol_insensitive_hom_equal_bins():
    inst = hom_instance(pol=Polarization.linear(0.3))
    assert pol_insensitive_probability(inst, (0, 1), (1, 1)) < 1e-14


def test_different_colors_equal_colors_is_bin_independent():
    photons = (sinc_photon(color=20.0), sinc_photon(color=20.0))
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    u = haar_unitary(4, 10)
    inst = MBCSInstance(u, (0, 1), photons, grid=grid, theta=0.25)
    sub = submatrix(u, (0, 2), (0, 1))
    expected = (grid.half_width * 1.0) ** 2 * abs(permanent_fast(sub)) ** 2
    for bins in ((0, 0), (-2, 1), (2, -1)):
        got = different_colors_probability(inst, (0, 2), bins)
        assert abs(got - expected) <= 1e-10 * expected


def test_different_colors_matches_general_path():
    gap = 4.05
    photons = (sinc_photon(color=100.0), sinc_photon(color=100.0 + gap))
    grid = sinc_tiled_grid(photons, 0.0, max_half_width=0.05 / gap)
    u = haar_unitary(3, 12)
    inst = MBCSInstance(u, (0, 1), photons, grid=grid, theta=0.05)
    rng = np.random.default_rng(1)
    for _ in range(6):
        ports = tuple(sorted(rng.choice(3, size=2, replace=False)))
        bins = tuple(rng.integers(grid.k_min, grid.k_max + 1, size=2))
        special = different_colors_probability(inst, ports, bins)
        general = pol_insensitive_probability(inst, ports, bins)
        assert abs(special - general) <= 1e-10 * max(general, 1e-300)


def test_different_colors_out_of_window_bins_are_zero():
    photons = (sinc_photon(color=20.0), sinc_photon(color=21.0))
    grid = sinc_tiled_grid(photons, 0.0, half_width=0.2)
    u = haar_unitary(2, 13)
    inst = MBCSInstance(u, (0, 1), photons, grid=grid, theta=0.3)
    assert different_colors_probability(inst, (0, 1), (0, 99)) == 0.0
    assert different_colors_probability(inst, (0, 1), (-99, 0)) == 0.0


def test_different_colors_rejects_wrong_family():
    photons = (gaussian_photon(), gaussian_photon())
    grid = covering_grid(photons, 0.0, 0.1)
    inst = MBCSInstance(BALANCED, (0, 1), photons, grid=grid, theta=0.25)
    with pytest.raises(ValidationError):
        different_colors_probability(inst, (0, 1), (0, 0))


def test_detector_permutation_symmetry():
    inst = random_three_photon_instance()
    perm = np.array([3, 1, 4, 0, 2])
    u_perm = inst.unitary[perm, :]
    inst_perm = MBCSInstance(
        u_perm, inst.input_ports, inst.spectra, grid=inst.grid, theta=inst.theta
    )
    # detector at row i of the permuted matrix is detector perm[i] originally
    rng = np.random.default_rng(2)
    inverse = np.argsort(perm)
    for _ in range(6):
        ports = tuple(sorted(rng.choice(5, size=3, replace=False)))
        bins = tuple(rng.integers(inst.grid.k_min, inst.grid.k_max + 1, size=3))
        pols = tuple(rng.integers(1, 3, size=3))
        mapped_ports = tuple(int(inverse[p]) for p in ports)
        p_orig = event_probability(inst, DetectionEvent(ports, bins, pols))
        p_perm = event_probability(inst_perm, DetectionEvent(mapped_ports, bins, pols))
        assert abs(p_orig - p_perm) < 1e-12


def test_events_must_match_instance():
    inst = hom_instance()
    with pytest.raises(ValidationError):
        event_probability(inst, DetectionEvent((0,), (0,), (1,)))
    with pytest.raises(IndexError):
        event_probability(inst, DetectionEvent((0, 5), (0, 0), (1, 1)))
    with pytest.raises(IndexError):
        event_probability(inst, DetectionEvent((0, 1), (0, 99), (1, 1)))
    with pytest.raises(ValidationError):
        event_rate(inst, DetectionEvent((0, 1), (0, 0)))
