"""N-photon detection matrices and event probabilities.

The probability of a sample (ports D, bins {k_d}, polarizations {p_d}) is
(2 T_I)^N |perm T|^2, where T pairs the interferometer submatrix with each
photon's time-domain amplitude at the detector's bin center and polarization
setting. Equal-time, polarization-summed, and flat-envelope different-color
specializations factor the permanent accordingly; every specialization agrees
with the general path to the documented tolerances.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DimensionError, ValidationError
from .events import DetectionEvent, TimeGrid
from .permanent import permanent_fast
from .photons import (
    DEFAULT_THETA,
    SpectralAmplitude,
    TemporalAmplitude,
    max_integration_time,
    temporal_amplitude,
)
from .unitaries import submatrix, unitarity_defect

INSTANCE_UNITARITY_TOL = 1e-10
# Relative slack when checking T_I against the validity bound, so a grid
# built exactly at the bound is not rejected for rounding.
_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class MBCSInstance:
    """A fixed sampling experiment: interferometer, input photons, delay,
    detection grid, and the validity tolerance theta.

    ``spectra`` may be a mapping from input port to photon or a sequence
    parallel to ``input_ports``; internally both are stored sorted by port.
    """

    unitary: np.ndarray
    input_ports: tuple
    spectra: Union[Mapping[int, SpectralAmplitude], Sequence[SpectralAmplitude]]
    delay: float = 0.0
    grid: TimeGrid = None
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"interferometer matrix must be square, got {u.shape}")
        defect = unitarity_defect(u)
        if defect > INSTANCE_UNITARITY_TOL:
            raise ValidationError(
                f"matrix is not unitary: max |U†U - I| = {defect:.3e}"
            )
        ports = tuple(int(p) for p in self.input_ports)
        if len(set(ports)) != len(ports):
            raise ValidationError(f"input ports must be distinct, got {ports}")
        if any(p < 0 or p >= u.shape[0] for p in ports):
            raise ValidationError(f"input port outside matrix of size {u.shape[0]}")
        if len(ports) > u.shape[0]:
            raise ValidationError("more photons than ports")
        if isinstance(self.spectra, Mapping):
            if set(self.spectra) != set(ports):
                raise ValidationError("spectra mapping must cover exactly the input ports")
            ordered = tuple(self.spectra[p] for p in sorted(ports))
        else:
            specs = tuple(self.spectra)
            if len(specs) != len(ports):
                raise ValidationError("need exactly one photon per input port")
            ordered = tuple(s for _, s in sorted(zip(ports, specs)))
        if self.grid is None:
            raise ValidationError("an instance needs a detection-time grid")
        bound = max_integration_time(ordered, self.theta)
        if self.grid.half_width > bound * (1.0 + _BOUND_SLACK):
            raise ValidationError(
                f"half-width {self.grid.half_width!r} violates the validity bound "
                f"{bound!r} at theta = {self.theta}"
            )
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "input_ports", tuple(sorted(ports)))
        object.__setattr__(self, "spectra", ordered)

    @property
    def n_photons(self) -> int:
        return len(self.input_ports)

    @property
    def n_ports(self) -> int:
        return self.unitary.shape[0]

    @cached_property
    def amplitudes(self) -> tuple:
        """Per-photon temporal amplitudes, in input-port order."""
        return tuple(temporal_amplitude(s, self.delay) for s in self.spectra)

    @cached_property
    def validity_bound(self) -> float:
        return max_integration_time(self.spectra, self.theta)

    def photon(self, port: int) -> SpectralAmplitude:
        return self.spectra[self.input_ports.index(port)]


def _require_event(inst: MBCSInstance, ev: DetectionEvent, need_pols: bool) -> None:
    if ev.size != inst.n_photons:
        raise ValidationError(
            f"event has {ev.size} detectors but the instance has {inst.n_photons} photons"
        )
    ev.validate(inst.n_ports, inst.grid)
    if need_pols and ev.pols is None:
        raise ValidationError("this operation needs polarization-resolved events")


def detection_matrix(inst: MBCSInstance, ev: DetectionEvent) -> np.ndarray:
    """N x N matrix pairing U_{d,s} with photon s's amplitude at detector d.

    Rows follow the event's ports (ascending), columns the input ports
    (ascending).
    """
    _require_event(inst, ev, need_pols=True)
    sub = submatrix(inst.unitary, ev.ports, inst.input_ports)
    n = inst.n_photons
    amps = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        t = inst.grid.center(ev.bins[i])
        for j, photon in enumerate(inst.amplitudes):
            amps[i, j] = photon.projected(ev.pols[i], t)
    return sub * amps


def event_rate(inst: MBCSInstance, ev: DetectionEvent) -> float:
    """N-fold detection probability rate |perm T|^2 (per time^N)."""
    return float(abs(permanent_fast(detection_matrix(inst, ev))) ** 2)


def event_probability(inst: MBCSInstance, ev: DetectionEvent) -> float:
    """Probability of detecting the event in its half-open time bins."""
    return (2.0 * inst.grid.half_width) ** inst.n_photons * event_rate(inst, ev)


def equal_time_pol_probability(
    inst: MBCSInstance, ports, bin_index: int, pol: int
) -> float:
    """Probability of an all-equal-bin, all-equal-polarization event.

    Factors into |perm U^(D,S)|^2 times per-photon amplitude moduli; agrees
    with the general path on the corresponding event to 1e-10 relative.
    """
    ev = DetectionEvent(
        tuple(ports),
        (bin_index,) * len(tuple(ports)),
        (pol,) * len(tuple(ports)),
    )
    _require_event(inst, ev, need_pols=True)
    sub = submatrix(inst.unitary, ev.ports, inst.input_ports)
    t = inst.grid.center(bin_index)
    weight = 1.0
    for photon in inst.amplitudes:
        weight *= abs(photon.projected(pol, t)) ** 2
    n = inst.n_photons
    return (2.0 * inst.grid.half_width) ** n * abs(permanent_fast(sub)) ** 2 * weight


def pol_insensitive_probability(inst: MBCSInstance, ports, bins) -> float:
    """Event probability summed over all 2^N polarization assignments."""
    ports = tuple(ports)
    bins = tuple(bins)
    total = 0.0
    for pols in product((1, 2), repeat=len(ports)):
        total += event_probability(inst, DetectionEvent(ports, bins, pols))
    return total


def _require_flat_different_colors(inst: MBCSInstance) -> None:
    specs = inst.spectra
    first = specs[0]
    if any(s.shape != "sinc" for s in specs):
        raise ValidationError("the different-colors form needs sinc-shaped photons")
    for s in specs[1:]:
        if abs(s.bandwidth - first.bandwidth) > 1e-12 * first.bandwidth:
            raise ValidationError("the different-colors form needs equal bandwidths")
        if abs(s.emission_time - first.emission_time) > 1e-12 / first.bandwidth:
            raise ValidationError("the different-colors form needs equal emission times")
        if abs(abs(s.polarization.overlap(first.polarization)) - 1.0) > 1e-12:
            raise ValidationError("the different-colors form needs equal polarizations")


def different_colors_probability(inst: MBCSInstance, ports, bins) -> float:
    """Flat-envelope different-colors probability, summed over polarizations.

    Equals (dw T_I)^N |perm(U^(D,S) with each column rotated by its photon's
    carrier phase at the detector bin)|^2 inside the detection window, and
    exactly 0 for any bin outside it. Matches the general
    polarization-insensitive path to 1e-10 relative.
    """
    _require_flat_different_colors(inst)
    ports = tuple(ports)
    bins = tuple(bins)
    ev = DetectionEvent(ports, bins)
    if ev.size != inst.n_photons:
        raise ValidationError(
            f"event has {ev.size} detectors but the instance has {inst.n_photons} photons"
        )
    for p in ev.ports:
        if p < 0 or p >= inst.n_ports:
            raise IndexError(f"port {p} outside interferometer of size {inst.n_ports}")
    # Out-of-grid bins lie outside the detection window and carry zero
    # probability; they are not an error here.
    if any(not inst.grid.contains(k) for k in ev.bins):
        return 0.0
    n = inst.n_photons
    t_i = inst.grid.half_width
    times = np.array([inst.grid.center(k) for k in ev.bins])
    # The flat envelope factors out of the permanent row by row; evaluating it
    # (instead of hard-coding its interior value) keeps the measure-zero
    # window boundary consistent with the general path and gives an exact 0
    # outside the detection window.
    env = np.array([inst.amplitudes[0].envelope(t) for t in times], dtype=np.float64)
    if np.any(env == 0.0):
        return 0.0
    sub = submatrix(inst.unitary, ev.ports, inst.input_ports)
    colors = np.array([s.central_frequency for s in inst.spectra])
    phases = np.exp(1j * np.multiply.outer(times, colors))
    weight = float(np.prod(env**2))
    return (2.0 * t_i) ** n * weight * float(abs(permanent_fast(sub * phases)) ** 2)
