"""Discretized detection-time grids and detection events.

The detection-time axis is split into half-open bins [t_k - T_I, t_k + T_I)
of width 2 T_I centered at t_k = 2 T_I k, with integer bin indices k running
from k_min to k_max.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .photons import temporal_amplitude

_ALIGN_TOL = 1e-6


@dataclass(frozen=True)
class TimeGrid:
    """Uniform bin grid: half-width T_I and inclusive index range."""

    half_width: float
    k_min: int
    k_max: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValidationError("integration half-width must be positive")
        if self.k_min > self.k_max:
            raise ValidationError(
                f"empty grid: k_min = {self.k_min} > k_max = {self.k_max}"
            )

    @property
    def size(self) -> int:
        """Number of bins L."""
        return self.k_max - self.k_min + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def center(self, k: int) -> float:
        return 2.0 * self.half_width * k

    @property
    def centers(self) -> np.ndarray:
        return 2.0 * self.half_width * self.indices

    def contains(self, k: int) -> bool:
        return self.k_min <= k <= self.k_max


def sinc_tiled_grid(specs, delay: float, half_width: Optional[float] = None,
                    max_half_width: Optional[float] = None) -> TimeGrid:
    """Grid whose bins exactly tile the flat-envelope detection window.

    All photons must be sinc-shaped with a common bandwidth and arrival
    center c = t0 + delay; the window [c - 1/dw, c + 1/dw] then holds every
    detectable event and is tiled by L = 1/(T_I dw) bins. Either pass
    ``half_width`` directly or ``max_half_width`` to get the coarsest tiling
    not exceeding it. Raises if the bin lattice cannot line up with the
    window edges; shifting the emission time by T_I fixes the usual parity
    mismatch.
    """
    specs = list(specs)
    if not specs:
        raise ValidationError("need at least one photon")
    if any(s.shape != "sinc" for s in specs):
        raise ValidationError("tiled grids are defined for the sinc family only")
    dw = specs[0].bandwidth
    c = specs[0].emission_time + delay
    for s in specs[1:]:
        if abs(s.bandwidth - dw) > 1e-12 * dw:
            raise ValidationError("tiled grids need a common bandwidth")
        if abs(s.emission_time - specs[0].emission_time) > 1e-12 / dw:
            raise ValidationError("tiled grids need a common emission time")

    def try_bins(n_bins: int) -> Optional[TimeGrid]:
        t_i = 1.0 / (n_bins * dw)
        k_lo = (c - 1.0 / dw + t_i) / (2.0 * t_i)
        if abs(k_lo - round(k_lo)) > _ALIGN_TOL:
            return None
        k_lo = int(round(k_lo))
        return TimeGrid(t_i, k_lo, k_lo + n_bins - 1)

    if half_width is not None:
        n_bins = int(round(1.0 / (half_width * dw)))
        if abs(n_bins * half_width * dw - 1.0) > _ALIGN_TOL:
            raise ValidationError(
                f"half-width {half_width!r} does not tile the window: "
                f"1/(T_I dw) = {1.0 / (half_width * dw)!r} is not an integer"
            )
        grid = try_bins(n_bins)
        if grid is None:
            raise ValidationError(
                "bin lattice does not line up with the detection window; "
                "shift the emission time by one half-width or change L's parity"
            )
        return grid

    if max_half_width is None:
        raise ValidationError("pass either half_width or max_half_width")
    n_bins = int(np.ceil(1.0 / (max_half_width * dw) - 1e-12))
    for n in (n_bins, n_bins + 1):
        grid = try_bins(n)
        if grid is not None:
            return grid
    raise ValidationError(
        "no aligned tiling at L or L+1 bins; shift the emission time so the "
        "window center sits on the bin lattice"
    )


def covering_grid(specs, delay: float, half_width: float) -> TimeGrid:
    """Smallest grid whose bins cover every photon's envelope window.

    For non-compact envelopes the window keeps all but a 1e-6 fraction of
    each photon's squared mass, so the enumerated distribution can fall short
    of unit mass by at most ~N times that.
    """
    specs = list(specs)
    if not specs:
        raise ValidationError("need at least one photon")
    lo = np.inf
    hi = -np.inf
    for s in specs:
        w_lo, w_hi = temporal_amplitude(s, delay).support_window()
        lo = min(lo, w_lo)
        hi = max(hi, w_hi)
    t_i = float(half_width)
    k_min = int(np.floor((lo - t_i) / (2.0 * t_i) + 1e-9)) + 1
    k_max = int(np.ceil((hi + t_i) / (2.0 * t_i) - 1e-9)) - 1
    return TimeGrid(t_i, k_min, k_max)


@dataclass(frozen=True)
class DetectionEvent:
    """One N-fold sample: output ports, per-port bin index, and (for
    polarization-resolved detection) per-port basis polarization 1 or 2.

    ``bins`` and ``pols`` are parallel to ``ports``; construction sorts the
    ports ascending and reorders the rest to match, so equal events compare
    and hash equal.
    """

    ports: tuple
    bins: tuple
    pols: Optional[tuple] = None

    def __post_init__(self):
        ports = tuple(int(p) for p in self.ports)
        bins = tuple(int(k) for k in self.bins)
        pols = None if self.pols is None else tuple(int(p) for p in self.pols)
        if len(set(ports)) != len(ports):
            raise ValidationError(f"detection ports must be distinct, got {ports}")
        if len(bins) != len(ports):
            raise ValidationError("one bin index per port is required")
        if pols is not None:
            if len(pols) != len(ports):
                raise ValidationError("one polarization per port is required")
            if any(p not in (1, 2) for p in pols):
                raise ValidationError("polarization indices must be 1 or 2")
        order = np.argsort(ports, kind="stable")
        object.__setattr__(self, "ports", tuple(ports[i] for i in order))
        object.__setattr__(self, "bins", tuple(bins[i] for i in order))
        if pols is not None:
            pols = tuple(pols[i] for i in order)
        object.__setattr__(self, "pols", pols)

    @property
    def size(self) -> int:
        return len(self.ports)

    def bin_of(self, port: int) -> int:
        return self.bins[self.ports.index(port)]

    def validate(self, n_ports: int, grid: TimeGrid) -> None:
        for p in self.ports:
            if p < 0 or p >= n_ports:
                raise IndexError(f"port {p} outside interferometer of size {n_ports}")
        for k in self.bins:
            if not grid.contains(k):
                raise IndexError(
                    f"bin {k} outside grid range [{grid.k_min}, {grid.k_max}]"
                )
