"""Exhaustive event distributions, marginals, and the bunching cross-check.

``full_distribution`` enumerates every collision-free detection event on the
instance's grid in a fixed lexicographic order (port set, then bins, then
polarizations) and stores one probability per event. Events are materialized
lazily from the enumeration layout, so large supports cost one float each.
"""

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from .errors import SizeGuardError, ValidationError
from .events import DetectionEvent, TimeGrid
from .permanent import permanent_fast
from .probabilities import MBCSInstance
from .unitaries import submatrix, unitarity_defect

ENUMERATION_GUARD = 10**7
BUNCHING_MAX_PHOTONS = 4
BUNCHING_MAX_PORTS = 8

POL_RESOLVED = "pol-resolved"
POL_INSENSITIVE = "pol-insensitive"

MASS_TOL = 1e-9

# Cap on the entries held by one vectorized block, to bound peak memory.
_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class _EnumLayout:
    """Decodes flat event indices for an enumerated distribution."""

    port_sets: tuple
    grid: TimeGrid
    n: int
    pol_resolved: bool

    @property
    def pol_count(self) -> int:
        return 2**self.n if self.pol_resolved else 1

    @property
    def block_size(self) -> int:
        return self.grid.size**self.n * self.pol_count

    @property
    def total(self) -> int:
        return len(self.port_sets) * self.block_size

    def decode(self, index: int) -> DetectionEvent:
        if index < 0 or index >= self.total:
            raise IndexError(index)
        set_idx, rest = divmod(index, self.block_size)
        bin_part, pol_part = divmod(rest, self.pol_count)
        bins = []
        for _ in range(self.n):
            bin_part, digit = divmod(bin_part, self.grid.size)
            bins.append(self.grid.k_min + digit)
        bins.reverse()
        pols = None
        if self.pol_resolved:
            digits = []
            for _ in range(self.n):
                pol_part, digit = divmod(pol_part, 2)
                digits.append(1 + digit)
            pols = tuple(reversed(digits))
        return DetectionEvent(self.port_sets[set_idx], tuple(bins), pols)


class _EnumeratedEvents(Sequence):
    def __init__(self, layout: _EnumLayout):
        self._layout = layout

    def __len__(self) -> int:
        return self._layout.total

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self._layout.decode(i) for i in range(*index.indices(len(self)))]
        if index < 0:
            index += len(self)
        return self._layout.decode(index)


class Distribution:
    """A finite map from events to probabilities with total-mass metadata.

    Events can be :class:`DetectionEvent` instances or any other hashable
    outcome labels (the bunching oracle uses port multisets). Probabilities
    must be non-negative and sum to at most 1 + 1e-9.
    """

    def __init__(self, events: Sequence, probs, layout: Optional[_EnumLayout] = None):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 1 or len(events) != probs.shape[0]:
            raise ValidationError("need exactly one probability per event")
        if probs.size and float(probs.min()) < 0.0:
            raise ValidationError("probabilities must be non-negative")
        mass = float(probs.sum())
        if mass > 1.0 + MASS_TOL:
            raise ValidationError(f"total mass {mass!r} exceeds 1")
        self._events = events
        self.probs = probs
        self.total_mass = mass
        self._layout = layout

    @classmethod
    def from_events(cls, events, probs) -> "Distribution":
        return cls(list(events), probs)

    def __len__(self) -> int:
        return self.probs.shape[0]

    @property
    def events(self) -> Sequence:
        return self._events

    def event(self, index: int):
        return self._events[index]

    @property
    def mass_deficit(self) -> float:
        return 1.0 - self.total_mass

    def items(self):
        for i in range(len(self)):
            yield self._events[i], float(self.probs[i])

    def as_dict(self) -> dict:
        return {ev: p for ev, p in self.items()}

    def permuted(self, order) -> "Distribution":
        """Same measure, events listed in a different order."""
        order = np.asarray(order)
        events = [self._events[i] for i in order]
        return Distribution(events, self.probs[order])

    def normalized(self) -> "Distribution":
        """The sampler's target law: probabilities rescaled to unit mass."""
        if self.total_mass <= 0.0:
            raise ValidationError("cannot normalize a zero-mass distribution")
        return Distribution(self._events, self.probs / self.total_mass, layout=self._layout)


def _small_perm(m: np.ndarray) -> complex:
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] + m[0, 1] * m[1, 0]
    if n == 3:
        return (
            m[0, 0] * (m[1, 1] * m[2, 2] + m[1, 2] * m[2, 1])
            + m[0, 1] * (m[1, 0] * m[2, 2] + m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] + m[1, 1] * m[2, 0])
        )
    return permanent_fast(m)


def _amplitude_table(inst: MBCSInstance) -> np.ndarray:
    """amp[j, k_idx, pol_idx]: photon j's projected amplitude at bin center."""
    centers = inst.grid.centers
    n = inst.n_photons
    amp = np.empty((n, centers.size, 2), dtype=np.complex128)
    for j, photon in enumerate(inst.amplitudes):
        scalar = np.asarray(photon.scalar(centers), dtype=np.complex128)
        jones = photon.polarization.jones
        amp[j, :, 0] = jones[0] * scalar
        amp[j, :, 1] = jones[1] * scalar
    return amp


def _block_pair(sub, amp, prefactor, pol_resolved):
    """All bin/pol probabilities for one 2-photon port set, vectorized."""
    length = amp.shape[1]
    a = [[sub[d, j] * amp[j, :, :] for j in range(2)] for d in range(2)]  # (L, 2) each
    if pol_resolved:
        out = np.empty((length, length, 2, 2), dtype=np.float64)
        for p0 in range(2):
            for p1 in range(2):
                perm = np.multiply.outer(a[0][0][:, p0], a[1][1][:, p1])
                perm += np.multiply.outer(a[0][1][:, p0], a[1][0][:, p1])
                out[:, :, p0, p1] = prefactor * np.abs(perm) ** 2
        return out.reshape(-1)
    out = np.zeros((length, length), dtype=np.float64)
    chunk = max(1, _CHUNK_ENTRIES // max(length, 1))
    for start in range(0, length, chunk):
        stop = min(start + chunk, length)
        acc = np.zeros((stop - start, length), dtype=np.float64)
        for p0 in range(2):
            for p1 in range(2):
                perm = np.multiply.outer(a[0][0][start:stop, p0], a[1][1][:, p1])
                perm += np.multiply.outer(a[0][1][start:stop, p0], a[1][0][:, p1])
                acc += np.abs(perm) ** 2
        out[start:stop] = prefactor * acc
    return out.reshape(-1)


def _block_generic(sub, amp, prefactor, pol_resolved, n, grid):
    length = grid.size
    mat = np.empty((n, n), dtype=np.complex128)
    assignments = list(product((0, 1), repeat=n))
    if pol_resolved:
        block = np.empty(length**n * len(assignments), dtype=np.float64)
        pos = 0
        for bins in product(range(length), repeat=n):
            for pols in assignments:
                for i in range(n):
                    mat[i, :] = sub[i, :] * amp[:, bins[i], pols[i]]
                block[pos] = prefactor * abs(_small_perm(mat)) ** 2
                pos += 1
        return block
    block = np.empty(length**n, dtype=np.float64)
    pos = 0
    for bins in product(range(length), repeat=n):
        total = 0.0
        for pols in assignments:
            for i in range(n):
                mat[i, :] = sub[i, :] * amp[:, bins[i], pols[i]]
            total += abs(_small_perm(mat)) ** 2
        block[pos] = prefactor * total
        pos += 1
    return block


def enumeration_size(inst: MBCSInstance, mode: str) -> int:
    pol = 2**inst.n_photons if mode == POL_RESOLVED else 1
    return comb(inst.n_ports, inst.n_photons) * inst.grid.size**inst.n_photons * pol


def full_distribution(inst: MBCSInstance, mode: str = POL_INSENSITIVE) -> Distribution:
    """Probabilities of every collision-free event on the instance's grid.

    Event order is lexicographic in (port set, bins, polarizations). The
    enumeration is guarded at 10^7 events; the raised error reports the
    requested cardinality.
    """
    if mode not in (POL_RESOLVED, POL_INSENSITIVE):
        raise ValidationError(f"unknown mode {mode!r}")
    n = inst.n_photons
    total = enumeration_size(inst, mode)
    if total > ENUMERATION_GUARD:
        raise SizeGuardError(
            f"enumeration would produce {total} events "
            f"(guard: {ENUMERATION_GUARD}); coarsen the grid or drop modes"
        )
    pol_resolved = mode == POL_RESOLVED
    port_sets = tuple(combinations(range(inst.n_ports), n))
    layout = _EnumLayout(port_sets, inst.grid, n, pol_resolved)
    amp = _amplitude_table(inst)
    prefactor = (2.0 * inst.grid.half_width) ** n
    probs = np.empty(layout.total, dtype=np.float64)
    block = layout.block_size
    for i, ports in enumerate(port_sets):
        sub = submatrix(inst.unitary, ports, inst.input_ports)
        if n == 2:
            values = _block_pair(sub, amp, prefactor, pol_resolved)
        elif n == 1:
            per_pol = prefactor * np.abs(sub[0, 0] * amp[0]) ** 2  # (L, 2)
            values = per_pol.reshape(-1) if pol_resolved else per_pol.sum(axis=1)
        else:
            values = _block_generic(sub, amp, prefactor, pol_resolved, n, inst.grid)
        probs[i * block : (i + 1) * block] = values
    return Distribution(_EnumeratedEvents(layout), probs, layout=layout)


def time_marginal(dist: Distribution) -> dict:
    """Per-port-set totals: probability summed over bins (and polarizations)."""
    if dist._layout is not None:
        layout = dist._layout
        sums = dist.probs.reshape(len(layout.port_sets), layout.block_size).sum(axis=1)
        return {ports: float(s) for ports, s in zip(layout.port_sets, sums)}
    totals: dict = {}
    for ev, p in dist.items():
        totals[ev.ports] = totals.get(ev.ports, 0.0) + p
    return totals


def distinguishable_marginal(u: np.ndarray, ports, input_ports) -> float:
    """Classical (time-averaged, fully distinguishable) port-set probability:
    the permanent of the entry-wise |U|^2 submatrix."""
    sub = submatrix(u, ports, input_ports)
    return float(permanent_fast(np.abs(sub) ** 2).real)


def bunching_oracle(u: np.ndarray, input_ports) -> Distribution:
    """Full output distribution over port multisets for identical photons.

    Complements the collision-free enumeration: repeated output ports carry
    probability |perm(U with repeated rows)|^2 / prod(multiplicity!). The
    total mass over all multisets is 1 for a unitary interferometer. Guarded
    at N <= 4 photons and M <= 8 ports.
    """
    u = np.asarray(u, dtype=np.complex128)
    s = tuple(sorted(int(p) for p in input_ports))
    n = len(s)
    m = u.shape[0]
    if n > BUNCHING_MAX_PHOTONS or m > BUNCHING_MAX_PORTS:
        raise SizeGuardError(
            f"bunching oracle guarded at N <= {BUNCHING_MAX_PHOTONS}, "
            f"M <= {BUNCHING_MAX_PORTS}; got N = {n}, M = {m}"
        )
    if unitarity_defect(u) > 1e-10:
        raise ValidationError("bunching oracle needs a unitary matrix")
    events = []
    probs = []
    cols = list(s)
    for multiset in combinations_with_replacement(range(m), n):
        rows = list(multiset)
        mat = u[np.ix_(rows, cols)]
        weight = 1.0
        for port in set(multiset):
            weight *= factorial(multiset.count(port))
        events.append(multiset)
        probs.append(abs(_small_perm(mat)) ** 2 / weight)
    return Distribution(events, np.array(probs))


def bunched_mass(dist: Distribution) -> float:
    """Probability carried by multisets with at least one repeated port."""
    total = 0.0
    for ev, p in dist.items():
        if len(set(ev)) != len(ev):
            total += p
    return total
