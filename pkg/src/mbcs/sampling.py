"""Exact sampling from enumerated distributions and statistical checks."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distribution import Distribution
from .errors import ValidationError


def _rng(seed) -> np.random.Generator:
    # counter-based and splittable; any integer seed folds into 64 bits
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class SampleRecord:
    """One draw: the sampled event and its position in the draw sequence."""

    event: object
    draw_index: int


class SampleBatch(Sequence):
    """A seeded batch of i.i.d. draws from a Distribution.

    Behaves as a sequence of :class:`SampleRecord`; the raw event indices are
    available as ``indices`` and the unsampled collision mass of the source as
    ``mass_deficit``.
    """

    def __init__(self, source: Distribution, indices: np.ndarray, seed):
        self.source = source
        self.indices = indices
        self.seed = seed
        self.mass_deficit = source.mass_deficit

    def __len__(self) -> int:
        return self.indices.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        return SampleRecord(self.source.event(int(self.indices[i])), int(i))

    def events(self):
        for i in range(len(self)):
            yield self.source.event(int(self.indices[i]))


def exact_sample(dist: Distribution, n: int, seed) -> SampleBatch:
    """Draw n i.i.d. events by inversion on the distribution's event order.

    Draws come from the distribution normalized by its total mass; the
    returned batch reports the mass deficit 1 - total_mass alongside.
    Reproducible: a fixed seed gives the same draw sequence everywhere.
    """
    if len(dist) == 0 or dist.total_mass <= 0.0:
        raise ValidationError("cannot sample from an empty or zero-mass distribution")
    if n < 0:
        raise ValidationError("sample count must be non-negative")
    cdf = np.cumsum(dist.probs)
    cdf[-1] = dist.total_mass  # guard the last edge against rounding
    u = _rng(seed).random(n) * dist.total_mass
    indices = np.searchsorted(cdf, u, side="right")
    indices = np.minimum(indices, len(dist) - 1)
    return SampleBatch(dist, indices, seed)


def empirical_distribution(samples) -> Distribution:
    """Normalized frequency counts on the sampled support."""
    if isinstance(samples, SampleBatch):
        if len(samples) == 0:
            raise ValidationError("need at least one sample")
        counts = np.bincount(samples.indices, minlength=len(samples.source))
        hit = np.nonzero(counts)[0]
        events = [samples.source.event(int(i)) for i in hit]
        return Distribution.from_events(events, counts[hit] / len(samples))
    records = list(samples)
    if not records:
        raise ValidationError("need at least one sample")
    counts: dict = {}
    for rec in records:
        counts[rec.event] = counts.get(rec.event, 0) + 1
    events = list(counts)
    freqs = np.array([counts[ev] for ev in events], dtype=np.float64) / len(records)
    return Distribution.from_events(events, freqs)


def total_variation(p: Distribution, q: Distribution) -> float:
    """Half the L1 distance between two distributions on a shared universe.

    Events present in only one distribution count as probability zero in the
    other.
    """
    if (
        p._layout is not None
        and q._layout is not None
        and p._layout == q._layout
    ):
        return 0.5 * float(np.abs(p.probs - q.probs).sum())
    pd = p.as_dict()
    qd = q.as_dict()
    tv = 0.0
    for ev in pd.keys() | qd.keys():
        tv += abs(pd.get(ev, 0.0) - qd.get(ev, 0.0))
    return 0.5 * tv


@dataclass(frozen=True)
class MomentCheck:
    name: str
    statistic: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold


@dataclass(frozen=True)
class PhaseInvarianceReport:
    """Moment checks of phase-rotated complex random matrix entries."""

    checks: tuple
    draws: int
    entry_distribution: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> MomentCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "draws": self.draws,
            "entry_distribution": self.entry_distribution,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "statistic": c.statistic,
                    "threshold": c.threshold,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


def gaussian_phase_test(
    n: int,
    phases: np.ndarray,
    draws: int,
    seed,
    entry_distribution: str = "gaussian",
) -> PhaseInvarianceReport:
    """Check that entry-wise phase rotations preserve standard complex
    normal statistics.

    Draws matrices X with i.i.d. standard complex normal entries (or, for the
    adversarial control, entries uniform on the unit circle), applies the
    fixed per-entry phases, and tests the rotated entries' first, second, and
    fourth moments against their Gaussian values at five standard errors.
    """
    if draws < 10**4:
        raise ValidationError("need at least 1e4 draws for stable moment checks")
    phases = np.asarray(phases, dtype=np.float64)
    if phases.shape != (n, n):
        raise ValidationError(f"phase matrix must be {n} x {n}")
    rng = _rng(seed)
    if entry_distribution == "gaussian":
        x = (
            rng.standard_normal((draws, n, n)) + 1j * rng.standard_normal((draws, n, n))
        ) / np.sqrt(2.0)
    elif entry_distribution == "unit-circle":
        x = np.exp(2j * np.pi * rng.random((draws, n, n)))
    else:
        raise ValidationError(f"unknown entry distribution {entry_distribution!r}")
    rotated = x * np.exp(1j * phases)

    mean_stat = float(np.max(np.abs(rotated.mean(axis=0))))
    second_stat = float(np.max(np.abs((rotated**2).mean(axis=0))))
    abs2 = np.abs(rotated) ** 2
    abs2_stat = float(np.max(np.abs(abs2.mean(axis=0) - 1.0)))
    abs4_stat = float(np.max(np.abs((abs2**2).mean(axis=0) - 2.0)))

    root = np.sqrt(draws)
    checks = (
        MomentCheck("mean", mean_stat, 5.0 / root),
        MomentCheck("second_moment", second_stat, 5.0 / root),
        # Var|z|^2 = 1 and Var|z|^4 = 20 for standard complex normal entries
        MomentCheck("abs_square", abs2_stat, 5.0 * np.sqrt(2.0 / draws)),
        MomentCheck("abs_fourth", abs4_stat, 5.0 * np.sqrt(20.0 / draws)),
    )
    return PhaseInvarianceReport(checks, draws, entry_distribution)
