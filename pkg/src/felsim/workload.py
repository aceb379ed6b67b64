"""Request generation: Zipf-popularity requesters with exponential
inter-arrivals, and periodic requesters cycling a fixed playlist. Each
profile is bound to one content class and never requests outside it.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field

from .engine import RandomStream

ZIPF = "zipf"
PERIODIC = "periodic"


@dataclass(frozen=True)
class ZipfModel:
    s: float
    mean_interarrival_ms: int

    def validate(self) -> None:
        if self.s <= 0:
            raise ValueError("zipf exponent must be > 0")
        if self.mean_interarrival_ms <= 0:
            raise ValueError("mean inter-arrival must be > 0")


@dataclass(frozen=True)
class PeriodicModel:
    period_ms: int
    playlist: tuple[str, ...]

    def validate(self) -> None:
        if self.period_ms <= 0:
            raise ValueError("period must be > 0")
        if not self.playlist:
            raise ValueError("playlist must be non-empty")


@dataclass(frozen=True)
class RequesterProfile:
    requester: str
    model: ZipfModel | PeriodicModel
    klass: str


class ZipfSampler:
    """Inverse-CDF sampling of P(i) = i^-s / sum_j j^-s over ranks 1..n."""

    def __init__(self, n: int, s: float) -> None:
        if n < 1:
            raise ValueError("catalog slice must have >= 1 item")
        if s <= 0:
            raise ValueError("zipf exponent must be > 0")
        self.n = n
        self.s = s
        weights = [i ** (-s) for i in range(1, n + 1)]
        total = sum(weights)
        self.probabilities = [w / total for w in weights]
        self._cdf = list(itertools.accumulate(self.probabilities))
        self._cdf[-1] = 1.0  # guard against float shortfall

    def sample(self, stream: RandomStream) -> int:
        """Draw a rank in 1..n."""
        u = stream.next_uniform()
        return bisect.bisect_right(self._cdf, u) + 1


@dataclass
class RequesterState:
    """Per-requester generator state; a pure function of (profile, stream)."""

    profile: RequesterProfile
    slice_names: tuple[str, ...]
    _sampler: ZipfSampler | None = None
    _playlist_pos: int = field(default=0)

    def __post_init__(self) -> None:
        model = self.profile.model
        if isinstance(model, ZipfModel):
            model.validate()
            if not self.slice_names:
                raise ValueError(
                    f"no catalog items in class {self.profile.klass!r}"
                )
            self._sampler = ZipfSampler(len(self.slice_names), model.s)
        else:
            model.validate()
            bad = [n for n in model.playlist if n not in self.slice_names]
            if bad:
                raise ValueError(
                    f"playlist names outside class {self.profile.klass!r}: {bad}"
                )

    def next_request(self, now: int, stream: RandomStream) -> tuple[int, str]:
        """Return (fire_at, name) for the next request after `now`."""
        model = self.profile.model
        if isinstance(model, ZipfModel):
            gap = max(1, round(stream.exponential(model.mean_interarrival_ms)))
            rank = self._sampler.sample(stream)
            return now + gap, self.slice_names[rank - 1]
        name = model.playlist[self._playlist_pos % len(model.playlist)]
        self._playlist_pos += 1
        return now + model.period_ms, name
