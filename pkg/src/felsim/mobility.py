"""Mobility: requester movement between access points, two handover
schemes, and epsilon-greedy RAN/D2D link selection.

Handover schemes:
  * baseline-redirect: in-flight state at the old AP is abandoned and the
    first post-handover request for each recently requested name detours
    new AP -> gateway -> old AP before resuming normal forwarding.
  * fel-upstream-cache: the requester's recent names are pinned at the
    shared base station at handover time, so the next requests hit there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import RandomStream
from .topology import ACCESS_POINT, BASE_STATION, GATEWAY, RAN, D2D, Topology

BASELINE_REDIRECT = "baseline-redirect"
FEL_UPSTREAM_CACHE = "fel-upstream-cache"

SCHEMES = {BASELINE_REDIRECT, FEL_UPSTREAM_CACHE}

LABEL_HOME = "home"
LABEL_MOVED = "moved"


class InvalidHandoverError(Exception):
    """Handover between APs that share no upstream anchor."""


@dataclass
class ArmStats:
    pulls: int = 0
    mean_latency: float = 0.0

    def update(self, latency: int) -> None:
        self.pulls += 1
        self.mean_latency += (latency - self.mean_latency) / self.pulls


@dataclass
class LinkSelector:
    """Two-armed epsilon-greedy chooser over the requester's RAN and D2D
    links, fed by observed request latencies."""

    requester: str
    epsilon: float = 0.1
    arms: dict[str, ArmStats] = field(
        default_factory=lambda: {RAN: ArmStats(), D2D: ArmStats()}
    )

    def choose(self, stream: RandomStream, has_d2d: bool) -> str:
        if not has_d2d:
            return RAN
        for arm in (RAN, D2D):  # cold start: try each arm once
            if self.arms[arm].pulls == 0:
                return arm
        if stream.next_uniform() < self.epsilon:
            return RAN if stream.next_uniform() < 0.5 else D2D
        ran, d2d = self.arms[RAN].mean_latency, self.arms[D2D].mean_latency
        return D2D if d2d < ran else RAN

    def record(self, arm: str, latency: int) -> None:
        self.arms[arm].update(latency)


@dataclass
class MobileState:
    requester: str
    home_ap: str
    current_ap: str
    d2d_peers: tuple[str, ...]
    selector: LinkSelector
    recent_window: int = 5
    recent_names: list[str] = field(default_factory=list)  # distinct, newest last
    penalty_names: set[str] = field(default_factory=set)
    old_ap: str | None = None

    @property
    def label(self) -> str:
        return LABEL_MOVED if self.current_ap != self.home_ap else LABEL_HOME

    def note_request(self, name: str) -> None:
        if name in self.recent_names:
            self.recent_names.remove(name)
        self.recent_names.append(name)
        if len(self.recent_names) > self.recent_window:
            self.recent_names.pop(0)


def shared_upstream(topology: Topology, ap_a: str, ap_b: str) -> str:
    """The base station or gateway both APs hang under; raises
    InvalidHandoverError when they share none."""
    def ancestors(ap: str) -> list[str]:
        found = []
        frontier = [ap]
        seen = set()
        while frontier:
            here = frontier.pop(0)
            if here in seen:
                continue
            seen.add(here)
            for neighbor, _, _ in topology.neighbors(here):
                node = topology.nodes[neighbor]
                if node.kind in (BASE_STATION, GATEWAY) and neighbor not in seen:
                    found.append(neighbor)
                    frontier.append(neighbor)
        return found

    up_a = ancestors(ap_a)
    up_b = set(ancestors(ap_b))
    for candidate in up_a:  # BFS order: nearest shared ancestor first
        if candidate in up_b:
            return candidate
    raise InvalidHandoverError(f"{ap_a!r} and {ap_b!r} share no upstream anchor")


def d2d_availability(
    topology: Topology,
    cs_lookup,
    state: MobileState,
    name: str,
) -> str | None:
    """First D2D peer (in node-index order) whose Content Store currently
    holds the name, else None."""
    peers = sorted(state.d2d_peers, key=lambda p: topology.nodes[p].index)
    for peer in peers:
        if cs_lookup(peer, name):
            return peer
    return None


def d2d_probe_ms(topology: Topology, state: MobileState) -> int:
    """Round-trip cost of asking the nearest peer; charged when the D2D
    arm is chosen but no peer holds the content."""
    latencies = []
    for peer in state.d2d_peers:
        for neighbor, latency, kind in topology.neighbors(state.requester):
            if neighbor == peer and kind == D2D:
                latencies.append(latency)
    if not latencies:
        return 0
    return 2 * min(latencies)


def validate_handover(
    topology: Topology, state: MobileState, to_ap: str
) -> str:
    """Check the handover preconditions; returns the shared anchor."""
    if to_ap == state.current_ap:
        raise InvalidHandoverError(
            f"{state.requester!r} is already attached to {to_ap!r}"
        )
    if topology.nodes[to_ap].kind != ACCESS_POINT:
        raise InvalidHandoverError(f"{to_ap!r} is not an access point")
    return shared_upstream(topology, state.current_ap, to_ap)
