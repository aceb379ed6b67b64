"""Fog-enabled edge learning: per-domain agents that turn retrieval
records and network snapshots into caching strategies, plus placement of
learning tasks across fog domains.

An agent scores every catalog name as
    score = alpha * count(all domain requesters) + beta * count(granted requesters)
over the records seen since the agent started, pins the top-k at its pin
target, and picks the (alpha, beta) pair epsilon-greedily from a finite
candidate grid using the per-epoch reward (negative mean user latency).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import RandomStream
from .topology import FogDomain


class UnknownDomainError(Exception):
    """Grant addressed to a fog domain that was never formed."""


@dataclass(frozen=True)
class RetrievalRecord:
    """One satisfied user request, desensitized to node labels only."""

    requester: str
    name: str
    issued_at: int
    satisfied_at: int
    served_by: str

    def __post_init__(self) -> None:
        if self.satisfied_at < self.issued_at:
            raise ValueError("satisfied_at must be >= issued_at")


@dataclass
class PermissionGrant:
    requester: str
    domain_id: str
    granted_at: int
    active: bool = True


@dataclass(frozen=True)
class NetworkSnapshot:
    taken_at: int
    window_start: int
    cache_contents: dict[str, tuple[str, ...]]
    hit_counts: dict[str, int]
    request_counts: dict[str, int]          # per name, window only
    mean_latency_by_requester: dict[str, float]
    window_latencies: tuple[int, ...]


@dataclass(frozen=True)
class Reward:
    value: float
    initial: bool = False
    carried: bool = False

    def __post_init__(self) -> None:
        if self.value > 0:
            raise ValueError("reward is a negative latency, must be <= 0")


def compute_reward(snapshot: NetworkSnapshot, previous: Reward) -> Reward:
    """Negative mean latency over the window; an empty window carries the
    previous reward forward, flagged."""
    if not snapshot.window_latencies:
        return Reward(previous.value, initial=previous.initial, carried=True)
    mean = sum(snapshot.window_latencies) / len(snapshot.window_latencies)
    return Reward(-mean)


@dataclass(frozen=True)
class CachingStrategy:
    domain_id: str
    pins: dict[str, tuple[str, ...]]
    k: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class LearningTask:
    task_id: str
    cycles: int
    data_bytes: int
    delay_sensitive: bool = False

    def __post_init__(self) -> None:
        if self.cycles <= 0:
            raise ValueError("task cycles must be > 0")


@dataclass(frozen=True)
class DomainCostModel:
    compute_price: float     # per cycle
    caching_cost: float      # per byte
    comm_delay_ms: float


@dataclass
class Placement:
    assignment: dict[str, str]             # task_id -> domain_id
    rejected: dict[str, str]               # task_id -> reason
    shards: dict[str, tuple[tuple[str, int], ...]]  # task_id -> (member, bytes)
    total_cost: float


def task_cost(task: LearningTask, cost: DomainCostModel, delay_penalty: float) -> float:
    base = cost.compute_price * task.cycles + cost.caching_cost * task.data_bytes
    if task.delay_sensitive:
        base += delay_penalty * cost.comm_delay_ms
    return base


def _shard(task: LearningTask, domain: FogDomain) -> tuple[tuple[str, int], ...]:
    # Data parallelism: bytes split as evenly as possible across the
    # domain's members, earlier members taking the remainder.
    members = list(domain.members) or [domain.anchor]
    share, remainder = divmod(task.data_bytes, len(members))
    return tuple(
        (member, share + (1 if i < remainder else 0))
        for i, member in enumerate(members)
    )


def place_tasks(
    tasks: list[LearningTask],
    domains: list[FogDomain],
    costs: dict[str, DomainCostModel],
    delay_penalty: float = 1.0,
    exact_limit: int = 12,
) -> Placement:
    """Assign learning tasks to fog domains under per-domain cycle
    capacity. Small instances (|tasks| x |domains| <= exact_limit) are
    solved exactly: maximize the number of assigned tasks, then minimize
    total cost. Larger instances fall back to a greedy pass over tasks in
    descending cycle order. Unplaceable tasks are rejected with a reason.
    """
    if tasks and domains and len(tasks) * len(domains) <= exact_limit:
        assignment, total = _place_exact(tasks, domains, costs, delay_penalty)
    else:
        assignment, total = _place_greedy(tasks, domains, costs, delay_penalty)
    by_id = {d.domain_id: d for d in domains}
    rejected = {
        t.task_id: "capacity" for t in tasks if t.task_id not in assignment
    }
    shards = {
        task.task_id: _shard(task, by_id[assignment[task.task_id]])
        for task in tasks
        if task.task_id in assignment
    }
    return Placement(assignment, rejected, shards, total)


def _place_exact(tasks, domains, costs, delay_penalty):
    best: tuple[int, float, dict[str, str]] | None = None

    def recurse(i: int, load: dict[str, int], chosen: dict[str, str], cost_sum: float):
        nonlocal best
        if i == len(tasks):
            key = (-len(chosen), cost_sum)
            if best is None or key < (-len(best[2]), best[1]):
                best = (len(chosen), cost_sum, dict(chosen))
            return
        task = tasks[i]
        for domain in domains:
            if load[domain.domain_id] + task.cycles <= domain.capacity:
                chosen[task.task_id] = domain.domain_id
                load[domain.domain_id] += task.cycles
                recurse(i + 1, load, chosen,
                        cost_sum + task_cost(task, costs[domain.domain_id], delay_penalty))
                load[domain.domain_id] -= task.cycles
                del chosen[task.task_id]
        recurse(i + 1, load, chosen, cost_sum)  # leave task unassigned

    recurse(0, {d.domain_id: 0 for d in domains}, {}, 0.0)
    assert best is not None
    return best[2], best[1]


def _place_greedy(tasks, domains, costs, delay_penalty):
    load = {d.domain_id: 0 for d in domains}
    assignment: dict[str, str] = {}
    total = 0.0
    ordered = sorted(tasks, key=lambda t: (-t.cycles, t.task_id))
    for task in ordered:
        # Equal-cost ties go to the least-loaded domain so symmetric
        # topologies spread their tasks instead of piling on one fog.
        candidates = [
            (task_cost(task, costs[d.domain_id], delay_penalty),
             load[d.domain_id], i, d.domain_id)
            for i, d in enumerate(domains)
            if load[d.domain_id] + task.cycles <= d.capacity
        ]
        if not candidates:
            continue
        cost, _, _, domain_id = min(candidates)
        assignment[task.task_id] = domain_id
        load[domain_id] += task.cycles
        total += cost
    return assignment, total


@dataclass
class CandidateStats:
    pulls: int = 0
    mean_reward: float = 0.0

    def update(self, reward: float) -> None:
        self.pulls += 1
        self.mean_reward += (reward - self.mean_reward) / self.pulls


EPS_FIXED = "fixed"
EPS_INVERSE = "1/epoch"


@dataclass
class LearningAgent:
    """One agent per fog domain, driven by the learning-epoch events."""

    domain: FogDomain
    pin_target: str
    k: int
    candidates: list[tuple[float, float]]
    stream: RandomStream
    epsilon_mode: str = EPS_INVERSE
    epsilon: float = 0.1
    requesters: tuple[str, ...] = ()

    epoch_index: int = 0
    window_start: int = 0
    last_reward: Reward = field(default_factory=lambda: Reward(0.0, initial=True))
    prior_pins: tuple[str, ...] = ()
    _counts: dict[str, dict[str, int]] = field(default_factory=dict)  # requester -> name -> n
    _grants: dict[str, PermissionGrant] = field(default_factory=dict)
    _stats: dict[tuple[float, float], CandidateStats] = field(default_factory=dict)
    _pending: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not self.candidates:
            raise ValueError("candidate grid must be non-empty")
        for pair in self.candidates:
            self._stats[pair] = CandidateStats()

    # -- record collection (ULI) -------------------------------------

    def observe(self, record: RetrievalRecord) -> None:
        per_name = self._counts.setdefault(record.requester, {})
        per_name[record.name] = per_name.get(record.name, 0) + 1

    def grant_access(self, requester: str, now: int) -> PermissionGrant:
        grant = PermissionGrant(requester, self.domain.domain_id, now)
        self._grants[requester] = grant
        return grant

    def revoke_access(self, requester: str) -> None:
        grant = self._grants.pop(requester, None)
        if grant is not None:
            grant.active = False

    def granted(self) -> set[str]:
        return set(self._grants)

    # -- strategy generation -----------------------------------------

    def _epsilon_now(self) -> float:
        if self.epsilon_mode == EPS_INVERSE:
            return min(1.0, 1.0 / max(1, self.epoch_index))
        return self.epsilon

    def _choose_candidate(self) -> tuple[float, float]:
        if len(self.candidates) == 1:
            return self.candidates[0]
        if self.stream.next_uniform() < self._epsilon_now():
            return self.candidates[self.stream.randindex(len(self.candidates))]
        untried = [c for c in self.candidates if self._stats[c].pulls == 0]
        if untried:
            return untried[0]
        return max(self.candidates, key=lambda c: (self._stats[c].mean_reward,))

    def scores(self, alpha: float, beta: float) -> dict[str, float]:
        totals: dict[str, float] = {}
        granted = self.granted()
        for requester in self.requesters:
            for name, n in self._counts.get(requester, {}).items():
                weight = alpha + (beta if requester in granted else 0.0)
                if weight:
                    totals[name] = totals.get(name, 0.0) + weight * n
        return totals

    def update_strategy(self, snapshot: NetworkSnapshot, reward: Reward) -> CachingStrategy:
        """One learning step: credit the reward to the previously chosen
        candidate, pick the next one epsilon-greedily, and emit the top-k
        pin set for the domain's pin target."""
        self.epoch_index += 1
        if self._pending is not None and not reward.carried and not reward.initial:
            self._stats[self._pending].update(reward.value)
        alpha, beta = self._choose_candidate()
        self._pending = (alpha, beta)
        self.last_reward = reward

        totals = self.scores(alpha, beta)
        if totals:
            ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
            pins = tuple(name for name, _ in ranked[: self.k])
        else:
            pins = self.prior_pins  # no signal: keep the current pins
        self.prior_pins = pins
        return CachingStrategy(
            domain_id=self.domain.domain_id,
            pins={self.pin_target: pins},
            k=self.k,
            alpha=alpha,
            beta=beta,
        )

    @property
    def active_candidate(self) -> tuple[float, float] | None:
        return self._pending
