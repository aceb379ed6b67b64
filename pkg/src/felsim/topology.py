"""Network graph: nodes, latency-weighted links, community builder, and
fog-domain formation.

Latency is the only link property (no bandwidth or queuing); a request's
transit time is the sum of link latencies along its path. Topologies are
immutable once built; per-node forwarding state lives in the ccn module.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

REQUESTER = "requester"
ACCESS_POINT = "access_point"
BASE_STATION = "base_station"
GATEWAY = "gateway"
CLOUD = "cloud"
FOG = "fog"

NODE_KINDS = {REQUESTER, ACCESS_POINT, BASE_STATION, GATEWAY, CLOUD, FOG}

WIRED = "wired"
RAN = "ran"
D2D = "d2d"

LINK_KINDS = {WIRED, RAN, D2D}


class InvalidSpecError(Exception):
    """A community spec violates its preconditions."""


class UnreachableError(Exception):
    """No path exists between the requested endpoints."""


@dataclass
class Node:
    label: str
    index: int
    kind: str
    idle_compute: int = 0
    cs_capacity: int | None = 0  # None = unbounded (the cloud origin)
    bs_anchor: str | None = None  # base station this node hangs under


@dataclass(frozen=True)
class Link:
    a: str
    b: str
    latency_ms: int
    kind: str


@dataclass(frozen=True)
class FogDomain:
    domain_id: str
    anchor: str
    members: tuple[str, ...]
    capacity: int


class Topology:
    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.links: list[Link] = []
        self._adjacency: dict[str, list[tuple[str, int, str]]] = {}

    def add_node(
        self,
        label: str,
        kind: str,
        idle_compute: int = 0,
        cs_capacity: int | None = 0,
        bs_anchor: str | None = None,
    ) -> Node:
        if label in self.nodes:
            raise ValueError(f"duplicate node label {label!r}")
        if kind not in NODE_KINDS:
            raise ValueError(f"unknown node kind {kind!r}")
        node = Node(label, len(self.nodes), kind, idle_compute, cs_capacity, bs_anchor)
        self.nodes[label] = node
        self._adjacency[label] = []
        return node

    def add_link(self, a: str, b: str, latency_ms: int, kind: str = WIRED) -> Link:
        if a == b:
            raise ValueError(f"self-loop at {a!r}")
        if a not in self.nodes or b not in self.nodes:
            raise ValueError(f"link endpoints must exist: {a!r}-{b!r}")
        if kind not in LINK_KINDS:
            raise ValueError(f"unknown link kind {kind!r}")
        if latency_ms <= 0:
            raise ValueError(f"link latency must be positive, got {latency_ms}")
        for existing in self.links:
            if {existing.a, existing.b} == {a, b} and existing.kind == kind:
                raise ValueError(f"duplicate {kind} link {a!r}-{b!r}")
        link = Link(a, b, latency_ms, kind)
        self.links.append(link)
        self._adjacency[a].append((b, latency_ms, kind))
        self._adjacency[b].append((a, latency_ms, kind))
        return link

    def neighbors(self, label: str) -> list[tuple[str, int, str]]:
        return self._adjacency[label]

    def link_latency(self, a: str, b: str) -> int:
        best: int | None = None
        for neighbor, latency, _ in self._adjacency[a]:
            if neighbor == b and (best is None or latency < best):
                best = latency
        if best is None:
            raise UnreachableError(f"no link {a!r}-{b!r}")
        return best

    def path_latency(self, src: str, dst: str, kinds: set[str] | None = None) -> int:
        """Minimum total latency over any path (Dijkstra); symmetric."""
        if src not in self.nodes or dst not in self.nodes:
            raise KeyError(f"unknown endpoint {src!r} or {dst!r}")
        if src == dst:
            return 0
        dist = {src: 0}
        heap = [(0, src)]
        while heap:
            d, here = heapq.heappop(heap)
            if here == dst:
                return d
            if d > dist.get(here, d):
                continue
            for neighbor, latency, kind in self._adjacency[here]:
                if kinds is not None and kind not in kinds:
                    continue
                nd = d + latency
                if nd < dist.get(neighbor, nd + 1):
                    dist[neighbor] = nd
                    heapq.heappush(heap, (nd, neighbor))
        raise UnreachableError(f"{dst!r} not reachable from {src!r}")

    def nodes_of_kind(self, kind: str) -> list[Node]:
        return [n for n in self.nodes.values() if n.kind == kind]

    def validate(self) -> None:
        """Check the structural invariants of a finished topology."""
        labels = list(self.nodes)
        if not labels:
            raise InvalidSpecError("topology has no nodes")
        root = labels[0]
        for label in labels:
            try:
                self.path_latency(root, label, kinds={WIRED, RAN})
            except UnreachableError:
                raise InvalidSpecError(
                    f"graph not connected over wired+ran links: {label!r} isolated"
                )
        for node in self.nodes_of_kind(REQUESTER):
            ran_ups = [
                neighbor
                for neighbor, _, kind in self._adjacency[node.label]
                if kind == RAN
                and self.nodes[neighbor].kind in (ACCESS_POINT, BASE_STATION)
            ]
            if not ran_ups:
                raise InvalidSpecError(
                    f"requester {node.label!r} has no RAN link to an AP or base station"
                )


@dataclass
class CommunitySpec:
    """Chain-of-communities builder input: per community, requesters behind
    one or more APs, one base station with a co-located fog entity, one
    gateway, all sharing a single cloud origin."""

    communities: int = 1
    requesters_per_community: int = 1
    aps_per_community: int = 1
    req_ap_ms: int = 2
    ap_bs_ms: int = 5
    bs_gw_ms: int = 10
    gw_cloud_ms: int = 20
    fog_access_ms: int = 1
    requester_labels: list[list[str]] | None = None  # per community, else generated
    requester_compute: int = 1
    ap_compute: int = 2
    bs_compute: int = 5
    fog_compute: int = 100
    gw_compute: int = 5
    requester_cs: int = 0
    ap_cs: int = 0
    bs_cs: int = 0
    fog_cs: int = 0

    def validate(self) -> None:
        if self.communities < 1 or self.requesters_per_community < 1:
            raise InvalidSpecError("community and requester counts must be >= 1")
        if self.aps_per_community < 1:
            raise InvalidSpecError("aps_per_community must be >= 1")
        for name in ("req_ap_ms", "ap_bs_ms", "bs_gw_ms", "gw_cloud_ms", "fog_access_ms"):
            if getattr(self, name) <= 0:
                raise InvalidSpecError(f"latency {name} must be positive")


@dataclass(frozen=True)
class Community:
    index: int
    requesters: tuple[str, ...]
    aps: tuple[str, ...]
    bs: str
    fog: str
    gw: str

    @property
    def ap(self) -> str:
        return self.aps[0]


@dataclass
class BuiltTopology:
    topology: Topology
    communities: list[Community]
    cloud: str = "cloud"


def build_community(spec: CommunitySpec) -> BuiltTopology:
    """Build the standard chain topology: per community
    requesters -RAN- ap -wired- bs -wired- gw -wired- cloud, with a fog
    entity hanging off each base station. With several APs per community
    every requester gets a RAN link to each of them (its radio range);
    which one it uses is forwarding state, not topology."""
    spec.validate()
    topo = Topology()
    topo.add_node("cloud", CLOUD, idle_compute=0, cs_capacity=None)
    communities: list[Community] = []
    for c in range(spec.communities):
        bs = f"bs-{c}"
        fog = f"fog-{c}"
        gw = f"gw-{c}"
        topo.add_node(bs, BASE_STATION, spec.bs_compute, spec.bs_cs, bs_anchor=bs)
        if spec.aps_per_community == 1:
            aps = [f"ap-{c}"]
        else:
            aps = [f"ap-{c}-{i}" for i in range(spec.aps_per_community)]
        for ap in aps:
            topo.add_node(ap, ACCESS_POINT, spec.ap_compute, spec.ap_cs, bs_anchor=bs)
        topo.add_node(fog, FOG, spec.fog_compute, spec.fog_cs, bs_anchor=bs)
        topo.add_node(gw, GATEWAY, spec.gw_compute, 0)
        requesters = []
        if spec.requester_labels is not None:
            labels = spec.requester_labels[c]
        else:
            labels = [f"req-{c}-{r}" for r in range(spec.requesters_per_community)]
        for label in labels:
            topo.add_node(label, REQUESTER, spec.requester_compute,
                          spec.requester_cs, bs_anchor=bs)
            for ap in aps:
                topo.add_link(label, ap, spec.req_ap_ms, RAN)
            requesters.append(label)
        for ap in aps:
            topo.add_link(ap, bs, spec.ap_bs_ms, WIRED)
        topo.add_link(bs, fog, spec.fog_access_ms, WIRED)
        topo.add_link(bs, gw, spec.bs_gw_ms, WIRED)
        topo.add_link(gw, "cloud", spec.gw_cloud_ms, WIRED)
        communities.append(Community(c, tuple(requesters), tuple(aps), bs, fog, gw))
    topo.validate()
    return BuiltTopology(topo, communities)


def form_fog_domains(topology: Topology, ticket_threshold: int) -> list[FogDomain]:
    """One domain per base station: members are the BS-attached nodes
    (anchor tag) whose idle compute meets the ticket threshold. Raising
    the threshold never adds a member."""
    domains = []
    stations = sorted(topology.nodes_of_kind(BASE_STATION), key=lambda n: n.index)
    for bs in stations:
        attached = [
            n for n in topology.nodes.values()
            if n.bs_anchor == bs.label or n.label == bs.label
        ]
        members = tuple(
            n.label
            for n in sorted(attached, key=lambda n: n.index)
            if n.idle_compute >= ticket_threshold
        )
        capacity = sum(topology.nodes[m].idle_compute for m in members)
        domains.append(FogDomain(f"dom-{bs.label}", bs.label, members, capacity))
    return domains
