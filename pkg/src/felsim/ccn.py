"""Content-centric forwarding state: hierarchical names and the catalog,
keyword translation, Content Store with LRU + strategy pins, Pending
Interest Table with aggregation, and longest-prefix FIB forwarding.

Interests run in one of two traffic classes. User traffic is what the
latency metrics measure; strategy prefetch traffic (cache warm-up issued
by fog-controlled nodes) runs in its own PIT lane so management transfers
never coalesce with, and thereby distort, user-visible deliveries.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field

USER = "user"
PREFETCH = "prefetch"

APP = "@app"  # local application face of a node

MAX_NAME_BYTES = 1024


class NoMatchError(Exception):
    """No catalog name contains all the given keywords."""


class NoRouteError(Exception):
    """The FIB has no entry covering the name (topology/config bug)."""


class PinOverflowError(Exception):
    """More pins requested than the Content Store can hold."""


def name_components(name: str) -> tuple[str, ...]:
    if not name.startswith("/") or name == "/":
        raise ValueError(f"content name must start with '/': {name!r}")
    if len(name.encode("utf-8")) > MAX_NAME_BYTES:
        raise ValueError(f"content name too long: {len(name)} chars")
    parts = tuple(name[1:].split("/"))
    if any(not p for p in parts):
        raise ValueError(f"content name has empty segment: {name!r}")
    return parts


def canonical_name(components: tuple[str, ...]) -> str:
    return "/" + "/".join(components)


@dataclass(frozen=True)
class CatalogItem:
    name: str
    size_bytes: int
    klass: str  # content class: "a" | "b"


class ContentCatalog:
    """The universe of requestable content, in popularity-rank order."""

    def __init__(self, items: list[CatalogItem]) -> None:
        self.items = list(items)
        self.by_name: dict[str, CatalogItem] = {}
        for item in self.items:
            if item.size_bytes <= 0:
                raise ValueError(f"non-positive size for {item.name!r}")
            name_components(item.name)  # validates shape
            if item.name in self.by_name:
                raise ValueError(f"duplicate catalog name {item.name!r}")
            self.by_name[item.name] = item

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def class_slice(self, klass: str) -> list[CatalogItem]:
        return [item for item in self.items if item.klass == klass]

    def names(self) -> list[str]:
        return [item.name for item in self.items]


def translate(keywords: list[str], catalog: ContentCatalog) -> str:
    """Map entered keywords to the catalog name whose segments contain
    every keyword (case-insensitive exact segment match); prefers the
    shallowest name, then lexicographic order."""
    if not keywords:
        raise ValueError("keywords must be non-empty")
    lowered = [k.lower() for k in keywords]
    matches = []
    for item in catalog.items:
        segments = {c.lower() for c in name_components(item.name)}
        if all(k in segments for k in lowered):
            matches.append(item.name)
    if not matches:
        raise NoMatchError(f"no catalog name contains all of {keywords!r}")
    return min(matches, key=lambda n: (len(name_components(n)), n))


@dataclass
class Interest:
    name: str
    requester: str            # identifier binding carried as packet metadata
    nonce: int
    issued_at: int
    traffic_class: str = USER


@dataclass
class Data:
    name: str
    size_bytes: int
    producer: str
    served_by: str
    traffic_class: str = USER


@dataclass
class EvictionOutcome:
    inserted: bool
    refreshed: bool = False
    rejected: bool = False
    evicted: str | None = None


class ContentStore:
    """Bounded item cache with LRU replacement; pinned names are never
    evicted by the policy."""

    def __init__(self, capacity: int | None) -> None:
        if capacity is not None and capacity < 0:
            raise ValueError("capacity must be >= 0 or None")
        self.capacity = capacity
        self._entries: OrderedDict[str, int] = OrderedDict()  # name -> last access
        self.pinned: set[str] = set()

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def touch(self, name: str, now: int) -> None:
        self._entries[name] = now
        self._entries.move_to_end(name)

    def insert(self, name: str, now: int) -> EvictionOutcome:
        if name in self._entries:
            self.touch(name, now)
            return EvictionOutcome(inserted=False, refreshed=True)
        if self.capacity == 0:
            return EvictionOutcome(inserted=False, rejected=True)
        evicted = None
        if self.capacity is not None and len(self._entries) >= self.capacity:
            victim = next(
                (n for n in self._entries if n not in self.pinned), None
            )
            if victim is None:
                return EvictionOutcome(inserted=False, rejected=True)
            del self._entries[victim]
            evicted = victim
        self._entries[name] = now
        assert self.capacity is None or len(self._entries) <= self.capacity
        return EvictionOutcome(inserted=True, evicted=evicted)

    def set_pins(self, names: set[str]) -> list[str]:
        """Replace the pinned set; returns the pinned names not yet
        present (the caller prefetches those). Previously pinned names
        become evictable but are not evicted here."""
        if self.capacity is not None and len(names) > self.capacity:
            raise PinOverflowError(
                f"{len(names)} pins exceed capacity {self.capacity}"
            )
        self.pinned = set(names)
        return sorted(n for n in names if n not in self._entries)


@dataclass
class PitEntry:
    name: str
    traffic_class: str
    downstreams: list[tuple[str, int]]  # (face, nonce); face may be APP
    created_at: int
    lifetime: int
    nonces: set[int] = field(default_factory=set)  # loop detection


class Pit:
    """Pending Interest Table keyed by (name, traffic class)."""

    def __init__(self) -> None:
        self._entries: dict[tuple[str, str], PitEntry] = {}

    def get(self, name: str, traffic_class: str) -> PitEntry | None:
        return self._entries.get((name, traffic_class))

    def put(self, entry: PitEntry) -> None:
        self._entries[(entry.name, entry.traffic_class)] = entry

    def pop(self, name: str, traffic_class: str) -> PitEntry | None:
        return self._entries.pop((name, traffic_class), None)

    def entries(self) -> list[PitEntry]:
        return list(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)


class Fib:
    """Longest-prefix-match forwarding table. The empty prefix acts as the
    default route toward the content origin."""

    def __init__(self) -> None:
        self._routes: dict[tuple[str, ...], str] = {}

    def add(self, prefix: str, next_hop: str) -> None:
        key = () if prefix == "/" else name_components(prefix)
        self._routes[key] = next_hop

    def set_default(self, next_hop: str) -> None:
        self._routes[()] = next_hop

    def lookup(self, name: str) -> str:
        components = name_components(name)
        for length in range(len(components), -1, -1):
            hop = self._routes.get(components[:length])
            if hop is not None:
                return hop
        raise NoRouteError(f"no FIB route for {name!r}")

    def has_default(self) -> bool:
        return () in self._routes


@dataclass
class ReplyData:
    data: Data


@dataclass
class Aggregate:
    entry: PitEntry


@dataclass
class Forward:
    next_hop: str
    entry: PitEntry | None  # the freshly created entry; None on a loop return


@dataclass
class CcnNode:
    """Per-node CCN state plus the strategy redirect installed by the
    node's fog domain (anchor base stations only)."""

    label: str
    kind: str
    cs: ContentStore
    pit: Pit = field(default_factory=Pit)
    fib: Fib = field(default_factory=Fib)
    pit_lifetime: int = 1000
    redirect_target: str | None = None       # co-located fog entity, if any
    redirect_lookup: object | None = None    # callable name -> bool (target holds it)
    size_of: object | None = None            # callable name -> payload bytes
    hit_count: int = 0


def on_interest(node: CcnNode, interest: Interest, now: int, from_face: str):
    """Forwarding pipeline for one Interest arriving at a node.

    Returns ReplyData on a Content Store hit, Aggregate when an existing
    same-class PIT entry absorbs the Interest, or Forward with the chosen
    next hop (creating the PIT entry). Raises NoRouteError when no FIB
    prefix covers the name.
    """
    if interest.name in node.cs:
        node.cs.touch(interest.name, now)
        node.hit_count += 1
        size = node.size_of(interest.name) if node.size_of is not None else 1
        return ReplyData(
            Data(
                name=interest.name,
                size_bytes=size,
                producer=node.label,
                served_by=node.label,
                traffic_class=interest.traffic_class,
            )
        )

    existing = node.pit.get(interest.name, interest.traffic_class)
    if existing is not None:
        if interest.nonce in existing.nonces:
            # The same Interest looped back (a redirect target missed after
            # an eviction race): push it up the default route instead of
            # aggregating it with itself.
            return Forward(node.fib.lookup(interest.name), None)
        existing.downstreams.append((from_face, interest.nonce))
        existing.nonces.add(interest.nonce)
        return Aggregate(existing)

    next_hop = _choose_next_hop(node, interest, from_face)
    entry = PitEntry(
        name=interest.name,
        traffic_class=interest.traffic_class,
        downstreams=[(from_face, interest.nonce)],
        created_at=now,
        lifetime=node.pit_lifetime,
        nonces={interest.nonce},
    )
    node.pit.put(entry)
    return Forward(next_hop, entry)


def _choose_next_hop(node: CcnNode, interest: Interest, from_face: str) -> str:
    if (
        interest.traffic_class == USER
        and node.redirect_target is not None
        and node.redirect_target != from_face
        and node.redirect_lookup is not None
        and node.redirect_lookup(interest.name)
    ):
        return node.redirect_target
    return node.fib.lookup(interest.name)


@dataclass
class DataActions:
    forward_to: list[tuple[str, int]]   # (face, nonce) pairs, APP included
    unsolicited: bool = False
    stored: EvictionOutcome | None = None


def on_data(node: CcnNode, data: Data, now: int) -> DataActions:
    """Consume the matching PIT entry, fan Data out to its downstreams,
    then offer the item to the Content Store. Unsolicited Data is
    dropped (and counted by the caller)."""
    entry = node.pit.pop(data.name, data.traffic_class)
    if entry is None:
        return DataActions(forward_to=[], unsolicited=True)
    stored = node.cs.insert(data.name, now)
    return DataActions(forward_to=list(entry.downstreams), stored=stored)
