"""Canned scenario configurations for the three headline experiments.

a: five communities, each one Zipf and one periodic requester; a cloud-only
   arm against a fog arm with learning enabled.
b: same communities with every base station in the fog layer, requesters
   split into two content types, personalization grants for everyone.
c: twenty mobile requesters under two APs sharing a base station, each with
   RAN and D2D links; a baseline arm (always RAN, redirect handover)
   against a learning arm (link selection, upstream-cache handover).
"""

from __future__ import annotations

from ..mobility import BASELINE_REDIRECT, FEL_UPSTREAM_CACHE
from ..topology import CommunitySpec
from .config import (
    ArmSpec, CatalogSpec, FelSettings, MobilityMove, MobilitySettings,
    PIN_TARGET_ANCHOR, PIN_TARGET_FOG, ProfileSpec, ScenarioConfig,
)

DEFAULT_DURATION_MS = 60_000


def scenario_a(seed: int, duration_ms: int = DEFAULT_DURATION_MS) -> ScenarioConfig:
    """Cloud paradigm vs fog paradigm over five communities."""
    profiles = []
    for c in range(5):
        profiles.append(ProfileSpec(
            label=f"zipf-{c}", community=c, model="zipf", klass="a",
            mean_interarrival_ms=50, s=1.0,
        ))
        profiles.append(ProfileSpec(
            label=f"period-{c}", community=c, model="periodic", klass="b",
            period_ms=100,
        ))
    catalog = CatalogSpec(class_a_items=20, class_b_items=10)
    community = CommunitySpec(
        communities=5,
        requesters_per_community=2,
        # The fog store holds the whole catalog so warmed content is never
        # evicted; the pin budget k stays the working set the strategy
        # refreshes.
        fog_cs=catalog.class_a_items + catalog.class_b_items,
    )
    return ScenarioConfig(
        scenario="a",
        seed=seed,
        duration_ms=duration_ms,
        community=community,
        catalog=catalog,
        profiles=tuple(profiles),
        fel=FelSettings(k=10, pin_target=PIN_TARGET_FOG),
        arms=(
            ArmSpec("cloud", fel_enabled=False, edge_caches=False),
            ArmSpec("fog", fel_enabled=True, edge_caches=True),
        ),
    )


def scenario_b(seed: int, duration_ms: int = DEFAULT_DURATION_MS) -> ScenarioConfig:
    """Personalized acceleration: every base station joins the fog layer
    (pins land on the stations themselves) and every requester grants its
    domain agent access to its records."""
    profiles = []
    for c in range(5):
        profiles.append(ProfileSpec(
            label=f"typea-{c}", community=c, model="zipf", klass="a",
            mean_interarrival_ms=50, s=1.0,
        ))
        profiles.append(ProfileSpec(
            label=f"typeb-{c}", community=c, model="periodic", klass="b",
            period_ms=100,
        ))
    catalog = CatalogSpec(class_a_items=20, class_b_items=10)
    community = CommunitySpec(
        communities=5,
        requesters_per_community=2,
        bs_cs=20,  # pins hold the top-k; LRU churns the remainder
    )
    return ScenarioConfig(
        scenario="b",
        seed=seed,
        duration_ms=duration_ms,
        community=community,
        catalog=catalog,
        profiles=tuple(profiles),
        fel=FelSettings(
            k=10,
            pin_target=PIN_TARGET_ANCHOR,
            ticket_threshold=0,  # every station gets its fog ticket
            grant_all=True,
        ),
        arms=(
            ArmSpec("nofel", fel_enabled=False, edge_caches=False),
            ArmSpec("fel", fel_enabled=True, edge_caches=True),
        ),
    )


def scenario_c(seed: int, duration_ms: int = DEFAULT_DURATION_MS) -> ScenarioConfig:
    """Mobility: twenty requesters move between two APs under a shared
    base station; baseline redirection vs learned upstream caching with
    RAN/D2D link selection."""
    n = 20
    profiles = []
    for i in range(n):
        peers = (f"mob-{(i - 1) % n:02d}", f"mob-{(i + 1) % n:02d}")
        profiles.append(ProfileSpec(
            label=f"mob-{i:02d}", community=0, ap_index=i % 2,
            model="zipf", klass="a", mean_interarrival_ms=50, s=1.0,
            d2d_peers=peers,
        ))
    # Handovers staggered over the middle of the run, one per requester.
    first_move = duration_ms // 4
    stride = max(1, (duration_ms * 13 // 20) // n)
    moves = tuple(
        MobilityMove(f"mob-{i:02d}", first_move + stride * i, f"ap-0-{(i + 1) % 2}")
        for i in range(n)
    )
    return ScenarioConfig(
        scenario="c",
        seed=seed,
        duration_ms=duration_ms,
        community=CommunitySpec(
            communities=1,
            requesters_per_community=n,
            aps_per_community=2,
            requester_cs=6,
            bs_cs=8,
        ),
        catalog=CatalogSpec(class_a_items=40, class_b_items=0),
        profiles=tuple(profiles),
        fel=FelSettings(k=8, pin_target=PIN_TARGET_ANCHOR, ticket_threshold=0),
        arms=(
            ArmSpec("baseline", fel_enabled=False, scheme=BASELINE_REDIRECT,
                    link_selection=False, edge_caches=True),
            ArmSpec("fel", fel_enabled=True, scheme=FEL_UPSTREAM_CACHE,
                    link_selection=True, edge_caches=True),
        ),
        mobility=MobilitySettings(moves=moves, link_epsilon=0.1,
                                  recent_window=5, d2d_ms=6),
    )


SCENARIO_BUILDERS = {"a": scenario_a, "b": scenario_b, "c": scenario_c}


def build_scenario(kind: str, seed: int,
                   duration_ms: int = DEFAULT_DURATION_MS) -> ScenarioConfig:
    try:
        builder = SCENARIO_BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown scenario {kind!r} (expected a, b, or c)")
    return builder(seed, duration_ms)
