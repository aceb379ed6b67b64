"""Scenario configuration: dataclasses plus the `key = value` config file
format (bracketed sections, one setting per line, `#` comments).

`parse_config` and `serialize_config` round-trip; `validate_config`
raises ConfigError with a field-path message on the first violation.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from ..ccn import CatalogItem, ContentCatalog
from ..mobility import BASELINE_REDIRECT, FEL_UPSTREAM_CACHE
from ..topology import CommunitySpec

CLASS_PREFIX = {"a": "news", "b": "video"}

PIN_TARGET_FOG = "fog"
PIN_TARGET_ANCHOR = "anchor"


class ConfigError(Exception):
    """Invalid configuration; message carries the offending field path."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class CatalogSpec:
    class_a_items: int = 20
    class_b_items: int = 10
    size_bytes: int = 1000

    def build(self) -> ContentCatalog:
        items = []
        for klass in ("a", "b"):
            count = self.class_a_items if klass == "a" else self.class_b_items
            prefix = CLASS_PREFIX[klass]
            for i in range(count):
                items.append(
                    CatalogItem(f"/{prefix}/item{i:03d}", self.size_bytes, klass)
                )
        return ContentCatalog(items)


@dataclass
class ProfileSpec:
    label: str
    community: int
    model: str                      # "zipf" | "periodic"
    klass: str                      # "a" | "b"
    ap_index: int = 0
    mean_interarrival_ms: int = 50
    s: float = 1.0
    period_ms: int = 100
    playlist: tuple[str, ...] | None = None   # None = whole class slice
    d2d_peers: tuple[str, ...] = ()
    cs_capacity: int | None = None  # None = community-wide requester_cs


@dataclass
class FelSettings:
    k: int = 10
    epoch_ms: int = 1000
    epsilon_mode: str = "1/epoch"   # or "fixed"
    epsilon: float = 0.1
    candidates: tuple[tuple[float, float], ...] = ((1, 0), (1, 1), (1, 4), (0, 1))
    ticket_threshold: int = 3
    pin_target: str = PIN_TARGET_FOG
    grant_all: bool = False
    task_cycles: int = 10
    task_data_bytes: int = 1000
    task_delay_sensitive: bool = False
    compute_price: float = 0.001
    caching_cost_per_byte: float = 1e-6
    comm_delay_penalty: float = 1.0


@dataclass
class ArmSpec:
    label: str
    fel_enabled: bool = False
    scheme: str | None = None       # mobility handover scheme
    link_selection: bool = False
    edge_caches: bool = True        # off = intermediate caches forced to 0


@dataclass
class MobilityMove:
    requester: str
    at_ms: int
    to_ap: str


@dataclass
class MobilitySettings:
    moves: tuple[MobilityMove, ...] = ()
    link_epsilon: float = 0.1
    recent_window: int = 5
    d2d_ms: int = 6


@dataclass
class ScenarioConfig:
    scenario: str = "custom"
    seed: int = 1
    duration_ms: int = 60_000
    community: CommunitySpec = field(default_factory=CommunitySpec)
    catalog: CatalogSpec = field(default_factory=CatalogSpec)
    profiles: tuple[ProfileSpec, ...] = ()
    fel: FelSettings = field(default_factory=FelSettings)
    arms: tuple[ArmSpec, ...] = (ArmSpec("main"),)
    mobility: MobilitySettings = field(default_factory=MobilitySettings)
    pit_lifetime_ms: int = 0        # 0 = four requester-to-cloud round legs


def validate_config(config: ScenarioConfig) -> None:
    if config.duration_ms <= 0:
        raise ConfigError("[scenario] duration_ms", "must be > 0")
    if config.scenario not in ("a", "b", "c", "custom"):
        raise ConfigError("[scenario] name", f"unknown scenario {config.scenario!r}")
    try:
        config.community.validate()
    except Exception as exc:
        raise ConfigError("[community]", str(exc))
    if config.catalog.class_a_items < 0 or config.catalog.class_b_items < 0:
        raise ConfigError("[catalog]", "item counts must be >= 0")
    if config.catalog.class_a_items + config.catalog.class_b_items == 0:
        raise ConfigError("[catalog]", "catalog is empty")
    if config.catalog.size_bytes <= 0:
        raise ConfigError("[catalog] size_bytes", "must be > 0")
    if not config.arms:
        raise ConfigError("[arm:*]", "at least one arm is required")
    labels = set()
    for arm in config.arms:
        if arm.label in labels:
            raise ConfigError(f"[arm:{arm.label}]", "duplicate arm label")
        labels.add(arm.label)
        if arm.scheme not in (None, BASELINE_REDIRECT, FEL_UPSTREAM_CACHE):
            raise ConfigError(f"[arm:{arm.label}] scheme", f"unknown scheme {arm.scheme!r}")
    if len(config.profiles) == 0:
        raise ConfigError("[requester:*]", "at least one requester profile is required")
    catalog = config.catalog.build()
    seen = set()
    for profile in config.profiles:
        path = f"[requester:{profile.label}]"
        if profile.label in seen:
            raise ConfigError(path, "duplicate requester label")
        seen.add(profile.label)
        if not 0 <= profile.community < config.community.communities:
            raise ConfigError(f"{path} community", f"no community {profile.community}")
        if not 0 <= profile.ap_index < config.community.aps_per_community:
            raise ConfigError(f"{path} ap", f"no AP index {profile.ap_index}")
        if profile.klass not in ("a", "b"):
            raise ConfigError(f"{path} class", f"unknown class {profile.klass!r}")
        slice_names = [item.name for item in catalog.class_slice(profile.klass)]
        if not slice_names:
            raise ConfigError(f"{path} class", f"class {profile.klass!r} slice is empty")
        if profile.model == "zipf":
            if profile.s <= 0:
                raise ConfigError(f"{path} s", "zipf exponent must be > 0")
            if profile.mean_interarrival_ms <= 0:
                raise ConfigError(f"{path} mean_interarrival_ms", "must be > 0")
        elif profile.model == "periodic":
            if profile.period_ms <= 0:
                raise ConfigError(f"{path} period_ms", "must be > 0")
            if profile.playlist is not None:
                bad = [n for n in profile.playlist if n not in slice_names]
                if bad:
                    raise ConfigError(f"{path} playlist", f"outside class slice: {bad}")
        else:
            raise ConfigError(f"{path} model", f"unknown model {profile.model!r}")
        if profile.cs_capacity is not None and profile.cs_capacity < 0:
            raise ConfigError(f"{path} cs_capacity", "must be >= 0")
    profile_labels = {p.label for p in config.profiles}
    for profile in config.profiles:
        for peer in profile.d2d_peers:
            if peer not in profile_labels:
                raise ConfigError(
                    f"[requester:{profile.label}] d2d_peers", f"unknown peer {peer!r}"
                )
    ap_labels = {}
    for c in range(config.community.communities):
        if config.community.aps_per_community == 1:
            ap_labels[f"ap-{c}"] = c
        else:
            for i in range(config.community.aps_per_community):
                ap_labels[f"ap-{c}-{i}"] = c
    community_of = {p.label: p.community for p in config.profiles}
    for i, move in enumerate(config.mobility.moves):
        path = f"[mobility] move.{i}"
        if move.requester not in profile_labels:
            raise ConfigError(path, f"unknown requester {move.requester!r}")
        if move.at_ms < 0 or move.at_ms > config.duration_ms:
            raise ConfigError(path, f"move time {move.at_ms} outside run")
        if move.to_ap not in ap_labels:
            raise ConfigError(path, f"unknown access point {move.to_ap!r}")
        if ap_labels[move.to_ap] != community_of[move.requester]:
            raise ConfigError(
                path, f"{move.to_ap!r} is outside {move.requester!r}'s community"
            )
    if config.fel.k < 0:
        raise ConfigError("[fel] k", "must be >= 0")
    if config.fel.epoch_ms <= 0:
        raise ConfigError("[fel] epoch_ms", "must be > 0")
    if config.fel.epsilon_mode not in ("fixed", "1/epoch"):
        raise ConfigError("[fel] epsilon_mode", f"unknown mode {config.fel.epsilon_mode!r}")
    if not config.fel.candidates:
        raise ConfigError("[fel] candidates", "candidate grid is empty")
    if config.fel.pin_target not in (PIN_TARGET_FOG, PIN_TARGET_ANCHOR):
        raise ConfigError("[fel] pin_target", f"unknown target {config.fel.pin_target!r}")
    if config.mobility.d2d_ms <= 0:
        raise ConfigError("[mobility] d2d_ms", "must be > 0")
    if config.pit_lifetime_ms < 0:
        raise ConfigError("[engine] pit_lifetime_ms", "must be >= 0")


# ---------------------------------------------------------------------------
# config file format


def _on_off(value: bool) -> str:
    return "on" if value else "off"


def _parse_on_off(raw: str, path: str) -> bool:
    if raw not in ("on", "off", "true", "false"):
        raise ConfigError(path, f"expected on/off, got {raw!r}")
    return raw in ("on", "true")


def _fmt(value: float) -> str:
    return f"{value:g}"


def serialize_config(config: ScenarioConfig) -> str:
    out = io.StringIO()

    def section(name: str, pairs: list[tuple[str, object]]) -> None:
        out.write(f"[{name}]\n")
        for key, value in pairs:
            out.write(f"{key} = {value}\n")
        out.write("\n")

    section("scenario", [
        ("name", config.scenario),
        ("seed", config.seed),
        ("duration_ms", config.duration_ms),
    ])
    c = config.community
    section("community", [
        ("communities", c.communities),
        ("requesters_per_community", c.requesters_per_community),
        ("aps_per_community", c.aps_per_community),
        ("req_ap_ms", c.req_ap_ms),
        ("ap_bs_ms", c.ap_bs_ms),
        ("bs_gw_ms", c.bs_gw_ms),
        ("gw_cloud_ms", c.gw_cloud_ms),
        ("fog_access_ms", c.fog_access_ms),
        ("requester_cs", c.requester_cs),
        ("ap_cs", c.ap_cs),
        ("bs_cs", c.bs_cs),
        ("fog_cs", c.fog_cs),
        ("requester_compute", c.requester_compute),
        ("ap_compute", c.ap_compute),
        ("bs_compute", c.bs_compute),
        ("fog_compute", c.fog_compute),
        ("gw_compute", c.gw_compute),
    ])
    section("catalog", [
        ("class_a_items", config.catalog.class_a_items),
        ("class_b_items", config.catalog.class_b_items),
        ("size_bytes", config.catalog.size_bytes),
    ])
    f = config.fel
    section("fel", [
        ("k", f.k),
        ("epoch_ms", f.epoch_ms),
        ("epsilon_mode", f.epsilon_mode),
        ("epsilon", _fmt(f.epsilon)),
        ("candidates", " ".join(f"{_fmt(a)}:{_fmt(b)}" for a, b in f.candidates)),
        ("ticket_threshold", f.ticket_threshold),
        ("pin_target", f.pin_target),
        ("grant_all", _on_off(f.grant_all)),
        ("task_cycles", f.task_cycles),
        ("task_data_bytes", f.task_data_bytes),
        ("task_delay_sensitive", _on_off(f.task_delay_sensitive)),
        ("compute_price", _fmt(f.compute_price)),
        ("caching_cost_per_byte", _fmt(f.caching_cost_per_byte)),
        ("comm_delay_penalty", _fmt(f.comm_delay_penalty)),
    ])
    section("engine", [("pit_lifetime_ms", config.pit_lifetime_ms)])
    m = config.mobility
    mobility_pairs: list[tuple[str, object]] = [
        ("link_epsilon", _fmt(m.link_epsilon)),
        ("recent_window", m.recent_window),
        ("d2d_ms", m.d2d_ms),
    ]
    for i, move in enumerate(m.moves):
        mobility_pairs.append((f"move.{i}", f"{move.requester} {move.at_ms} {move.to_ap}"))
    section("mobility", mobility_pairs)
    for profile in config.profiles:
        pairs: list[tuple[str, object]] = [
            ("community", profile.community),
            ("ap", profile.ap_index),
            ("model", profile.model),
            ("class", profile.klass),
        ]
        if profile.model == "zipf":
            pairs += [("mean_interarrival_ms", profile.mean_interarrival_ms),
                      ("s", _fmt(profile.s))]
        else:
            pairs.append(("period_ms", profile.period_ms))
            if profile.playlist is not None:
                pairs.append(("playlist", " ".join(profile.playlist)))
        if profile.d2d_peers:
            pairs.append(("d2d_peers", " ".join(profile.d2d_peers)))
        if profile.cs_capacity is not None:
            pairs.append(("cs_capacity", profile.cs_capacity))
        section(f"requester:{profile.label}", pairs)
    for arm in config.arms:
        section(f"arm:{arm.label}", [
            ("fel", _on_off(arm.fel_enabled)),
            ("scheme", arm.scheme or "none"),
            ("link_selection", _on_off(arm.link_selection)),
            ("edge_caches", _on_off(arm.edge_caches)),
        ])
    return out.getvalue()


def parse_config(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), comment_prefixes=("#",)
    )
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("<file>", f"unparseable config: {exc}")

    def get(section: str, key: str, convert, default):
        if not parser.has_section(section) or key not in parser[section]:
            if default is None:
                raise ConfigError(f"[{section}] {key}", "required key missing")
            return default
        raw = parser[section][key].strip()
        try:
            return convert(raw)
        except ConfigError:
            raise
        except Exception:
            raise ConfigError(f"[{section}] {key}", f"bad value {raw!r}")

    scenario = get("scenario", "name", str, "custom")
    seed = get("scenario", "seed", int, 1)
    duration = get("scenario", "duration_ms", int, 60_000)

    community = CommunitySpec(
        communities=get("community", "communities", int, 1),
        requesters_per_community=get("community", "requesters_per_community", int, 1),
        aps_per_community=get("community", "aps_per_community", int, 1),
        req_ap_ms=get("community", "req_ap_ms", int, 2),
        ap_bs_ms=get("community", "ap_bs_ms", int, 5),
        bs_gw_ms=get("community", "bs_gw_ms", int, 10),
        gw_cloud_ms=get("community", "gw_cloud_ms", int, 20),
        fog_access_ms=get("community", "fog_access_ms", int, 1),
        requester_cs=get("community", "requester_cs", int, 0),
        ap_cs=get("community", "ap_cs", int, 0),
        bs_cs=get("community", "bs_cs", int, 0),
        fog_cs=get("community", "fog_cs", int, 0),
        requester_compute=get("community", "requester_compute", int, 1),
        ap_compute=get("community", "ap_compute", int, 2),
        bs_compute=get("community", "bs_compute", int, 5),
        fog_compute=get("community", "fog_compute", int, 100),
        gw_compute=get("community", "gw_compute", int, 5),
    )
    catalog = CatalogSpec(
        class_a_items=get("catalog", "class_a_items", int, 20),
        class_b_items=get("catalog", "class_b_items", int, 10),
        size_bytes=get("catalog", "size_bytes", int, 1000),
    )

    def parse_candidates(raw: str):
        pairs = []
        for token in raw.split():
            a, _, b = token.partition(":")
            pairs.append((float(a), float(b)))
        if not pairs:
            raise ValueError("empty")
        return tuple(pairs)

    fel = FelSettings(
        k=get("fel", "k", int, 10),
        epoch_ms=get("fel", "epoch_ms", int, 1000),
        epsilon_mode=get("fel", "epsilon_mode", str, "1/epoch"),
        epsilon=get("fel", "epsilon", float, 0.1),
        candidates=get("fel", "candidates", parse_candidates,
                       ((1.0, 0.0), (1.0, 1.0), (1.0, 4.0), (0.0, 1.0))),
        ticket_threshold=get("fel", "ticket_threshold", int, 3),
        pin_target=get("fel", "pin_target", str, PIN_TARGET_FOG),
        grant_all=get("fel", "grant_all",
                      lambda r: _parse_on_off(r, "[fel] grant_all"), False),
        task_cycles=get("fel", "task_cycles", int, 10),
        task_data_bytes=get("fel", "task_data_bytes", int, 1000),
        task_delay_sensitive=get("fel", "task_delay_sensitive",
                                 lambda r: _parse_on_off(r, "[fel] task_delay_sensitive"), False),
        compute_price=get("fel", "compute_price", float, 0.001),
        caching_cost_per_byte=get("fel", "caching_cost_per_byte", float, 1e-6),
        comm_delay_penalty=get("fel", "comm_delay_penalty", float, 1.0),
    )

    pit_lifetime = get("engine", "pit_lifetime_ms", int, 0)

    moves = []
    if parser.has_section("mobility"):
        move_keys = sorted(
            (k for k in parser["mobility"] if k.startswith("move.")),
            key=lambda k: int(k.split(".", 1)[1]),
        )
        for key in move_keys:
            parts = parser["mobility"][key].split()
            if len(parts) != 3:
                raise ConfigError(f"[mobility] {key}",
                                  "expected '<requester> <at_ms> <to_ap>'")
            try:
                moves.append(MobilityMove(parts[0], int(parts[1]), parts[2]))
            except ValueError:
                raise ConfigError(f"[mobility] {key}", f"bad move time {parts[1]!r}")
    mobility = MobilitySettings(
        moves=tuple(moves),
        link_epsilon=get("mobility", "link_epsilon", float, 0.1),
        recent_window=get("mobility", "recent_window", int, 5),
        d2d_ms=get("mobility", "d2d_ms", int, 6),
    )

    profiles = []
    for section in parser.sections():
        if not section.startswith("requester:"):
            continue
        label = section.split(":", 1)[1]
        playlist_raw = get(section, "playlist", str, "")
        profile = ProfileSpec(
            label=label,
            community=get(section, "community", int, 0),
            ap_index=get(section, "ap", int, 0),
            model=get(section, "model", str, None),
            klass=get(section, "class", str, None),
            mean_interarrival_ms=get(section, "mean_interarrival_ms", int, 50),
            s=get(section, "s", float, 1.0),
            period_ms=get(section, "period_ms", int, 100),
            playlist=tuple(playlist_raw.split()) if playlist_raw else None,
            d2d_peers=tuple(get(section, "d2d_peers", str, "").split()),
            cs_capacity=get(section, "cs_capacity", int, -1),
        )
        if profile.cs_capacity == -1:
            profile.cs_capacity = None
        profiles.append(profile)

    arms = []
    for section in parser.sections():
        if not section.startswith("arm:"):
            continue
        label = section.split(":", 1)[1]
        scheme = get(section, "scheme", str, "none")
        arms.append(ArmSpec(
            label=label,
            fel_enabled=get(section, "fel",
                            lambda r: _parse_on_off(r, f"[{section}] fel"), False),
            scheme=None if scheme == "none" else scheme,
            link_selection=get(section, "link_selection",
                               lambda r: _parse_on_off(r, f"[{section}] link_selection"), False),
            edge_caches=get(section, "edge_caches",
                            lambda r: _parse_on_off(r, f"[{section}] edge_caches"), True),
        ))
    if not arms:
        arms = [ArmSpec("main")]

    config = ScenarioConfig(
        scenario=scenario,
        seed=seed,
        duration_ms=duration,
        community=community,
        catalog=catalog,
        profiles=tuple(profiles),
        fel=fel,
        arms=tuple(arms),
        mobility=mobility,
        pit_lifetime_ms=pit_lifetime,
    )
    validate_config(config)
    return config
