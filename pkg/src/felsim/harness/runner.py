"""The simulation driver: builds topology, CCN state, workloads, learning
agents, and mobility for one arm of a scenario, runs it to the configured
duration, and collects metrics.

`run_scenario` runs every arm of a config under the same master seed
(common random numbers, so paired arms see identical workloads) and
returns the merged tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .. import ccn, mobility as mob
from ..ccn import (
    APP, Aggregate, CcnNode, ContentStore, Data, Forward, Interest,
    PREFETCH, ReplyData, USER,
)
from ..engine import Engine, StreamFactory
from ..fel import (
    DomainCostModel, LearningAgent, LearningTask, NetworkSnapshot,
    RetrievalRecord, UnknownDomainError, compute_reward, place_tasks,
)
from ..topology import (
    BuiltTopology, D2D, RAN, REQUESTER, WIRED, build_community, form_fog_domains,
)
from ..workload import PeriodicModel, RequesterProfile, RequesterState, ZipfModel
from .config import PIN_TARGET_ANCHOR, ArmSpec, ScenarioConfig, validate_config
from .metrics import EpochRow, MetricsRow, MetricsTable

LINK_LOCAL = "local"  # served from the requester's own Content Store


class SimulationInvariantError(Exception):
    """A runtime invariant broke mid-run (CLI exit code 3)."""


@dataclass
class PendingRequest:
    request_id: int
    name: str
    issue_ms: int
    link_kind: str
    selector_arm: str | None = None


@dataclass
class Counters:
    values: dict[str, int] = field(default_factory=dict)

    def bump(self, name: str, by: int = 1) -> None:
        self.values[name] = self.values.get(name, 0) + by


class ArmSimulation:
    """One deterministic run: a single arm under a single master seed."""

    def __init__(self, config: ScenarioConfig, arm: ArmSpec, master_seed: int) -> None:
        self.config = config
        self.arm = arm
        self.master_seed = master_seed
        self.scenario_label = f"{config.scenario}-{arm.label}"
        self.engine = Engine()
        self.streams = StreamFactory(master_seed)
        self.counters = Counters()
        self.rows: list[MetricsRow] = []
        self.epoch_rows: list[EpochRow] = []

        self.catalog = config.catalog.build()
        self.built = self._build_topology()
        self.topology = self.built.topology
        self.community_of = {
            p.label: p.community for p in config.profiles
        }
        self.ccn_nodes: dict[str, CcnNode] = {}
        self._build_ccn_state()

        self.domains = form_fog_domains(self.topology, config.fel.ticket_threshold)
        self.domain_by_anchor = {d.anchor: d for d in self.domains}
        self.agents: dict[str, LearningAgent] = {}
        self.records_by_domain: dict[str, list[RetrievalRecord]] = {}
        self._window: dict[str, list[RetrievalRecord]] = {}
        self.placement = None
        if arm.fel_enabled:
            self._build_agents()

        self._nonce = 0
        self._request_ids: dict[str, int] = {}
        self._inflight: dict[str, set[str]] = {}
        self._pending: dict[tuple[str, int], PendingRequest] = {}
        self.mobile: dict[str, mob.MobileState] = {}
        self._workloads: dict[str, RequesterState] = {}
        self._build_workloads()
        self._build_mobility()
        self._flushed = False

    # -- construction --------------------------------------------------

    def _build_topology(self) -> BuiltTopology:
        community = self.config.community
        if not self.arm.edge_caches:
            community = replace(community, ap_cs=0, bs_cs=0, fog_cs=0)
        labels: list[list[str]] = [[] for _ in range(community.communities)]
        for profile in self.config.profiles:
            labels[profile.community].append(profile.label)
        if any(not group for group in labels):
            raise SimulationInvariantError("every community needs >= 1 requester")
        community = replace(community, requester_labels=labels)
        built = build_community(community)
        seen_pairs = set()
        for profile in self.config.profiles:
            for peer in profile.d2d_peers:
                pair = tuple(sorted((profile.label, peer)))
                if pair in seen_pairs:
                    continue
                seen_pairs.add(pair)
                built.topology.add_link(pair[0], pair[1],
                                        self.config.mobility.d2d_ms, D2D)
        for profile in self.config.profiles:
            if profile.cs_capacity is not None:
                built.topology.nodes[profile.label].cs_capacity = profile.cs_capacity
        return built

    def _pit_lifetime(self) -> int:
        if self.config.pit_lifetime_ms:
            return self.config.pit_lifetime_ms
        worst = max(
            self.topology.path_latency(p.label, "cloud", kinds={WIRED, RAN})
            for p in self.config.profiles
        )
        return 4 * worst

    def _build_ccn_state(self) -> None:
        size_of = lambda name: self.catalog.by_name[name].size_bytes  # noqa: E731
        for label, node in self.topology.nodes.items():
            self.ccn_nodes[label] = CcnNode(
                label=label, kind=node.kind, cs=ContentStore(node.cs_capacity),
                size_of=size_of,
            )
        lifetime = self._pit_lifetime()
        for node in self.ccn_nodes.values():
            node.pit_lifetime = lifetime
        cloud = self.ccn_nodes["cloud"]
        for name in self.catalog.names():
            cloud.cs.insert(name, 0)
        profile_ap = {
            p.label: self._ap_label(p.community, p.ap_index)
            for p in self.config.profiles
        }
        # Default routes point up each community chain toward the cloud.
        for community in self.built.communities:
            for requester in community.requesters:
                self.ccn_nodes[requester].fib.set_default(profile_ap[requester])
            for ap in community.aps:
                self.ccn_nodes[ap].fib.set_default(community.bs)
            self.ccn_nodes[community.fog].fib.set_default(community.bs)
            self.ccn_nodes[community.bs].fib.set_default(community.gw)
            self.ccn_nodes[community.gw].fib.set_default("cloud")
            # The anchor knows its co-located fog's cache contents and
            # diverts matching user Interests there (the applied strategy).
            fog_store = self.ccn_nodes[community.fog].cs
            bs_node = self.ccn_nodes[community.bs]
            bs_node.redirect_target = community.fog
            bs_node.redirect_lookup = fog_store.__contains__

    def _ap_label(self, community_index: int, ap_index: int) -> str:
        return self.built.communities[community_index].aps[ap_index]

    def _build_agents(self) -> None:
        fel = self.config.fel
        requesters_by_anchor: dict[str, list[str]] = {}
        for profile in self.config.profiles:
            anchor = self.built.communities[profile.community].bs
            requesters_by_anchor.setdefault(anchor, []).append(profile.label)
        tasks = [
            LearningTask(f"learn-{d.domain_id}", fel.task_cycles,
                         fel.task_data_bytes, fel.task_delay_sensitive)
            for d in self.domains
        ]
        costs = {
            d.domain_id: DomainCostModel(
                fel.compute_price, fel.caching_cost_per_byte,
                float(self.topology.path_latency(d.anchor, "cloud", kinds={WIRED, RAN})),
            )
            for d in self.domains
        }
        self.placement = place_tasks(tasks, self.domains, costs, fel.comm_delay_penalty)
        self.counters.bump("placements_assigned", len(self.placement.assignment))
        self.counters.bump("placements_rejected", len(self.placement.rejected))
        placed_domains = set(self.placement.assignment.values())
        for domain in self.domains:
            if domain.domain_id not in placed_domains:
                continue  # no compute secured: this domain does not learn
            community = next(
                c for c in self.built.communities if c.bs == domain.anchor
            )
            target = domain.anchor if fel.pin_target == PIN_TARGET_ANCHOR else community.fog
            agent = LearningAgent(
                domain=domain,
                pin_target=target,
                k=fel.k,
                candidates=list(fel.candidates),
                stream=self.streams.stream(f"fel:{domain.domain_id}"),
                epsilon_mode=fel.epsilon_mode,
                epsilon=fel.epsilon,
                requesters=tuple(requesters_by_anchor.get(domain.anchor, ())),
            )
            self.agents[domain.domain_id] = agent
            self.records_by_domain[domain.domain_id] = []
            self._window[domain.domain_id] = []
            if fel.grant_all:
                for requester in agent.requesters:
                    agent.grant_access(requester, 0)
            self._schedule_epoch(agent, fel.epoch_ms)

    def _build_workloads(self) -> None:
        for profile in self.config.profiles:
            slice_names = tuple(
                item.name for item in self.catalog.class_slice(profile.klass)
            )
            if profile.model == "zipf":
                model = ZipfModel(profile.s, profile.mean_interarrival_ms)
            else:
                model = PeriodicModel(
                    profile.period_ms, tuple(profile.playlist or slice_names)
                )
            state = RequesterState(
                RequesterProfile(profile.label, model, profile.klass), slice_names
            )
            self._workloads[profile.label] = state
            self._request_ids[profile.label] = 0
            self._inflight[profile.label] = set()
            stream = self.streams.stream(f"workload:{profile.label}")
            fire_at, name = state.next_request(0, stream)
            if fire_at <= self.config.duration_ms:
                self.engine.schedule(
                    fire_at, "interest-issue",
                    lambda r=profile.label, n=name: self._on_request(r, n),
                )

    def _build_mobility(self) -> None:
        settings = self.config.mobility
        movers = {m.requester for m in settings.moves}
        for profile in self.config.profiles:
            if not profile.d2d_peers and profile.label not in movers:
                continue
            home = self._ap_label(profile.community, profile.ap_index)
            self.mobile[profile.label] = mob.MobileState(
                requester=profile.label,
                home_ap=home,
                current_ap=home,
                d2d_peers=tuple(profile.d2d_peers),
                selector=mob.LinkSelector(profile.label, settings.link_epsilon),
                recent_window=settings.recent_window,
            )
        for move in settings.moves:
            self.engine.schedule(
                move.at_ms, "handover",
                lambda m=move: self.handover(m.requester, m.to_ap, self.arm.scheme),
            )

    # -- interest lifecycle --------------------------------------------

    def _fresh_nonce(self) -> int:
        self._nonce += 1
        return self._nonce

    def _on_request(self, requester: str, name: str) -> None:
        """A workload request fires: consult the local cache, pick the
        link, and issue the Interest (or suppress an in-flight duplicate);
        then schedule the requester's next request."""
        now = self.engine.now
        stream = self.streams.stream(f"workload:{requester}")
        fire_at, next_name = self._workloads[requester].next_request(now, stream)
        if fire_at <= self.config.duration_ms:
            self.engine.schedule(
                fire_at, "interest-issue",
                lambda: self._on_request(requester, next_name),
            )

        if name in self._inflight[requester]:
            self.counters.bump("duplicate_suppressed")
            return
        mobile = self.mobile.get(requester)
        if mobile is not None:
            mobile.note_request(name)
        request_id = self._request_ids[requester]
        self._request_ids[requester] += 1
        self.counters.bump("requests_issued")

        node = self.ccn_nodes[requester]
        if name in node.cs:
            node.cs.touch(name, now)
            node.hit_count += 1
            self._record_delivery(
                requester,
                PendingRequest(request_id, name, now, LINK_LOCAL),
                served_by=requester,
            )
            return

        self._inflight[requester].add(name)
        link_kind, selector_arm, first_hop, delay = self._choose_link(requester, name)
        delay += self._redirect_penalty(requester, name)
        pending = PendingRequest(request_id, name, now, link_kind, selector_arm)
        nonce = self._fresh_nonce()
        self._pending[(requester, nonce)] = pending
        interest = Interest(name=name, requester=requester, nonce=nonce,
                            issued_at=now, traffic_class=USER)
        if delay:
            self.engine.schedule_in(
                delay, "interest-issue",
                lambda: self._start_interest(requester, interest, first_hop),
            )
        else:
            self._start_interest(requester, interest, first_hop)

    def _choose_link(self, requester: str, name: str):
        """Returns (link_kind, selector arm, first-hop override, delay).

        The D2D arm is taken only when the selector picks it; if no peer
        currently holds the name the request falls back to RAN after a
        probe round trip, still charged to the D2D arm."""
        mobile = self.mobile.get(requester)
        has_d2d = bool(mobile and mobile.d2d_peers)
        if not (self.arm.link_selection and mobile and has_d2d):
            return RAN, None, None, 0
        stream = self.streams.stream(f"mobility:{requester}")
        arm = mobile.selector.choose(stream, has_d2d)
        if arm == RAN:
            return RAN, RAN, None, 0
        peer = mob.d2d_availability(
            self.topology, lambda p, n: n in self.ccn_nodes[p].cs, mobile, name
        )
        if peer is not None:
            return D2D, D2D, peer, 0
        self.counters.bump("d2d_fallbacks")
        return D2D, D2D, None, mob.d2d_probe_ms(self.topology, mobile)

    def _redirect_penalty(self, requester: str, name: str) -> int:
        """Path-stretch cost of baseline redirection: the first request for
        a recently used name after a handover first runs
        new AP -> gateway -> old AP and back before the normal fetch."""
        mobile = self.mobile.get(requester)
        if (
            mobile is None
            or self.arm.scheme != mob.BASELINE_REDIRECT
            or mobile.old_ap is None
            or name not in mobile.penalty_names
        ):
            return 0
        mobile.penalty_names.discard(name)
        self.counters.bump("redirected_requests")
        gw = self.built.communities[self.community_of[requester]].gw
        kinds = {WIRED, RAN}
        detour = (
            self.topology.path_latency(mobile.current_ap, gw, kinds=kinds)
            + self.topology.path_latency(gw, mobile.old_ap, kinds=kinds)
        )
        return 2 * detour

    def _start_interest(self, origin: str, interest: Interest,
                        first_hop: str | None) -> None:
        node = self.ccn_nodes[origin]
        action = ccn.on_interest(node, interest, self.engine.now, APP)
        if isinstance(action, ReplyData):
            # The name landed in the local store while the issue was
            # delayed (probe/penalty); serve it locally.
            self._deliver_to_app(origin, action.data, interest.nonce)
            return
        if isinstance(action, Aggregate):
            if interest.traffic_class == USER:
                self.counters.bump("coalesced_interests")
            return
        if action.entry is not None:
            self.counters.bump("pit_entries_created")
            self.counters.bump("interest_upstream_forwards")
            self._schedule_pit_expiry(origin, action.entry)
        else:
            self.counters.bump("interest_loop_returns")
            self.counters.bump("interest_upstream_forwards")
        # A D2D exchange goes straight to the chosen peer; otherwise the
        # FIB's choice stands.
        self._send_interest(origin, first_hop or action.next_hop, interest)

    def _send_interest(self, from_label: str, to_label: str, interest: Interest) -> None:
        latency = self.topology.link_latency(from_label, to_label)
        self.engine.schedule_in(
            latency, "packet-arrival",
            lambda: self._process_interest_at(to_label, interest, from_label),
        )

    def _process_interest_at(self, label: str, interest: Interest, from_face: str) -> None:
        node = self.ccn_nodes[label]
        action = ccn.on_interest(node, interest, self.engine.now, from_face)
        if isinstance(action, ReplyData):
            if from_face == APP:
                self._deliver_to_app(label, action.data, interest.nonce)
            else:
                self._send_data(label, from_face, action.data)
        elif isinstance(action, Forward):
            if action.entry is not None:
                self.counters.bump("pit_entries_created")
                self._schedule_pit_expiry(label, action.entry)
            else:
                self.counters.bump("interest_loop_returns")
            self.counters.bump("interest_upstream_forwards")
            self._send_interest(label, action.next_hop, interest)
        elif isinstance(action, Aggregate) and interest.traffic_class == USER:
            self.counters.bump("coalesced_interests")

    def _send_data(self, from_label: str, to_label: str, data: Data) -> None:
        latency = self.topology.link_latency(from_label, to_label)
        self.engine.schedule_in(
            latency, "packet-arrival",
            lambda: self._process_data_at(to_label, data),
        )

    def _process_data_at(self, label: str, data: Data) -> None:
        node = self.ccn_nodes[label]
        actions = ccn.on_data(node, data, self.engine.now)
        if actions.unsolicited:
            self.counters.bump("unsolicited_drops")
            return
        if (
            actions.stored is not None
            and actions.stored.rejected
            and node.cs.capacity not in (0, None)
        ):
            self.counters.bump("pin_rejections")
        for face, nonce in actions.forward_to:
            if face == APP:
                self._deliver_to_app(label, data, nonce)
            else:
                self._send_data(label, face, data)

    def _schedule_pit_expiry(self, label: str, entry) -> None:
        node = self.ccn_nodes[label]

        def expire() -> None:
            live = node.pit.get(entry.name, entry.traffic_class)
            if live is not entry:
                return
            node.pit.pop(entry.name, entry.traffic_class)
            self.counters.bump("pit_expiries")
            for face, nonce in entry.downstreams:
                if face != APP:
                    continue
                pending = self._pending.pop((label, nonce), None)
                if pending is not None and node.kind == REQUESTER:
                    self.counters.bump("request_expiries")
                    self._inflight[label].discard(pending.name)

        self.engine.schedule_in(entry.lifetime, "pit-expiry", expire)

    def _deliver_to_app(self, label: str, data: Data, nonce: int) -> None:
        pending = self._pending.pop((label, nonce), None)
        if pending is None:
            return  # prefetch completion, or the request already expired
        node = self.ccn_nodes[label]
        if node.kind != REQUESTER or data.traffic_class != USER:
            return
        self._inflight[label].discard(pending.name)
        self._record_delivery(label, pending, served_by=data.served_by)

    def _record_delivery(self, requester: str, pending: PendingRequest,
                         served_by: str) -> None:
        now = self.engine.now
        served_kind = self.topology.nodes[served_by].kind
        domain = self.domain_by_anchor.get(self.topology.nodes[requester].bs_anchor)
        agent = self.agents.get(domain.domain_id) if domain else None
        candidate = ""
        if agent is not None and agent.active_candidate is not None:
            alpha, beta = agent.active_candidate
            candidate = f"({alpha:g},{beta:g})"
        row = MetricsRow(
            scenario=self.scenario_label,
            run_seed=self.master_seed,
            requester=requester,
            request_id=pending.request_id,
            content_name=pending.name,
            issue_ms=pending.issue_ms,
            satisfy_ms=now,
            latency_ms=now - pending.issue_ms,
            served_by=served_by,
            cache_hit_node_kind=served_kind,
            link_kind=pending.link_kind,
            scheme=self.arm.scheme or "",
            epoch_candidate=candidate,
        )
        self.rows.append(row)
        if agent is not None:
            record = RetrievalRecord(requester, pending.name, pending.issue_ms,
                                     now, served_by)
            agent.observe(record)
            self.records_by_domain[domain.domain_id].append(record)
            self._window[domain.domain_id].append(record)
        mobile = self.mobile.get(requester)
        if mobile is not None and pending.selector_arm is not None:
            mobile.selector.record(pending.selector_arm, row.latency_ms)

    # -- strategy application -------------------------------------------

    def apply_pins(self, label: str, names: tuple[str, ...]) -> None:
        """Replace the node's pinned set; names not yet cached are
        prefetched by a self-issued Interest in the prefetch lane."""
        node = self.ccn_nodes[label]
        missing = node.cs.set_pins(set(names))
        for name in missing:
            nonce = self._fresh_nonce()
            self.counters.bump("prefetch_interests")
            interest = Interest(name=name, requester=label, nonce=nonce,
                                issued_at=self.engine.now, traffic_class=PREFETCH)
            self._process_interest_at(label, interest, APP)

    def _schedule_epoch(self, agent: LearningAgent, at_ms: int) -> None:
        if at_ms > self.config.duration_ms:
            return
        self.engine.schedule(at_ms, "learning-epoch",
                             lambda: self._run_epoch(agent, event_driven=False))

    def _run_epoch(self, agent: LearningAgent, event_driven: bool) -> None:
        now = self.engine.now
        snapshot = self._snapshot(agent, now)
        agent.window_start = now
        reward = compute_reward(snapshot, agent.last_reward)
        strategy = agent.update_strategy(snapshot, reward)
        for label, names in strategy.pins.items():
            self.apply_pins(label, names)
        self.epoch_rows.append(EpochRow(
            scenario=self.scenario_label,
            run_seed=self.master_seed,
            domain=agent.domain.domain_id,
            epoch=agent.epoch_index,
            at_ms=now,
            alpha=strategy.alpha,
            beta=strategy.beta,
            reward=reward.value,
            carried=reward.carried,
            pin_count=sum(len(n) for n in strategy.pins.values()),
        ))
        if not event_driven:
            self._schedule_epoch(agent, now + self.config.fel.epoch_ms)

    def _snapshot(self, agent: LearningAgent, now: int) -> NetworkSnapshot:
        window = self._window[agent.domain.domain_id]
        self._window[agent.domain.domain_id] = []
        request_counts: dict[str, int] = {}
        per_requester: dict[str, list[int]] = {}
        for record in window:
            request_counts[record.name] = request_counts.get(record.name, 0) + 1
            per_requester.setdefault(record.requester, []).append(
                record.satisfied_at - record.issued_at
            )
        members = sorted(set(agent.domain.members) | {agent.domain.anchor})
        return NetworkSnapshot(
            taken_at=now,
            window_start=agent.window_start,
            cache_contents={
                m: tuple(sorted(self.ccn_nodes[m].cs.names())) for m in members
            },
            hit_counts={m: self.ccn_nodes[m].hit_count for m in members},
            request_counts=request_counts,
            mean_latency_by_requester={
                req: sum(vals) / len(vals)
                for req, vals in sorted(per_requester.items())
            },
            window_latencies=tuple(
                r.satisfied_at - r.issued_at for r in window
            ),
        )

    def grant_access(self, requester: str, domain_id: str):
        agent = self.agents.get(domain_id)
        if agent is None:
            raise UnknownDomainError(f"no learning agent for {domain_id!r}")
        return agent.grant_access(requester, self.engine.now)

    # -- mobility --------------------------------------------------------

    def handover(self, requester: str, to_ap: str, scheme: str | None) -> None:
        scheme = scheme or mob.BASELINE_REDIRECT
        state = self.mobile[requester]
        anchor = mob.validate_handover(self.topology, state, to_ap)
        old_ap = state.current_ap
        self.counters.bump("handovers")

        if scheme == mob.BASELINE_REDIRECT:
            # The old attachment forgets us: in-flight Data is dropped
            # there, and the next request per recent name pays the
            # redirection detour.
            ap_node = self.ccn_nodes[old_ap]
            inflight_names = set()
            for entry in ap_node.pit.entries():
                before = len(entry.downstreams)
                entry.downstreams = [
                    d for d in entry.downstreams if d[0] != requester
                ]
                if len(entry.downstreams) != before:
                    inflight_names.add(entry.name)
                if not entry.downstreams:
                    ap_node.pit.pop(entry.name, entry.traffic_class)
            state.penalty_names = set(state.recent_names) | inflight_names
        state.old_ap = old_ap
        state.current_ap = to_ap
        self.ccn_nodes[requester].fib.set_default(to_ap)

        domain = self.domain_by_anchor.get(anchor)
        agent = self.agents.get(domain.domain_id) if domain else None
        if agent is not None:
            # Event-driven learning plan; runs first so the handover
            # warm-up below survives the refreshed strategy.
            self._run_epoch(agent, event_driven=True)
        if scheme == mob.FEL_UPSTREAM_CACHE:
            bs_node = self.ccn_nodes[anchor]
            recent = list(reversed(state.recent_names))  # newest first
            combined = recent + [
                n for n in sorted(bs_node.cs.pinned) if n not in recent
            ]
            if bs_node.cs.capacity is not None:
                combined = combined[: bs_node.cs.capacity]
            self.apply_pins(anchor, tuple(combined))

    # -- run --------------------------------------------------------------

    def run(self, drain_ms: int = 0) -> MetricsTable:
        """Run to the configured duration; with drain_ms the engine keeps
        processing (no new workload requests) so in-flight exchanges and
        PIT expiries settle before the tables are read."""
        duration = self.config.duration_ms
        self.engine.schedule(duration + drain_ms, "metrics-flush", self._flush)
        self.engine.run_until(duration + drain_ms)
        if not self._flushed:
            raise SimulationInvariantError("metrics flush never ran")
        table = MetricsTable(rows=self.rows, epochs=self.epoch_rows)
        counters = dict(self.counters.values)
        counters["deliveries"] = len(self.rows)
        table.counters[(self.scenario_label, self.master_seed)] = dict(
            sorted(counters.items())
        )
        return table

    def _flush(self) -> None:
        self.rows.sort(key=lambda r: (r.issue_ms, r.requester, r.request_id))
        self._flushed = True


def run_scenario(config: ScenarioConfig, seed: int | None = None) -> MetricsTable:
    """Run every arm of the scenario under one master seed and merge the
    per-arm tables (the CSV writer makes the final global ordering)."""
    validate_config(config)
    master_seed = config.seed if seed is None else seed
    if seed is not None:
        config = replace(config, seed=seed)
    merged = MetricsTable()
    for arm in config.arms:
        sim = ArmSimulation(config, arm, master_seed)
        merged.extend(sim.run())
    return merged
