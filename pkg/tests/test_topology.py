import random

import pytest

from felsim.topology import (
    CLOUD, CommunitySpec, FOG, InvalidSpecError, REQUESTER, Topology,
    UnreachableError, build_community, form_fog_domains,
)


def chain_topology():
    # req -2- ap -5- bs -10- gw -20- cloud, fog at 1ms off the bs
    built = build_community(CommunitySpec())
    return built.topology


def test_minimal_community_node_and_link_counts():
    built = build_community(CommunitySpec(communities=1, requesters_per_community=1))
    assert len(built.topology.nodes) == 6
    assert len(built.topology.links) == 5


def test_five_communities_two_requesters_each():
    built = build_community(CommunitySpec(communities=5, requesters_per_community=2))
    topo = built.topology
    assert len(topo.nodes) == 31  # 5 x (2 requesters + ap + bs + fog + gw) + cloud
    assert len(topo.nodes_of_kind(CLOUD)) == 1
    assert len(topo.nodes_of_kind(FOG)) == 5


def test_zero_latency_rejected():
    with pytest.raises(InvalidSpecError):
        build_community(CommunitySpec(ap_bs_ms=0))


def test_bad_counts_rejected():
    with pytest.raises(InvalidSpecError):
        build_community(CommunitySpec(communities=0))


def test_path_latency_identity():
    topo = chain_topology()
    assert topo.path_latency("req-0-0", "req-0-0") == 0


def test_path_latency_chain_sum():
    topo = chain_topology()
    assert topo.path_latency("req-0-0", "cloud") == 2 + 5 + 10 + 20


def test_path_latency_to_fog():
    topo = chain_topology()
    assert topo.path_latency("req-0-0", "fog-0") == 2 + 5 + 1


def test_path_latency_unreachable():
    topo = Topology()
    topo.add_node("a", REQUESTER)
    topo.add_node("b", REQUESTER)
    with pytest.raises(UnreachableError):
        topo.path_latency("a", "b")


def test_path_latency_metric_properties():
    # Non-negative, zero iff equal, symmetric, triangle inequality.
    built = build_community(CommunitySpec(communities=2, requesters_per_community=2))
    topo = built.topology
    rng = random.Random(7)
    labels = list(topo.nodes)
    for _ in range(200):
        x, y, z = (rng.choice(labels) for _ in range(3))
        dxy = topo.path_latency(x, y)
        assert dxy >= 0
        assert (dxy == 0) == (x == y)
        assert dxy == topo.path_latency(y, x)
        assert dxy <= topo.path_latency(x, z) + topo.path_latency(z, y)


def test_fog_domain_threshold_zero_admits_all_attached():
    built = build_community(CommunitySpec(communities=2, requesters_per_community=2))
    domains = form_fog_domains(built.topology, 0)
    assert len(domains) == 2
    for domain, community in zip(domains, built.communities):
        expected = {community.bs, community.fog, *community.aps, *community.requesters}
        assert set(domain.members) == expected


def test_fog_domain_high_threshold_empties_membership():
    built = build_community(CommunitySpec())
    domains = form_fog_domains(built.topology, 10_000)
    assert all(domain.members == () for domain in domains)


def test_fog_domain_filter_and_capacity():
    topo = Topology()
    topo.add_node("cloud", CLOUD, cs_capacity=None)
    bs = topo.add_node("bs-0", "base_station", idle_compute=4)
    topo.add_node("fog-0", FOG, idle_compute=6, bs_anchor="bs-0")
    topo.add_node("ap-0", "access_point", idle_compute=10, bs_anchor="bs-0")
    topo.add_link("bs-0", "fog-0", 1)
    topo.add_link("bs-0", "ap-0", 5)
    topo.add_link("bs-0", "cloud", 9)
    domains = form_fog_domains(topo, 5)
    assert len(domains) == 1
    assert set(domains[0].members) == {"fog-0", "ap-0"}
    assert domains[0].capacity == 16
    assert domains[0].anchor == "bs-0"


def test_fog_domains_monotone_in_threshold():
    built = build_community(CommunitySpec(communities=3, requesters_per_community=3))
    rng = random.Random(3)
    for node in built.topology.nodes.values():
        node.idle_compute = rng.randrange(0, 20)
    previous = None
    for threshold in range(0, 25, 4):
        domains = form_fog_domains(built.topology, threshold)
        members = {d.domain_id: set(d.members) for d in domains}
        if previous is not None:
            for domain_id, member_set in members.items():
                assert member_set <= previous[domain_id]
        previous = members


def test_randomized_specs_pass_invariants():
    rng = random.Random(99)
    for _ in range(50):
        spec = CommunitySpec(
            communities=rng.randint(1, 4),
            requesters_per_community=rng.randint(1, 5),
            aps_per_community=rng.randint(1, 3),
            req_ap_ms=rng.randint(1, 10),
            ap_bs_ms=rng.randint(1, 10),
            bs_gw_ms=rng.randint(1, 30),
            gw_cloud_ms=rng.randint(1, 40),
            fog_access_ms=rng.randint(1, 5),
        )
        built = build_community(spec)
        built.topology.validate()  # raises on violation
        requesters = built.topology.nodes_of_kind(REQUESTER)
        assert len(requesters) == spec.communities * spec.requesters_per_community


def test_duplicate_links_and_self_loops_rejected():
    topo = Topology()
    topo.add_node("a", REQUESTER)
    topo.add_node("b", "access_point")
    topo.add_link("a", "b", 3, "ran")
    with pytest.raises(ValueError):
        topo.add_link("b", "a", 4, "ran")
    with pytest.raises(ValueError):
        topo.add_link("a", "a", 3, "ran")
