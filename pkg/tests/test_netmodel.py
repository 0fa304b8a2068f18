import pytest
from hypothesis import given, strategies as st

from dcbackup.netmodel import (
    INTERNETMCI_LINK_COSTS, DataItem, DcInfo, Instance, Link, Network, TopologySemanticError,
    TopologySyntaxError, builtin_internetmci, parse_instance, parse_topology,
    serialize_instance, serialize_topology, validate_instance,
)
from dcbackup.pathgen import Path

from conftest import make_instance

# published InternetMCI link-cost table, transcribed row by row
TABLE_I = """
(0,1) 625 (4,8) 105 (9,10) 157
(0,3) 133 (4,9) 240 (9,16) 602
(1,2) 352 (4,16) 826 (11,12) 393
(2,3) 488 (5,8) 9 (11,14) 761
(2,7) 1309 (6,7) 35 (12,13) 49
(2,9) 365 (6,12) 223 (12,14) 701
(2,10) 7213 (7,12) 249 (14,15) 423
(3,7) 824 (8,9) 135 (14,16) 532
(3,15) 269 (8,14) 1230 (15,16) 128
(3,16) 256 (8,16) 725 (16,17) 249
(4,5) 99 (8,18) 300 (17,18) 252
"""


def table_i():
    toks = TABLE_I.split()
    out = {}
    for pair, cost in zip(toks[::2], toks[1::2]):
        u, v = pair.strip("()").split(",")
        out[int(u), int(v)] = int(cost)
    return out


def test_builtin_counts():
    net = builtin_internetmci()
    assert len(net.nodes) == 19
    assert len(net.links) == 33
    assert set(net.dc_nodes) == {3, 9, 12, 14, 18}


def test_builtin_spot_costs():
    net = builtin_internetmci()
    assert net.link(0, 1).cost == 625
    assert net.link(8, 5).cost == 9


def test_builtin_matches_table_entry_by_entry():
    net = builtin_internetmci()
    expected = table_i()
    assert len(expected) == 33
    for (u, v), cost in expected.items():
        assert net.link(u, v).cost == cost, (u, v)
    assert {l.endpoints for l in net.links} == set(expected)


def test_builtin_total_cost():
    # sum of the 33 published entries
    assert sum(l.cost for l in builtin_internetmci().links) == 20257
    assert sum(table_i().values()) == 20257


def test_builtin_capacities_unset():
    net = builtin_internetmci()
    assert all(l.capacity is None for l in net.links)
    assert all(i.storage_capacity is None for i in net.dc_nodes.values())


def test_parse_small():
    net = parse_topology("""
        # two DCs
        node 0 dc storage=10 wcost=3
        node 1
        node 2 dc storage=5 wcost=7 name=far
        link 0 1 cap=4 cost=2
        link 2 1 cap=6 cost=1
    """)
    assert net.nodes == (0, 1, 2)
    assert net.link(1, 2) == Link(1, 2, 6, 1)
    assert net.dc_nodes[2] == DcInfo(5, 7)
    assert net.names == {2: "far"}
    assert net.neighbors(1) == (0, 2)


def test_parse_no_links():
    net = parse_topology("node 0\nnode 1\n")
    assert net.links == ()
    assert net.nodes == (0, 1)


def test_parse_dangling_endpoint_names_node():
    with pytest.raises(TopologySemanticError, match="node 5"):
        parse_topology("node 0\nnode 1\nlink 0 5 cap=1 cost=1\n")


@pytest.mark.parametrize("text, lineno", [
    ("node 0\nnode x\n", 2),
    ("node 0\nnode 1\nlink 0 1 cap=1\n", 3),
    ("node 0\nbogus 1\n", 2),
    ("node 0\nnode 1\nlink 0 1 cap=1 cost=1 color=red\n", 3),
    ("node 0 dc storage=abc\n", 1),
])
def test_parse_syntax_errors_carry_line(text, lineno):
    with pytest.raises(TopologySyntaxError) as exc:
        parse_topology(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


@pytest.mark.parametrize("text, msg", [
    ("node 0\nnode 1\nlink 0 1 cost=1\nlink 1 0 cost=2\n", "duplicate link"),
    ("node 0\nnode 1\nlink 0 1 cap=-1 cost=1\n", "negative capacity"),
    ("node 0\nnode 1\nlink 0 1 cap=1 cost=-3\n", "negative cost"),
    ("node 0\nnode 0\n", "declared twice"),
    ("node 0\nlink 0 0 cost=1\n", "self-loop"),
    ("node 0 dc storage=-1 wcost=1\n", "negative storage"),
])
def test_parse_semantic_errors(text, msg):
    with pytest.raises(TopologySemanticError, match=msg):
        parse_topology(text)


def test_network_constructor_invariants():
    with pytest.raises(TopologySemanticError):
        Network((0, 1), (Link(0, 2, 1, 1),))
    with pytest.raises(TopologySemanticError):
        Network((0, 1), (Link(0, 1, 1, 1), Link(1, 0, 1, 1)))
    with pytest.raises(TopologySemanticError):
        Network((0, 1), (), {7: DcInfo()})


@st.composite
def networks(draw):
    n = draw(st.integers(2, 7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    links = tuple(Link(u, v, draw(st.none() | st.integers(0, 50)), draw(st.integers(0, 999)))
                  for u, v in chosen)
    dcs = draw(st.lists(st.integers(0, n - 1), unique=True))
    info = {v: DcInfo(draw(st.none() | st.integers(0, 500)), draw(st.none() | st.integers(0, 99)))
            for v in dcs}
    names = {v: draw(st.text("abcxyz", min_size=1, max_size=4)) for v in
             draw(st.lists(st.integers(0, n - 1), unique=True, max_size=2))}
    return Network(tuple(range(n)), links, info, names)


@given(networks())
def test_topology_round_trip(net):
    assert parse_topology(serialize_topology(net)) == net


def test_builtin_round_trip():
    net = builtin_internetmci()
    assert parse_topology(serialize_topology(net)) == net


def _scenario(**kw):
    net = builtin_internetmci()
    net = net.with_capacities({l.endpoints: 15 for l in net.links})
    net = net.with_dc_info({v: DcInfo(300, 60) for v in net.dc_nodes})
    args = dict(max_hops=4, lam=10000)
    args.update(kw)
    return make_instance(net, 3, (9, 12, 14, 18), [55, 60], 70, **args)


def test_validate_reference_scenario_clean():
    assert validate_instance(_scenario()) == []


def test_validate_is_pure():
    inst = _scenario()
    assert validate_instance(inst) == validate_instance(inst)


def test_validate_affected_in_safe():
    inst = _scenario()
    bad = Instance(inst.network, 3, (3, 9, 12, 14, 18), inst.data_items, 70, 4, lam=10000)
    rules = [v.rule for v in validate_instance(bad)]
    assert rules.count("affected_dc must not be a safe DC") == 1


def test_validate_path_to_non_safe_node():
    inst = _scenario()
    stray = Path.from_nodes(inst.network, (3, 7))
    item = DataItem(0, 3, 55, inst.data_items[0].candidate_paths + (stray,))
    bad = Instance(inst.network, 3, inst.safe_dcs, (item,), 70, 4, lam=10000)
    viol = validate_instance(bad)
    assert len(viol) == 1
    assert viol[0].rule == "path must end at a safe DC"
    assert "3-7" in viol[0].detail


def test_validate_lambda_too_small_and_unset_capacity():
    inst = _scenario(lam=50)
    assert any(v.field == "lambda" for v in validate_instance(inst))
    raw = Instance(builtin_internetmci(), 3, (9,), (), 70, 1)
    fields = {v.field for v in validate_instance(raw)}
    assert {"safe_dcs", "network.links"} <= fields


def test_default_lambda_rule(tiny4):
    # 1 + max(storage 10, link capacity 10, size 5)
    assert tiny4.lam == 11


def test_instance_round_trip():
    inst = _scenario()
    again = parse_instance(serialize_instance(inst))
    assert again == inst
    assert serialize_instance(again) == serialize_instance(inst)
