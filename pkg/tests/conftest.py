import pytest

from dcbackup.netmodel import DataItem, DcInfo, Instance, Link, Network
from dcbackup.pathgen import build_candidate_sets


def make_instance(network, affected, safe, sizes, epsilon1, vn=None, pn=None, lam=None,
                  max_hops=None):
    cands = build_candidate_sets(network, affected, safe, max_hops)
    paths = tuple(p for v in sorted(cands) for p in cands[v])
    items = tuple(DataItem(i, affected, c, paths) for i, c in enumerate(sizes))
    return Instance(network, affected, tuple(safe), items, epsilon1,
                    len(safe) if vn is None else vn, lam=lam, pn=pn, max_hops=max_hops)


@pytest.fixture
def tiny4_network():
    return Network(
        (0, 1, 2, 3),
        (Link(0, 1, 10, 1), Link(1, 2, 10, 1), Link(1, 3, 10, 2)),
        {0: DcInfo(0, 1), 2: DcInfo(10, 1), 3: DcInfo(10, 1)},
    )


@pytest.fixture
def tiny4(tiny4_network):
    """4 nodes, one item of size 5 at node 0, safe DCs 2 and 3, epsilon1 = 1."""
    return make_instance(tiny4_network, 0, (2, 3), [5], 1)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
