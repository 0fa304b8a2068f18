"""Candidate transmission paths from the affected data center to safe ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .netmodel import Network, link_key


@dataclass(frozen=True)
class Path:
    nodes: tuple[int, ...]
    path_cost: int

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def destination(self) -> int:
        return self.nodes[-1]

    @property
    def links(self) -> tuple[tuple[int, int], ...]:
        return tuple(link_key(a, b) for a, b in zip(self.nodes, self.nodes[1:]))

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    def label(self) -> str:
        return "-".join(map(str, self.nodes))

    @classmethod
    def from_nodes(cls, network: Network, nodes: Iterable[int]) -> "Path":
        nodes = tuple(nodes)
        cost = sum(network.link(a, b).cost for a, b in zip(nodes, nodes[1:]))
        return cls(nodes, cost)


def enumerate_simple_paths(network: Network, src: int, dst: int,
                           max_hops: Optional[int] = None) -> list[Path]:
    """All simple ``src``-``dst`` paths with at most ``max_hops`` links.

    Neighbours are expanded in increasing id order, so the result comes out
    sorted lexicographically by node sequence.
    """
    if src == dst:
        raise ValueError("source and destination must differ")
    for n in (src, dst):
        if n not in network._adj:
            raise ValueError(f"node {n} is not in the network")
    if max_hops is None:
        max_hops = len(network.nodes) - 1

    found: list[Path] = []
    stack = [src]
    on_path = {src}
    costs = [0]
    # explicit stack of neighbour iterators to avoid recursion limits
    iters = [iter(network.neighbors(src))]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            on_path.discard(stack.pop())
            costs.pop()
            continue
        if nxt in on_path:
            continue
        cost = costs[-1] + network.link(stack[-1], nxt).cost
        if nxt == dst:
            found.append(Path(tuple(stack) + (dst,), cost))
            continue
        if len(stack) < max_hops:
            stack.append(nxt)
            on_path.add(nxt)
            costs.append(cost)
            iters.append(iter(network.neighbors(nxt)))
    return found


def build_candidate_sets(network: Network, affected: int, safe_dcs: Iterable[int],
                         max_hops: Optional[int] = None) -> dict[int, list[Path]]:
    safe_dcs = sorted(safe_dcs)
    if affected in safe_dcs:
        raise ValueError("the affected node cannot be a safe DC")
    return {v: enumerate_simple_paths(network, affected, v, max_hops) for v in safe_dcs}


def format_candidate_sets(cands: dict[int, list[Path]]) -> str:
    lines = []
    for v, paths in cands.items():
        lines.append(f"dest {v} count={len(paths)}")
        for p in paths:
            lines.append(f"  {p.label()} hops={p.hops} cost={p.path_cost}")
    return "\n".join(lines) + "\n"
