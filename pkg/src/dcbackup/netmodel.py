"""Optical backbone networks, data-center annotations and disaster scenarios.

Topology files are line oriented::

    # comment
    node 3 dc storage=400 wcost=72 name=Atlanta
    node 4
    link 3 7 cap=14 cost=824

``storage``/``wcost`` on a data-center node and ``cap`` on a link may be
omitted; they are then left unset (the built-in InternetMCI topology ships
without capacities, which the scenario generator fills in).

Instance files reuse the same ``node``/``link`` lines and add scenario
directives (``affected``, ``safe``, ``epsilon1``, ``pn``, ``vn``, ``lambda``,
``max_hops`` and one ``item`` line per data item).  Candidate paths are not
stored; they are regenerated from the topology on load.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Sequence

if TYPE_CHECKING:
    from .pathgen import Path


class TopologyError(ValueError):
    """Base class for topology and instance file errors."""


class TopologySyntaxError(TopologyError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class TopologySemanticError(TopologyError):
    pass


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    capacity: Optional[int]
    cost: int

    def __post_init__(self):
        if self.u == self.v:
            raise TopologySemanticError(f"self-loop on node {self.u}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)
        if self.capacity is not None and self.capacity < 0:
            raise TopologySemanticError(f"link ({self.u},{self.v}) has negative capacity")
        if self.cost < 0:
            raise TopologySemanticError(f"link ({self.u},{self.v}) has negative cost")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class DcInfo:
    storage_capacity: Optional[int] = None
    storage_unit_cost: Optional[int] = None

    def __post_init__(self):
        if self.storage_capacity is not None and self.storage_capacity < 0:
            raise TopologySemanticError("negative storage capacity")
        if self.storage_unit_cost is not None and self.storage_unit_cost < 0:
            raise TopologySemanticError("negative storage unit cost")


def link_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Network:
    nodes: tuple[int, ...]
    links: tuple[Link, ...]
    dc_nodes: Mapping[int, DcInfo] = field(default_factory=dict)
    names: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "dc_nodes", dict(sorted(self.dc_nodes.items())))
        object.__setattr__(self, "names", dict(sorted(self.names.items())))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise TopologySemanticError("duplicate node id")
        by_key: dict[tuple[int, int], Link] = {}
        adj: dict[int, list[int]] = {n: [] for n in self.nodes}
        for link in self.links:
            for end in link.endpoints:
                if end not in node_set:
                    raise TopologySemanticError(
                        f"link ({link.u},{link.v}) references undeclared node {end}")
            if link.endpoints in by_key:
                raise TopologySemanticError(f"duplicate link ({link.u},{link.v})")
            by_key[link.endpoints] = link
            adj[link.u].append(link.v)
            adj[link.v].append(link.u)
        for n in self.dc_nodes:
            if n not in node_set:
                raise TopologySemanticError(f"data center on undeclared node {n}")
        object.__setattr__(self, "_by_key", by_key)
        object.__setattr__(self, "_adj", {n: tuple(sorted(vs)) for n, vs in adj.items()})

    def link(self, u: int, v: int) -> Link:
        return self._by_key[link_key(u, v)]

    def has_link(self, u: int, v: int) -> bool:
        return link_key(u, v) in self._by_key

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def with_capacities(self, capacities: Mapping[tuple[int, int], int]) -> "Network":
        links = tuple(replace(l, capacity=capacities[l.endpoints]) for l in self.links)
        return replace(self, links=links)

    def with_dc_info(self, dc_nodes: Mapping[int, DcInfo]) -> "Network":
        return replace(self, dc_nodes=dict(dc_nodes))


@dataclass(frozen=True)
class DataItem:
    id: int
    source: int
    size: int
    candidate_paths: tuple["Path", ...] = ()


@dataclass(frozen=True)
class Instance:
    network: Network
    affected_dc: int
    safe_dcs: tuple[int, ...]
    data_items: tuple[DataItem, ...]
    epsilon1: int | Fraction
    vn: int
    lam: Optional[int] = None
    pn: Optional[int] = None  # None: no cap beyond the candidate count
    max_hops: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "safe_dcs", tuple(sorted(self.safe_dcs)))
        object.__setattr__(self, "data_items", tuple(self.data_items))
        if self.lam is None:
            object.__setattr__(self, "lam", default_lambda(self))

    def paths_to(self, item: DataItem, v: int) -> list["Path"]:
        return [p for p in item.candidate_paths if p.destination == v]


def default_lambda(instance: Instance) -> int:
    """1 + the largest storage, link or item capacity appearing in the instance."""
    vals = [0]
    vals += [info.storage_capacity or 0 for v, info in instance.network.dc_nodes.items()
             if v in instance.safe_dcs]
    vals += [l.capacity or 0 for l in instance.network.links]
    vals += [d.size for d in instance.data_items]
    return 1 + max(vals)


# ---------------------------------------------------------------------------
# topology text format

def _kv(tokens: Sequence[str], lineno: int, allowed: Iterable[str]) -> dict[str, str]:
    out = {}
    allowed = set(allowed)
    for tok in tokens:
        if "=" not in tok:
            raise TopologySyntaxError(lineno, f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k not in allowed:
            raise TopologySyntaxError(lineno, f"unknown attribute {k!r}")
        if k in out:
            raise TopologySyntaxError(lineno, f"repeated attribute {k!r}")
        out[k] = v
    return out


def _int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise TopologySyntaxError(lineno, f"{what} must be an integer, got {text!r}") from None


def _parse_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise TopologySyntaxError(lineno, str(exc)) from None
        yield lineno, tokens


class _TopologyBuilder:
    def __init__(self):
        self.nodes: list[int] = []
        self.links: list[Link] = []
        self.dcs: dict[int, DcInfo] = {}
        self.names: dict[int, str] = {}
        self.link_lines: list[int] = []

    def feed(self, lineno: int, tokens: list[str]) -> bool:
        kw = tokens[0]
        if kw == "node":
            if len(tokens) < 2:
                raise TopologySyntaxError(lineno, "node needs an id")
            nid = _int(tokens[1], lineno, "node id")
            rest = tokens[2:]
            is_dc = bool(rest) and rest[0] == "dc"
            if is_dc:
                rest = rest[1:]
            attrs = _kv(rest, lineno, ("storage", "wcost", "name") if is_dc else ("name",))
            if nid in self.nodes:
                raise TopologySemanticError(f"line {lineno}: node {nid} declared twice")
            self.nodes.append(nid)
            if "name" in attrs:
                self.names[nid] = attrs["name"]
            if is_dc:
                storage = attrs.get("storage")
                wcost = attrs.get("wcost")
                try:
                    self.dcs[nid] = DcInfo(
                        None if storage is None else _int(storage, lineno, "storage"),
                        None if wcost is None else _int(wcost, lineno, "wcost"))
                except TopologySemanticError as exc:
                    raise TopologySemanticError(f"line {lineno}: node {nid}: {exc}") from None
            return True
        if kw == "link":
            if len(tokens) < 3:
                raise TopologySyntaxError(lineno, "link needs two endpoints")
            u = _int(tokens[1], lineno, "endpoint")
            v = _int(tokens[2], lineno, "endpoint")
            attrs = _kv(tokens[3:], lineno, ("cap", "cost"))
            if "cost" not in attrs:
                raise TopologySyntaxError(lineno, "link needs cost=<int>")
            cap = attrs.get("cap")
            try:
                self.links.append(Link(u, v, None if cap is None else _int(cap, lineno, "cap"),
                                       _int(attrs["cost"], lineno, "cost")))
            except TopologySemanticError as exc:
                raise TopologySemanticError(f"line {lineno}: {exc}") from None
            self.link_lines.append(lineno)
            return True
        return False

    def build(self) -> Network:
        declared = set(self.nodes)
        seen: set[tuple[int, int]] = set()
        for link, lineno in zip(self.links, self.link_lines):
            for end in link.endpoints:
                if end not in declared:
                    raise TopologySemanticError(
                        f"line {lineno}: link ({link.u},{link.v}) references undeclared node {end}")
            if link.endpoints in seen:
                raise TopologySemanticError(
                    f"line {lineno}: duplicate link ({link.u},{link.v})")
            seen.add(link.endpoints)
        return Network(tuple(self.nodes), tuple(self.links), self.dcs, self.names)


def parse_topology(text: str) -> Network:
    """Parse a topology file's contents into a validated :class:`Network`."""
    builder = _TopologyBuilder()
    for lineno, tokens in _parse_lines(text):
        if not builder.feed(lineno, tokens):
            raise TopologySyntaxError(lineno, f"unknown directive {tokens[0]!r}")
    return builder.build()


def serialize_topology(network: Network) -> str:
    out = []
    for n in network.nodes:
        parts = [f"node {n}"]
        info = network.dc_nodes.get(n)
        if info is not None:
            parts.append("dc")
            if info.storage_capacity is not None:
                parts.append(f"storage={info.storage_capacity}")
            if info.storage_unit_cost is not None:
                parts.append(f"wcost={info.storage_unit_cost}")
        if n in network.names:
            parts.append(f"name={shlex.quote(network.names[n])}")
        out.append(" ".join(parts))
    for l in network.links:
        cap = "" if l.capacity is None else f" cap={l.capacity}"
        out.append(f"link {l.u} {l.v}{cap} cost={l.cost}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# built-in InternetMCI

INTERNETMCI_LINK_COSTS: dict[tuple[int, int], int] = {
    (0, 1): 625, (0, 3): 133, (1, 2): 352, (2, 3): 488, (2, 7): 1309,
    (2, 9): 365, (2, 10): 7213, (3, 7): 824, (3, 15): 269, (3, 16): 256,
    (4, 5): 99, (4, 8): 105, (4, 9): 240, (4, 16): 826, (5, 8): 9,
    (6, 7): 35, (6, 12): 223, (7, 12): 249, (8, 9): 135, (8, 14): 1230,
    (8, 16): 725, (8, 18): 300, (9, 10): 157, (9, 16): 602, (11, 12): 393,
    (11, 14): 761, (12, 13): 49, (12, 14): 701, (14, 15): 423, (14, 16): 532,
    (15, 16): 128, (16, 17): 249, (17, 18): 252,
}
INTERNETMCI_DCS = (3, 9, 12, 14, 18)


def builtin_internetmci() -> Network:
    """19-node, 33-link InternetMCI backbone with per-wavelength link costs.

    Capacities and data-center storage figures are left unset.
    """
    links = tuple(Link(u, v, None, c) for (u, v), c in INTERNETMCI_LINK_COSTS.items())
    return Network(tuple(range(19)), links, {v: DcInfo() for v in INTERNETMCI_DCS})


def load_topology(source: str) -> Network:
    """Resolve ``builtin:internetmci`` or a file path."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1].lower()
        if name != "internetmci":
            raise TopologyError(f"unknown built-in topology {name!r}")
        return builtin_internetmci()
    with open(source) as fh:
        return parse_topology(fh.read())


# ---------------------------------------------------------------------------
# instance validation

@dataclass(frozen=True)
class InstanceViolation:
    field: str
    rule: str
    detail: str

    def __str__(self):
        return f"{self.field}: {self.rule} ({self.detail})"


def validate_instance(instance: Instance) -> list[InstanceViolation]:
    """Return every broken Instance/DataItem invariant; empty means valid."""
    net = instance.network
    out: list[InstanceViolation] = []

    def bad(fld, rule, detail):
        out.append(InstanceViolation(fld, rule, detail))

    safe = set(instance.safe_dcs)
    if instance.affected_dc not in net.nodes:
        bad("affected_dc", "must be a network node", f"node {instance.affected_dc}")
    if instance.affected_dc in safe:
        bad("safe_dcs", "affected_dc must not be a safe DC",
            f"node {instance.affected_dc} is in both")
    for v in instance.safe_dcs:
        if v not in net.dc_nodes:
            bad("safe_dcs", "safe DCs must be data-center nodes", f"node {v}")
            continue
        info = net.dc_nodes[v]
        if info.storage_capacity is None:
            bad("safe_dcs", "safe DC storage capacity must be set", f"node {v}")
        if info.storage_unit_cost is None:
            bad("safe_dcs", "safe DC storage unit cost must be set", f"node {v}")
    for l in net.links:
        if l.capacity is None:
            bad("network.links", "link capacity must be set", f"link ({l.u},{l.v})")
    if not Fraction(instance.epsilon1) > 0:
        bad("epsilon1", "must be positive", str(instance.epsilon1))
    if instance.vn < 1:
        bad("vn", "must be a positive integer", str(instance.vn))
    if instance.pn is not None and instance.pn < 1:
        bad("pn", "must be a positive integer or unbounded", str(instance.pn))
    if instance.lam is None or instance.lam < 1:
        bad("lambda", "must be a positive integer", str(instance.lam))
    elif instance.lam < default_lambda(instance):
        bad("lambda", "must exceed every storage, link and item capacity",
            f"{instance.lam} < {default_lambda(instance)}")

    ids = set()
    for d in instance.data_items:
        if d.id in ids:
            bad(f"data_items[{d.id}]", "ids must be unique", f"id {d.id}")
        ids.add(d.id)
        if d.size < 1:
            bad(f"data_items[{d.id}].size", "must be >= 1", str(d.size))
        if d.source != instance.affected_dc:
            bad(f"data_items[{d.id}].source", "must be the affected DC", f"node {d.source}")
        for p in d.candidate_paths:
            label = "-".join(map(str, p.nodes))
            if p.source != d.source:
                bad(f"data_items[{d.id}].candidate_paths", "path must start at the item source",
                    f"path {label}")
            if p.destination not in safe:
                bad(f"data_items[{d.id}].candidate_paths", "path must end at a safe DC",
                    f"path {label}")
            if len(set(p.nodes)) != len(p.nodes):
                bad(f"data_items[{d.id}].candidate_paths", "path must be simple", f"path {label}")
            for a, b in zip(p.nodes, p.nodes[1:]):
                if not net.has_link(a, b):
                    bad(f"data_items[{d.id}].candidate_paths", "path hops must be links",
                        f"path {label} uses ({a},{b})")
    return out


# ---------------------------------------------------------------------------
# instance text format

_SCENARIO_KEYS = ("affected", "safe", "epsilon1", "pn", "vn", "lambda", "max_hops", "item")


def serialize_instance(instance: Instance) -> str:
    out = [serialize_topology(instance.network).rstrip("\n")]
    out.append(f"affected {instance.affected_dc}")
    out.append("safe " + " ".join(map(str, instance.safe_dcs)))
    out.append(f"epsilon1 {instance.epsilon1}")
    out.append(f"pn {'all' if instance.pn is None else instance.pn}")
    out.append(f"vn {instance.vn}")
    out.append(f"lambda {instance.lam}")
    if instance.max_hops is not None:
        out.append(f"max_hops {instance.max_hops}")
    for d in instance.data_items:
        out.append(f"item {d.id} size={d.size}")
    return "\n".join(out) + "\n"


def parse_instance(text: str) -> Instance:
    """Parse an instance file; candidate paths are regenerated with pathgen."""
    from .pathgen import build_candidate_sets

    builder = _TopologyBuilder()
    scen: dict[str, object] = {}
    items: list[tuple[int, int]] = []
    for lineno, tokens in _parse_lines(text):
        if builder.feed(lineno, tokens):
            continue
        kw, args = tokens[0], tokens[1:]
        if kw not in _SCENARIO_KEYS:
            raise TopologySyntaxError(lineno, f"unknown directive {kw!r}")
        if kw == "item":
            if len(args) != 2:
                raise TopologySyntaxError(lineno, "item needs <id> size=<int>")
            attrs = _kv(args[1:], lineno, ("size",))
            if "size" not in attrs:
                raise TopologySyntaxError(lineno, "item needs size=<int>")
            items.append((_int(args[0], lineno, "item id"), _int(attrs["size"], lineno, "size")))
            continue
        if kw in scen:
            raise TopologySyntaxError(lineno, f"repeated directive {kw!r}")
        if kw == "safe":
            scen[kw] = tuple(_int(a, lineno, "safe node") for a in args)
            continue
        if len(args) != 1:
            raise TopologySyntaxError(lineno, f"{kw} takes one value")
        val = args[0]
        if kw == "epsilon1":
            try:
                scen[kw] = _number(val)
            except ValueError:
                raise TopologySyntaxError(lineno, f"bad epsilon1 {val!r}") from None
        elif kw == "pn" and val == "all":
            scen[kw] = None
        else:
            scen[kw] = _int(val, lineno, kw)
    for req in ("affected", "safe", "epsilon1", "vn"):
        if req not in scen:
            raise TopologyError(f"instance file lacks {req!r}")
    network = builder.build()
    affected = scen["affected"]
    safe = scen["safe"]
    max_hops = scen.get("max_hops")
    if affected in network.nodes:
        cands = build_candidate_sets(network, affected, [v for v in safe if v != affected],
                                     max_hops)
        paths = tuple(p for v in sorted(cands) for p in cands[v])
    else:
        paths = ()
    data = tuple(DataItem(i, affected, size, paths) for i, size in items)
    return Instance(network, affected, safe, data, scen["epsilon1"], scen["vn"],
                    lam=scen.get("lambda"), pn=scen.get("pn"), max_hops=max_hops)


def _number(text: str) -> int | Fraction:
    f = Fraction(text)
    return int(f) if f.denominator == 1 else f
