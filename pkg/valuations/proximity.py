"""
Clusters of infinitely near points and their dual graphs.

Each (m, e) pair of a sequence is walked with the generalized Euclidean
algorithm; a quotient a with divisor r contributes a consecutive points of
multiplicity r. The first block of a pair opens with free points, later
blocks are satellites proximate to the last point of the previous block.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import groupby
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging
import sys
import os

import networkx as nx

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from config import get_config
from exceptions import ConstructionError, ProximityError
from valuations.delta import (
    DeltaCore,
    DeltaSequence,
    TypeASequence,
    TypeBSequence,
    TypeCSequence,
    TypeDSequence,
    TypeESequence,
    em_pairs_of
)
from valuations.values import OrderedValue, euclid_steps

logger = logging.getLogger(__name__)


class ClusterTail(Enum):
    FINITE = "Finite"
    INFINITE_FREE = "InfiniteFree"
    INFINITE_SATELLITE_SAME_DIVISOR = "InfiniteSatelliteSameDivisor"
    INFINITE_SATELLITE_ALTERNATING = "InfiniteSatelliteAlternating"
    INFINITE_BLOCKS = "InfiniteBlocks"


class PointKind(Enum):
    FREE = "free"
    SATELLITE = "satellite"


@dataclass(frozen=True)
class ProximityPoint:
    """
    Point p_index of the cluster.

    pair is the 1-based (m, e) pair that produced the point and block its
    1-based Euclidean block; trailing free points have pair None, block 0.
    """
    index: int
    kind: PointKind
    proximate_to: Tuple[int, ...]
    multiplicity: OrderedValue
    pair: Optional[int]
    block: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind.value,
            "proximate_to": list(self.proximate_to),
            "multiplicity": self.multiplicity.to_json(),
            "pair": self.pair,
            "block": self.block,
        }


@dataclass(frozen=True)
class Cluster:
    """
    Materialized cluster.

    pairs holds the (first, last) point index of every materialized pair;
    free_tail is the number of trailing free points of a type A sequence.
    """
    points: Tuple[ProximityPoint, ...]
    tail: ClusterTail
    truncated: bool
    pairs: Tuple[Tuple[int, int], ...]
    free_tail: int = 0

    @property
    def satellite_index(self) -> Optional[int]:
        """Largest index of a satellite point."""
        satellites = [p.index for p in self.points if p.kind == PointKind.SATELLITE]
        return max(satellites) if satellites else None

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "tail": self.tail.value,
            "truncated": self.truncated,
            "pairs": [list(p) for p in self.pairs],
            "free_tail": self.free_tail,
            "satellite_index": self.satellite_index,
        }


class _ClusterBuilder:
    """Accumulates points pair by pair until an optional point limit."""

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.points: List[ProximityPoint] = []
        self.pairs: List[Tuple[int, int]] = []
        self.truncated = False

    def full(self) -> bool:
        if self.limit is not None and len(self.points) >= self.limit:
            self.truncated = True
            return True
        return False

    def _append(self, proximate: Tuple[int, ...], multiplicity: OrderedValue,
                pair: Optional[int], block: int) -> None:
        index = len(self.points)
        proximate = tuple(sorted(set(proximate), reverse=True))
        kind = PointKind.SATELLITE if len(proximate) == 2 else PointKind.FREE
        self.points.append(ProximityPoint(index, kind, proximate, multiplicity, pair, block))

    def add_pair(self, m: OrderedValue, e: OrderedValue) -> bool:
        """Walk one pair; returns True when the walk ended in an infinite block."""
        pair = len(self.pairs) + 1
        start = len(self.points)
        block_ends: List[int] = []
        infinite = False
        for block, step in enumerate(euclid_steps(m, e), start=1):
            count = step.quotient
            if count is None:
                infinite = True
            c = 0
            while count is None or c < count:
                if self.full():
                    break
                index = len(self.points)
                proximate = [index - 1] if index > 0 else []
                if block >= 2:
                    if c > 0:
                        proximate.append(block_ends[block - 2])
                    elif block >= 3:
                        proximate.append(block_ends[block - 3])
                self._append(tuple(proximate), step.divisor, pair, block)
                c += 1
            block_ends.append(len(self.points) - 1)
            if self.truncated:
                break
        if len(self.points) > start:
            self.pairs.append((start, len(self.points) - 1))
        return infinite

    def add_free(self, count: Optional[int], multiplicity: OrderedValue) -> None:
        """Trailing free points; count None means unbounded (limit applies)."""
        c = 0
        while count is None or c < count:
            if self.full():
                return
            index = len(self.points)
            self._append((index - 1,) if index > 0 else (), multiplicity, None, 0)
            c += 1


def _core_pairs(core: DeltaCore) -> List[Tuple[OrderedValue, OrderedValue]]:
    values = [OrderedValue.integer(v) for v in core.entries]
    return em_pairs_of(values, core.n, core.divides_case)


def germ_cluster(core: Union[DeltaCore, Sequence[int]], truncation: Optional[int] = None) -> Cluster:
    """Cluster of the em-pair blocks of a valid core, without trailing free points."""
    core = DeltaCore.of(core).require_valid()
    builder = _ClusterBuilder(truncation)
    for m, e in _core_pairs(core):
        if builder.full():
            break
        builder.add_pair(m, e)
    return Cluster(tuple(builder.points), ClusterTail.FINITE, builder.truncated, tuple(builder.pairs))


def cluster_from_delta(seq: DeltaSequence, truncation: Optional[int] = None) -> Cluster:
    """
    Reconstruct the cluster of a typed sequence.

    Args:
        seq: Sequence of any type
        truncation: Maximum number of points; finite clusters are complete
            by default, infinite ones use the configured default truncation

    Returns:
        Cluster with its tail marker
    """
    if truncation is not None and truncation < 0:
        raise ProximityError(f"truncation must be non-negative, got {truncation}")
    default = get_config().proximity.default_truncation

    if isinstance(seq, TypeASequence):
        builder = _ClusterBuilder(truncation)
        for m, e in _core_pairs(seq.core):
            builder.add_pair(m, e)
        if seq.free_points < 0:
            raise ProximityError(f"sequence {seq} has a negative free tail")
        builder.add_free(seq.free_points, OrderedValue.integer(1))
        cluster = Cluster(tuple(builder.points), ClusterTail.FINITE, builder.truncated,
                          tuple(builder.pairs), seq.free_points)

    elif isinstance(seq, TypeBSequence):
        builder = _ClusterBuilder(default if truncation is None else truncation)
        for m, e in _core_pairs(seq.core):
            builder.add_pair(m, e)
        builder.add_free(None, OrderedValue.integer(1))
        cluster = Cluster(tuple(builder.points), ClusterTail.INFINITE_FREE, True, tuple(builder.pairs))

    elif isinstance(seq, TypeCSequence):
        builder = _ClusterBuilder(default if truncation is None else truncation)
        pairs = em_pairs_of(seq.generators(), seq.core.n, seq.core.divides_case)
        infinite = False
        for m, e in pairs:
            if builder.full():
                break
            infinite = builder.add_pair(m, e)
        if not infinite and not builder.truncated:
            raise ProximityError(f"type C sequence {seq} produced no infinite block")
        cluster = Cluster(tuple(builder.points), ClusterTail.INFINITE_SATELLITE_SAME_DIVISOR, True,
                          tuple(builder.pairs))

    elif isinstance(seq, TypeDSequence):
        builder = _ClusterBuilder(default if truncation is None else truncation)
        scale = _type_d_scale(seq)
        for m, e in seq.em_pairs():
            if builder.full():
                break
            builder.add_pair(m.scale(scale), e.scale(scale))
        cluster = Cluster(tuple(builder.points), ClusterTail.INFINITE_SATELLITE_ALTERNATING, True,
                          tuple(builder.pairs))

    elif isinstance(seq, TypeESequence):
        limit = default if truncation is None else truncation
        germ = _type_e_germ(seq, limit)
        cluster = Cluster(germ.points[:limit], ClusterTail.INFINITE_BLOCKS, True,
                          tuple((a, min(b, limit - 1)) for a, b in germ.pairs if a < limit))

    else:
        raise ProximityError(f"unsupported sequence {seq!r}")

    logger.debug("cluster of %s: %d points, tail %s", seq, len(cluster.points), cluster.tail.value)
    return cluster


def _type_d_scale(seq: TypeDSequence) -> int:
    """delta_1 of the smallest witness core, so the prefix blocks carry integer multiplicities."""
    if seq.degenerate:
        return 1
    if seq.witnesses:
        return min(w.entries[1] for w in seq.witnesses)
    return seq.prefix_core.entries[1]


def _type_e_germ(seq: TypeESequence, limit: int) -> Cluster:
    """Germ cluster of the witness core of the shortest prefix with enough points."""
    germ = None
    for j in range(1, get_config().delta.type_e_prefix_limit + 1):
        try:
            witness = seq.validate_prefix(j).witness
        except ConstructionError:
            break
        germ = germ_cluster(witness)
        if len(germ.points) >= limit:
            break
    if germ is None:
        raise ProximityError("type E sequence has no certified prefix")
    return germ


def multiplicity_runs(cluster: Cluster) -> List[Tuple[OrderedValue, int]]:
    """Runs of equal multiplicity inside one Euclidean block; runs never span two blocks."""
    return [(key[0], len(list(run)))
            for key, run in groupby(cluster.points, key=lambda p: (p.multiplicity, p.pair, p.block))]


def _plain(value: OrderedValue):
    python = value.to_python()
    if isinstance(python, Fraction) and python.denominator == 1:
        return int(python)
    return python


def multiplicity_sequence(seq: Union[DeltaSequence, DeltaCore], truncation: Optional[int] = None) -> List[tuple]:
    """Run-length encoding [(multiplicity, count), ...] with plain python multiplicities."""
    if isinstance(seq, DeltaCore):
        cluster = germ_cluster(seq, truncation)
    else:
        cluster = cluster_from_delta(seq, truncation)
    return [(_plain(value), count) for value, count in multiplicity_runs(cluster)]



def noether_residual(seq: DeltaSequence) -> int:
    """
    delta_0^2 minus the sum of squared multiplicities of the full cluster.

    Raises:
        ProximityError: For anything but a type A sequence
    """
    if not isinstance(seq, TypeASequence):
        raise ProximityError("the Noether residual is defined for type A sequences only")
    cluster = cluster_from_delta(seq)
    total = sum(p.multiplicity.payload ** 2 for p in cluster.points)
    return seq.core.entries[0] ** 2 - total


def proximity_defects(cluster: Cluster) -> List[int]:
    """Indices of non-final points whose multiplicity differs from the sum over their proximate points."""
    defects = []
    if not cluster.points:
        return defects
    zero = cluster.points[0].multiplicity.zero()
    sums: Dict[int, OrderedValue] = {}
    for point in cluster.points:
        for j in point.proximate_to:
            sums[j] = sums.get(j, zero) + point.multiplicity
    for point in cluster.points[:-1]:
        if sums.get(point.index, zero) != point.multiplicity:
            defects.append(point.index)
    return defects


@dataclass(frozen=True)
class DualGraph:
    """
    Dual graph of the exceptional divisors: vertex E_{i+1} belongs to point p_i.

    subgraphs lists the vertices of each pair; rho and st name the last free
    point and the last point of each pair.
    """
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    subgraphs: Tuple[Tuple[str, ...], ...]
    rho: Tuple[str, ...]
    st: Tuple[str, ...]
    tail_marker: Optional[str] = None
    graph: nx.Graph = field(default=None, compare=False, repr=False)

    def is_tree(self) -> bool:
        return self.graph.number_of_nodes() > 0 and nx.is_tree(self.graph)

    def branch_vertices(self) -> List[str]:
        """Vertices of degree at least 3, counting the strict transform on the final divisor."""
        degrees = dict(self.graph.degree())
        if self.tail_marker is None and self.vertices:
            degrees[self.vertices[-1]] += 1
        return [v for v in self.vertices if degrees[v] >= 3]

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "subgraphs": [list(s) for s in self.subgraphs],
            "rho": list(self.rho),
            "st": list(self.st),
            "tail_marker": self.tail_marker,
        }


def _vertex(index: int) -> str:
    return f"E{index + 1}"


def dual_graph(cluster: Cluster) -> DualGraph:
    """
    Build the dual graph: E_{j+1} meets E_{i+1} iff p_i is proximate to p_j
    and no later point is proximate to both.
    """
    vertices = tuple(_vertex(p.index) for p in cluster.points)
    proximate_sets = [set(p.proximate_to) for p in cluster.points]
    edges = []
    for point in cluster.points:
        i = point.index
        for j in point.proximate_to:
            blown_up = any(i in later and j in later for later in proximate_sets[i + 1:])
            if not blown_up:
                edges.append((_vertex(j), _vertex(i)))

    tail_marker = None
    if cluster.tail != ClusterTail.FINITE and vertices:
        tail_marker = "tail"
        edges.append((vertices[-1], tail_marker))

    subgraphs, rho, st = [], [], []
    for start, end in cluster.pairs:
        members = cluster.points[start:end + 1]
        subgraphs.append(tuple(_vertex(p.index) for p in members))
        free = [p.index for p in members if p.kind == PointKind.FREE]
        rho.append(_vertex(free[-1] if free else start))
        st.append(_vertex(end))

    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    if tail_marker:
        graph.add_node(tail_marker)
    graph.add_edges_from(edges)
    return DualGraph(vertices, tuple(edges), tuple(subgraphs), tuple(rho), tuple(st), tail_marker, graph)


def emit_dot(graph: DualGraph) -> str:
    """Deterministic DOT text with one subgraph per pair and one node statement per vertex."""
    labels: Dict[str, str] = {v: v for v in graph.vertices}
    for l, v in enumerate(graph.rho, start=1):
        labels[v] += f" rho_{l}"
    for l, v in enumerate(graph.st, start=1):
        labels[v] += f" st_{l}"

    lines = ["graph dual {", "  node [shape=circle];"]
    placed = set()
    for l, members in enumerate(graph.subgraphs, start=1):
        lines.append(f"  subgraph cluster_gamma_{l} {{")
        lines.append(f"    label=\"Gamma_{l}\";")
        for v in members:
            lines.append(f"    {v} [label=\"{labels[v]}\"];")
            placed.add(v)
        lines.append("  }")
    for v in graph.vertices:
        if v not in placed:
            lines.append(f"  {v} [label=\"{labels[v]}\"];")
    if graph.tail_marker:
        lines.append(f"  {graph.tail_marker} [label=\"...\", shape=plaintext];")
    for a, b in graph.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
