"""The word graph, the conjugacy graph and Ghys-distance upper bounds.

Word graph: vertices are cyclic classes of mixed positive words (``mode``
``"SL2"``), or classes up to rotation and exchange of the letters (``"GL2"``,
the topological-equivalence classes of suspension flows); two classes are
adjacent when they differ by inserting or deleting one letter.

Conjugacy graph: vertices are SL(2,Z) conjugacy classes; the neighbours of a
class are the classes of ``rep * s`` for ``s`` in ``R, R^-1, L, L^-1`` where
``rep`` is the stored canonical representative.  This relation depends on
the representative and is not symmetric; balls use the undirected graph
spanned by the out-neighbours of their nodes.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .birkhoff import GHYS_COST_PER_EDGE
from .errors import BallTooSmall, CapExceeded
from .sl2z import (
    L,
    L_INV,
    R,
    R_INV,
    ConjClass,
    IntMatrix2,
    classify_conjugacy,
    cyclic_normal_form,
    gl2_normal_form,
    is_mixed,
    parse_matrix,
    parse_word,
    require_mixed,
    word_to_matrix,
)

__all__ = [
    "DEFAULT_TRACE_CAP", "DEFAULT_NODE_BUDGET", "CACHE_VERSION",
    "word_neighbors", "conjugacy_neighbors", "ghys_distance_upper_bound",
    "ExploredBall", "explore_ball", "DeltaEstimate", "delta_hyperbolicity",
    "four_point_delta", "export_graph", "BallCache", "parse_conj_label",
]

DEFAULT_TRACE_CAP = 200
DEFAULT_NODE_BUDGET = 10**6
CACHE_VERSION = 1

_ORDER = str.maketrans("RL", "01")


def _canon(mode: str):
    if mode == "SL2":
        return cyclic_normal_form
    if mode == "GL2":
        return gl2_normal_form
    raise ValueError(f"unknown mode {mode!r}")


def _word_key(w: str):
    return (len(w), w.translate(_ORDER))


def word_neighbors(node: str, mode: str = "SL2") -> set[str]:
    """Classes obtained by inserting or deleting one letter, kept mixed."""
    canon = _canon(mode)
    w = canon(require_mixed(node))
    out = set()
    for i in range(len(w) + 1):
        for letter in "RL":
            out.add(canon(w[:i] + letter + w[i:]))
    for i in range(len(w)):
        v = w[:i] + w[i + 1:]
        if is_mixed(v):
            out.add(canon(v))
    out.discard(w)
    return out


class ConjNeighbors(NamedTuple):
    nodes: frozenset
    pruned: bool


def conjugacy_neighbors(node: ConjClass, trace_cap: int = DEFAULT_TRACE_CAP) -> ConjNeighbors:
    """Classes of ``rep * s``; those with ``|trace| > trace_cap`` are dropped and flagged."""
    if trace_cap < 3:
        raise ValueError("trace_cap must be at least 3")
    rep = node.representative()
    out, pruned = set(), False
    for s in (R, R_INV, L, L_INV):
        m = rep @ s
        if abs(m.trace) > trace_cap:
            pruned = True
            continue
        out.add(classify_conjugacy(m))
    out.discard(node)
    return ConjNeighbors(frozenset(out), pruned)


def ghys_distance_upper_bound(w1: str, w2: str, max_radius: int = 12,
                              budget: int = DEFAULT_NODE_BUDGET) -> int | None:
    """``3 *`` (distance in the GL2 word graph), or ``None`` beyond ``max_radius``.

    Each edge adds one letter: removing three orbits on each side relates the
    two suspensions, so the Ghys distance is at most three per edge.
    """
    a = gl2_normal_form(require_mixed(w1))
    b = gl2_normal_form(require_mixed(w2))
    if a == b:
        return 0
    dist = {0: {a: 0}, 1: {b: 0}}
    frontier = {0: [a], 1: [b]}
    radius = {0: 0, 1: 0}
    while radius[0] + radius[1] < max_radius and frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        nxt = []
        for u in sorted(frontier[side], key=_word_key):
            for v in word_neighbors(u, "GL2"):
                if v in dist[side]:
                    continue
                dist[side][v] = radius[side] + 1
                nxt.append(v)
        radius[side] += 1
        frontier[side] = nxt
        met = [dist[0][v] + dist[1][v] for v in nxt if v in dist[1 - side]]
        if met:
            return GHYS_COST_PER_EDGE * min(met)
        if len(dist[0]) + len(dist[1]) > budget:
            raise CapExceeded(f"more than {budget} nodes explored")
    return None


# -- balls ----------------------------------------------------------------

def parse_conj_label(label: str) -> ConjClass:
    """Inverse of :attr:`ConjClass.label`."""
    from .sl2z import ELLIPTIC_REPRESENTATIVES

    if label in ELLIPTIC_REPRESENTATIVES:
        return ConjClass("elliptic", name=label)
    sign = 1
    body = label
    if body.startswith("-"):
        sign, body = -1, body[1:]
    if body.startswith("R^"):
        return ConjClass("parabolic", sign=sign, shear=int(body[2:]))
    return ConjClass("hyperbolic", sign=sign, word=parse_word(body))


def _label(node) -> str:
    return node if isinstance(node, str) else node.label


def _node_key(node):
    return _word_key(node) if isinstance(node, str) else node.sort_key()


@dataclass(frozen=True)
class ExploredBall:
    """A breadth-first ball with exact within-ball distances.

    ``adjacency`` is the undirected graph induced on the ball; ``complete``
    marks the nodes whose whole neighbourhood lies in the ball (guaranteed
    below the radius).
    """

    kind: str
    mode: str
    center: object
    radius: int
    nodes: tuple
    distances: dict
    adjacency: dict
    complete: dict
    pruned: bool = False

    @property
    def edges(self) -> list[tuple[int, int]]:
        index = {n: i for i, n in enumerate(self.nodes)}
        out = set()
        for u, nbrs in self.adjacency.items():
            for v in nbrs:
                i, j = index[u], index[v]
                out.add((min(i, j), max(i, j)))
        return sorted(out)

    def pairwise_distances(self, members) -> np.ndarray:
        """Shortest-path distances inside the ball between ``members``."""
        members = list(members)
        out = np.zeros((len(members), len(members)), dtype=np.int64)
        pos = {n: i for i, n in enumerate(members)}
        for i, src in enumerate(members):
            seen = {src: 0}
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if v not in seen:
                        seen[v] = seen[u] + 1
                        queue.append(v)
            for v, d in seen.items():
                if v in pos:
                    out[i, pos[v]] = d
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "mode": self.mode,
            "center": _label(self.center) if self.center is not None else None,
            "radius": self.radius,
            "nodes": [_label(n) for n in self.nodes],
            "distances": [self.distances[n] for n in self.nodes],
            "complete": [self.complete[n] for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "pruned": self.pruned,
        }

    @classmethod
    def from_json(cls, data: dict) -> ExploredBall:
        parse = parse_word if data["kind"] == "word" else parse_conj_label
        nodes = tuple(parse(x) for x in data["nodes"])
        adjacency = {n: set() for n in nodes}
        for i, j in data["edges"]:
            adjacency[nodes[i]].add(nodes[j])
            adjacency[nodes[j]].add(nodes[i])
        return cls(
            data["kind"], data["mode"],
            parse(data["center"]) if data["center"] is not None else None,
            data["radius"], nodes,
            dict(zip(nodes, data["distances"])),
            {n: frozenset(v) for n, v in adjacency.items()},
            dict(zip(nodes, data["complete"])),
            data.get("pruned", False),
        )

    @classmethod
    def empty(cls, kind: str = "word", mode: str = "SL2") -> ExploredBall:
        return cls(kind, mode, None, 0, (), {}, {}, {})


def _normalize_center(center, kind: str, mode: str):
    if kind == "word":
        if not isinstance(center, str):
            raise TypeError("word-graph centers are words")
        return _canon(mode)(require_mixed(center))
    if kind == "conj":
        if isinstance(center, ConjClass):
            return center
        if isinstance(center, IntMatrix2):
            return classify_conjugacy(center)
        text = str(center)
        if ";" in text:
            return classify_conjugacy(parse_matrix(text))
        return classify_conjugacy(word_to_matrix(parse_word(text)))
    raise ValueError(f"unknown graph kind {kind!r}")


def explore_ball(center, radius: int, kind: str = "word", mode: str = "SL2",
                 trace_cap: int = DEFAULT_TRACE_CAP,
                 budget: int = DEFAULT_NODE_BUDGET) -> ExploredBall:
    """Breadth-first ball of the word graph (``kind="word"``) or conjugacy graph."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    center = _normalize_center(center, kind, mode)
    pruned = False

    def neighbours(u):
        nonlocal pruned
        if kind == "word":
            return word_neighbors(u, mode)
        res = conjugacy_neighbors(u, trace_cap)
        pruned = pruned or res.pruned
        return set(res.nodes)

    level = {center: 0}
    out_nbrs = {}
    frontier = [center]
    for d in range(radius):
        nxt = []
        for u in sorted(frontier, key=_node_key):
            out_nbrs[u] = neighbours(u)
            for v in sorted(out_nbrs[u], key=_node_key):
                if v not in level:
                    level[v] = d + 1
                    nxt.append(v)
            if len(level) > budget:
                raise CapExceeded(f"ball exceeds the node budget {budget}")
        frontier = nxt
    for u in frontier:
        out_nbrs[u] = neighbours(u)

    adjacency = {u: set() for u in level}
    for u, nbrs in out_nbrs.items():
        for v in nbrs:
            if v in adjacency:
                adjacency[u].add(v)
                adjacency[v].add(u)
    # distances on the undirected ball (equal to BFS levels for the word graph)
    dist = {center: 0}
    queue = deque([center])
    while queue:
        u = queue.popleft()
        for v in sorted(adjacency[u], key=_node_key):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    nodes = tuple(sorted(level, key=lambda n: (dist[n], _node_key(n))))
    complete = {u: out_nbrs[u] <= level.keys() for u in nodes}
    return ExploredBall(kind, mode, center, radius, nodes, dist,
                        {u: frozenset(v) for u, v in adjacency.items()}, complete, pruned)


# -- hyperbolicity ----------------------------------------------------------

class DeltaEstimate(NamedTuple):
    """Four-point delta on the core of a ball.

    Within-ball distances can exceed global ones, so the value is an
    estimate of the delta of the ball metric, not of the whole graph.
    """

    delta: Fraction
    core_size: int
    within_ball: bool = True


def four_point_delta(dist: np.ndarray, chunk: int = 64) -> Fraction:
    """Max over quadruples of (largest - second largest pair sum) / 2."""
    d = np.asarray(dist, dtype=np.int64)
    n = len(d)
    best = 0
    # the quantity is symmetric in the four points: take x < y
    for x in range(n - 1):
        for lo_y in range(x + 1, n, chunk):
            ys = slice(lo_y, min(n, lo_y + chunk))
            dy = d[ys]
            s1 = d[x, ys][:, None, None] + d[None, :, :]        # d(x,y) + d(z,w)
            s2 = d[x][None, :, None] + dy[:, None, :]          # d(x,z) + d(y,w)
            s3 = d[x][None, None, :] + dy[:, :, None]          # d(x,w) + d(y,z)
            hi = np.maximum(np.maximum(s1, s2), s3)
            lo = np.minimum(np.minimum(s1, s2), s3)
            best = max(best, int((2 * hi + lo - s1 - s2 - s3).max()))
    return Fraction(best, 2)


def delta_hyperbolicity(ball: ExploredBall, margin: int = 0) -> DeltaEstimate:
    """Four-point delta over the nodes at distance at most ``radius - margin``."""
    if margin < 0 or margin > ball.radius or not ball.nodes:
        raise BallTooSmall(f"margin {margin} does not fit a ball of radius {ball.radius}")
    core = [n for n in ball.nodes if ball.distances[n] <= ball.radius - margin]
    if len(core) < 2:
        return DeltaEstimate(Fraction(0), len(core))
    return DeltaEstimate(four_point_delta(ball.pairwise_distances(core)), len(core))


# -- export ---------------------------------------------------------------

def export_graph(ball: ExploredBall, fmt: str = "dot") -> str:
    """DOT or JSON text for a ball; node order is the ball's deterministic order."""
    if fmt == "json":
        return json.dumps(ball.to_json(), sort_keys=True) + "\n"
    if fmt != "dot":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["graph ball {"]
    if ball.nodes:
        lines.append(f'  // kind={ball.kind} mode={ball.mode} '
                     f'center={_label(ball.center)} radius={ball.radius}')
    for i, n in enumerate(ball.nodes):
        lines.append(f'  n{i} [label="{_label(n)}", dist={ball.distances[n]}];')
    for i, j in ball.edges:
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- on-disk cache --------------------------------------------------------

@dataclass
class BallCache:
    """JSON-lines store of explored balls, one record per line.

    The directory defaults to ``$GHYS_CACHE_DIR`` or ``./.ghys-cache``;
    records written under another format version are ignored.  One writer at
    a time.
    """

    directory: Path = field(default_factory=lambda: Path(
        os.environ.get("GHYS_CACHE_DIR", ".ghys-cache")))

    def __post_init__(self):
        self.directory = Path(self.directory)

    @property
    def path(self) -> Path:
        return self.directory / "balls.jsonl"

    @staticmethod
    def key(kind, mode, center, radius, trace_cap) -> dict:
        return {"kind": kind, "mode": mode, "center": _label(center),
                "radius": radius, "trace_cap": trace_cap}

    def get(self, key: dict) -> ExploredBall | None:
        if not self.path.exists():
            return None
        found = None
        with self.path.open() as fh:
            for line in fh:
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if rec.get("version") == CACHE_VERSION and rec.get("key") == key:
                    found = rec["ball"]
        return ExploredBall.from_json(found) if found is not None else None

    def put(self, key: dict, ball: ExploredBall) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps({"version": CACHE_VERSION, "key": key,
                                 "ball": ball.to_json()}, sort_keys=True) + "\n")

    def explore(self, center, radius: int, kind: str = "word", mode: str = "SL2",
                trace_cap: int = DEFAULT_TRACE_CAP,
                budget: int = DEFAULT_NODE_BUDGET) -> ExploredBall:
        center = _normalize_center(center, kind, mode)
        key = self.key(kind, mode, center, radius, trace_cap)
        ball = self.get(key)
        if ball is None:
            ball = explore_ball(center, radius, kind, mode, trace_cap, budget)
            self.put(key, ball)
        return ball
