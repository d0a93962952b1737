"""Finite graphs, rooted balls, and metric balls in Cayley graphs.

Vertices of a Cayley ball are identified by engine keys (canonical forms),
never by spellings.  Construction order is deterministic: breadth-first,
ties broken by generating-set index and then discovery order.  Resource
caps raise ResourceLimitError; nothing is ever silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .words import ParseError, ResourceLimitError, word

DEFAULT_MAX_VERTICES = 5_000_000


def _check_edges(vertex_count, edges):
    seen = set()
    for u, v in edges:
        if not (0 <= u < v < vertex_count):
            raise ValueError(f"bad edge ({u}, {v}) for {vertex_count} vertices")
        if (u, v) in seen:
            raise ValueError(f"parallel edge ({u}, {v})")
        seen.add((u, v))


def _adjacency(vertex_count, edges):
    adj = [[] for _ in range(vertex_count)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return tuple(tuple(sorted(nbrs)) for nbrs in adj)


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph on {0..n-1}; edges are (u, v) with u < v."""

    vertex_count: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple(sorted(tuple(e) for e in self.edges))
        )
        _check_edges(self.vertex_count, self.edges)

    @cached_property
    def adjacency(self):
        return _adjacency(self.vertex_count, self.edges)

    def degree(self, v):
        return len(self.adjacency[v])


@dataclass(frozen=True)
class RootedBall:
    """Rooted graph with per-vertex distance from the root (vertex 0).

    radius is the requested construction radius; spheres beyond the last
    populated distance are genuinely empty (saturated group), never cut.
    element_labels, when present, are the pairwise distinct canonical
    forms labelling each vertex of a Cayley ball.
    """

    vertex_count: int
    radius: int
    dist: tuple
    edges: tuple
    element_labels: tuple = None

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple(sorted(tuple(e) for e in self.edges))
        )
        object.__setattr__(self, "dist", tuple(self.dist))
        _check_edges(self.vertex_count, self.edges)
        if len(self.dist) != self.vertex_count:
            raise ValueError("dist length differs from vertex count")
        if self.vertex_count and self.dist[0] != 0:
            raise ValueError("root must be at distance 0")

    @property
    def root(self):
        return 0

    @cached_property
    def adjacency(self):
        return _adjacency(self.vertex_count, self.edges)

    def degree(self, v):
        return len(self.adjacency[v])

    def vertices_within(self, r):
        return [v for v in range(self.vertex_count) if self.dist[v] <= r]


def sphere_sizes(ball):
    """Vertex counts by distance 0..radius (zeros once the group saturates)."""
    out = [0] * (ball.radius + 1)
    for d in ball.dist:
        out[d] += 1
    return tuple(out)


def cayley_ball(engine, genset, radius, max_vertices=DEFAULT_MAX_VERTICES):
    """Ball of the given radius around the identity in Cay(engine, genset).

    Vertices are numbered in BFS order (ties: genset index, then discovery
    order); vertex 0 is the identity.  Edges are all pairs {u, u*s} with
    both endpoints inside the ball, including sphere-to-sphere edges.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    identity = engine.normal_form(word())
    keys = {engine.key(identity): 0}
    labels = [identity]
    dist = [0]
    frontier = [0]
    for d in range(radius):
        nxt = []
        for u in frontier:
            for s in genset.words:
                prod = engine.multiply(labels[u], s)
                k = engine.key(prod)
                if k not in keys:
                    if len(labels) >= max_vertices:
                        raise ResourceLimitError(
                            f"ball exceeds max_vertices={max_vertices}"
                        )
                    keys[k] = len(labels)
                    labels.append(prod)
                    dist.append(d + 1)
                    nxt.append(keys[k])
        frontier = nxt
        if not frontier:
            break
    edges = set()
    for u in range(len(labels)):
        for s in genset.words:
            k = engine.key(engine.multiply(labels[u], s))
            v = keys.get(k)
            if v is not None and v != u:
                edges.add((u, v) if u < v else (v, u))
    return RootedBall(
        vertex_count=len(labels),
        radius=radius,
        dist=tuple(dist),
        edges=tuple(sorted(edges)),
        element_labels=tuple(labels),
    )


def finite_ball(graph, v, radius):
    """Induced ball of the given radius around v, renumbered in BFS order."""
    return finite_ball_with_order(graph, v, radius)[0]


def finite_ball_with_order(graph, v, radius):
    """finite_ball plus the BFS order: order[ball vertex] = graph vertex."""
    if not (0 <= v < graph.vertex_count):
        raise ValueError(f"vertex {v} out of range")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    order = [v]
    dist = {v: 0}
    frontier = [v]
    for d in range(radius):
        nxt = []
        for u in frontier:
            for w in graph.adjacency[u]:
                if w not in dist:
                    dist[w] = d + 1
                    order.append(w)
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    renumber = {old: new for new, old in enumerate(order)}
    edges = []
    for a, b in graph.edges:
        if a in renumber and b in renumber:
            x, y = renumber[a], renumber[b]
            edges.append((x, y) if x < y else (y, x))
    ball = RootedBall(
        vertex_count=len(order),
        radius=radius,
        dist=tuple(dist[u] for u in order),
        edges=tuple(sorted(edges)),
    )
    return ball, tuple(order)


def distance(engine, genset, g, max_explored=DEFAULT_MAX_VERTICES):
    """Exact d(identity, g) in Cay(engine, genset) by meeting in the middle.

    Raises ResourceLimitError past max_explored visited elements, and
    ValueError if the (finite) graph is exhausted without reaching g.
    """
    identity = engine.normal_form(word())
    ke = engine.key(identity)
    kg = engine.key(g)
    if ke == kg:
        return 0
    visited = ({ke: 0}, {kg: 0})
    frontiers = ([identity], [engine.normal_form(g)])
    depth = [0, 0]
    best = None
    while True:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        if not frontiers[side]:
            if best is not None:
                return best
            raise ValueError("element not reachable from the identity over S")
        here, there = visited[side], visited[1 - side]
        nxt = []
        d = depth[side] + 1
        for u in frontiers[side]:
            for s in genset.words:
                prod = engine.multiply(u, s)
                k = engine.key(prod)
                if k in here:
                    continue
                if len(visited[0]) + len(visited[1]) >= max_explored:
                    raise ResourceLimitError(
                        f"distance search exceeds max_explored={max_explored}"
                    )
                here[k] = d
                nxt.append(prod)
                if k in there:
                    total = d + there[k]
                    if best is None or total < best:
                        best = total
        frontiers[side][:] = nxt
        depth[side] = d
        if best is not None and depth[0] + depth[1] >= best:
            return best


def is_connected(graph):
    if graph.vertex_count == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in graph.adjacency[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == graph.vertex_count


# ---------------------------------------------------------------------------
# text format: `n m` header, one `u v` line per edge (0 <= u < v < n);
# rooted balls add a `root` line and a `dist` line


def render_graph(graph):
    lines = [f"{graph.vertex_count} {len(graph.edges)}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def render_rooted_ball(ball):
    lines = [f"{ball.vertex_count} {len(ball.edges)}"]
    lines.extend(f"{u} {v}" for u, v in ball.edges)
    lines.append(f"root {ball.root}")
    lines.append("radius " + str(ball.radius))
    lines.append("dist " + " ".join(str(d) for d in ball.dist))
    return "\n".join(lines) + "\n"


def _graph_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_graph(text):
    header = None
    edges = []
    for lineno, line in _graph_lines(text):
        parts = line.split()
        if header is None:
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ParseError("expected `n m` header", line=lineno)
            header = (int(parts[0]), int(parts[1]))
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError("expected `u v` edge line", line=lineno)
        edges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ParseError("empty graph file")
    n, m = header
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, file has {len(edges)}")
    try:
        return FiniteGraph(n, tuple(edges))
    except ValueError as err:
        raise ParseError(str(err))


def parse_rooted_ball(text):
    header = None
    edges = []
    root = None
    radius = None
    dist = None
    for lineno, line in _graph_lines(text):
        parts = line.split()
        if parts[0] == "root":
            root = int(parts[1])
            if root != 0:
                raise ParseError("root must be vertex 0", line=lineno)
            continue
        if parts[0] == "radius":
            radius = int(parts[1])
            continue
        if parts[0] == "dist":
            dist = tuple(int(p) for p in parts[1:])
            continue
        if header is None:
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ParseError("expected `n m` header", line=lineno)
            header = (int(parts[0]), int(parts[1]))
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError("expected `u v` edge line", line=lineno)
        edges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ParseError("empty ball file")
    n, m = header
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, file has {len(edges)}")
    if dist is None:
        raise ParseError("missing dist line")
    if radius is None:
        radius = max(dist, default=0)
    try:
        return RootedBall(n, radius, dist, tuple(edges))
    except ValueError as err:
        raise ParseError(str(err))
