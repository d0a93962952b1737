"""Rooted-graph isomorphism: enumeration, automorphisms, canonical keys.

Rooted isomorphisms preserve the root and therefore distance from it, so
the search only ever matches vertices of equal refined color, where colors
start at (distance, degree) and are refined by neighbor color multisets.
Color codes are ranked by sorted signature each round, which makes them
invariant across relabelings; canonical keys exploit the same invariance.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass


@dataclass(frozen=True)
class RootedIso:
    """mapping[v] is the image in target of source vertex v; root to root."""

    source: object
    target: object
    mapping: tuple

    def validate(self):
        b1, b2 = self.source, self.target
        if b1.vertex_count != b2.vertex_count:
            raise ValueError("vertex counts differ")
        if sorted(self.mapping) != list(range(b2.vertex_count)):
            raise ValueError("mapping is not a bijection")
        if b1.vertex_count and self.mapping[0] != 0:
            raise ValueError("root not preserved")
        for v in range(b1.vertex_count):
            if b1.dist[v] != b2.dist[self.mapping[v]]:
                raise ValueError(f"distance not preserved at {v}")
        image = {
            tuple(sorted((self.mapping[u], self.mapping[v])))
            for u, v in b1.edges
        }
        if image != set(b2.edges):
            raise ValueError("adjacency not exactly preserved")
        return self


def _rank(balls, sigs):
    universe = sorted({s for per in sigs for s in per})
    code = {s: i for i, s in enumerate(universe)}
    return [[code[s] for s in per] for per in sigs]


def _refine(balls):
    """Joint color refinement with relabeling-invariant color codes."""
    sigs = [
        [(b.dist[v], len(b.adjacency[v])) for v in range(b.vertex_count)]
        for b in balls
    ]
    colors = _rank(balls, sigs)
    while True:
        sigs = [
            [
                (
                    colors[i][v],
                    tuple(sorted(colors[i][w] for w in b.adjacency[v])),
                )
                for v in range(b.vertex_count)
            ]
            for i, b in enumerate(balls)
        ]
        new = _rank(balls, sigs)
        if new == colors:
            return colors
        colors = new


def _masks(ball):
    out = []
    for v in range(ball.vertex_count):
        m = 0
        for w in ball.adjacency[v]:
            m |= 1 << w
        out.append(m)
    return out


def _search(b1, b2, first_only, forced=()):
    n = b1.vertex_count
    if n != b2.vertex_count or sorted(b1.dist) != sorted(b2.dist):
        return []
    if n == 0:
        return [()]
    c1, c2 = _refine([b1, b2])
    by_color = defaultdict(list)
    for t in range(n):
        by_color[c2[t]].append(t)
    counts = defaultdict(int)
    for v in range(n):
        counts[c1[v]] += 1
    if any(len(by_color[c]) != k for c, k in counts.items()):
        return []
    adj2 = _masks(b2)
    # Source vertices are processed in stored (BFS) order, so every vertex
    # after the root already has a mapped neighbor constraining it.
    found = []
    mapping = [-1] * n
    earlier_nbrs = [
        [u for u in b1.adjacency[v] if u < v] for v in range(n)
    ]

    def dfs(v, used_mask):
        if v == n:
            found.append(tuple(mapping))
            return first_only
        required = 0
        for u in earlier_nbrs[v]:
            required |= 1 << mapping[u]
        if v < len(forced):
            cands = (forced[v],)
        else:
            cands = by_color[c1[v]]
        for t in cands:
            bit = 1 << t
            if used_mask & bit:
                continue
            if c2[t] != c1[v]:
                continue
            if adj2[t] & used_mask != required:
                continue
            mapping[v] = t
            if dfs(v + 1, used_mask | bit):
                return True
            mapping[v] = -1
        return False

    dfs(0, 0)
    return found


def rooted_isomorphisms(b1, b2):
    """All rooted isomorphisms b1 -> b2, in deterministic (lex) order."""
    out = [RootedIso(b1, b2, m) for m in _search(b1, b2, first_only=False)]
    if out:
        out[0].validate()
    return out


def first_rooted_isomorphism(b1, b2):
    """One witness isomorphism, or None; early-exits the search."""
    res = _search(b1, b2, first_only=True)
    return RootedIso(b1, b2, res[0]).validate() if res else None


def rooted_automorphism_count(ball):
    order, _ = automorphism_scan(ball, -1)
    return order


def automorphism_scan(ball, inner_radius):
    """Exact rooted-automorphism count, without enumerating the group.

    Returns (count, witness) where witness is a RootedIso moving some
    vertex at distance <= inner_radius, or None if every automorphism
    fixes that inner ball pointwise.

    Walks the stabilizer chain along the stored vertex order: the count
    is the product of the orbit sizes, and each orbit is probed with one
    prefix-forced search per same-color candidate.  Balls with huge
    automorphism groups (many interchangeable leaves) stay cheap because
    the count is never materialized as a list of maps.
    """
    n = ball.vertex_count
    if n == 0:
        return 1, None
    dist = ball.dist
    if any(dist[v] > dist[v + 1] for v in range(n - 1)):
        # The chain argument below needs the inner ball to be a prefix.
        raise ValueError("vertex order must be nondecreasing in distance")
    colors = _refine([ball])[0]
    cells = defaultdict(list)
    for v in range(n):
        cells[colors[v]].append(v)
    count = 1
    witness = None
    for i in range(n):
        orbit = 1
        for t in cells[colors[i]]:
            if t <= i:
                # t < i is already pointwise-fixed at this link, so it
                # cannot also receive i; t == i is the identity branch.
                continue
            res = _search(
                ball, ball, first_only=True, forced=tuple(range(i)) + (t,)
            )
            if res:
                orbit += 1
                if witness is None and dist[i] <= inner_radius:
                    witness = RootedIso(ball, ball, res[0]).validate()
        count *= orbit
    return count, witness


def restricts_trivially(phi, radius):
    """Does phi fix every vertex at source-distance <= radius pointwise?"""
    return all(
        phi.mapping[v] == v
        for v in range(phi.source.vertex_count)
        if phi.source.dist[v] <= radius
    )


def canonical_key(ball):
    """Exact canonical form of a rooted ball as bytes.

    Equal keys hold exactly for rooted-isomorphic balls.  The key is the
    lexicographically least row encoding over all orderings that list the
    refined color cells in invariant-code order; ties branch, with twin
    vertices (equal neighborhoods) collapsed.
    """
    n = ball.vertex_count
    if n == 0:
        return b"n=0"
    colors = _refine([ball])[0]
    cells = defaultdict(list)
    for v in range(n):
        cells[colors[v]].append(v)
    cell_seq = []
    for c in sorted(cells):
        cell_seq.extend([c] * len(cells[c]))
    adj = _masks(ball)
    best_rows = None
    best_order = None

    def dfs(pos, used_mask, order, rows, tight):
        nonlocal best_rows, best_order
        if pos == n:
            if best_rows is None or rows < best_rows:
                best_rows = list(rows)
                best_order = list(order)
            return
        cands = [v for v in cells[cell_seq[pos]] if not (used_mask >> v) & 1]
        scored = []
        for v in cands:
            row = 0
            for i in range(pos):
                if (adj[v] >> order[i]) & 1:
                    row |= 1 << (pos - 1 - i)
            scored.append((row, v))
        min_row = min(row for row, _ in scored)
        if tight and best_rows is not None:
            if min_row > best_rows[pos]:
                return
            still_tight = min_row == best_rows[pos]
        else:
            still_tight = False
        taken = []
        for row, v in scored:
            if row != min_row:
                continue
            twin = False
            for u in taken:
                if (adj[v] ^ adj[u]) & ~((1 << v) | (1 << u)) == 0:
                    twin = True
                    break
            if twin:
                continue
            taken.append(v)
            order.append(v)
            rows.append(row)
            dfs(pos + 1, used_mask | (1 << v), order, rows, still_tight)
            order.pop()
            rows.pop()

    dfs(0, 0, [], [], True)
    dist_seq = ",".join(str(ball.dist[v]) for v in best_order)
    row_seq = ",".join(str(r) for r in best_rows)
    return f"n={n};dist={dist_seq};rows={row_seq}".encode()
