"""Coset enumeration, finite quotient search, and the witness report.

todd_coxeter enumerates the cosets of a finitely generated subgroup of a
finitely presented group (HLT strategy: relator scans with gap filling,
coincidences resolved by union on least representatives), producing the
permutation action on the coset space.  schreier_from_table turns a
complete table into sigma maps plus a simple graph, counting the loops
and parallel edges it had to drop.  enumerate_homs lists all transitive
permutation quotients of one small degree up to symmetric-group
conjugacy.  witness_report bundles the evidence that the chosen witness
element of BS(m, n) is nontrivial yet maps to the identity in every
quotient of degree <= K, together with its distance from the identity.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from .balls import DEFAULT_MAX_VERTICES, FiniteGraph, distance
from .reconstruct import SchreierGraph
from .words import (
    BaumslagSolitarEngine,
    LmlError,
    ResourceLimitError,
    Word,
    _perm_compose,
    _perm_inverse,
    bs_presentation,
    bs_s10_setup,
    word,
)

DEFAULT_MAX_COSETS = 100_000
DEFAULT_MAX_NODES = 2_000_000


class IndexExceedsBound(LmlError):
    """Enumeration did not close within the coset cap (index may be infinite)."""

    def __init__(self, max_cosets):
        self.max_cosets = max_cosets
        super().__init__(
            f"enumeration did not close within {max_cosets} cosets"
        )


# ---------------------------------------------------------------------------
# coset tables


@dataclass(frozen=True)
class CosetTable:
    """Complete table of right cosets; coset 0 is the subgroup itself.

    forward[g] is the permutation u -> u*g; the inverse generator's column
    is its inverse permutation, exposed through column()/apply().
    """

    generator_names: tuple
    cosets: int
    forward: tuple

    def __post_init__(self):
        if len(self.forward) != len(self.generator_names):
            raise ValueError("one column per generator required")
        for col in self.forward:
            if sorted(col) != list(range(self.cosets)):
                raise ValueError("coset table column is not a permutation")

    @cached_property
    def backward(self):
        return tuple(_perm_inverse(col) for col in self.forward)

    def column(self, g, sign):
        return self.forward[g] if sign > 0 else self.backward[g]

    def apply(self, u, w):
        for g, e in w.letters:
            col = self.column(g, e)
            for _ in range(abs(e)):
                u = col[u]
        return u

    def to_jsonable(self):
        cols = {}
        for g, name in enumerate(self.generator_names):
            cols[name] = list(self.forward[g])
            cols[name + "^-1"] = list(self.backward[g])
        return {
            "schema": 1,
            "cosets": self.cosets,
            "generators": list(self.generator_names),
            "columns": cols,
        }


def todd_coxeter(presentation, subgroup_gens, max_cosets=DEFAULT_MAX_COSETS):
    """Enumerate cosets of <subgroup_gens> in the presented group.

    HLT: subgroup generators are scanned from coset 0, then every relator
    is scanned from every live coset in numeric order, with remaining
    undefined entries filled by fresh definitions.  Deterministic; raises
    IndexExceedsBound once max_cosets cosets have been defined (dead ones
    included, so the cap is an allocation cap).
    """
    ngen = len(presentation.generators)
    ncols = 2 * ngen

    def cols_of(w):
        out = []
        for g, e in w.letters:
            if not 0 <= g < ngen:
                raise ValueError(f"letter {g} outside the presentation alphabet")
            out.extend([2 * g if e > 0 else 2 * g + 1] * abs(e))
        return out

    table = [[None] * ncols]
    parent = [0]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def entry(u, c):
        v = table[u][c]
        return None if v is None else find(v)

    def define(u, c):
        if len(table) >= max_cosets:
            raise IndexExceedsBound(max_cosets)
        v = len(table)
        table.append([None] * ncols)
        parent.append(v)
        table[u][c] = v
        table[v][c ^ 1] = u
        return v

    def coincide(a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            parent[y] = x
            for c in range(ncols):
                d = table[y][c]
                if d is None:
                    continue
                d = find(d)
                e = table[x][c]
                if e is None:
                    table[x][c] = d
                    rev = table[d][c ^ 1]
                    if rev is None:
                        table[d][c ^ 1] = x
                    elif find(rev) != x:
                        queue.append((find(rev), x))
                else:
                    queue.append((find(e), d))

    def scan_and_fill(start, cols):
        while True:
            start = find(start)
            f, i = start, 0
            b, j = start, len(cols) - 1
            while i <= j and entry(f, cols[i]) is not None:
                f = entry(f, cols[i])
                i += 1
            if i > j:
                if f != b:
                    coincide(f, b)
                return
            while j >= i and entry(b, cols[j] ^ 1) is not None:
                b = entry(b, cols[j] ^ 1)
                j -= 1
            if j < i:
                if f != b:
                    coincide(f, b)
                return
            if j == i:
                # both sides stopped at the same undefined slot: deduction
                table[f][cols[i]] = b
                table[b][cols[i] ^ 1] = f
                return
            define(f, cols[i])

    for w in subgroup_gens:
        scan_and_fill(0, cols_of(w))
    i = 0
    while i < len(table):
        if find(i) == i:
            for rel in presentation.relators:
                if find(i) != i:
                    break
                scan_and_fill(i, cols_of(rel))
            if find(i) == i:
                for c in range(ncols):
                    if entry(i, c) is None:
                        define(i, c)
        i += 1

    live = [u for u in range(len(table)) if find(u) == u]
    renumber = {old: new for new, old in enumerate(live)}
    forward = []
    for g in range(ngen):
        col = []
        for old in live:
            v = entry(old, 2 * g)
            assert v is not None, "incomplete table survived the main loop"
            col.append(renumber[v])
        forward.append(tuple(col))
    for g in range(ngen):
        back = tuple(renumber[entry(old, 2 * g + 1)] for old in live)
        assert back == _perm_inverse(forward[g]), "inverse column mismatch"
    return CosetTable(
        generator_names=tuple(presentation.generators),
        cosets=len(live),
        forward=tuple(forward),
    )


# ---------------------------------------------------------------------------
# Schreier graphs out of tables


@dataclass(frozen=True)
class SchreierRealization:
    """Action plus its simple graph; drop counts record lost structure.

    A perfect local model can afford no drops: the modeled Cayley graph
    is simple and |S|-regular, so any loop or parallel collapse already
    disqualifies the graph.
    """

    action: SchreierGraph
    graph: FiniteGraph
    loops_dropped: int
    parallels_dropped: int

    def to_jsonable(self):
        return {
            "schema": 1,
            "action": self.action.to_jsonable(),
            "graph": {
                "vertex_count": self.graph.vertex_count,
                "edges": [list(e) for e in self.graph.edges],
            },
            "loops_dropped": self.loops_dropped,
            "parallels_dropped": self.parallels_dropped,
        }


def schreier_from_table(table, genset):
    """sigma maps over S by composing table columns; simple graph alongside.

    One candidate edge is taken per (vertex, letter) with the letter
    ranging over one representative of each inverse pair; loops and
    repeated pairs are dropped and counted.
    """
    n = table.cosets
    sigma = tuple(
        tuple(table.apply(u, s) for u in range(n)) for s in genset.words
    )
    action = SchreierGraph(n, sigma)
    loops = 0
    candidates = []
    for i, col in enumerate(action.sigma):
        j = genset.inverse_pairing[i]
        if i > j:
            continue
        for u, v in enumerate(col):
            if u == v:
                loops += 1
            elif i < j or u < v:
                candidates.append((u, v) if u < v else (v, u))
    edges = sorted(set(candidates))
    parallels = len(candidates) - len(edges)
    return SchreierRealization(
        action=action,
        graph=FiniteGraph(n, tuple(edges)),
        loops_dropped=loops,
        parallels_dropped=parallels,
    )


# ---------------------------------------------------------------------------
# finite quotients of a fixed degree


def _cycle_type(p):
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                ln += 1
            lengths.append(ln)
    return tuple(sorted(lengths))


def _perm_pow(p, e):
    acc = tuple(range(len(p)))
    for _ in range(e):
        acc = _perm_compose(acc, p)
    return acc


@dataclass(frozen=True)
class FiniteQuotientHom:
    """Permutation images of the generators; one per conjugacy class."""

    degree: int
    images: tuple

    def permutation(self, w):
        acc = tuple(range(self.degree))
        for g, e in w.letters:
            base = self.images[g] if e > 0 else _perm_inverse(self.images[g])
            for _ in range(abs(e)):
                acc = _perm_compose(acc, base)
        return acc

    def is_transitive(self):
        reached = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for p in self.images:
                for y in (p[x], _perm_inverse(p)[x]):
                    if y not in reached:
                        reached.add(y)
                        stack.append(y)
        return len(reached) == self.degree

    def to_jsonable(self):
        return {"degree": self.degree, "images": [list(p) for p in self.images]}


def _canonical_images(images, perms):
    best = None
    for c in perms:
        cinv = _perm_inverse(c)
        conj = tuple(
            _perm_compose(_perm_compose(cinv, p), c) for p in images
        )
        if best is None or conj < best:
            best = conj
    return best


def enumerate_homs(presentation, k, max_nodes=DEFAULT_MAX_NODES):
    """All transitive degree-k permutation quotients, up to conjugacy.

    Backtracking over generator images with relators checked as soon as
    their support is assigned.  Generators constrained by a relator of
    the shape x^e y^p x^-e y^q are assigned first, after filtering their
    candidates by cycle-type feasibility (y^p must be conjugate to y^-q).
    Returns canonical (lex-least conjugate) representatives, sorted.
    """
    if k < 1:
        raise ValueError("degree must be >= 1")
    ngen = len(presentation.generators)
    perms = sorted(permutations(range(k)))
    identity = tuple(range(k))

    constraints = defaultdict(list)
    for rel in presentation.relators:
        L = rel.letters
        if (
            len(L) == 4
            and L[0][0] == L[2][0]
            and L[1][0] == L[3][0]
            and L[0][0] != L[1][0]
            and L[0][1] == -L[2][1]
        ):
            constraints[L[1][0]].append((abs(L[1][1]), abs(L[3][1])))

    gen_order = sorted(range(ngen), key=lambda g: (g not in constraints, g))
    position = {g: idx for idx, g in enumerate(gen_order)}
    candidates = {}
    for g in range(ngen):
        pool = perms
        for p, q in constraints.get(g, ()):
            pool = [
                P for P in pool
                if _cycle_type(_perm_pow(P, p)) == _cycle_type(_perm_pow(P, q))
            ]
        candidates[g] = pool

    check_at = defaultdict(list)
    for rel in presentation.relators:
        support = {g for g, _ in rel.letters}
        if support:
            check_at[max(position[g] for g in support)].append(rel)

    images = [None] * ngen
    inverses = [None] * ngen
    found = []
    nodes = 0

    def holds(rel):
        acc = identity
        for g, e in rel.letters:
            base = images[g] if e > 0 else inverses[g]
            for _ in range(abs(e)):
                acc = _perm_compose(acc, base)
        return acc == identity

    def transitive():
        reached = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for g in range(ngen):
                for y in (images[g][x], inverses[g][x]):
                    if y not in reached:
                        reached.add(y)
                        stack.append(y)
        return len(reached) == k

    def dfs(idx):
        nonlocal nodes
        if idx == ngen:
            if transitive():
                found.append(tuple(images))
            return
        g = gen_order[idx]
        for P in candidates[g]:
            nodes += 1
            if nodes > max_nodes:
                raise ResourceLimitError(
                    f"hom search exceeds max_nodes={max_nodes}"
                )
            images[g] = P
            inverses[g] = _perm_inverse(P)
            if all(holds(rel) for rel in check_at.get(idx, ())):
                dfs(idx + 1)
            images[g] = None
            inverses[g] = None

    dfs(0)
    classes = sorted({_canonical_images(imgs, perms) for imgs in found})
    return [FiniteQuotientHom(k, imgs) for imgs in classes]


# ---------------------------------------------------------------------------
# the witness element and its quotient scan


@dataclass(frozen=True)
class WitnessReport:
    """Evidence that the witness survives no quotient of degree <= K."""

    m: int
    n: int
    witness: Word
    nontrivial: bool
    britton_t0: int
    britton_syllables: tuple
    max_degree: int
    homs_found: int
    per_degree: tuple
    all_trivial: bool
    distance: int

    def to_jsonable(self):
        return {
            "schema": 1,
            "m": self.m,
            "n": self.n,
            "witness": self.witness.render(("a", "b")),
            "nontrivial": self.nontrivial,
            "britton": {
                "t0": self.britton_t0,
                "syllables": [list(s) for s in self.britton_syllables],
                "ell": len(self.britton_syllables),
            },
            "quotient_scan": {
                "max_degree": self.max_degree,
                "homs_found": self.homs_found,
                "per_degree": [
                    {"degree": d, "classes": c} for d, c in self.per_degree
                ],
                "all_trivial": self.all_trivial,
            },
            "distance": self.distance,
        }


def default_witness(m, n, gcd_witness=False):
    """[a b^c a^-1, b^c] with c = 1 (needs gcd(m,n)=1) or c = gcd(m,n).

    The general form is only available behind gcd_witness=True and is
    rejected when gcd(m,n) equals m or n: one of the conjugations then
    pinches and the commutator collapses to the identity.
    """
    c = math.gcd(m, n)
    if not gcd_witness:
        if c != 1:
            raise ValueError(
                f"gcd({m},{n}) = {c} != 1; pass gcd_witness=True for the "
                "general witness"
            )
    elif c == m or c == n:
        raise ValueError(
            f"gcd({m},{n}) = {c} equals m or n, so the witness pinches to "
            "the identity"
        )
    if not gcd_witness:
        c = 1
    return word(
        ((0, 1), (1, c), (0, -1), (1, c), (0, 1), (1, -c), (0, -1), (1, -c))
    )


def witness_report(m, n, max_degree, genset=None, witness=None,
                   gcd_witness=False, max_nodes=DEFAULT_MAX_NODES,
                   max_explored=DEFAULT_MAX_VERTICES):
    """Nontriviality, the degree-<=K quotient scan, and d(e, witness).

    The witness must be nontrivial (checked via its canonical form before
    any scanning).  all_trivial records whether the witness image is the
    identity permutation under every hom of every degree 1..max_degree.
    """
    engine = BaumslagSolitarEngine(m, n)
    presentation = bs_presentation(m, n)
    if genset is None:
        _, genset, _ = bs_s10_setup(m, n)
    if witness is None:
        witness = default_witness(m, n, gcd_witness)
    nf = engine.britton(witness)
    if nf.is_identity():
        raise ValueError("witness is trivial; nothing to scan")
    per_degree = []
    total = 0
    all_trivial = True
    for degree in range(1, max_degree + 1):
        homs = enumerate_homs(presentation, degree, max_nodes)
        per_degree.append((degree, len(homs)))
        total += len(homs)
        identity = tuple(range(degree))
        for h in homs:
            if h.permutation(witness) != identity:
                all_trivial = False
    d = distance(engine, genset, witness, max_explored)
    return WitnessReport(
        m=m,
        n=n,
        witness=witness,
        nontrivial=True,
        britton_t0=nf.t0,
        britton_syllables=nf.syllables,
        max_degree=max_degree,
        homs_found=total,
        per_degree=tuple(per_degree),
        all_trivial=all_trivial,
        distance=d,
    )
