"""Recovering subgroup structure from a verified local model.

A connected graph whose radius-r balls all match the identity ball of
Cay(engine, S) carries a canonical S-labeling of its directed edges when
the matching isomorphisms are unique near each vertex.  The labels define
a right action of the free group on S; once the action satisfies a
presentation of the group on S, the graph is the Schreier graph of the
stabilizer of any base vertex, and that stabilizer is returned by
Schreier generators.  Every hypothesis failure on the way is reported as
a value (ambiguity, pairing clash, relator violation, disconnection,
non-model), never hidden behind an accepting answer.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from .balls import DEFAULT_MAX_VERTICES, FiniteGraph, cayley_ball, distance, finite_ball_with_order
from .iso import rooted_isomorphisms
from .localmodel import verify_model
from .words import LmlError, Word, concat, invert, word


class NotAModelError(LmlError):
    """Labeling was asked for a graph that fails model verification."""


class NotRegularError(LmlError):
    """A vertex lacks a full set of S-labels, so no action exists."""

    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} lacks a full set of S-labels")


class BaseLettersMissingError(LmlError):
    """S does not contain some original generator as an element."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"generator {name!r} is not an element of S")


# ---------------------------------------------------------------------------
# edge labelings and the induced action


@dataclass(frozen=True)
class EdgeLabeling:
    """S-index labels on directed edges.

    directed holds (v, w, s_index) triples, sorted; the label of (w, v) is
    the inverse pairing of the label of (v, w), and the out-labels at any
    vertex are pairwise distinct (both checked by the producer, the first
    re-checked here).
    """

    vertex_count: int
    genset_size: int
    directed: tuple

    def __post_init__(self):
        object.__setattr__(self, "directed", tuple(sorted(self.directed)))
        per_vertex = defaultdict(set)
        for v, w, i in self.directed:
            if not (0 <= i < self.genset_size):
                raise ValueError(f"label {i} out of range")
            if i in per_vertex[v]:
                raise ValueError(f"vertex {v} repeats out-label {i}")
            per_vertex[v].add(i)

    @cached_property
    def _by_edge(self):
        return {(v, w): i for v, w, i in self.directed}

    def label(self, v, w):
        return self._by_edge[(v, w)]

    def to_jsonable(self):
        return {
            "vertex_count": self.vertex_count,
            "genset_size": self.genset_size,
            "labels": [list(t) for t in self.directed],
        }


@dataclass(frozen=True)
class SchreierGraph:
    """A right action on vertices: sigma[i][v] is v moved by S-letter i."""

    vertex_count: int
    sigma: tuple

    def apply(self, i, v):
        return self.sigma[i][v]

    def underlying_graph(self):
        """The simple graph of the action (loops and multiplicity dropped)."""
        edges = set()
        for col in self.sigma:
            for v, w in enumerate(col):
                if v != w:
                    edges.add((v, w) if v < w else (w, v))
        return FiniteGraph(self.vertex_count, tuple(sorted(edges)))

    def to_jsonable(self):
        return {
            "vertex_count": self.vertex_count,
            "sigma": [list(col) for col in self.sigma],
        }


@dataclass(frozen=True)
class AmbiguousLabeling:
    """Two ball isomorphisms at `vertex` that differ within radius 2."""

    vertex: int
    first: object
    second: object

    def disagreement(self):
        """A ball vertex at distance <= 2 where the two maps differ."""
        ball = self.first.source
        for x in range(ball.vertex_count):
            if ball.dist[x] <= 2 and self.first.mapping[x] != self.second.mapping[x]:
                return x
        return None

    def to_jsonable(self):
        return {
            "vertex": self.vertex,
            "first": list(self.first.mapping),
            "second": list(self.second.mapping),
            "disagreement": self.disagreement(),
        }


@dataclass(frozen=True)
class LabelInconsistency:
    """A directed edge whose reverse label is not the inverse pairing."""

    edge: tuple
    detail: str

    def to_jsonable(self):
        return {"edge": list(self.edge), "detail": self.detail}


def label_edges(graph, engine, genset, radius, verdict=None,
                max_vertices=DEFAULT_MAX_VERTICES):
    """Label each directed edge of a verified model by its S-letter.

    For every vertex the rooted isomorphisms from its ball onto the
    identity ball must agree on the radius-2 restriction; the first
    disagreement is returned as AmbiguousLabeling.  The labeling then
    sends neighbor w of v to the unique s with phi_v(w) = s, and the
    reverse edge must carry the paired inverse letter (LabelInconsistency
    otherwise).  Pass the verifier's verdict to skip re-verification.
    """
    if radius < 1:
        raise ValueError("edge labeling needs radius >= 1")
    if verdict is None:
        verdict = verify_model(graph, engine, genset, radius, max_vertices)
    if not verdict.accepted:
        raise NotAModelError(f"not a radius-{radius} model: {verdict.rejection}")
    target = cayley_ball(engine, genset, radius, max_vertices)
    elem_vertex = {
        engine.key(lbl): j for j, lbl in enumerate(target.element_labels)
    }
    letter_of_vertex = {
        elem_vertex[engine.key(s)]: i for i, s in enumerate(genset.words)
    }
    labels = {}
    for v in range(graph.vertex_count):
        ball, order = finite_ball_with_order(graph, v, radius)
        isos = rooted_isomorphisms(ball, target)
        if not isos:
            raise NotAModelError(f"ball at vertex {v} does not match the target")
        ref = isos[0]
        for phi in isos[1:]:
            for x in range(ball.vertex_count):
                if ball.dist[x] <= 2 and phi.mapping[x] != ref.mapping[x]:
                    return AmbiguousLabeling(v, ref, phi)
        rev = {g: i for i, g in enumerate(order)}
        for w in graph.adjacency[v]:
            labels[(v, w)] = letter_of_vertex[ref.mapping[rev[w]]]
    for (v, w), i in labels.items():
        back = labels[(w, v)]
        if back != genset.inverse_pairing[i]:
            return LabelInconsistency(
                (v, w),
                f"forward label {i} pairs with {genset.inverse_pairing[i]}, "
                f"reverse edge carries {back}",
            )
    return EdgeLabeling(
        vertex_count=graph.vertex_count,
        genset_size=len(genset),
        directed=tuple(sorted((v, w, i) for (v, w), i in labels.items())),
    )


def build_action(graph, labeling, genset):
    """Turn a complete inverse-consistent labeling into sigma maps.

    Every vertex must carry all |S| out-labels (a model of an |S|-regular
    graph is |S|-regular); bijectivity of each sigma is re-verified.
    """
    n = graph.vertex_count
    k = len(genset)
    out = defaultdict(dict)
    for v, w, i in labeling.directed:
        out[v][i] = w
    sigma = [[None] * n for _ in range(k)]
    for v in range(n):
        if len(out.get(v, ())) != k:
            raise NotRegularError(v)
        for i, w in out[v].items():
            sigma[i][v] = w
    for i in range(k):
        if sorted(sigma[i]) != list(range(n)):
            raise ValueError(f"sigma for letter {i} is not a bijection")
    return SchreierGraph(n, tuple(tuple(col) for col in sigma))


# ---------------------------------------------------------------------------
# presenting the group on S and checking the action factors through it


def present_on_S(presentation, genset, engine):
    """Relators over the abstract alphabet S, plus the radius they need.

    Output relators use S indices as letters, always with positive
    exponents (inverses go through the pairing).  They comprise a
    definition relator s * (spelling of s over base letters)^-1 for every
    s that is not itself a base generator or its inverse, plus every
    presentation relator rewritten over the base letters.  Also returns
    r' = the largest distance from the identity reached by any prefix of
    any relator, evaluated in Cay(engine, S).
    """
    base = {}
    for g in range(len(presentation.generators)):
        unit = word(((g, 1),))
        for i, s in enumerate(genset.words):
            if engine.equal(s, unit):
                base[g] = i
                break
        else:
            raise BaseLettersMissingError(presentation.generators[g])
    pairing = genset.inverse_pairing
    base_like = set(base.values()) | {pairing[i] for i in base.values()}

    def over_base(w):
        out = []
        for g, e in w.letters:
            idx = base[g] if e > 0 else pairing[base[g]]
            out.extend([(idx, 1)] * abs(e))
        return out

    relators = []
    for i, s in enumerate(genset.words):
        if i in base_like:
            continue
        relators.append(word([(i, 1)] + over_base(invert(s))))
    for rel in presentation.relators:
        relators.append(word(over_base(rel)))

    r_prime = 0
    for rel in relators:
        acc = word()
        for i, e in rel.letters:
            for _ in range(e):
                acc = engine.multiply(acc, genset.words[i])
                d = distance(engine, genset, acc)
                if d > r_prime:
                    r_prime = d
    return relators, r_prime


@dataclass(frozen=True)
class RelatorViolation:
    """A relator over S that moves some vertex of the action."""

    relator: Word
    vertex: int

    def to_jsonable(self):
        return {"relator": [list(t) for t in self.relator.letters],
                "vertex": self.vertex}


def check_factors(action, relators, pairing=None):
    """True iff every relator acts as the identity on every vertex.

    Returns the first RelatorViolation otherwise (relator order, then
    vertex order).  Negative exponents need the inverse pairing.
    """
    for rel in relators:
        for v in range(action.vertex_count):
            x = v
            for i, e in rel.letters:
                if e < 0:
                    if pairing is None:
                        raise ValueError(
                            "negative exponent needs the inverse pairing"
                        )
                    i, e = pairing[i], -e
                for _ in range(e):
                    x = action.sigma[i][x]
            if x != v:
                return RelatorViolation(rel, v)
    return True


def stabilizer(action, v, genset):
    """Schreier generators of the stabilizer of v, over the original alphabet.

    BFS spanning tree rooted at v with edges tried in S order; each
    non-tree pair (u, s) contributes p_u * s * p_{sigma_s(u)}^-1, freely
    reduced, with empties and exact duplicates dropped.
    """
    n = action.vertex_count
    path = [None] * n
    path[v] = word()
    order = [v]
    tree = set()
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for i, s in enumerate(genset.words):
            t = action.sigma[i][u]
            if path[t] is None:
                path[t] = concat(path[u], s)
                tree.add((u, i))
                order.append(t)
    gens = []
    seen = set()
    for u in order:
        for i, s in enumerate(genset.words):
            if (u, i) in tree:
                continue
            g = concat(concat(path[u], s), invert(path[action.sigma[i][u]]))
            if g.letters and g.letters not in seen:
                seen.add(g.letters)
                gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class ReconstructionResult:
    """Outcome of the full pipeline; exactly one failure payload is set.

    outcome is one of success, not_a_model, disconnected,
    ambiguous_labeling, label_inconsistency, relator_violation.
    """

    outcome: str
    labeling: EdgeLabeling = None
    action: SchreierGraph = None
    stabilizer_words: tuple = None
    r_prime: int = None
    ambiguity: AmbiguousLabeling = None
    inconsistency: LabelInconsistency = None
    violation: RelatorViolation = None
    rejection: tuple = None

    @property
    def succeeded(self):
        return self.outcome == "success"

    def to_jsonable(self, alphabet=None):
        out = {"schema": 1, "outcome": self.outcome}
        if self.labeling is not None:
            out["labeling"] = self.labeling.to_jsonable()
        if self.action is not None:
            out["action"] = self.action.to_jsonable()
        if self.stabilizer_words is not None:
            if alphabet is not None:
                out["stabilizer"] = [
                    w.render(alphabet) for w in self.stabilizer_words
                ]
            else:
                out["stabilizer"] = [
                    [list(t) for t in w.letters] for w in self.stabilizer_words
                ]
        if self.r_prime is not None:
            out["r_prime"] = self.r_prime
        if self.ambiguity is not None:
            out["ambiguity"] = self.ambiguity.to_jsonable()
        if self.inconsistency is not None:
            out["inconsistency"] = self.inconsistency.to_jsonable()
        if self.violation is not None:
            out["violation"] = self.violation.to_jsonable()
        if self.rejection is not None:
            out["rejection"] = {
                "vertex": self.rejection[0],
                "reason": self.rejection[1],
            }
        return out


def reconstruct(graph, engine, genset, presentation, radius,
                max_vertices=DEFAULT_MAX_VERTICES):
    """Full pipeline: verify, label, build the action, check, stabilize.

    On success the action's underlying simple graph equals the input
    edge-for-edge and the stabilizer has index |V| (the action is
    transitive because the graph is connected).
    """
    if radius < 1:
        raise ValueError("reconstruction needs radius >= 1")
    verdict = verify_model(graph, engine, genset, radius, max_vertices)
    if not verdict.accepted:
        return ReconstructionResult("not_a_model", rejection=verdict.rejection)
    if not verdict.connected:
        return ReconstructionResult("disconnected")
    labeled = label_edges(
        graph, engine, genset, radius, verdict=verdict, max_vertices=max_vertices
    )
    if isinstance(labeled, AmbiguousLabeling):
        return ReconstructionResult("ambiguous_labeling", ambiguity=labeled)
    if isinstance(labeled, LabelInconsistency):
        return ReconstructionResult("label_inconsistency", inconsistency=labeled)
    action = build_action(graph, labeled, genset)
    relators, r_prime = present_on_S(presentation, genset, engine)
    ok = check_factors(action, relators, genset.inverse_pairing)
    if ok is not True:
        return ReconstructionResult(
            "relator_violation",
            labeling=labeled,
            action=action,
            r_prime=r_prime,
            violation=ok,
        )
    stab = stabilizer(action, 0, genset)
    assert action.underlying_graph().edges == graph.edges
    return ReconstructionResult(
        "success",
        labeling=labeled,
        action=action,
        stabilizer_words=tuple(stab),
        r_prime=r_prime,
    )
