"""Perfect finite local models and the fixing radius of a Cayley graph.

verify_model checks that every vertex of a finite graph sees, at the given
radius, exactly the ball around the identity in Cay(engine, S); vertex
balls are deduplicated by canonical key, so the isomorphism search runs
once per ball class.  fixing_radius scans outward for the radius at which
every rooted ball automorphism pins the inner ball pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .balls import (
    DEFAULT_MAX_VERTICES,
    cayley_ball,
    finite_ball,
    is_connected,
)
from .iso import (
    automorphism_scan,
    canonical_key,
    first_rooted_isomorphism,
)


@dataclass(frozen=True)
class ModelClass:
    """One isomorphism class of vertex balls: key, representative, witness."""

    key: bytes
    representative: int
    witness: object  # RootedIso onto the Cayley ball


@dataclass(frozen=True)
class ModelVerdict:
    accepted: bool
    radius: int
    connected: bool
    vertex_count: int
    classes: tuple
    rejection: tuple = None  # (vertex, reason) when not accepted

    def to_jsonable(self):
        return {
            "schema": 1,
            "accepted": self.accepted,
            "radius": self.radius,
            "connected": self.connected,
            "vertex_count": self.vertex_count,
            "classes": [
                {
                    "key": c.key.decode(),
                    "representative": c.representative,
                    "witness": list(c.witness.mapping) if c.witness else None,
                }
                for c in self.classes
            ],
            "rejection": (
                None
                if self.rejection is None
                else {"vertex": self.rejection[0], "reason": self.rejection[1]}
            ),
        }


def verify_model(graph, engine, genset, radius, max_vertices=DEFAULT_MAX_VERTICES):
    """Is the graph a perfect radius-r local model of Cay(engine, S)?

    Accepts iff the ball at every vertex is rooted-isomorphic to the ball
    around the identity.  Connectivity is reported, never required.
    """
    target = cayley_ball(engine, genset, radius, max_vertices)
    target_key = canonical_key(target)
    connected = is_connected(graph)
    class_order = []
    members = {}
    rep_balls = {}
    for v in range(graph.vertex_count):
        ball = finite_ball(graph, v, radius)
        key = canonical_key(ball)
        if key not in members:
            members[key] = []
            class_order.append(key)
            rep_balls[key] = (v, ball)
        members[key].append(v)
    classes = []
    for key in class_order:
        rep, ball = rep_balls[key]
        if key != target_key:
            return ModelVerdict(
                accepted=False,
                radius=radius,
                connected=connected,
                vertex_count=graph.vertex_count,
                classes=tuple(classes),
                rejection=(
                    rep,
                    f"ball at vertex {rep} is not rooted-isomorphic to the "
                    f"radius-{radius} ball at the identity",
                ),
            )
        witness = first_rooted_isomorphism(ball, target)
        assert witness is not None, "canonical keys agree but no witness"
        classes.append(ModelClass(key, rep, witness))
    return ModelVerdict(
        accepted=True,
        radius=radius,
        connected=connected,
        vertex_count=graph.vertex_count,
        classes=tuple(classes),
    )


@dataclass(frozen=True)
class FixingRadiusReport:
    """Scan result: automorphism counts by radius and moving witnesses.

    r0 is None when no radius up to the bound works (an honest
    non-refutation: the scanned prefix says nothing beyond the bound).
    moving_witnesses maps each failed radius to one automorphism mapping
    that moves a vertex of the inner radius-r ball.
    """

    r: int
    bound: int
    r0: int = None
    automorphism_counts: tuple = ()
    moving_witnesses: tuple = ()  # ((radius, mapping), ...)

    @property
    def found(self):
        return self.r0 is not None

    def to_jsonable(self):
        return {
            "schema": 1,
            "r": self.r,
            "bound": self.bound,
            "r0": self.r0,
            "automorphism_counts": [
                {"radius": rad, "count": count}
                for rad, count in self.automorphism_counts
            ],
            "moving_witnesses": [
                {"radius": rad, "mapping": list(mapping)}
                for rad, mapping in self.moving_witnesses
            ],
        }


def fixing_radius(engine, genset, r, bound, max_vertices=DEFAULT_MAX_VERTICES):
    """Least r0 in [r, bound] such that every rooted automorphism of the
    radius-r0 ball fixes the radius-r ball pointwise; scans upward."""
    if bound < r:
        raise ValueError("bound must be at least r")
    counts = []
    witnesses = []
    for rho in range(r, bound + 1):
        ball = cayley_ball(engine, genset, rho, max_vertices)
        # Orbit-stabilizer count: the group is never listed out, so balls
        # whose leaves contribute factorially many automorphisms stay cheap.
        count, moving = automorphism_scan(ball, r)
        counts.append((rho, count))
        if moving is None:
            return FixingRadiusReport(
                r=r,
                bound=bound,
                r0=rho,
                automorphism_counts=tuple(counts),
                moving_witnesses=tuple(witnesses),
            )
        witnesses.append((rho, moving.mapping))
    return FixingRadiusReport(
        r=r,
        bound=bound,
        r0=None,
        automorphism_counts=tuple(counts),
        moving_witnesses=tuple(witnesses),
    )
