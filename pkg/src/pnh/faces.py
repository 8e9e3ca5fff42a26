"""The face poset of a permutonestohedron.

Faces are in bijection with pairs (coset, labelled nested set): a nested
set S containing V, a subset L of its minimal elements carrying the
"reflection" label, and a left coset of the direct product of the
parabolic subgroups of the labelled flats.  The face dimension is
n - |S| + |L|; vertices are the pairs with S maximal and L empty, the
whole polytope is ({V} labelled, the full group).

``is_face_leq`` decides the face order combinatorially:

  p <= q  iff  S_q is a subset of S_p,
              every labelled flat of p lies inside a labelled flat of q,
              and p's coset is contained in q's.

``face_vertices`` computes the vertex set both from the pair description
and from the supporting hyperplanes and insists they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    BuildingNotInvariant,
    EmptyFacet,
    NotCrossingFacet,
    VerificationFailed,
)
from .flats import BuildingSet, Flat
from .halfspaces import HalfSpace, _simple_mask, orthogonal_flats
from .linalg import mat_mul, mat_vec, primitive_vector
from .nested import NestedSet, enumerate_nested_sets
from .polytope import VRep
from .weyl import Subgroup, WeylGroup, left_cosets, parabolic_subgroup, subgroup_product


@dataclass(frozen=True, order=True)
class FacePair:
    """A face: canonical coset representative, nested set, labelled subset."""

    rep: int
    nested: NestedSet
    labels: tuple[Flat, ...]


class FaceContext:
    """Shared machinery for face enumeration and comparison."""

    def __init__(self, building: BuildingSet, weyl: WeylGroup):
        self.building = building
        self.weyl = weyl
        self.nested_sets = tuple(enumerate_nested_sets(building))
        self._parabolic: dict[Flat, Subgroup] = {}
        self._products: dict[tuple[Flat, ...], Subgroup] = {}

    def parabolic(self, flat: Flat) -> Subgroup:
        got = self._parabolic.get(flat)
        if got is None:
            got = parabolic_subgroup(self.weyl, flat)
            self._parabolic[flat] = got
        return got

    def label_subgroup(self, labels: tuple[Flat, ...]) -> Subgroup:
        got = self._products.get(labels)
        if got is None:
            if not labels:
                got = Subgroup((), (self.weyl.identity_id,), ((),))
            else:
                got = subgroup_product(
                    self.weyl, [self.parabolic(f) for f in labels]
                )
            self._products[labels] = got
        return got

    def dimension(self, face: FacePair) -> int:
        return self.building.rs.rank - len(face.nested) + len(face.labels)


def enumerate_faces(
    ctx: FaceContext, dims: set[int] | None = None
) -> list[FacePair]:
    """All faces, deterministically ordered; optionally filtered by dimension."""
    out = []
    n = ctx.building.rs.rank
    for s in ctx.nested_sets:
        minimal = s.minimal_elements()
        for size in range(len(minimal) + 1):
            for labels in combinations(minimal, size):
                dim = n - len(s) + len(labels)
                if dims is not None and dim not in dims:
                    continue
                sub = ctx.label_subgroup(labels)
                for rep in left_cosets(ctx.weyl, sub):
                    out.append(FacePair(rep, s, labels))
    return out


def face_dimension(ctx: FaceContext, face: FacePair) -> int:
    return ctx.dimension(face)


def f_vector(ctx: FaceContext) -> tuple[int, ...]:
    """Face counts by dimension, via coset indices (no enumeration)."""
    n = ctx.building.rs.rank
    counts = [0] * (n + 1)
    for s in ctx.nested_sets:
        minimal = s.minimal_elements()
        for size in range(len(minimal) + 1):
            for labels in combinations(minimal, size):
                dim = n - len(s) + size
                counts[dim] += ctx.weyl.order // ctx.label_subgroup(labels).order
    return tuple(counts)


def is_face_leq(ctx: FaceContext, p: FacePair, q: FacePair) -> bool:
    if not set(q.nested.flats) <= set(p.nested.flats):
        return False
    for a in p.labels:
        if not any(b.contains(a) for b in q.labels):
            return False
    hp = ctx.label_subgroup(p.labels)
    hq = ctx.label_subgroup(q.labels)
    if not hp.members() <= hq.members():
        return False
    rel = ctx.weyl.mul(ctx.weyl.inv(q.rep), p.rep)
    return rel in hq.members()


def face_vertices(ctx: FaceContext, face: FacePair, vrep: VRep) -> frozenset[int]:
    """Vertex ids of a face from the pair description."""
    sub = ctx.label_subgroup(face.labels)
    flats = set(face.nested.flats)
    out = set()
    for t in vrep.max_nested:
        if not flats <= set(t.flats):
            continue
        for h in sub.member_ids:
            out.add(vrep.index_of(ctx.weyl.mul(face.rep, h), t))
    if not out:
        raise EmptyFacet(f"face {face} has no vertices")
    return frozenset(out)


def support_halfspaces(
    ctx: FaceContext,
    face: FacePair,
    by_mask: dict[int, HalfSpace],
) -> list[tuple]:
    """(normal, offset) pairs of hyperplanes whose intersection carries the face.

    ``by_mask`` maps the simple-index mask of each fundamental flat to its
    defining inequality (chamber, member or nonmember).  With labels
    A_1..A_k and D their sum: for k = 0 the chamber hyperplane and the
    hyperplanes of every proper member of S; for k >= 1 the hyperplane of
    D and those of B + D over proper unlabelled B in S.  All are
    translated by the face's coset representative.
    """
    building = ctx.building
    out = []

    def translated(flat_mask: int):
        hs = by_mask[flat_mask]
        normal = ctx.weyl.act_vec(face.rep, hs.normal)
        return (normal, hs.offset)

    full_mask = (1 << building.rs.rank) - 1
    proper = [f for f in face.nested if f != building.V]
    if face.labels == (building.V,):
        return []  # the whole polytope: no supporting hyperplane
    if not face.labels:
        out.append(translated(full_mask))
        for b in proper:
            out.append(translated(building.fund_index_sets[b]))
        return out

    d_mask = 0
    for a in face.labels:
        d_mask |= building.fund_index_sets[a]
    if len(face.labels) >= 2:
        parts = building.fund_decomposition(d_mask)
        if parts != tuple(sorted(face.labels)):
            raise VerificationFailed(
                "label sum decomposes differently from the labels themselves"
            )
    out.append(translated(d_mask))
    for b in proper:
        if b in face.labels:
            continue
        out.append(translated(building.fund_index_sets[b] | d_mask))
    return out


def face_vertices_geometric(
    ctx: FaceContext,
    face: FacePair,
    vrep: VRep,
    by_mask: dict[int, HalfSpace],
) -> frozenset[int]:
    """Vertex ids lying on every supporting hyperplane of the face."""
    rs = ctx.building.rs
    planes = [
        (mat_vec(rs.gram, normal), offset)
        for normal, offset in support_halfspaces(ctx, face, by_mask)
    ]
    out = []
    for i, v in enumerate(vrep.vertices):
        if all(
            sum(a * b for a, b in zip(gn, v.point)) == offset
            for gn, offset in planes
        ):
            out.append(i)
    return frozenset(out)


def is_simple(
    ctx: FaceContext, facet_sets: list[frozenset[int]], vertex_count: int
) -> bool:
    """True when every vertex is on exactly n defining inequalities."""
    n = ctx.building.rs.rank
    per_vertex = [0] * vertex_count
    for tight in facet_sets:
        for i in tight:
            per_vertex[i] += 1
    return all(c == n for c in per_vertex)


@dataclass(frozen=True)
class FacetFactors:
    """Combinatorial factorisation data of a crossing facet."""

    facet: FacePair
    quotient_parts: tuple[Flat, ...]


def crossing_facet_parts(ctx: FaceContext, face: FacePair) -> tuple[Flat, ...]:
    """The labelled flats of a crossing facet (S = {V} + labels, all labelled)."""
    building = ctx.building
    if ctx.dimension(face) != building.rs.rank - 1:
        raise NotCrossingFacet("face is not a facet")
    expected = tuple(sorted(face.labels)) + (building.V,)
    if not face.labels or face.nested.flats != expected:
        raise NotCrossingFacet("facet is a nestohedron facet, not a crossing one")
    for a, b in combinations(face.labels, 2):
        if not orthogonal_flats(building.rs, a, b):
            raise VerificationFailed("crossing facet labels are not orthogonal")
    return tuple(sorted(face.labels))


def aut_action_on_halfspaces(
    building: BuildingSet,
    weyl: WeylGroup,
    halfspaces: list[HalfSpace],
    w_id: int,
    gamma_matrix,
) -> tuple[int, ...]:
    """Permutation induced on the defining inequalities by x -> w(gamma x).

    Raises BuildingNotInvariant when gamma does not preserve the building
    set.  The permutation is computed on exact primitive normal keys, so a
    successful return proves the composite symmetry maps the inequality
    set onto itself.
    """
    rs = building.rs
    n = rs.rank
    gamma_rows = tuple(tuple(row) for row in gamma_matrix)
    flat_bits = {f.bits for f in building.flats}
    root_images = []
    for root in rs.positive_roots:
        img = mat_vec(gamma_rows, root)
        if all(c <= 0 for c in img):
            img = tuple(-c for c in img)
        idx = rs.root_index.get(tuple(img))
        if idx is None:
            raise BuildingNotInvariant("gamma does not permute the positive roots")
        root_images.append(idx)
    for f in building.flats:
        image = 0
        for i in f.indices():
            image |= 1 << root_images[i]
        if image not in flat_bits:
            raise BuildingNotInvariant(
                f"gamma moves {f.describe(rs)} outside the building set"
            )

    matrix = mat_mul(weyl.elements[w_id], gamma_rows)
    key_index = {}
    int_normals = []
    offsets = []
    for i, hs in enumerate(halfspaces):
        prim, off = hs.key()
        key_index[(prim, off)] = i
        int_normals.append(prim)
        offsets.append(off)

    rows = [tuple(row) for row in matrix]
    perm = []
    for prim, off in zip(int_normals, offsets):
        image = tuple(sum(r * v for r, v in zip(row, prim)) for row in rows)
        target = key_index.get((primitive_vector(image), off))
        if target is None:
            raise VerificationFailed(
                "symmetry image of a defining inequality is not a defining inequality"
            )
        perm.append(target)
    if len(set(perm)) != len(perm):
        raise VerificationFailed("symmetry action on inequalities is not injective")
    return tuple(perm)
