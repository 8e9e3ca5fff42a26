"""Vertices of the permutonestohedron and geometric verification.

Each maximal nested set S determines one vertex of the chamber nestohedron
as the unique solution of (x, delta) = a together with
(x, delta_perp_A) = a - eps_{dim A} for the proper members A of S; the
full vertex set is the reflection-group orbit of these points.  The
verifier then replays every defining inequality against every vertex and
matches the observed equalities against the predicted pattern:

* an image tau of the chamber inequality is tight on sigma v_S iff
  sigma = tau;
* an image tau of the member inequality of A is tight on sigma v_S iff
  A is in S and tau^-1 sigma fixes A's parabolic;
* an image tau of a non-member inequality of B is tight on sigma v_S iff
  every decomposition member of B is in S and tau^-1 sigma lies in the
  product of their parabolics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyFacet, NotInChamber, VerificationFailed
from .flats import BuildingSet, Flat
from .halfspaces import (
    FlatData,
    HalfSpace,
    SuitableList,
    flat_data,
    _simple_mask,
)
from .linalg import Vec, mat_vec, rank, solve_linear_system
from .nested import NestedSet, enumerate_maximal_nested_sets, enumerate_nested_sets
from .weyl import Subgroup, WeylGroup, parabolic_subgroup, subgroup_product

FULL_CHECK_LIMIT = 10_000_000


@dataclass(frozen=True)
class Vertex:
    point: Vec
    sigma_id: int
    nested: NestedSet


@dataclass
class VRep:
    """All vertices, one per (group element, maximal nested set) pair."""

    vertices: tuple[Vertex, ...]
    max_nested: tuple[NestedSet, ...]
    coincidences: tuple[tuple[int, int], ...]

    def index_of(self, sigma_id: int, nested: NestedSet) -> int:
        return self._index[(sigma_id, nested)]

    def __post_init__(self):
        self._index = {
            (v.sigma_id, v.nested): i for i, v in enumerate(self.vertices)
        }


def vertex(
    rs,
    nested: NestedSet,
    suitable: SuitableList,
    data: dict[Flat, FlatData] | None = None,
    building: BuildingSet | None = None,
) -> Vec:
    """The chamber vertex attached to a maximal nested set.

    Raises NotInChamber when the solution violates a strict chamber
    inequality (which signals an unsuitable eps list, not a bug here).
    """
    n = rs.rank
    if len(nested) != n:
        raise ValueError("vertex requires a maximal nested set")
    data = data if data is not None else {}
    rows = [mat_vec(rs.gram, rs.delta)]
    rhs = [suitable.a]
    for f in nested:
        if f.dim == n:
            continue
        fd = data.get(f)
        if fd is None:
            fd = flat_data(rs, f, building)
            data[f] = fd
        rows.append(mat_vec(rs.gram, fd.delta_perp))
        rhs.append(suitable.a - suitable.for_dim(f.dim))
    point = solve_linear_system(tuple(rows), tuple(rhs))
    gx = mat_vec(rs.gram, point)
    if any(c <= 0 for c in gx):
        raise NotInChamber(
            f"vertex for {tuple(f.dim for f in nested)} leaves the open chamber"
        )
    return point


def all_vertices(
    building: BuildingSet,
    suitable: SuitableList,
    weyl: WeylGroup,
    data: dict[Flat, FlatData] | None = None,
    require_distinct: bool = True,
) -> VRep:
    """Orbit of the chamber vertices; one entry per (sigma, nested) pair.

    Pairs mapping to the same point are recorded as coincidences; with
    ``require_distinct`` (the default, appropriate for suitable lists) any
    coincidence raises VerificationFailed.
    """
    rs = building.rs
    data = data if data is not None else {}
    max_nested = tuple(enumerate_maximal_nested_sets(building))
    base_points = [vertex(rs, s, suitable, data, building) for s in max_nested]
    vertices = []
    by_point: dict[Vec, int] = {}
    coincidences = []
    for sigma in range(weyl.order):
        for s, p in zip(max_nested, base_points):
            q = weyl.act_vec(sigma, p)
            idx = len(vertices)
            vertices.append(Vertex(q, sigma, s))
            prev = by_point.get(q)
            if prev is None:
                by_point[q] = idx
            else:
                coincidences.append((prev, idx))
    if coincidences and require_distinct:
        raise VerificationFailed(
            f"{len(coincidences)} coinciding vertex pairs; eps list unsuitable?"
        )
    return VRep(tuple(vertices), max_nested, tuple(coincidences))


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int
    details: tuple[str, ...] = ()
    sampled: bool = False
    seed: int | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" [sampled seed={self.seed}]" if self.sampled else ""
        head = f"{status} {self.name}: {self.checked} checks{extra}"
        if self.details:
            head += "\n  " + "\n  ".join(self.details[:10])
        return head


def _equality_predicate(
    weyl: WeylGroup,
    hs: HalfSpace,
    vert: Vertex,
    member_sets: dict,
) -> bool:
    if hs.kind == "chamber":
        return hs.sigma_id == vert.sigma_id
    members, parts = member_sets[hs.flat]
    if any(p not in vert.nested for p in parts):
        return False
    rel = weyl.mul(weyl.inv(hs.sigma_id), vert.sigma_id)
    return rel in members


def verify_hrep_vrep(
    building: BuildingSet,
    weyl: WeylGroup,
    halfspaces: list[HalfSpace],
    vrep: VRep,
    subgroups: dict[Flat, Subgroup],
    limit: int = FULL_CHECK_LIMIT,
    seed: int = 0,
    raise_on_failure: bool = True,
) -> CheckReport:
    """Membership and exact equality pattern for vertices vs inequalities."""
    rs = building.rs
    member_sets = {}
    for hs in halfspaces:
        if hs.flat in member_sets or hs.kind == "chamber":
            continue
        if hs.kind == "member":
            parts = (hs.flat,)
        else:
            parts = building.fund_decomposition(_simple_mask(rs, hs.flat))
        ids = subgroups[hs.flat].members()
        member_sets[hs.flat] = (ids, parts)

    gram_normals = {}
    for hs in halfspaces:
        gram_normals[hs] = mat_vec(rs.gram, hs.normal)

    pairs = len(vrep.vertices) * len(halfspaces)
    sampled = pairs > limit
    if sampled:
        rng = random.Random(seed)
        chosen = [
            (rng.randrange(len(vrep.vertices)), rng.randrange(len(halfspaces)))
            for _ in range(limit)
        ]
    else:
        chosen = None

    failures = []
    checked = 0

    def run_pair(vert: Vertex, hs: HalfSpace):
        nonlocal checked
        checked += 1
        value = sum(a * b for a, b in zip(gram_normals[hs], vert.point))
        expect_tight = _equality_predicate(weyl, hs, vert, member_sets)
        if value > hs.offset:
            failures.append(
                f"vertex (sigma={vert.sigma_id}) violates {hs.kind} inequality "
                f"of {hs.flat.describe(rs)} (sigma={hs.sigma_id}): "
                f"{value} > {hs.offset}"
            )
        elif (value == hs.offset) != expect_tight:
            failures.append(
                f"equality mismatch: vertex (sigma={vert.sigma_id}, dims "
                f"{tuple(f.dim for f in vert.nested)}) vs {hs.kind} of "
                f"{hs.flat.describe(rs)} (sigma={hs.sigma_id}): tight="
                f"{value == hs.offset}, predicted={expect_tight}"
            )

    if chosen is None:
        for vert in vrep.vertices:
            for hs in halfspaces:
                run_pair(vert, hs)
    else:
        for vi, hi in chosen:
            run_pair(vrep.vertices[vi], halfspaces[hi])

    report = CheckReport(
        "vertex/halfspace incidence",
        not failures,
        checked,
        tuple(failures),
        sampled=sampled,
        seed=seed if sampled else None,
    )
    if failures and raise_on_failure:
        raise VerificationFailed(report.line(), report=report)
    return report


def nestohedron_check(
    building: BuildingSet,
    suitable: SuitableList,
    data: dict[Flat, FlatData] | None = None,
    raise_on_failure: bool = True,
) -> CheckReport:
    """Chamber-side characterisation of the nestohedron vertices.

    (a) every maximal nested set's vertex satisfies the strict chamber
    inequalities and (c) is strictly inside every member inequality it is
    not tight on; (b) every size-n independent non-nested family is cut
    off strictly by a predicted inequality.
    """
    rs = building.rs
    n = rs.rank
    data = data if data is not None else {}
    failures = []
    checked = 0

    proper = [f for f in building.fund if f != building.V]
    nested_ok = set(enumerate_maximal_nested_sets(building))

    def datum(f: Flat) -> FlatData:
        fd = data.get(f)
        if fd is None:
            fd = flat_data(rs, f, building)
            data[f] = fd
        return fd

    for s in sorted(nested_ok):
        point = vertex(rs, s, suitable, data, building)
        for f in proper:
            checked += 1
            value = rs.inner(point, datum(f).delta_perp)
            bound = suitable.a - suitable.for_dim(f.dim)
            if f in s:
                if value != bound:
                    failures.append(f"expected tightness fails on {f.describe(rs)}")
            elif value >= bound:
                failures.append(
                    f"vertex of {tuple(g.dim for g in s)} not strictly inside "
                    f"member inequality of {f.describe(rs)}"
                )

    from itertools import combinations

    for combo in combinations(proper, n - 1):
        family = NestedSet(tuple(sorted(combo)) + (building.V,))
        if family in nested_ok:
            continue
        dperps = [datum(f).delta_perp for f in combo] + [rs.delta]
        if rank(dperps) < n:
            continue
        checked += 1
        rows = [mat_vec(rs.gram, rs.delta)]
        rhs = [suitable.a]
        for f in combo:
            rows.append(mat_vec(rs.gram, datum(f).delta_perp))
            rhs.append(suitable.a - suitable.for_dim(f.dim))
        point = solve_linear_system(tuple(rows), tuple(rhs))
        gx = mat_vec(rs.gram, point)
        if any(c <= 0 for c in gx):
            # left the open chamber: the crossed wall's line inequality must
            # exclude the point strictly
            i = next(i for i, c in enumerate(gx) if c <= 0)
            line = building.fund_flat_for_indices(1 << i)
            value = rs.inner(point, datum(line).delta_perp)
            if value <= suitable.a - suitable.for_dim(1):
                failures.append(
                    f"chamber-violating point of {family} not excluded by the "
                    f"line inequality of simple root {i}"
                )
            continue
        witnesses = _sum_witnesses(building, family)
        witness = next((w for w in witnesses if w not in combo), None)
        if witness is None:
            failures.append(
                f"no excluding member outside the family found for non-nested "
                f"dims {tuple(f.dim for f in combo)}"
            )
            continue
        value = rs.inner(point, datum(witness).delta_perp)
        if value <= suitable.a - suitable.for_dim(witness.dim):
            failures.append(
                f"point of non-nested family (dims "
                f"{tuple(f.dim for f in combo)}) not strictly excluded by "
                f"{witness.describe(rs)}"
            )

    report = CheckReport("nestohedron vertex characterisation", not failures, checked, tuple(failures))
    if failures and raise_on_failure:
        raise VerificationFailed(report.line(), report=report)
    return report


def _sum_witnesses(building: BuildingSet, family: NestedSet) -> list[Flat]:
    """Fundamental members expressible as a non-redundant sum of >= 2
    family members (nonempty exactly when the family is not nested)."""
    from itertools import combinations

    proper = [f for f in family if f != building.V]
    masks = [building.fund_index_sets[f] for f in proper]
    found = []
    for size in range(2, len(proper) + 1):
        for combo in combinations(range(len(proper)), size):
            union = 0
            for i in combo:
                union |= masks[i]
            nonredundant = all(
                masks[i] & ~_union_except(masks, combo, i) != 0 for i in combo
            )
            if not nonredundant:
                continue
            hit = building.fund_flat_for_indices(union)
            if hit is not None and all(union != masks[i] for i in combo):
                found.append(hit)
    return found


def _union_except(masks, combo, skip):
    u = 0
    for i in combo:
        if i != skip:
            u |= masks[i]
    return u


def facet_vertex_sets(
    rs, halfspaces: list[HalfSpace], vrep: VRep
) -> list[frozenset[int]]:
    """Vertex ids tight on each inequality; every one must be nonempty."""
    out = []
    for hs in halfspaces:
        gn = mat_vec(rs.gram, hs.normal)
        tight = frozenset(
            i
            for i, v in enumerate(vrep.vertices)
            if sum(a * b for a, b in zip(gn, v.point)) == hs.offset
        )
        if not tight:
            raise EmptyFacet(
                f"{hs.kind} inequality of {hs.flat.describe(rs)} touches no vertex"
            )
        out.append(tight)
    return out


def euler_check(f_vector: tuple[int, ...]) -> bool:
    """Euler relation for the boundary: alternating sum of proper face
    counts equals 1 - (-1)^n."""
    n = len(f_vector) - 1
    total = sum((-1) ** d * f_vector[d] for d in range(n))
    return total == 1 - (-1) ** n
