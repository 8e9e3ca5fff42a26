"""Defining half-spaces of a permutonestohedron.

For a fundamental flat A, ``pi`` is the half-sum of the positive roots
lying in A and ``delta_perp = delta - pi`` is the orthogonal projection of
delta away from A.  The polytope is cut out, inside the chamber fan, by

* (x, delta)        <= a                      (one per chamber),
* (x, delta_perp_A) <= a - eps_{dim A}        for fundamental members A,
* (x, delta_perp_B) <= a - sum eps_{dim A_i}  for fundamental non-members B,

the last with A_1..A_k the maximal members inside B (pairwise orthogonal),
and delta_perp_B = delta - pi_{A_1} - ... - pi_{A_k}; all images under the
reflection group.  The positive list eps_1 < ... < eps_n = a must grow
fast enough relative to the ratio table below for the construction to
close up; ``suitable_list`` builds such a list and
``verify_epsilon_lemma`` checks the required inequalities exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LemmaViolated, NotBuilding, VerificationFailed
from .flats import BuildingSet, Flat, fundamental_flats
from .linalg import Vec, primitive_vector, vsub
from .weyl import WeylGroup


@dataclass(frozen=True)
class FlatData:
    """Half-sum of the roots of a flat and the complementary part of delta."""

    flat: Flat
    pi: Vec
    delta_perp: Vec


def flat_data(rs, flat: Flat, building: BuildingSet | None = None) -> FlatData:
    """Exact pi and delta_perp for a fundamental flat (or the whole space).

    For the whole space the convention is pi = delta_perp = delta.  The
    computed data is checked: delta_perp vanishes against every root of the
    flat, and its weight-basis coefficients off the flat's simple indices
    are >= 1.
    """
    n = rs.rank
    half = Fraction(1, 2)
    pi = tuple(
        sum(rs.positive_roots[i][c] for i in flat.indices()) * half
        for c in range(n)
    )
    if flat.dim == n:
        data = FlatData(flat, pi, pi)
        if pi != rs.delta:
            raise VerificationFailed("half-sum over the whole space is not delta")
        return data
    dperp = vsub(rs.delta, pi)
    for i in flat.indices():
        if rs.inner(dperp, rs.positive_roots[i]) != 0:
            raise VerificationFailed(
                f"delta_perp not orthogonal to flat {flat.describe(rs)}"
            )
    coeffs = rs.omega_coefficients(dperp)
    simple_mask = _simple_mask(rs, flat)
    if simple_mask is not None:
        for s in range(n):
            inside = simple_mask >> s & 1
            if inside and coeffs[s] != 0:
                raise VerificationFailed("delta_perp has weight on its own flat")
            if not inside and coeffs[s] < 1:
                raise VerificationFailed(
                    "delta_perp weight-coefficient below 1 off the flat"
                )
    return FlatData(flat, pi, dperp)


def _simple_mask(rs, flat: Flat) -> int | None:
    mask = 0
    count = 0
    for i in range(rs.rank):
        if flat.bits >> i & 1:
            mask |= 1 << i
            count += 1
    return mask if count == flat.dim else None


class RatioTable:
    """Max/min coefficient ratios between nested fundamental members.

    For fundamental members B strictly inside A, the entry for (A, B) is
    max simple-root coefficient of pi_A over min (support) coefficient of
    pi_B; entries aggregate to dimension pairs by maximum.  Missing
    dimension pairs default to 1.
    """

    def __init__(self, per_pair: dict, per_dim: dict):
        self.per_pair = per_pair
        self.per_dim = per_dim

    def ratio(self, dim_a: int, dim_b: int) -> Fraction:
        return self.per_dim.get((dim_a, dim_b), Fraction(1))


def ratio_table(building: BuildingSet, data: dict[Flat, FlatData] | None = None) -> RatioTable:
    data = data or {f: flat_data(building.rs, f, building) for f in building.fund}
    stats: dict[Flat, tuple[Fraction, Fraction]] = {}
    for f in building.fund:
        support = [c for c in data[f].pi if c != 0]
        stats[f] = (max(data[f].pi), min(support))
    per_pair = {}
    per_dim: dict[tuple[int, int], Fraction] = {}
    for a in building.fund:
        for b in building.fund:
            if b.dim >= a.dim or not a.contains(b) or a == b:
                continue
            r = stats[a][0] / stats[b][1]
            per_pair[(a, b)] = r
            key = (a.dim, b.dim)
            if key not in per_dim or per_dim[key] < r:
                per_dim[key] = r
    return RatioTable(per_pair, per_dim)


@dataclass(frozen=True)
class SuitableList:
    """A strictly increasing positive list eps with eps_n = a."""

    a: Fraction
    eps: tuple[Fraction, ...]

    def for_dim(self, d: int) -> Fraction:
        return self.eps[d - 1]


def check_increasing(table: RatioTable, eps, a) -> list[str]:
    """Violations of the growth conditions eps_i > 2 R_(i,i-1) eps_(i-1)."""
    problems = []
    n = len(eps)
    if any(e <= 0 for e in eps):
        problems.append("entries must be positive")
    if eps[-1] != a:
        problems.append(f"last entry {eps[-1]} != a = {a}")
    for i in range(1, n):
        bound = 2 * table.ratio(i + 1, i) * eps[i - 1]
        if eps[i] <= bound:
            problems.append(
                f"eps_{i + 1} = {eps[i]} must exceed 2*R({i + 1},{i})*eps_{i} = {bound}"
            )
    return problems


def suitable_list(building: BuildingSet, a=Fraction(1)) -> SuitableList:
    """Deterministic suitable list: each entry just past its lower bound.

    Integer seeds t_1 = 1, t_i = (2 R_(i,i-1) + 1) t_(i-1) are rescaled so
    the last entry is exactly ``a``.
    """
    a = Fraction(a)
    if a <= 0:
        raise ValueError("scale a must be positive")
    table = ratio_table(building)
    n = building.rs.rank
    seeds = [Fraction(1)]
    for i in range(2, n + 1):
        seeds.append((2 * table.ratio(i, i - 1) + 1) * seeds[-1])
    eps = tuple(a * t / seeds[-1] for t in seeds)
    problems = check_increasing(table, eps, a)
    if problems:
        raise LemmaViolated("; ".join(problems))
    return SuitableList(a, eps)


@dataclass
class LemmaReport:
    """Outcome of the exhaustive separation-inequality check."""

    checked: int
    violations: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.violations


def _decompositions(building: BuildingSet, target_mask: int):
    """Non-redundant families of >= 2 proper fundamental members summing to
    the fundamental flat with simple-index set ``target_mask``."""
    candidates = [
        (f, m)
        for f, m in building.fund_index_sets.items()
        if m & ~target_mask == 0 and m != target_mask
    ]
    candidates.sort(key=lambda fm: fm[0])
    results = []

    def extend(start: int, chosen: list, covered: int):
        if covered == target_mask and len(chosen) >= 2:
            # non-redundant: every member keeps an index private to it
            ok = True
            for f, m in chosen:
                others = 0
                for g, mg in chosen:
                    if g is not f:
                        others |= mg
                if m & ~others == 0:
                    ok = False
                    break
            if ok:
                results.append(tuple(f for f, _ in chosen))
        for k in range(start, len(candidates)):
            f, m = candidates[k]
            if m & ~covered == 0:
                continue  # adds nothing new: redundant forever
            extend(k + 1, chosen + [(f, m)], covered | m)

    extend(0, [], 0)
    return results


def verify_epsilon_lemma(
    building: BuildingSet, suitable: SuitableList, raise_on_violation: bool = True
) -> LemmaReport:
    """For every fundamental member B and every non-redundant expression of
    B as a sum of >= 2 proper fundamental members B_i, require

        eps_{dim B} > sum_i R(dim B, dim B_i) * eps_{dim B_i}.
    """
    table = ratio_table(building)
    checked = 0
    violations = []
    for b in building.fund:
        mask = building.fund_index_sets[b]
        for parts in _decompositions(building, mask):
            checked += 1
            bound = sum(
                table.ratio(b.dim, p.dim) * suitable.for_dim(p.dim) for p in parts
            )
            if suitable.for_dim(b.dim) <= bound:
                violations.append((b, parts, suitable.for_dim(b.dim), bound))
    report = LemmaReport(checked, violations)
    if violations and raise_on_violation:
        b, parts, eps_b, bound = violations[0]
        raise LemmaViolated(
            f"eps_{b.dim} = {eps_b} <= {bound} for a sum of {len(parts)} members",
            witness=violations[0],
        )
    return report


@dataclass(frozen=True)
class HalfSpace:
    """One defining inequality (x, normal) <= offset.

    ``kind`` is "chamber" for images of the delta inequality, "member" for
    images of a fundamental-member inequality, "nonmember" for images of a
    fundamental non-member inequality.  ``flat`` is the fundamental flat of
    origin and ``sigma_id`` a group element mapping the fundamental
    inequality to this one (the least such id).
    """

    normal: Vec
    offset: Fraction
    kind: str
    flat: Flat
    sigma_id: int

    def key(self):
        prim = primitive_vector(self.normal)
        scale = None
        for p, x in zip(prim, self.normal):
            if x != 0:
                scale = Fraction(p) / x
                break
        return prim, self.offset * scale

    def evaluate(self, rs, point: Vec) -> Fraction:
        return rs.inner(self.normal, point)


def fundamental_halfspaces(
    building: BuildingSet,
    suitable: SuitableList,
    data: dict[Flat, FlatData] | None = None,
) -> list[HalfSpace]:
    """The defining inequalities attached to the fundamental chamber."""
    rs = building.rs
    data = data or {f: flat_data(rs, f, building) for f in building.fund}
    out = [
        HalfSpace(rs.delta, suitable.a, "chamber", building.V, 0)
    ]
    fund_members = set(building.fund)
    for f in building.fund:
        if f == building.V:
            continue
        hs = HalfSpace(
            data[f].delta_perp,
            suitable.a - suitable.for_dim(f.dim),
            "member",
            f,
            0,
        )
        out.append(hs)
    for b in fundamental_flats(rs):
        if b in fund_members:
            continue
        mask = _simple_mask(rs, b)
        parts = building.fund_decomposition(mask)
        for p, q in _pairs(parts):
            if not orthogonal_flats(rs, p, q):
                raise NotBuilding("decomposition members are not pairwise orthogonal")
        normal = rs.delta
        offset = suitable.a
        for p in parts:
            pd = data.get(p)
            if pd is None:
                pd = flat_data(rs, p, building)
                data[p] = pd
            normal = vsub(normal, pd.pi)
            offset -= suitable.for_dim(p.dim)
        coeffs = rs.omega_coefficients(normal)
        for s in range(rs.rank):
            inside = mask >> s & 1
            if inside and coeffs[s] != 0:
                raise VerificationFailed("nonmember normal has weight on its flat")
            if not inside and coeffs[s] <= 0:
                raise VerificationFailed(
                    "nonmember normal has nonpositive weight off its flat"
                )
        if offset <= 0:
            raise VerificationFailed(
                f"nonpositive offset {offset} for nonmember {b.describe(rs)}"
            )
        out.append(HalfSpace(normal, offset, "nonmember", b, 0))
    return out


def _pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def orthogonal_flats(rs, a: Flat, b: Flat) -> bool:
    for i in a.indices():
        ra = rs.positive_roots[i]
        for j in b.indices():
            if rs.inner(ra, rs.positive_roots[j]) != 0:
                return False
    return True


def all_halfspaces(
    building: BuildingSet,
    suitable: SuitableList,
    weyl: WeylGroup,
    parabolic_order=None,
) -> list[HalfSpace]:
    """W-orbit of the fundamental inequalities, deduplicated.

    The dedup key is the primitive integer rescaling of (normal, offset);
    every offset is strictly positive so only positive rescalings occur and
    the key is canonical.  When ``parabolic_order`` (a callable
    flat-tuple -> subgroup order) is supplied, the deduplicated count is
    checked against the orbit-stabilizer prediction.
    """
    fundamental = fundamental_halfspaces(building, suitable)
    seen: dict = {}
    out: list[HalfSpace] = []
    for base in fundamental:
        if base.offset <= 0:
            raise VerificationFailed(f"nonpositive offset in {base.kind} inequality")
        for sigma in range(weyl.order):
            normal = weyl.act_vec(sigma, base.normal)
            hs = HalfSpace(normal, base.offset, base.kind, base.flat, sigma)
            key = hs.key()
            if key not in seen:
                seen[key] = hs
                out.append(hs)
    if parabolic_order is not None:
        expected = 0
        for base in fundamental:
            if base.kind == "chamber":
                stab = 1
            elif base.kind == "member":
                stab = parabolic_order((base.flat,))
            else:
                mask = _simple_mask(building.rs, base.flat)
                stab = parabolic_order(building.fund_decomposition(mask))
            expected += weyl.order // stab
        if expected != len(out):
            raise VerificationFailed(
                f"halfspace count {len(out)} != orbit-stabilizer prediction {expected}"
            )
    return sorted(out, key=lambda h: h.key())
