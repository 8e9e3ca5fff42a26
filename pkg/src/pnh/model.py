"""One-stop construction of a permutonestohedron with lazy verification.

``Permutonestohedron`` glues the layers together: root system, reflection
group, building set, suitable epsilon list, defining inequalities,
vertices, and the face poset.  Everything is computed on first use and
cached; all enumerations are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NotCrossingFacet, VerificationFailed
from .counting import maximal_face_count, minimal_face_count
from .faces import (
    FaceContext,
    FacePair,
    crossing_facet_parts,
    enumerate_faces,
    f_vector,
    face_vertices,
    face_vertices_geometric,
    is_face_leq,
    is_simple,
)
from .flats import (
    BuildingSet,
    Flat,
    all_flats,
    restricted_building_set,
)
from .halfspaces import (
    HalfSpace,
    SuitableList,
    all_halfspaces,
    check_increasing,
    fundamental_halfspaces,
    ratio_table,
    suitable_list,
    verify_epsilon_lemma,
    _simple_mask,
)
from .nested import NestedSet, quotient_building_set
from .polytope import (
    CheckReport,
    VRep,
    all_vertices,
    euler_check,
    facet_vertex_sets,
    nestohedron_check,
    verify_hrep_vrep,
)
from .weyl import (
    DEFAULT_GROUP_CAP,
    WeylGroup,
    canonical_coset_rep,
    enumerate_group,
)


class Permutonestohedron:
    def __init__(
        self,
        building: BuildingSet,
        suitable: SuitableList | None = None,
        a=Fraction(1),
        weyl: WeylGroup | None = None,
        group_cap: int = DEFAULT_GROUP_CAP,
    ):
        self.building = building
        self.rs = building.rs
        self._group_cap = group_cap
        self._weyl = weyl
        self._suitable = suitable
        self._a = Fraction(a)
        self._flat_data: dict[Flat, object] = {}
        self._restricted: dict[Flat, Permutonestohedron] = {}

    # -- layers ---------------------------------------------------------

    @cached_property
    def weyl(self) -> WeylGroup:
        return self._weyl or enumerate_group(self.rs, self._group_cap)

    @cached_property
    def suitable(self) -> SuitableList:
        return self._suitable or suitable_list(self.building, self._a)

    @cached_property
    def face_ctx(self) -> FaceContext:
        return FaceContext(self.building, self.weyl)

    def _parabolic_order(self, flats: tuple[Flat, ...]) -> int:
        order = 1
        for f in flats:
            order *= self.face_ctx.parabolic(f).order
        return order

    @cached_property
    def fundamental_hs(self) -> list[HalfSpace]:
        return fundamental_halfspaces(self.building, self.suitable, self._flat_data)

    @cached_property
    def fundamental_hs_by_mask(self) -> dict[int, HalfSpace]:
        out = {}
        for hs in self.fundamental_hs:
            out[_simple_mask(self.rs, hs.flat)] = hs
        return out

    @cached_property
    def halfspaces(self) -> list[HalfSpace]:
        return all_halfspaces(
            self.building, self.suitable, self.weyl, self._parabolic_order
        )

    @cached_property
    def vrep(self) -> VRep:
        return all_vertices(self.building, self.suitable, self.weyl, self._flat_data)

    @cached_property
    def faces(self) -> list[FacePair]:
        return enumerate_faces(self.face_ctx)

    @cached_property
    def facet_sets(self) -> list[frozenset[int]]:
        return facet_vertex_sets(self.rs, self.halfspaces, self.vrep)

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        return f_vector(self.face_ctx)

    @property
    def vertex_count(self) -> int:
        return len(self.vrep.vertices)

    @property
    def facet_count(self) -> int:
        return len(self.halfspaces)

    # -- predicates -------------------------------------------------------

    @cached_property
    def is_maximal_building(self) -> bool:
        return len(self.building.flats) == len(all_flats(self.rs))

    def simple(self) -> bool:
        return is_simple(self.face_ctx, self.facet_sets, self.vertex_count)

    def face_vertex_ids(self, face: FacePair) -> frozenset[int]:
        return face_vertices(self.face_ctx, face, self.vrep)

    def face_leq(self, p: FacePair, q: FacePair) -> bool:
        return is_face_leq(self.face_ctx, p, q)

    def subgroups_by_flat(self):
        out = {}
        for hs in self.fundamental_hs:
            if hs.kind == "chamber" or hs.flat in out:
                continue
            if hs.kind == "member":
                out[hs.flat] = self.face_ctx.label_subgroup((hs.flat,))
            else:
                parts = self.building.fund_decomposition(
                    _simple_mask(self.rs, hs.flat)
                )
                out[hs.flat] = self.face_ctx.label_subgroup(parts)
        return out

    # -- verification -----------------------------------------------------

    def verify(
        self,
        level: str = "fast",
        seed: int = 0,
        pair_limit: int = 10_000_000,
        raise_on_failure: bool = False,
    ) -> list[CheckReport]:
        """Run the verification battery; 'fast' skips the all-pairs checks."""
        reports: list[CheckReport] = []

        growth = check_increasing(
            ratio_table(self.building), self.suitable.eps, self.suitable.a
        )
        reports.append(
            CheckReport(
                "epsilon growth conditions",
                not growth,
                len(self.suitable.eps),
                tuple(growth),
            )
        )

        lemma = verify_epsilon_lemma(
            self.building, self.suitable, raise_on_violation=False
        )
        reports.append(
            CheckReport(
                "epsilon separation inequalities",
                lemma.passed,
                lemma.checked,
                tuple(
                    f"dim-{b.dim} member vs {tuple(p.dim for p in parts)}: "
                    f"{eps} <= {bound}"
                    for b, parts, eps, bound in lemma.violations[:10]
                ),
            )
        )

        counts_ok = len(self.vrep.vertices) == self.weyl.order * len(
            self.vrep.max_nested
        )
        reports.append(
            CheckReport(
                "vertex count = |W| * maximal nested sets",
                counts_ok and not self.vrep.coincidences,
                len(self.vrep.vertices),
                ()
                if counts_ok and not self.vrep.coincidences
                else (f"{len(self.vrep.coincidences)} coincidences",),
            )
        )

        fvec = self.f_vector
        reports.append(
            CheckReport(
                "f-vector endpoints match geometry",
                fvec[0] == self.vertex_count and fvec[-2] == self.facet_count
                if self.rs.rank >= 1
                else True,
                2,
                (f"f-vector {fvec}",),
            )
        )

        reports.append(
            CheckReport(
                "Euler alternating sum",
                euler_check(fvec),
                1,
                (f"f-vector {fvec}",),
            )
        )

        reports.append(self._formula_report())

        simple = self.simple()
        reports.append(
            CheckReport(
                "simple iff maximal building set",
                simple == self.is_maximal_building,
                1,
                (f"simple={simple}, maximal={self.is_maximal_building}",),
            )
        )

        if level == "full":
            reports.append(
                nestohedron_check(
                    self.building, self.suitable, self._flat_data, False
                )
            )
            reports.append(
                verify_hrep_vrep(
                    self.building,
                    self.weyl,
                    self.halfspaces,
                    self.vrep,
                    self.subgroups_by_flat(),
                    limit=pair_limit,
                    seed=seed,
                    raise_on_failure=False,
                )
            )
            reports.append(self._face_vertex_report())

        if raise_on_failure:
            bad = [r for r in reports if not r.passed]
            if bad:
                raise VerificationFailed(bad[0].line(), report=bad[0])
        return reports

    def _formula_report(self) -> CheckReport:
        if (
            self.rs.components is None
            or len(self.rs.components) != 1
            or self.rs.components[0][0] != "A"
            or self.building.kind not in ("minimal", "maximal")
        ):
            return CheckReport("closed-form face counts (type A only)", True, 0)
        n = self.rs.components[0][1] + 1
        formula = (
            minimal_face_count if self.building.kind == "minimal" else maximal_face_count
        )
        fvec = self.f_vector
        details = []
        ok = True
        for k in range(0, n - 1):
            expected = formula(n, k)
            got = fvec[self.rs.rank - 1 - k]
            details.append(f"codim {k + 1}: formula {expected}, enumerated {got}")
            if expected != got:
                ok = False
        return CheckReport(
            "closed-form face counts (type A only)", ok, n - 1, tuple(details)
        )

    def _face_vertex_report(self) -> CheckReport:
        failures = []
        for face in self.faces:
            combinatorial = self.face_vertex_ids(face)
            geometric = face_vertices_geometric(
                self.face_ctx, face, self.vrep, self.fundamental_hs_by_mask
            )
            if combinatorial != geometric:
                failures.append(
                    f"face {face}: pair description gives {len(combinatorial)} "
                    f"vertices, supporting hyperplanes give {len(geometric)}"
                )
        return CheckReport(
            "face vertices vs supporting hyperplanes",
            not failures,
            len(self.faces),
            tuple(failures[:10]),
        )

    # -- facet factorisation ----------------------------------------------

    def restricted_model(self, flat: Flat) -> "Permutonestohedron":
        got = self._restricted.get(flat)
        if got is None:
            sub_building = restricted_building_set(self.building, flat)
            got = Permutonestohedron(sub_building, group_cap=self._group_cap)
            self._restricted[flat] = got
        return got

    def facet_factorisation(self, face: FacePair) -> "FacetFactorisation":
        parts = crossing_facet_parts(self.face_ctx, face)
        return FacetFactorisation(
            self,
            face,
            parts,
            quotient_building_set(self.building, parts),
            tuple(self.restricted_model(p) for p in parts),
        )


@dataclass
class FacetFactorisation:
    """A crossing facet as (quotient nestohedron) x (sub-permutonestohedra)."""

    model: Permutonestohedron
    facet: FacePair
    parts: tuple[Flat, ...]
    quotient: object
    factors: tuple[Permutonestohedron, ...]

    def expected_vertex_count(self) -> int:
        ground = len(self.quotient.ground)
        top = sum(1 for s in self.quotient.nested_sets() if len(s) == ground)
        for factor in self.factors:
            top *= factor.vertex_count
        return top

    def verify_vertex_count(self) -> CheckReport:
        got = len(self.model.face_vertex_ids(self.facet))
        expected = self.expected_vertex_count()
        return CheckReport(
            "crossing facet vertex count = product of factor counts",
            got == expected,
            1,
            (f"facet {self.facet}: {got} vs {expected}",),
        )

    # -- full lattice isomorphism ----------------------------------------

    def _sub_element(self, factor_index: int, element_id: int) -> int:
        """Map an ambient element of the part's parabolic into the factor group."""
        model = self.model
        sub = self.factors[factor_index]
        simple = sorted(
            i
            for i in range(model.rs.rank)
            if model.building.fund_index_sets[self.parts[factor_index]] >> i & 1
        )
        m = model.weyl.elements[element_id]
        restricted = tuple(tuple(m[r][c] for c in simple) for r in simple)
        return sub.weyl.index[restricted]

    def _sub_flat(self, factor_index: int, flat: Flat) -> Flat:
        sub_building = self.factors[factor_index].building
        bits = 0
        for i in flat.indices():
            bits |= 1 << sub_building.sub_index_of[i]
        return Flat(flat.dim, bits)

    def image_of(self, p: FacePair):
        """Image of an interval face in quotient x factors coordinates."""
        model = self.model
        weyl = model.weyl
        h = weyl.mul(weyl.inv(self.facet.rep), p.rep)
        facet_sub = model.face_ctx.label_subgroup(tuple(sorted(self.parts)))
        try:
            at = facet_sub.member_ids.index(h)
        except ValueError:
            raise VerificationFailed("interval face coset is not inside the facet")
        components = facet_sub.factorization[at]

        removed = 0
        for part in self.parts:
            removed |= model.building.fund_index_sets[part]
        residue = []
        for k in p.nested:
            mask = model.building.fund_index_sets[k] & ~removed
            if mask:
                residue.append(
                    frozenset(i for i in range(model.rs.rank) if mask >> i & 1)
                )
        quotient_nested = frozenset(residue)

        sub_faces = []
        for idx, part in enumerate(self.parts):
            sub = self.factors[idx]
            flats = tuple(
                sorted(
                    self._sub_flat(idx, k)
                    for k in p.nested
                    if part.contains(k)
                )
            )
            labels = tuple(
                sorted(
                    self._sub_flat(idx, k) for k in p.labels if part.contains(k)
                )
            )
            nested = NestedSet(flats)
            base = self._sub_element(idx, components[idx])
            sub_h = sub.face_ctx.label_subgroup(labels)
            rep = canonical_coset_rep(sub.weyl, base, sub_h)
            sub_faces.append(FacePair(rep, nested, labels))
        return quotient_nested, tuple(sub_faces)

    def verify_lattice(self) -> CheckReport:
        """Bijectivity and order isomorphism onto the product poset."""
        model = self.model
        interval = [
            p for p in model.faces if model.face_leq(p, self.facet)
        ]
        images = {}
        failures = []
        for p in interval:
            images[p] = self.image_of(p)

        expected = set()
        from itertools import product as iproduct

        factor_faces = [tuple(f.faces) for f in self.factors]
        for nested in self.quotient.nested_sets():
            for combo in iproduct(*factor_faces):
                expected.add((nested, combo))
        got = set(images.values())
        if got != expected:
            failures.append(
                f"image set has {len(got)} elements, product poset has "
                f"{len(expected)} (interval size {len(interval)})"
            )
        if len(got) != len(interval):
            failures.append("face image map is not injective")

        if not failures:
            for p in interval:
                np_, sp = images[p]
                for q in interval:
                    nq, sq = images[q]
                    lhs = model.face_leq(p, q)
                    rhs = nq <= np_ and all(
                        self.factors[i].face_leq(sp[i], sq[i])
                        for i in range(len(self.factors))
                    )
                    if lhs != rhs:
                        failures.append(
                            f"order mismatch between faces {p} and {q}: "
                            f"interval {lhs}, product {rhs}"
                        )
                        break
                if failures:
                    break

        return CheckReport(
            "crossing facet lattice isomorphism",
            not failures,
            len(interval) ** 2,
            tuple(failures[:5]),
        )


def build_model(
    building: BuildingSet,
    a=Fraction(1),
    epsilons=None,
    weyl=None,
    group_cap: int = DEFAULT_GROUP_CAP,
) -> Permutonestohedron:
    suitable = None
    if epsilons is not None:
        suitable = SuitableList(Fraction(a), tuple(Fraction(e) for e in epsilons))
    return Permutonestohedron(
        building, suitable=suitable, a=a, weyl=weyl, group_cap=group_cap
    )
