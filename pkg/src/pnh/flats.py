"""Flats of the root arrangement and building sets of flats.

A *flat* is a subspace spanned by roots, represented by the bitset of the
positive roots it contains together with its dimension.  The bitset is
closed: beta lies in the span iff its bit is set, so subspace containment
is bitset containment and all the combinatorics below run on integers.

A *building set* is a reflection-stable family of flats, spanning the
whole space, such that every root-spanned subspace decomposes as the
direct sum of the maximal family members it contains.  The two standard
examples are the minimal one (irreducible flats plus the full space) and
the maximal one (all flats).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    MissingV,
    NotBuilding,
    NotWInvariant,
    TooManyFlats,
)
from .linalg import Echelon, solve_columns
from .roots import RootSystem, diagram_automorphisms

DEFAULT_FLAT_CAP = 2**20


def _iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True, order=True)
class Flat:
    """A root-spanned subspace: (dimension, bitset of positive roots)."""

    dim: int
    bits: int

    def indices(self) -> Iterator[int]:
        return _iter_bits(self.bits)

    def contains(self, other: "Flat") -> bool:
        return other.bits & ~self.bits == 0

    def describe(self, rs: RootSystem) -> str:
        names = ",".join(str(i) for i in self.indices())
        return f"<dim {self.dim}: roots {names}>"


def flat_closure(rs: RootSystem, root_indices: Iterable[int]) -> Flat:
    """Smallest flat containing the given positive roots."""
    ech = Echelon()
    for i in root_indices:
        ech.add(rs.positive_roots[i])
    bits = 0
    for j, root in enumerate(rs.positive_roots):
        if ech.contains(root):
            bits |= 1 << j
    return Flat(ech.rank, bits)


def flat_span_echelon(rs: RootSystem, flat: Flat) -> Echelon:
    ech = Echelon()
    for i in flat.indices():
        if ech.add(rs.positive_roots[i]):
            if ech.rank == flat.dim:
                break
    return ech


def flat_sum(rs: RootSystem, a: Flat, b: Flat) -> Flat:
    return flat_closure(rs, _iter_bits(a.bits | b.bits))


def full_flat(rs: RootSystem) -> Flat:
    return Flat(rs.rank, (1 << len(rs.positive_roots)) - 1)


def line_flats(rs: RootSystem) -> list[Flat]:
    return [Flat(1, 1 << i) for i in range(len(rs.positive_roots))]


def irreducible_components(rs: RootSystem, flat: Flat) -> list[Flat]:
    """Orthogonal irreducible pieces of the root system inside ``flat``."""
    idx = list(flat.indices())
    remaining = set(idx)
    components = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            gri = rs.positive_roots[i]
            for j in list(remaining - comp):
                if rs.inner(gri, rs.positive_roots[j]) != 0:
                    comp.add(j)
                    frontier.append(j)
        remaining -= comp
        bits = 0
        for i in comp:
            bits |= 1 << i
        dim = Echelon()
        for i in comp:
            dim.add(rs.positive_roots[i])
        components.append(Flat(dim.rank, bits))
    return sorted(components)


def is_irreducible(rs: RootSystem, flat: Flat) -> bool:
    return len(irreducible_components(rs, flat)) == 1


def all_flats(rs: RootSystem, cap: int = DEFAULT_FLAT_CAP) -> list[Flat]:
    """Every root-spanned subspace, by closure of joins with lines."""
    lines = line_flats(rs)
    found: dict[int, Flat] = {f.bits: f for f in lines}
    frontier = list(lines)
    closure_cache: dict[int, Flat] = {}
    while frontier:
        new = []
        for flat in frontier:
            for line in lines:
                if line.bits & flat.bits:
                    continue
                union = flat.bits | line.bits
                joined = closure_cache.get(union)
                if joined is None:
                    joined = flat_closure(rs, _iter_bits(union))
                    closure_cache[union] = joined
                if joined.bits not in found:
                    found[joined.bits] = joined
                    new.append(joined)
                    if len(found) > cap:
                        raise TooManyFlats(f"flat enumeration passed cap {cap}")
        frontier = new
    return sorted(found.values())


def fundamental_flats(rs: RootSystem) -> list[Flat]:
    """Flats spanned by subsets of the simple roots (2^n - 1 of them)."""
    n = rs.rank
    out = []
    for mask in range(1, 1 << n):
        out.append(flat_closure(rs, _iter_bits(mask)))
    return sorted(out)


def simple_index_set(rs: RootSystem, flat: Flat) -> int | None:
    """Bitmask of simple roots inside ``flat``; None when not spanned by them."""
    mask = 0
    count = 0
    for i in range(rs.rank):
        if flat.bits >> i & 1:
            mask |= 1 << i
            count += 1
    return mask if count == flat.dim else None


class BuildingSet:
    """A validated building set of flats over a root system."""

    def __init__(self, rs: RootSystem, flats: Iterable[Flat], kind: str = "custom"):
        self.rs = rs
        self.flats = frozenset(flats)
        self.kind = kind
        self.V = full_flat(rs)
        self.sorted_flats = tuple(sorted(self.flats))
        self.fund = tuple(
            f for f in self.sorted_flats if simple_index_set(rs, f) is not None
        )
        self.fund_index_sets = {
            f: simple_index_set(rs, f) for f in self.fund
        }
        self._fund_by_indices = {v: k for k, v in self.fund_index_sets.items()}
        self._decomp_cache: dict[Flat, tuple[Flat, ...]] = {}
        self._fund_decomp_cache: dict[int, tuple[Flat, ...]] = {}
        self.preserved_diagram_automorphisms: tuple = ()
        self.parent_root_of: tuple[int, ...] | None = None
        self.sub_index_of: dict[int, int] | None = None
        self.parent_flat: Flat | None = None

    def __contains__(self, flat: Flat) -> bool:
        return flat in self.flats

    def fund_flat_for_indices(self, mask: int) -> Flat | None:
        return self._fund_by_indices.get(mask)

    def g_decomposition(self, flat: Flat) -> tuple[Flat, ...]:
        """Maximal members contained in ``flat`` (the defining decomposition)."""
        got = self._decomp_cache.get(flat)
        if got is None:
            inside = [g for g in self.sorted_flats if flat.contains(g)]
            maximal = [
                g
                for g in inside
                if not any(h is not g and h.contains(g) for h in inside)
            ]
            got = tuple(sorted(maximal))
            self._decomp_cache[flat] = got
        return got

    def fund_decomposition(self, index_mask: int) -> tuple[Flat, ...]:
        """Maximal fundamental members inside the simple-index set ``index_mask``."""
        got = self._fund_decomp_cache.get(index_mask)
        if got is None:
            inside = [
                (f, m)
                for f, m in self.fund_index_sets.items()
                if m & ~index_mask == 0
            ]
            maximal = sorted(
                f
                for f, m in inside
                if not any(g is not f and m & ~mg == 0 for g, mg in inside)
            )
            covered = 0
            for f in maximal:
                mask = self.fund_index_sets[f]
                if covered & mask:
                    raise NotBuilding(
                        "fundamental decomposition members overlap"
                    )
                covered |= mask
            if covered != index_mask:
                raise NotBuilding("fundamental decomposition does not cover")
            got = tuple(maximal)
            self._fund_decomp_cache[index_mask] = got
        return got

    def __repr__(self):
        return (
            f"BuildingSet({self.kind}, {len(self.flats)} flats,"
            f" {len(self.fund)} fundamental)"
        )


def _check_w_invariance(rs: RootSystem, weyl, flats: frozenset[Flat]) -> None:
    """Stability under the group; checking the generators suffices."""
    bits_set = {f.bits for f in flats}
    for g in weyl.generator_ids:
        perm = weyl.root_permutation(g)
        for f in flats:
            image = 0
            for i in f.indices():
                image |= 1 << perm[i]
            if image not in bits_set:
                raise NotWInvariant(
                    f"reflection {g} moves flat {f.describe(rs)} outside the family"
                )


def validate_building_set(
    rs: RootSystem,
    flats: Iterable[Flat],
    weyl=None,
    cap: int = DEFAULT_FLAT_CAP,
    kind: str = "custom",
) -> BuildingSet:
    """Check the building-set axioms and return the validated family.

    Raises MissingV / NotBuilding / NotWInvariant with a witness message.
    As a courtesy the returned object records which diagram symmetries
    preserve the family.
    """
    family = frozenset(flats)
    bs = BuildingSet(rs, family, kind=kind)
    if bs.V not in family:
        raise MissingV("building set must contain the whole space")
    for line in line_flats(rs):
        if line not in family:
            raise NotBuilding(f"missing line flat {line.describe(rs)}")
    if weyl is not None:
        _check_w_invariance(rs, weyl, family)
    for flat in all_flats(rs, cap=cap):
        parts = bs.g_decomposition(flat)
        if sum(p.dim for p in parts) != flat.dim:
            raise NotBuilding(
                f"maximal members of {flat.describe(rs)} do not sum directly"
            )
        union = 0
        for p in parts:
            union |= p.bits
        if flat_closure(rs, _iter_bits(union)).bits != flat.bits:
            raise NotBuilding(
                f"maximal members of {flat.describe(rs)} do not span it"
            )
    preserved = []
    for auto in diagram_automorphisms(rs):
        root_map = {}
        ok = True
        for f in family:
            image = 0
            for i in f.indices():
                img = root_map.get(i)
                if img is None:
                    vec = tuple(
                        sum(auto.matrix[r][c] * rs.positive_roots[i][c]
                            for c in range(rs.rank))
                        for r in range(rs.rank)
                    )
                    img = rs.root_index[vec]
                    root_map[i] = img
                image |= 1 << img
            if Flat(f.dim, image) not in family:
                ok = False
                break
        if ok:
            preserved.append(auto)
    bs.preserved_diagram_automorphisms = tuple(preserved)
    return bs


def build_maximal(rs: RootSystem, weyl=None, cap: int = DEFAULT_FLAT_CAP) -> BuildingSet:
    return validate_building_set(rs, all_flats(rs, cap=cap), weyl=weyl, kind="maximal")


def build_minimal(rs: RootSystem, weyl=None, cap: int = DEFAULT_FLAT_CAP) -> BuildingSet:
    """Irreducible flats, with the whole space adjoined when reducible."""
    flats = [f for f in all_flats(rs, cap=cap) if is_irreducible(rs, f)]
    v = full_flat(rs)
    if v not in flats:
        flats.append(v)
    return validate_building_set(rs, flats, weyl=weyl, kind="minimal")


def interval_building_set(n: int) -> BuildingSet:
    """Intervals of coordinate lines over the rank-n Boolean arrangement.

    The underlying root system is the n-fold product of rank-1 systems, so
    every subset of lines spans a flat; the family of interval subsets
    {i, i+1, ..., j} (plus the whole space) is a building set whose nested
    complex is the associahedron's.
    """
    rs = RootSystem.from_components(tuple([("A", 1)] * n))
    flats = []
    for lo in range(n):
        for hi in range(lo, n):
            mask = ((1 << (hi - lo + 1)) - 1) << lo
            flats.append(flat_closure(rs, _iter_bits(mask)))
    v = full_flat(rs)
    if v not in flats:
        flats.append(v)
    return validate_building_set(rs, flats, kind="interval")


def restricted_building_set(building: BuildingSet, flat: Flat) -> BuildingSet:
    """The induced building set on the root system cut out by ``flat``.

    Pre: ``flat`` is a member.  The returned building set lives over a new
    RootSystem whose simple roots are the indecomposable positive roots of
    the sub-root-system; the attribute ``parent_root_of`` maps its positive
    root indices back to the ambient ones.
    """
    if flat not in building:
        raise NotBuilding("restriction flat must belong to the building set")
    rs = building.rs
    sub = _sub_root_system(rs, flat)
    members = []
    for g in building.sorted_flats:
        if flat.contains(g):
            bits = 0
            for i in g.indices():
                bits |= 1 << sub.sub_index_of[i]
            members.append(Flat(g.dim, bits))
    out = validate_building_set(sub.system, members, kind=f"{building.kind}-restricted")
    out.parent_root_of = sub.parent_root_of
    out.sub_index_of = dict(sub.sub_index_of)
    out.parent_flat = flat
    return out


@dataclass
class SubRootSystem:
    system: RootSystem
    parent_root_of: tuple[int, ...]
    sub_index_of: dict[int, int]
    parent_simple_roots: tuple[int, ...]


def _sub_root_system(rs: RootSystem, flat: Flat) -> SubRootSystem:
    inside = sorted(flat.indices())
    coord_set = {rs.positive_roots[i] for i in inside}
    base = []
    for i in inside:
        root = rs.positive_roots[i]
        decomposable = False
        for j in inside:
            other = rs.positive_roots[j]
            residue = tuple(a - b for a, b in zip(root, other))
            if any(residue) and residue in coord_set:
                decomposable = True
                break
        if not decomposable:
            base.append(i)
    if len(base) != flat.dim:
        raise NotBuilding(
            f"found {len(base)} indecomposable roots in a dim-{flat.dim} flat"
        )
    gram = tuple(
        tuple(rs.inner(rs.positive_roots[i], rs.positive_roots[j]) for j in base)
        for i in base
    )
    sub = RootSystem.from_gram(gram)
    if len(sub.positive_roots) != len(inside):
        raise NotBuilding("sub-root-system size mismatch")

    # Express each ambient root of the flat in the sub-simple basis to get
    # the index correspondence.  The basis matrix is n x dim; restrict to
    # dim independent coordinate rows to solve.
    basis_cols = tuple(zip(*(rs.positive_roots[i] for i in base)))
    ech_rows: list[int] = []
    ech = Echelon()
    for r in range(rs.rank):
        if ech.add(tuple(basis_cols[r])):
            ech_rows.append(r)
    square = tuple(tuple(basis_cols[r]) for r in ech_rows)
    parent_root_of = [0] * len(inside)
    sub_index_of: dict[int, int] = {}
    targets = [
        tuple(rs.positive_roots[i][r] for r in ech_rows) for i in inside
    ]
    coords = solve_columns(square, targets)
    for i, c in zip(inside, coords):
        key = tuple(c)
        if any(x.denominator != 1 for x in key):
            raise NotBuilding("ambient root has non-integral sub-coordinates")
        key = tuple(int(x) for x in key)
        sub_idx = sub.root_index[key]
        parent_root_of[sub_idx] = i
        sub_index_of[i] = sub_idx
    return SubRootSystem(sub, tuple(parent_root_of), sub_index_of, tuple(base))
