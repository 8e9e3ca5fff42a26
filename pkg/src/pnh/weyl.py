"""Finite reflection groups acting in simple-root coordinates.

Group elements are integer matrices (tuples of row tuples) acting on
coordinate columns.  The group is enumerated once by breadth-first closure
over the simple reflections; elements are then referred to by their index
in that enumeration, which is deterministic.  Multiplication goes through
a full table when the group is small and a memoised matrix product
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import GroupTooLarge
from .linalg import Mat, Vec, identity, mat_mul, mat_vec, solve_columns

DEFAULT_GROUP_CAP = 50_000
_TABLE_LIMIT = 1_000


def expected_group_order(components) -> int | None:
    """Order of the reflection group, or None when the type is unknown."""
    if components is None:
        return None
    order = 1
    for letter, m in components:
        if letter == "A":
            order *= factorial(m + 1)
        elif letter in ("B", "C"):
            order *= 2**m * factorial(m)
        else:  # D
            order *= 2 ** (m - 1) * factorial(m)
    return order


def simple_reflection_matrix(cartan, i: int) -> Mat:
    n = len(cartan)
    rows = []
    for r in range(n):
        if r == i:
            rows.append(tuple((1 if j == i else 0) - cartan[i][j] for j in range(n)))
        else:
            rows.append(tuple(1 if j == r else 0 for j in range(n)))
    return tuple(rows)


def reflection_matrix(rs, root: Vec) -> Mat:
    """Matrix of the reflection in ``root`` (integer for crystallographic data)."""
    n = rs.rank
    groot = mat_vec(rs.gram, root)
    norm = rs.norm_sq(root)
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            entry = (1 if r == c else 0) - 2 * root[r] * groot[c] / norm
            if isinstance(entry, Fraction):
                if entry.denominator != 1:
                    raise ValueError("reflection matrix is not integral")
                entry = int(entry)
            row.append(entry)
        rows.append(tuple(row))
    return tuple(rows)


class WeylGroup:
    """The reflection group of a root system, fully enumerated."""

    def __init__(self, rs, cap: int = DEFAULT_GROUP_CAP):
        self.rs = rs
        predicted = expected_group_order(rs.components)
        if predicted is not None and predicted > cap:
            raise GroupTooLarge(f"|W| = {predicted} exceeds cap {cap}")

        gens = [simple_reflection_matrix(rs.cartan, i) for i in range(rs.rank)]
        elements = [identity(rs.rank)]
        index = {elements[0]: 0}
        frontier = [elements[0]]
        while frontier:
            new = []
            for m in frontier:
                for g in gens:
                    prod = mat_mul(m, g)
                    if prod not in index:
                        index[prod] = len(elements)
                        elements.append(prod)
                        new.append(prod)
            if len(elements) > cap:
                raise GroupTooLarge(f"group enumeration passed cap {cap}")
            frontier = new

        if predicted is not None and len(elements) != predicted:
            raise GroupTooLarge(
                f"enumerated {len(elements)} elements, expected {predicted}"
            )

        self.elements: tuple[Mat, ...] = tuple(elements)
        self.index: dict[Mat, int] = index
        self.order = len(elements)
        self.identity_id = 0
        self.generator_ids = tuple(index[g] for g in gens)

        self._inverse: list[int | None] = [None] * self.order
        self._table: list[list[int]] | None = None
        self._mul_cache: dict[tuple[int, int], int] = {}
        if self.order <= _TABLE_LIMIT:
            self._table = [
                [index[mat_mul(a, b)] for b in elements] for a in elements
            ]
        self._root_perm: list[tuple[int, ...] | None] = [None] * self.order

    # -- arithmetic ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        key = (a, b)
        got = self._mul_cache.get(key)
        if got is None:
            got = self.index[mat_mul(self.elements[a], self.elements[b])]
            self._mul_cache[key] = got
        return got

    def inv(self, a: int) -> int:
        got = self._inverse[a]
        if got is None:
            m = self.elements[a]
            n = self.rs.rank
            cols = solve_columns(m, [tuple(identity(n)[r]) for r in range(n)])
            inverse = tuple(
                tuple(int(cols[c][r]) for c in range(n)) for r in range(n)
            )
            got = self.index[inverse]
            self._inverse[a] = got
        return got

    def matrix(self, a: int) -> Mat:
        return self.elements[a]

    # -- actions -----------------------------------------------------------

    def act_vec(self, a: int, x: Vec) -> Vec:
        return mat_vec(self.elements[a], x)

    def root_permutation(self, a: int) -> tuple[int, ...]:
        """Induced permutation of positive roots (signs dropped)."""
        got = self._root_perm[a]
        if got is None:
            images = []
            for root in self.rs.positive_roots:
                img = self.act_vec(a, root)
                if any(c < 0 for c in img):
                    img = tuple(-c for c in img)
                images.append(self.rs.root_index[img])
            got = tuple(images)
            self._root_perm[a] = got
        return got


def enumerate_group(rs, cap: int = DEFAULT_GROUP_CAP) -> WeylGroup:
    return WeylGroup(rs, cap)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member ids inside a WeylGroup.

    ``flats`` records the generating flats (one for a parabolic, several
    pairwise orthogonal ones for a direct product).  ``factorization`` maps
    each member to its unique decomposition across the product factors and
    is the identity-ish singleton map for plain parabolics.
    """

    flats: tuple
    member_ids: tuple[int, ...]
    factorization: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.member_ids)

    def members(self) -> frozenset:
        return frozenset(self.member_ids)


def parabolic_subgroup(weyl: WeylGroup, flat) -> Subgroup:
    """Subgroup generated by the reflections in all roots of ``flat``."""
    rs = weyl.rs
    gens = [
        weyl.index[reflection_matrix(rs, rs.positive_roots[i])]
        for i in flat.indices()
    ]
    members = {weyl.identity_id}
    frontier = [weyl.identity_id]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = weyl.mul(a, g)
                if b not in members:
                    members.add(b)
                    new.append(b)
        frontier = new
    ids = tuple(sorted(members))
    return Subgroup((flat,), ids, tuple((i,) for i in ids))


def subgroup_product(weyl: WeylGroup, parts: list[Subgroup]) -> Subgroup:
    """Internal direct product of parabolic subgroups of orthogonal flats."""
    flats = tuple(f for p in parts for f in p.flats)
    members = [(weyl.identity_id, ())]
    for part in parts:
        members = [
            (weyl.mul(a, b), ids + (b,))
            for a, ids in members
            for b in part.member_ids
        ]
    seen = {m for m, _ in members}
    if len(seen) != len(members):
        raise ValueError("subgroup product is not direct")
    members.sort()
    return Subgroup(
        flats,
        tuple(m for m, _ in members),
        tuple(ids for _, ids in members),
    )


def coset_index(weyl: WeylGroup, sub: Subgroup) -> int:
    if weyl.order % sub.order:
        raise ValueError("subgroup order does not divide group order")
    return weyl.order // sub.order


def canonical_coset_rep(weyl: WeylGroup, a: int, sub: Subgroup) -> int:
    """Deterministic representative of a @ sub: lexicographically least matrix."""
    best = None
    best_id = -1
    for h in sub.member_ids:
        b = weyl.mul(a, h)
        m = weyl.elements[b]
        if best is None or m < best:
            best, best_id = m, b
    return best_id


def left_cosets(weyl: WeylGroup, sub: Subgroup) -> list[int]:
    """Canonical representatives of all left cosets, ascending by id."""
    seen = [False] * weyl.order
    reps = []
    for a in range(weyl.order):
        if seen[a]:
            continue
        members = [weyl.mul(a, h) for h in sub.member_ids]
        for b in members:
            seen[b] = True
        reps.append(min(members, key=lambda b: weyl.elements[b]))
    return sorted(reps)
