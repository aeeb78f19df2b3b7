"""Monotone simplicial complexes encoded as orbit-type assignments.

A fully assigned TypeAssignment encodes the complex whose faces are the
members of the TRUE orbits (plus the empty face, which is always present
and never counted by the Euler characteristic).  Partial assignments leave
orbits FREE; queries that need a determined value raise IndeterminateFace.
"""

from __future__ import annotations

from dataclasses import dataclass

from .orbits import OrbitPoset, OrbitTable, points_from_mask
from .perm import PermGroup

FREE = "free"
TRUE = "T"
FALSE = "F"


class IndeterminateFace(Exception):
    """A FREE orbit governs a face whose value is needed."""


def chi_deltas(table: OrbitTable) -> list[int]:
    """Per-orbit increment to chi(Delta) when the orbit turns TRUE."""
    return [
        (-1) ** (table.level[o] + 1) * table.size[o] if table.level[o] >= 1 else 0
        for o in range(table.orbit_count)
    ]


def link_x1_deltas(table: OrbitTable) -> list[int]:
    """Per-orbit increment to chi(Link(Delta, x1)) when the orbit turns TRUE.

    A TRUE level-k orbit contributes its members containing x1 as link faces
    of size k-1, hence (-1)^k times the containing count; level-1 members
    contribute only the empty link face, which chi ignores.
    """
    return [
        (-1) ** table.level[o] * table.containing_x1[o] if table.level[o] >= 2 else 0
        for o in range(table.orbit_count)
    ]


class TypeAssignment:
    """Three-valued orbit states backed by two int bitsets over orbit ids.

    Copy-on-branch is a pair of int copies.  Orbit id 0 (the empty subset)
    is never assigned; the empty face is implicitly always present.
    """

    __slots__ = ("table", "poset", "t_bits", "f_bits")

    def __init__(self, table: OrbitTable, poset: OrbitPoset,
                 t_bits: int = 0, f_bits: int = 0):
        self.table = table
        self.poset = poset
        self.t_bits = t_bits
        self.f_bits = f_bits

    @classmethod
    def all_free(cls, table: OrbitTable, poset: OrbitPoset) -> "TypeAssignment":
        return cls(table, poset)

    @classmethod
    def from_states(cls, table: OrbitTable, poset: OrbitPoset,
                    states: dict[str, str]) -> "TypeAssignment":
        """Build from {'level.index': 'T'|'F'} without closure side effects."""
        t = f = 0
        for label, st in states.items():
            o = table.oid(label)
            if table.level[o] == 0:
                raise ValueError("the empty subset's orbit is not assignable")
            if st == TRUE:
                t |= 1 << o
            elif st == FALSE:
                f |= 1 << o
            else:
                raise ValueError(f"bad state {st!r} for orbit {label}")
        if t & f:
            raise ValueError("an orbit is listed both TRUE and FALSE")
        return cls(table, poset, t, f)

    def replace(self, t_bits: int, f_bits: int) -> "TypeAssignment":
        return TypeAssignment(self.table, self.poset, t_bits, f_bits)

    def state(self, oid: int) -> str:
        if self.t_bits >> oid & 1:
            return TRUE
        if self.f_bits >> oid & 1:
            return FALSE
        return FREE

    def state_of_label(self, label: str) -> str:
        return self.state(self.table.oid(label))

    def free_ids(self) -> list[int]:
        assigned = self.t_bits | self.f_bits
        return [o for o in range(1, self.table.orbit_count)
                if not assigned >> o & 1]

    def true_ids(self) -> list[int]:
        return [o for o in range(1, self.table.orbit_count) if self.t_bits >> o & 1]

    def is_fully_assigned(self) -> bool:
        return not self.free_ids()

    def true_masks(self) -> list[int]:
        """Every face of the encoded complex except the empty face."""
        out = []
        for o in self.true_ids():
            out.extend(self.table.members[o])
        return out


def assert_monotone(a: TypeAssignment) -> bool:
    """True iff no TRUE orbit has a FALSE orbit below it and no FALSE orbit
    has a TRUE orbit above it."""
    poset, t, f = a.poset, a.t_bits, a.f_bits
    rem = t
    while rem:
        b = rem & -rem
        rem ^= b
        if poset.lower[b.bit_length() - 1] & f:
            return False
    rem = f
    while rem:
        b = rem & -rem
        rem ^= b
        if poset.upper[b.bit_length() - 1] & t:
            return False
    return True


def _require_full(a: TypeAssignment) -> None:
    if not a.is_fully_assigned():
        raise IndeterminateFace("assignment has FREE orbits")


def euler(a: TypeAssignment) -> int:
    """Euler characteristic of the encoded complex (empty face excluded)."""
    _require_full(a)
    deltas = chi_deltas(a.table)
    return sum(deltas[o] for o in a.true_ids())


def r_vector(a: TypeAssignment) -> list[int]:
    """Face counts r[k] for k = 0..n; r[0] is always 1 (the empty face)."""
    _require_full(a)
    r = [0] * (a.table.n + 1)
    r[0] = 1
    for o in a.true_ids():
        r[a.table.level[o]] += a.table.size[o]
    return r


def explicit_euler(faces) -> int:
    """Alternating-sum chi of an explicit mask family; the empty mask is
    skipped per the size >= 1 summation."""
    return sum((-1) ** (m.bit_count() + 1) for m in faces if m)


def link(a: TypeAssignment, v: int) -> set[int]:
    """Explicit link at variable x_v (1-based): faces t - {x_v} for TRUE
    faces t containing x_v.  May contain the empty mask."""
    _require_full(a)
    bit = 1 << (v - 1)
    return {m ^ bit for m in a.true_masks() if m & bit}


def deletion(a: TypeAssignment, v: int) -> set[int]:
    """Explicit deletion at x_v: TRUE faces avoiding x_v."""
    _require_full(a)
    bit = 1 << (v - 1)
    return {m for m in a.true_masks() if not m & bit}


def link_euler_fast(a: TypeAssignment, v: int) -> int:
    """chi of the link at x_v without materializing it.

    Each TRUE level-k orbit (k >= 2) contributes (-1)^k times its member
    count through x_v, which equals k*|O|/n for a transitive group.
    """
    _require_full(a)
    table = a.table
    total = 0
    for o in a.true_ids():
        k = table.level[o]
        if k < 2:
            continue
        if v == 1:
            through = table.containing_x1[o]
        else:
            through = k * table.size[o] // table.n
        total += (-1) ** k * through
    return total


@dataclass(frozen=True)
class FixedPointComplex:
    """The complex over a subgroup's variable-orbit blocks whose faces are
    the block collections with TRUE union."""

    blocks: tuple[int, ...]            # block masks, ordered by smallest point
    faces: tuple[tuple[int, ...], ...]  # nonempty faces as block-index tuples
    euler: int

    @property
    def block_points(self) -> list[list[int]]:
        return [points_from_mask(b) for b in self.blocks]


def fixed_point_complex(a: TypeAssignment, sub: PermGroup) -> FixedPointComplex:
    """Build the fixed-point complex of ``sub`` on the assignment.

    Raises IndeterminateFace when a FREE orbit governs some union of
    blocks; partial assignments are usable only when every union is
    determined.
    """
    if sub.degree != a.table.n:
        raise ValueError("subgroup degree does not match the orbit table")
    blocks = tuple(sum(1 << p for p in orbit) for orbit in sub.point_orbits())
    m = len(blocks)
    faces = []
    chi = 0
    for s in range(1, 1 << m):
        union = 0
        rem = s
        while rem:
            b = rem & -rem
            rem ^= b
            union |= blocks[b.bit_length() - 1]
        state = a.state(a.table.orbit_of(union))
        if state == FREE:
            raise IndeterminateFace(
                f"union of blocks {bin(s)} is governed by a FREE orbit")
        if state == TRUE:
            idxs = tuple(i for i in range(m) if s >> i & 1)
            faces.append(idxs)
            chi += (-1) ** (len(idxs) + 1)
    return FixedPointComplex(blocks=blocks, faces=tuple(faces), euler=chi)
