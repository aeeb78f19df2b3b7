"""Orbits of k-subsets of variables under a permutation group, canonical
indexing, and the inclusion poset with Upper/Lower closures.

Subsets are machine-word bitmasks: bit i set means variable x_{i+1} is in
the subset, so x_1 is the least significant bit.  Everything for n = 14
(16384 masks) is precomputed once and then immutable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .perm import Permutation, PermGroup


def mask_from_points(points, one_based: bool = True) -> int:
    m = 0
    for p in points:
        m |= 1 << (p - 1 if one_based else p)
    return m


def points_from_mask(mask: int, one_based: bool = True) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1 if one_based else i)
        mask >>= 1
        i += 1
    return out


def act(sigma: Permutation, mask: int) -> int:
    """Image of a subset mask under a permutation: bit sigma(i) of the
    output is set iff bit i of the input is set."""
    out = 0
    i = 0
    images = sigma.images
    while mask:
        if mask & 1:
            out |= 1 << images[i]
        mask >>= 1
        i += 1
    return out


def _action_table(sigma: Permutation) -> list[int]:
    """act(sigma, m) for every mask m, built from single-bit images."""
    n = sigma.degree
    bit_image = [1 << sigma.images[i] for i in range(n)]
    table = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        table[m] = table[m ^ low] | bit_image[low.bit_length() - 1]
    return table


@dataclass(frozen=True)
class OrbitId:
    level: int
    index: int

    def __str__(self) -> str:
        return f"{self.level}.{self.index}"


class OrbitTable:
    """All orbits of subset masks under a group, canonically indexed.

    Canonical order: within each level (= subset size) orbits are sorted by
    their numerically smallest member mask.  Dense ids run over levels
    0..n in that order; id 0 is always the empty subset's orbit.
    """

    def __init__(self, group: PermGroup):
        n = group.degree
        if n > 30:
            raise ValueError("bitmask subset machinery supports degree <= 30")
        if not _transitive(group):
            warnings.warn("group is not transitive; orbit census still computed")
        self.group = group
        self.n = n
        tables = [_action_table(g) for g in group.generators]

        total = 1 << n
        orbit_of = [-1] * total
        by_level: list[list[int]] = [[] for _ in range(n + 1)]
        members: list[list[int]] = []
        # scanning masks by (size, value) makes discovery order canonical:
        # ids sort by level, then by smallest member
        order = sorted(range(total), key=lambda m: (m.bit_count(), m))
        next_id = 0
        for m in order:
            if orbit_of[m] >= 0:
                continue
            oid = next_id
            next_id += 1
            orbit_of[m] = oid
            stack = [m]
            mem = [m]
            while stack:
                cur = stack.pop()
                for t in tables:
                    img = t[cur]
                    if orbit_of[img] < 0:
                        orbit_of[img] = oid
                        mem.append(img)
                        stack.append(img)
            mem.sort()
            members.append(mem)
            by_level[m.bit_count()].append(oid)

        self.orbit_count = next_id
        self._orbit_of = orbit_of
        self.members = members
        self.level = [m[0].bit_count() for m in members]
        self.size = [len(m) for m in members]
        self.min_mask = [m[0] for m in members]
        self.containing_x1 = [sum(1 for x in m if x & 1) for m in members]
        self.ids_at_level = by_level
        self.index_in_level = [0] * next_id
        for lvl_ids in by_level:
            for j, oid in enumerate(lvl_ids):
                self.index_in_level[oid] = j

    def orbit_of(self, mask: int) -> int:
        return self._orbit_of[mask]

    def oid(self, label: OrbitId | str) -> int:
        """Dense id from a canonical level.index label."""
        if isinstance(label, str):
            lvl, idx = label.split(".")
            label = OrbitId(int(lvl), int(idx))
        return self.ids_at_level[label.level][label.index]

    def label(self, oid: int) -> OrbitId:
        return OrbitId(self.level[oid], self.index_in_level[oid])

    def census(self) -> list[dict]:
        """Per-orbit summary rows, byte-stable ordering."""
        return [
            {
                "level": self.level[o],
                "index": self.index_in_level[o],
                "size": self.size[o],
                "representative": points_from_mask(self.min_mask[o]),
                "containing_x1": self.containing_x1[o],
            }
            for o in range(self.orbit_count)
        ]


def _transitive(group: PermGroup) -> bool:
    return len(group.point_orbits()[0]) == group.degree


def compute_orbits(group: PermGroup) -> OrbitTable:
    return OrbitTable(group)


class OrbitPoset:
    """Inclusion order between orbits (levels >= 1 only).

    O1 <= O2 iff some member of O2 contains some member of O1.  Upper and
    lower closures are stored as int bitsets over dense orbit ids; each
    closure contains the orbit itself.  The empty subset's orbit (id 0) is
    excluded from all closures.
    """

    def __init__(self, table: OrbitTable):
        self.table = table
        count = table.orbit_count
        direct_below: list[set[int]] = [set() for _ in range(count)]
        for o in range(count):
            if table.level[o] < 2:
                continue
            seen = direct_below[o]
            for m in table.members[o]:
                rem = m
                while rem:
                    b = rem & -rem
                    rem ^= b
                    seen.add(table.orbit_of(m ^ b))
        lower = [0] * count
        for o in sorted(range(count), key=lambda o: table.level[o]):
            if table.level[o] == 0:
                continue
            acc = 1 << o
            for p in direct_below[o]:
                if table.level[p] >= 1:
                    acc |= lower[p]
            lower[o] = acc
        upper = [0] * count
        for o in range(count):
            if table.level[o] == 0:
                continue
            rem = lower[o] & ~(1 << o)
            while rem:
                b = rem & -rem
                rem ^= b
                upper[b.bit_length() - 1] |= 1 << o
        for o in range(count):
            if table.level[o] >= 1:
                upper[o] |= 1 << o
        self.lower = lower
        self.upper = upper

    def leq(self, o1: int, o2: int) -> bool:
        """True iff o1 is (weakly) below o2 in the inclusion order."""
        return bool(self.lower[o2] >> o1 & 1)

    def lower_ids(self, o: int) -> list[int]:
        return _bits(self.lower[o])

    def upper_ids(self, o: int) -> list[int]:
        return _bits(self.upper[o])


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        mask ^= b
        out.append(b.bit_length() - 1)
    return out


def build_poset(table: OrbitTable) -> OrbitPoset:
    return OrbitPoset(table)
