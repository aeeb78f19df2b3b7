"""Independent ground truth: exact decision-tree depth by memoized minimax,
elusiveness checks, exhaustive small-arity sweeps, and the restriction
lemma check.

The depth recursion walks restrictions (assigned mask, answered mask) of
the variable set; the memo key is the radix-3 encoding of the restriction,
one digit per variable (free / answered 0 / answered 1).  For monotone
functions, constancy on a subcube reduces to comparing the all-zeros and
all-ones completions, which is what makes arity 14 tractable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .orbits import OrbitPoset, OrbitTable
from .perm import PermGroup


class ArityError(ValueError):
    """Function too wide for the 3^n restriction table."""


MAX_ARITY = 14


class BooleanFunction:
    """A boolean function given by its full truth table over subset masks.

    ``monotone`` asserts the function is monotone (in either direction),
    which licenses the two-completion constancy shortcut.
    """

    __slots__ = ("n", "table", "monotone")

    def __init__(self, n: int, table: bytes | bytearray, monotone: bool = False):
        if len(table) != 1 << n:
            raise ValueError("truth table length must be 2^n")
        self.n = n
        self.table = bytes(table)
        self.monotone = monotone

    def __call__(self, mask: int) -> int:
        return self.table[mask]

    @classmethod
    def from_bitvector(cls, n: int, bits: int, monotone: bool = False) -> "BooleanFunction":
        return cls(n, bytes((bits >> m) & 1 for m in range(1 << n)), monotone)

    @classmethod
    def from_orbit_types(cls, table: OrbitTable, t_bits: int,
                         empty_true: bool = True) -> "BooleanFunction":
        """Function whose true inputs are the members of the TRUE orbits
        (plus the empty input unless suppressed)."""
        tab = bytearray(1 << table.n)
        for o in range(1, table.orbit_count):
            if t_bits >> o & 1:
                for m in table.members[o]:
                    tab[m] = 1
        tab[0] = 1 if empty_true else tab[0]
        return cls(table.n, tab, monotone=True)

    def opposite(self) -> "BooleanFunction":
        return BooleanFunction(self.n, bytes(1 - v for v in self.table),
                               monotone=self.monotone)

    def restricted_true(self, v: int) -> "BooleanFunction":
        """The function with variable x_v (1-based) answered 1, on the
        remaining n-1 variables."""
        bit = 1 << (v - 1)
        low = bit - 1
        tab = bytearray(1 << (self.n - 1))
        for m in range(1 << (self.n - 1)):
            expanded = (m & low) | ((m & ~low) << 1) | bit
            tab[m] = self.table[expanded]
        return BooleanFunction(self.n - 1, tab, monotone=self.monotone)


def is_monotone_nonincreasing(f: BooleanFunction) -> bool:
    tab = f.table
    for m in range(1 << f.n):
        if tab[m]:
            continue
        for i in range(f.n):
            if not m >> i & 1 and tab[m | (1 << i)]:
                return False
    return True


class DepthSolver:
    """Memoized minimax over restrictions of one function."""

    def __init__(self, f: BooleanFunction):
        if f.n > MAX_ARITY:
            raise ArityError(f"arity {f.n} exceeds the {MAX_ARITY} limit")
        self.f = f
        self.n = f.n
        self.full = (1 << f.n) - 1
        self.pow3 = [3 ** i for i in range(f.n)]
        self.memo = bytearray(b"\xff") * (3 ** f.n)

    def _constant(self, assigned: int, values: int) -> bool:
        table = self.f.table
        if self.f.monotone:
            return table[values] == table[values | (self.full ^ assigned)]
        free = self.full ^ assigned
        first = table[values | free]
        s = free
        while s:
            s = (s - 1) & free
            if table[values | s] != first:
                return False
            if s == 0:
                break
        return True

    def depth(self, assigned: int = 0, values: int = 0, idx: int = 0) -> int:
        memo = self.memo
        r = memo[idx]
        if r != 255:
            return r
        if self._constant(assigned, values):
            memo[idx] = 0
            return 0
        best = self.n + 1
        pow3 = self.pow3
        rem = self.full ^ assigned
        while rem:
            b = rem & -rem
            rem ^= b
            i = b.bit_length() - 1
            ci = idx + pow3[i]
            d1 = self.depth(assigned | b, values | b, ci + pow3[i])
            if d1 + 1 < best:
                d0 = self.depth(assigned | b, values, ci)
                d = (d0 if d0 > d1 else d1) + 1
                if d < best:
                    best = d
                    if best == 1:
                        break
        memo[idx] = best
        return best

    def adversary_path(self) -> list[tuple[int, int]]:
        """A worst-case play: at each restriction the solver queries an
        optimal variable and the adversary answers toward the deeper
        subtree.  Returns (variable, answer) pairs, 1-based variables."""
        path: list[tuple[int, int]] = []
        assigned = values = idx = 0
        while not self._constant(assigned, values):
            target = self.depth(assigned, values, idx)
            pow3 = self.pow3
            move = None
            rem = self.full ^ assigned
            while rem:
                b = rem & -rem
                rem ^= b
                i = b.bit_length() - 1
                ci = idx + pow3[i]
                d0 = self.depth(assigned | b, values, ci)
                d1 = self.depth(assigned | b, values | b, ci + pow3[i])
                if 1 + max(d0, d1) == target:
                    move = (i, b, ci, d0, d1)
                    break
            i, b, ci, d0, d1 = move
            answer = 1 if d1 >= d0 else 0
            path.append((i + 1, answer))
            assigned |= b
            if answer:
                values |= b
                idx = ci + pow3[i]
            else:
                idx = ci
        return path


def decision_tree_depth(f: BooleanFunction) -> int:
    """Minimum over decision trees of the worst-case number of queries."""
    return DepthSolver(f).depth()


def decision_tree_depth_plain(f: BooleanFunction, assigned: int = 0,
                              values: int = 0) -> int:
    """Memo-free reference recursion; exponential, for cross-checks only."""
    full = (1 << f.n) - 1
    free = full ^ assigned
    vals = {f.table[values | s] for s in _submasks(free)}
    if len(vals) == 1:
        return 0
    best = f.n + 1
    rem = free
    while rem:
        b = rem & -rem
        rem ^= b
        d0 = decision_tree_depth_plain(f, assigned | b, values)
        d1 = decision_tree_depth_plain(f, assigned | b, values | b)
        best = min(best, 1 + max(d0, d1))
    return best


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def is_elusive(f: BooleanFunction) -> bool:
    return decision_tree_depth(f) == f.n


def enumerate_monotone(n: int) -> list[int]:
    """All monotone non-increasing functions on n variables as truth-table
    bitvectors (bit m = value on input mask m)."""
    masks = sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
    subs = [[m ^ (1 << i) for i in range(n) if m >> i & 1] for m in range(1 << n)]
    out: list[int] = []

    def rec(pos: int, fbits: int) -> None:
        if pos == len(masks):
            out.append(fbits)
            return
        m = masks[pos]
        rec(pos + 1, fbits)
        if all(fbits >> s & 1 for s in subs[m]):
            rec(pos + 1, fbits | (1 << m))

    rec(0, 0)
    return out


def euler_of_bitvector(n: int, fbits: int) -> int:
    """Euler characteristic of the complex of true inputs (empty face
    excluded)."""
    total = 0
    for m in range(1, 1 << n):
        if fbits >> m & 1:
            total += (-1) ** (m.bit_count() + 1)
    return total


def _mask_action_tables(n: int):
    from itertools import permutations

    tables = []
    for images in permutations(range(n)):
        bit = [1 << images[i] for i in range(n)]
        t = [0] * (1 << n)
        for m in range(1, 1 << n):
            low = m & -m
            t[m] = t[m ^ low] | bit[low.bit_length() - 1]
        tables.append((images, t))
    return tables


@dataclass
class ConjectureReport:
    n: int
    monotone_functions: int
    weakly_symmetric_nontrivial: int
    elusive_verified: int
    elusive_failures: list[int] = field(default_factory=list)
    non_elusive: int = 0
    chi_one_failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.elusive_failures and not self.chi_one_failures


def exhaustive_conjecture_check(n: int) -> ConjectureReport:
    """Sweep every monotone non-increasing function on n variables.

    Asserts two facts function by function: every nontrivial one whose
    invariance group is transitive has full decision-tree depth, and every
    non-elusive one except the constant-0 function (whose complex is empty)
    has Euler characteristic 1.
    """
    if n > 5:
        raise ArityError("the exhaustive sweep scans all n! permutations "
                         "per function; capped at n = 5")
    actions = _mask_action_tables(n)
    report = ConjectureReport(n=n, monotone_functions=0,
                              weakly_symmetric_nontrivial=0,
                              elusive_verified=0)
    total = 1 << n
    for fbits in enumerate_monotone(n):
        report.monotone_functions += 1
        depth = decision_tree_depth(
            BooleanFunction.from_bitvector(n, fbits, monotone=True))
        if depth < n:
            report.non_elusive += 1
            if fbits != 0 and euler_of_bitvector(n, fbits) != 1:
                report.chi_one_failures.append(fbits)
        nontrivial = fbits & 1 and not fbits >> (total - 1) & 1
        if not nontrivial:
            continue
        reached = set()
        for images, t in actions:
            if all(fbits >> t[m] & 1 == fbits >> m & 1 for m in range(total)):
                reached.add(images[0])
        if len(reached) == n:
            report.weakly_symmetric_nontrivial += 1
            if depth == n:
                report.elusive_verified += 1
            else:
                report.elusive_failures.append(fbits)
    return report


def sample_invariant_function(table: OrbitTable, poset: OrbitPoset,
                              rng: random.Random,
                              seed_orbits: int = 4) -> BooleanFunction:
    """A random nontrivial monotone function invariant under the table's
    group: the lower closure of a few random orbits below the top level."""
    candidates = [o for o in range(1, table.orbit_count)
                  if table.level[o] < table.n]
    t_bits = 0
    for o in rng.sample(candidates, min(seed_orbits, len(candidates))):
        t_bits |= poset.lower[o]
    return BooleanFunction.from_orbit_types(table, t_bits)


@dataclass
class RestrictionReport:
    group_degree: int
    samples: int
    lemma_applicable: int
    lemma_violations: list[dict] = field(default_factory=list)
    remark_violations: list[dict] = field(default_factory=list)
    vacuous: int = 0

    @property
    def ok(self) -> bool:
        return not self.lemma_violations and not self.remark_violations


def restriction_lemma_check(G: PermGroup, samples: int,
                            seed: int = 0) -> RestrictionReport:
    """Sample invariant functions for a transitive G of small degree and
    check: an elusive one-variable restriction forces full depth, and one
    elusive restriction forces all of them elusive."""
    n = G.degree
    if n > 8:
        raise ArityError("restriction sampling computes exact depths on "
                         "both sides; capped at degree 8")
    table = OrbitTable(G)
    poset = OrbitPoset(table)
    rng = random.Random(seed)
    report = RestrictionReport(group_degree=n, samples=samples,
                               lemma_applicable=0)
    for _ in range(samples):
        f = sample_invariant_function(table, poset, rng,
                                      seed_orbits=rng.randint(1, 4))
        link_depths = [decision_tree_depth(f.restricted_true(v))
                       for v in range(1, n + 1)]
        elusive_links = [d == n - 1 for d in link_depths]
        if not any(elusive_links):
            report.vacuous += 1
            continue
        report.lemma_applicable += 1
        if not all(elusive_links):
            report.remark_violations.append(
                {"link_depths": link_depths})
        if decision_tree_depth(f) != n:
            report.lemma_violations.append(
                {"depth": decision_tree_depth(f), "link_depths": link_depths})
    return report
