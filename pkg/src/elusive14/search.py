"""Backtracking case analysis over orbit-type assignments.

Every node of the search carries a monotone-consistent partial assignment
as two int bitsets plus incrementally maintained Euler characteristics of
the encoded complex and of its link at x1.  Each schedule entry is a
subgroup whose fixed-point complex must satisfy an Euler condition; the
identity subgroup closes the schedule and is handled as the leaf: the
remaining free orbits are enumerated against chi(Delta) = 1 and the
survivors are tested against chi(Link(Delta, x1)) = 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .complexes import FALSE, TRUE, TypeAssignment, chi_deltas, link_x1_deltas
from .orbits import OrbitPoset, OrbitTable
from .perm import PermGroup


class CaseCapExceeded(RuntimeError):
    """A single check tried to enumerate more cases than the configured cap."""


@dataclass(frozen=True)
class SearchState:
    """Immutable search node; chi fields track the TRUE orbits so far."""

    t_bits: int
    f_bits: int
    chi: int
    chi_link: int

    def assignment(self, table: OrbitTable, poset: OrbitPoset) -> TypeAssignment:
        return TypeAssignment(table, poset, self.t_bits, self.f_bits)


@dataclass(frozen=True)
class SubgroupCheck:
    """A subgroup together with its Euler condition and the precomputed
    mapping from block unions to governed orbits."""

    name: str
    group: PermGroup
    blocks: tuple[int, ...]
    condition: tuple[str, int]          # ("exact", 1) or ("mod", q)
    governed: tuple[int, ...]           # orbit ids of all block unions
    weights: tuple[tuple[int, int], ...]  # (orbit id, alternating-sum weight)
    is_identity: bool = False


def condition_met(condition: tuple[str, int], chi: int) -> bool:
    kind, value = condition
    if kind == "exact":
        return chi == value
    if kind == "mod":
        return chi % value == 1 % value
    raise ValueError(f"unknown condition kind {kind!r}")


def build_check(table: OrbitTable, sub: PermGroup, name: str,
                condition: tuple[str, int]) -> SubgroupCheck:
    """Precompute governed orbits and chi weights for one subgroup."""
    blocks = tuple(sum(1 << p for p in orbit) for orbit in sub.point_orbits())
    m = len(blocks)
    identity = m == table.n
    weights: dict[int, int] = {}
    if not identity:
        union_of = [0] * (1 << m)
        for s in range(1, 1 << m):
            low = s & -s
            union_of[s] = union_of[s ^ low] | blocks[low.bit_length() - 1]
            o = table.orbit_of(union_of[s])
            weights[o] = weights.get(o, 0) + (-1) ** (s.bit_count() + 1)
    return SubgroupCheck(
        name=name, group=sub, blocks=blocks, condition=condition,
        governed=tuple(sorted(weights)), weights=tuple(sorted(weights.items())),
        is_identity=identity)


@dataclass(frozen=True)
class Schedule:
    """Ordered subgroup checks; the identity entry must close the list."""

    name: str
    order: tuple[str, ...]


@dataclass
class SearchStats:
    nodes_explored: int = 0
    cases_enumerated: int = 0
    prunes_by_conflict: int = 0
    prunes_by_chi: int = 0
    prunes_by_link: int = 0
    leaf_assignments: int = 0
    leaf_chi1: int = 0

    def merge(self, other: "SearchStats") -> None:
        for f in self.__dataclass_fields__:
            setattr(self, f, getattr(self, f) + getattr(other, f))


@dataclass
class SearchReport:
    schedule: str
    link_check: bool
    feasible_functions: list[dict[str, str]]
    stats: SearchStats
    wall_time: float
    cap: int

    @property
    def verified(self) -> bool:
        return not self.feasible_functions


class SearchEngine:
    """Shared immutable context plus the propagation/enumeration kernels."""

    def __init__(self, table: OrbitTable, poset: OrbitPoset,
                 checks: dict[str, SubgroupCheck], cap: int = 1 << 20):
        self.table = table
        self.poset = poset
        self.checks = checks
        self.cap = cap
        self.chi_delta = chi_deltas(table)
        self.link_delta = link_x1_deltas(table)
        self.top_oid = table.oid(f"{table.n}.0")
        all_ids = 0
        for o in range(1, table.orbit_count):
            all_ids |= 1 << o
        self.all_ids = all_ids

    def initial_state(self) -> SearchState:
        """All orbits free except the full-set orbit, pinned FALSE
        (a TRUE full set would make the function constant)."""
        blank = SearchState(0, 0, 0, 0)
        st = self.propagate(blank, self.top_oid, FALSE, SearchStats())
        assert st is not None
        return st

    def propagate(self, st: SearchState, oid: int, value: str,
                  stats: SearchStats) -> SearchState | None:
        """Assign one orbit and close monotonically; None signals a pruned
        branch (some orbit would need both values)."""
        if value == TRUE:
            if st.t_bits >> oid & 1:
                return st
            add = self.poset.lower[oid] & ~st.t_bits
            if add & st.f_bits:
                stats.prunes_by_conflict += 1
                return None
            chi, link = st.chi, st.chi_link
            rem = add
            while rem:
                b = rem & -rem
                rem ^= b
                i = b.bit_length() - 1
                chi += self.chi_delta[i]
                link += self.link_delta[i]
            return SearchState(st.t_bits | add, st.f_bits, chi, link)
        if st.f_bits >> oid & 1:
            return st
        add = self.poset.upper[oid] & ~st.f_bits
        if add & st.t_bits:
            stats.prunes_by_conflict += 1
            return None
        return SearchState(st.t_bits, st.f_bits | add, st.chi, st.chi_link)

    def subgroup_chi(self, st: SearchState, check: SubgroupCheck) -> int:
        return sum(w for o, w in check.weights if st.t_bits >> o & 1)

    def enumerate_cases(self, st: SearchState, check: SubgroupCheck,
                        stats: SearchStats) -> list[SearchState]:
        """All assignments of the check's free governed orbits that survive
        propagation and meet the check's Euler condition."""
        assigned = st.t_bits | st.f_bits
        free = [o for o in check.governed if not assigned >> o & 1]
        out: list[SearchState] = []
        budget = self.cap

        def rec(s: SearchState, k: int) -> None:
            nonlocal budget
            done = s.t_bits | s.f_bits
            while k < len(free) and done >> free[k] & 1:
                k += 1
            if k == len(free):
                budget -= 1
                if budget < 0:
                    raise CaseCapExceeded(
                        f"{check.name}: more than {self.cap} cases")
                if condition_met(check.condition, self.subgroup_chi(s, check)):
                    out.append(s)
                else:
                    stats.prunes_by_chi += 1
                return
            o = free[k]
            for value in (TRUE, FALSE):
                child = self.propagate(s, o, value, stats)
                if child is not None:
                    rec(child, k + 1)

        rec(st, 0)
        stats.cases_enumerated += len(out)
        return out

    def leaf_survivors(self, st: SearchState, stats: SearchStats,
                       link_check: bool = True,
                       collect_cases: list | None = None) -> list[SearchState]:
        """Resolve all remaining free orbits against chi(Delta) = 1, then
        test chi(Link(Delta, x1)) = 1 on each chi-feasible assignment."""
        assigned = st.t_bits | st.f_bits
        free = [o for o in range(1, self.table.orbit_count)
                if not assigned >> o & 1]
        survivors: list[SearchState] = []
        budget = self.cap

        def rec(s: SearchState, k: int) -> None:
            nonlocal budget
            done = s.t_bits | s.f_bits
            while k < len(free) and done >> free[k] & 1:
                k += 1
            if k == len(free):
                budget -= 1
                if budget < 0:
                    raise CaseCapExceeded(
                        f"leaf: more than {self.cap} residual cases")
                stats.leaf_assignments += 1
                if s.chi != 1:
                    stats.prunes_by_chi += 1
                    return
                stats.leaf_chi1 += 1
                if collect_cases is not None:
                    collect_cases.append(s)
                if link_check and s.chi_link != 1:
                    stats.prunes_by_link += 1
                    return
                survivors.append(s)
                return
            o = free[k]
            for value in (TRUE, FALSE):
                child = self.propagate(s, o, value, stats)
                if child is not None:
                    rec(child, k + 1)

        rec(st, 0)
        return survivors

    def schedule_checks(self, schedule: Schedule) -> list[SubgroupCheck]:
        if sorted(schedule.order) != sorted(self.checks):
            raise ValueError("schedule must list every bundled subgroup exactly once")
        ordered = [self.checks[name] for name in schedule.order]
        if not ordered[-1].is_identity or any(c.is_identity for c in ordered[:-1]):
            raise ValueError("the identity subgroup must close the schedule")
        return ordered


def survivor_states(state: SearchState, table: OrbitTable) -> dict[str, str]:
    """Canonical label -> T/F map for a fully assigned state."""
    out = {}
    for o in range(1, table.orbit_count):
        out[str(table.label(o))] = TRUE if state.t_bits >> o & 1 else FALSE
    return out


def _walk(engine: SearchEngine, checks: list[SubgroupCheck], st: SearchState,
          depth: int, stats: SearchStats, link_check: bool,
          audit=None) -> list[SearchState]:
    stats.nodes_explored += 1
    if audit is not None:
        audit(st)
    if checks[depth].is_identity:
        return engine.leaf_survivors(st, stats, link_check=link_check)
    found: list[SearchState] = []
    for child in engine.enumerate_cases(st, checks[depth], stats):
        found.extend(_walk(engine, checks, child, depth + 1, stats,
                           link_check, audit))
    return found


_FORK_CTX: dict = {}


def _fork_worker(idx: int):
    ctx = _FORK_CTX
    stats = SearchStats()
    found = _walk(ctx["engine"], ctx["checks"], ctx["tops"][idx], 1, stats,
                  ctx["link_check"])
    return [(s.t_bits, s.f_bits, s.chi, s.chi_link) for s in found], stats


def run_search(engine: SearchEngine, schedule: Schedule, link_check: bool = True,
               jobs: int = 1, audit=None) -> SearchReport:
    """Depth-first search over the whole schedule; returns the report with
    every surviving full assignment (expected: none)."""
    checks = engine.schedule_checks(schedule)
    stats = SearchStats()
    t0 = time.perf_counter()
    root = engine.initial_state()
    if jobs > 1 and audit is None:
        found = _run_parallel(engine, checks, root, stats, link_check, jobs)
    else:
        found = _walk(engine, checks, root, 0, stats, link_check, audit)
    found.sort(key=lambda s: s.t_bits)
    wall = time.perf_counter() - t0
    return SearchReport(
        schedule=schedule.name, link_check=link_check,
        feasible_functions=[survivor_states(s, engine.table) for s in found],
        stats=stats, wall_time=wall, cap=engine.cap)


def _run_parallel(engine, checks, root, stats, link_check, jobs):
    import multiprocessing as mp

    stats.nodes_explored += 1
    tops = engine.enumerate_cases(root, checks[0], stats)
    try:
        ctx = mp.get_context("fork")
    except ValueError:
        found = []
        for top in tops:
            found.extend(_walk(engine, checks, top, 1, stats, link_check))
        return found
    _FORK_CTX.update(engine=engine, checks=checks, tops=tops,
                     link_check=link_check)
    try:
        with ctx.Pool(min(jobs, len(tops))) as pool:
            results = pool.map(_fork_worker, range(len(tops)))
    finally:
        _FORK_CTX.clear()
    found = []
    for packed, wstats in results:
        stats.merge(wstats)
        found.extend(SearchState(*t) for t in packed)
    return found
