"""Replay of the bundled worked-example branch.

Follows the published branch choices step by step, checks the number of
feasible cases at each step, and compares the resulting T/F orbit sets
against the published ones.  Published labels enter the comparison only
through the bundled anchor representatives; labels without an anchor are
recorded as skipped, never guessed.

Case counts come in two flavours.  The published counts are block-local:
assignments of the free block-union orbits consistent with the inclusion
order among the governed unions and the subgroup's Euler condition.  The
search itself explores the (possibly smaller) set of children that also
survive full orbit closure; both numbers are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundle import Campaign, expand_labels
from .complexes import FALSE, FREE, TRUE
from .search import SearchState, SearchStats, SubgroupCheck, condition_met


class MappingIncomplete(Exception):
    """A published label needed for branch selection has no anchor."""


@dataclass
class ThetaComparison:
    side: str
    printed_count: int
    computed_count: int
    matched: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    mismatched: list[str] = field(default_factory=list)
    complete_levels: list[int] = field(default_factory=list)


@dataclass
class TraceStep:
    step: int
    subgroup: str
    printed_cases: int
    local_cases: int
    child_cases: int
    selection: dict[str, str]
    theta_t: ThetaComparison
    theta_f: ThetaComparison
    errata: tuple[str, ...]


@dataclass
class ReplayResult:
    steps: list[TraceStep]
    satisfied_unvisited: list[str]
    pending_unvisited: list[str]
    chi: int
    chi_link: int
    free_orbits: list[dict]
    free_relations: list[tuple[str, str]]
    leaf_cases: list[dict]
    cases_with_chi_1: int
    cases_passing_link: int
    published_final: dict
    combination_check: dict
    problems: list[str]
    mapping_incomplete: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems


def count_local_cases(camp: Campaign, st: SearchState,
                      check: SubgroupCheck) -> int:
    """Number of assignments of the check's free governed orbits that are
    consistent at block level: a block collection can be a face only when
    all its sub-collections are faces, and the Euler condition holds.  This
    is the counting convention the published worked example uses; it knows
    nothing of orbit relations beyond the governed unions themselves."""
    table = camp.table
    m = len(check.blocks)
    union_of = [0] * (1 << m)
    for s in range(1, 1 << m):
        low = s & -s
        union_of[s] = union_of[s ^ low] | check.blocks[low.bit_length() - 1]
    covers: dict[int, set[int]] = {}
    for s in range(1, 1 << m):
        o_sup = table.orbit_of(union_of[s])
        rem = s
        while rem:
            b = rem & -rem
            rem ^= b
            if s ^ b:
                covers.setdefault(o_sup, set()).add(
                    table.orbit_of(union_of[s ^ b]))
    lower: dict[int, int] = {}
    for o in sorted(check.governed, key=lambda o: table.level[o]):
        acc = 1 << o
        for p in covers.get(o, ()):
            acc |= lower.get(p, 1 << p)
        lower[o] = acc
    upper: dict[int, int] = {o: 1 << o for o in check.governed}
    for o in check.governed:
        rem = lower[o] & ~(1 << o)
        while rem:
            b = rem & -rem
            rem ^= b
            upper[b.bit_length() - 1] |= 1 << o
    assigned = st.t_bits | st.f_bits
    free = [o for o in check.governed if not assigned >> o & 1]
    count = 0

    def rec(t_bits: int, f_bits: int, k: int) -> None:
        nonlocal count
        while k < len(free) and (t_bits | f_bits) >> free[k] & 1:
            k += 1
        if k == len(free):
            chi = sum(w for o, w in check.weights if t_bits >> o & 1)
            if condition_met(check.condition, chi):
                count += 1
            return
        o = free[k]
        add_t = lower[o] & ~t_bits
        if not add_t & f_bits:
            rec(t_bits | add_t, f_bits, k + 1)
        add_f = upper[o] & ~f_bits
        if not add_f & t_bits:
            rec(t_bits, f_bits | add_f, k + 1)

    gbits = 0
    for o in check.governed:
        gbits |= 1 << o
    rec(st.t_bits & gbits, st.f_bits & gbits, 0)
    return count


def _compare_theta(camp: Campaign, state: SearchState, printed_t: list[str],
                   printed_f: list[str], problems: list[str],
                   where: str) -> tuple[ThetaComparison, ThetaComparison]:
    table, anchors = camp.table, camp.anchors
    t_set, f_set = set(printed_t), set(printed_f)
    per_level_counts = {k: len(table.ids_at_level[k]) for k in range(table.n + 1)}

    def state_of(oid: int) -> str:
        if state.t_bits >> oid & 1:
            return TRUE
        if state.f_bits >> oid & 1:
            return FALSE
        return FREE

    comparisons = []
    for side, labels, want in ((TRUE, printed_t, TRUE), (FALSE, printed_f, FALSE)):
        comp = ThetaComparison(
            side=side, printed_count=len(labels),
            computed_count=sum(1 for o in range(1, table.orbit_count)
                               if state_of(o) == want))
        for lbl in labels:
            oid = anchors.oid(lbl)
            if oid is None:
                comp.skipped.append(lbl)
            elif state_of(oid) == want:
                comp.matched.append(lbl)
            else:
                comp.mismatched.append(lbl)
                problems.append(f"{where}: published {lbl} should be {want} "
                                f"but computed {state_of(oid)}")
        # levels listed in full pin every orbit of that level, anchored or not
        by_level: dict[int, set[int]] = {}
        for lbl in labels:
            k, j = lbl.split(".")
            by_level.setdefault(int(k), set()).add(int(j))
        for k, idxs in sorted(by_level.items()):
            if idxs == set(range(per_level_counts[k])):
                comp.complete_levels.append(k)
                for oid in table.ids_at_level[k]:
                    if state_of(oid) != want:
                        problems.append(
                            f"{where}: level {k} is fully listed as {want} "
                            f"but orbit {table.label(oid)} computed "
                            f"{state_of(oid)}")
        comparisons.append(comp)

    # reverse direction: every anchored label must sit where the state says
    for lbl, oid in anchors.label_to_oid.items():
        st = state_of(oid)
        if st == TRUE and lbl not in t_set:
            problems.append(f"{where}: anchored {lbl} computed T but absent "
                            f"from the published T set")
        elif st == FALSE and lbl not in f_set:
            problems.append(f"{where}: anchored {lbl} computed F but absent "
                            f"from the published F set")
        elif st == FREE and (lbl in t_set or lbl in f_set):
            problems.append(f"{where}: anchored {lbl} computed free but "
                            f"published as determined")
    return comparisons[0], comparisons[1]


def _select_case(camp: Campaign, children: list[SearchState],
                 parent: SearchState, governed: tuple[int, ...],
                 select: dict, where: str) -> tuple[SearchState, dict[str, str]]:
    anchors = camp.anchors
    named: dict[int, str] = {}
    echo: dict[str, str] = {}
    for lbl, want in select.get("set", ()):
        oid = anchors.oid(lbl)
        if oid is None:
            raise MappingIncomplete(f"{where}: selector label {lbl} has no anchor")
        named[oid] = want
        echo[lbl] = want
    default = select.get("default_free")
    assigned_before = parent.t_bits | parent.f_bits
    free_before = [o for o in governed if not assigned_before >> o & 1]

    def matches(child: SearchState) -> bool:
        for oid, want in named.items():
            got = TRUE if child.t_bits >> oid & 1 else FALSE
            if got != want:
                return False
        if default is not None:
            for o in free_before:
                if o in named:
                    continue
                got = TRUE if child.t_bits >> o & 1 else FALSE
                if got != default:
                    return False
        return True

    chosen = [c for c in children if matches(c)]
    if len(chosen) != 1:
        raise MappingIncomplete(
            f"{where}: selector identifies {len(chosen)} cases, expected 1")
    return chosen[0], echo


def replay_case_study(camp: Campaign, cap: int = 1 << 20) -> ReplayResult:
    """Replay the bundled branch and collect every comparison outcome.

    Published integers that the recomputation reproduces are enforced as
    problems-on-mismatch; the published final free-orbit and case counts
    are returned alongside the recomputed ones (the bundled data documents
    where they disagree and why the recomputation is authoritative).
    """
    engine = camp.engine(cap=cap)
    table = camp.table
    stats = SearchStats()
    state = engine.initial_state()
    problems: list[str] = []
    steps: list[TraceStep] = []
    visited: set[str] = set()

    for raw in camp.case_study["steps"]:
        where = f"step {raw['step']}"
        check = camp.checks[raw["subgroup"]]
        visited.add(raw["subgroup"])
        local = count_local_cases(camp, state, check)
        children = engine.enumerate_cases(state, check, stats)
        if local != raw["printed_cases"]:
            problems.append(f"{where}: {local} block-local cases computed, "
                            f"{raw['printed_cases']} published")
        chosen, echo = _select_case(camp, children, state, check.governed,
                                    raw["select"], where)
        state = chosen
        printed_t = expand_labels(raw["theta_t"])
        printed_f = expand_labels(raw["theta_f"])
        comp_t, comp_f = _compare_theta(camp, state, printed_t, printed_f,
                                        problems, where)
        steps.append(TraceStep(
            step=raw["step"], subgroup=raw["subgroup"],
            printed_cases=raw["printed_cases"], local_cases=local,
            child_cases=len(children), selection=echo,
            theta_t=comp_t, theta_f=comp_f,
            errata=tuple(raw.get("errata", ()))))

    # subgroups the published branch never narrates: either their condition
    # is already determined and satisfied, or they still hold free governed
    # orbits and simply branch at their own schedule position
    satisfied: list[str] = []
    pending: list[str] = []
    assigned = state.t_bits | state.f_bits
    for name, check in camp.checks.items():
        if name in visited or check.is_identity:
            continue
        if any(not assigned >> o & 1 for o in check.governed):
            pending.append(name)
            continue
        chi = engine.subgroup_chi(state, check)
        if not condition_met(check.condition, chi):
            problems.append(f"{name}: unvisited by the published branch but "
                            f"its condition fails (chi={chi})")
        satisfied.append(name)

    final = camp.case_study["final"]
    if state.chi != final["chi"]:
        problems.append(f"final: chi {state.chi} != published {final['chi']}")
    if state.chi_link != final["chi_link"]:
        problems.append(f"final: link chi {state.chi_link} != published "
                        f"{final['chi_link']}")

    free = [o for o in range(1, table.orbit_count) if not assigned >> o & 1]
    if len(free) != final["computed_free_orbits"]:
        problems.append(f"final: {len(free)} free orbits, bundled "
                        f"regression value {final['computed_free_orbits']}")
    free_orbits = [{
        "orbit": str(table.label(o)),
        "level": table.level[o],
        "size": table.size[o],
        "containing_x1": table.containing_x1[o],
    } for o in free]
    free_relations = [
        (str(table.label(a)), str(table.label(b)))
        for a in free for b in free
        if a != b and camp.poset.lower[b] >> a & 1]

    cases: list[SearchState] = []
    survivors = engine.leaf_survivors(state, stats, link_check=True,
                                      collect_cases=cases)
    leaf_cases = [{
        "true_free_orbits": [str(table.label(o)) for o in free
                             if c.t_bits >> o & 1],
        "chi": c.chi,
        "chi_link": c.chi_link,
    } for c in cases]
    if len(cases) != final["computed_cases_with_chi_1"]:
        problems.append(f"final: {len(cases)} chi=1 cases, bundled "
                        f"regression value {final['computed_cases_with_chi_1']}")
    if len(survivors) != final["cases_passing_link"]:
        problems.append(f"final: {len(survivors)} cases pass the link "
                        f"condition, published {final['cases_passing_link']}")

    combo = _check_combination_table(camp, problems)
    mapping_incomplete = sorted(
        {lbl for s in steps for lbl in s.theta_t.skipped + s.theta_f.skipped})
    return ReplayResult(
        steps=steps, satisfied_unvisited=sorted(satisfied),
        pending_unvisited=sorted(pending), chi=state.chi,
        chi_link=state.chi_link, free_orbits=free_orbits,
        free_relations=free_relations, leaf_cases=leaf_cases,
        cases_with_chi_1=len(cases), cases_passing_link=len(survivors),
        published_final={
            "free_orbits": final["published_free_orbits"],
            "free_labels": final["published_free_labels"],
            "cases_with_chi_1": final["published_cases_with_chi_1"],
        },
        combination_check=combo, problems=problems,
        mapping_incomplete=mapping_incomplete)


def _check_combination_table(camp: Campaign, problems: list[str]) -> dict:
    """The published survey of block-union orbits for the 6-block subgroup:
    multiplicity patterns must match per level, and anchored labels must
    land on canonical orbits with the right multiplicity."""
    from itertools import combinations

    table = camp.table
    spec = camp.case_study["combination_table"]
    blocks = camp.checks["G6_3"].blocks
    result: dict[str, dict] = {}
    for k in ("1", "2", "3"):
        counts: dict[int, int] = {}
        for combo in combinations(range(len(blocks)), int(k)):
            union = 0
            for b in combo:
                union |= blocks[b]
            oid = table.orbit_of(union)
            counts[oid] = counts.get(oid, 0) + 1
        printed = spec[k]
        computed_pattern = {}
        for oid, c in counts.items():
            key = (table.level[oid], c)
            computed_pattern[key] = computed_pattern.get(key, 0) + 1
        printed_pattern = {}
        for lbl, mult in printed:
            lvl = int(lbl.split(".")[0]) if lbl != "?" else None
            key = (lvl, mult)
            printed_pattern[key] = printed_pattern.get(key, 0) + 1
        # '?' rows have an unknown level: fold them into the computed
        # pattern by matching multiplicity alone
        for (lvl, mult), cnt in list(printed_pattern.items()):
            if lvl is not None:
                continue
            del printed_pattern[(lvl, mult)]
            candidates = [key for key in computed_pattern
                          if key[1] == mult and
                          computed_pattern[key] > printed_pattern.get(key, 0)]
            if len({c[0] for c in candidates}) == 1:
                printed_pattern[candidates[0]] = (
                    printed_pattern.get(candidates[0], 0) + cnt)
            else:
                problems.append(f"combination table k={k}: cannot place an "
                                f"unlabelled class of multiplicity {mult}")
        if computed_pattern != printed_pattern:
            problems.append(f"combination table k={k}: (level, multiplicity) "
                            f"pattern differs from the published survey")
        anchored_checked = []
        for lbl, mult in printed:
            oid = camp.anchors.oid(lbl)
            if oid is None:
                continue
            if counts.get(oid, 0) != mult:
                problems.append(
                    f"combination table k={k}: label {lbl} published with "
                    f"multiplicity {mult}, computed {counts.get(oid, 0)}")
            else:
                anchored_checked.append(lbl)
        result[k] = {
            "orbit_classes": len(counts),
            "anchored_verified": anchored_checked,
        }
    return result
