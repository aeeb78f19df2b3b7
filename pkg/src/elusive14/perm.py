"""Permutations in cycle notation, finitely generated permutation groups,
and the classification checks (cyclic, psi_p, psi_p^q, Sylow-style prime
test) used by the degree-14 verification campaign.

Points are 1-based in all textual input/output (matching the bundled
tables) and 0-based internally.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

DEFAULT_CLOSURE_CAP = 1_000_000


class ParseError(ValueError):
    """Malformed cycle notation."""


class ClosureCapExceeded(RuntimeError):
    """Group closure grew past the configured element cap."""


class WitnessError(ValueError):
    """A classification witness refers to elements outside the group."""


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0..n-1}; ``images[i]`` is the image of point i."""

    images: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (self * other)(x) = self(other(x))."""
        simg = self.images
        return Permutation(tuple(simg[j] for j in other.images))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, 0-based."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted cycle lengths including fixed points."""
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (len(self.images) - sum(lengths))
        return tuple(sorted(lengths))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.images) if i == j)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycle_string(self) -> str:
        """Canonical 1-based cycle notation; identity prints as '()'."""
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cycs)

    def __str__(self) -> str:
        return self.cycle_string()


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse a product of disjoint cycles over points 1..n.

    Empty text (or bare whitespace, or '()') denotes the identity.  Raises
    ParseError on repeated points, out-of-range points, or stray characters.
    """
    body = text.strip()
    if body in ("", "()", "id"):
        return identity(n)
    leftover = _CYCLE_RE.sub("", body).strip()
    if leftover:
        raise ParseError(f"stray characters outside cycles: {leftover!r}")
    images = list(range(n))
    seen: set[int] = set()
    for m in _CYCLE_RE.finditer(body):
        inner = m.group(1).strip()
        if not inner:
            continue
        try:
            pts = [int(tok) for tok in inner.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad cycle {m.group(0)!r}") from exc
        for p in pts:
            if not 1 <= p <= n:
                raise ParseError(f"point {p} outside 1..{n}")
            if p - 1 in seen:
                raise ParseError(f"point {p} repeated in {text!r}")
            seen.add(p - 1)
        if len(pts) < 2:
            continue
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b - 1
    return Permutation(tuple(images))


class PermGroup:
    """A finite permutation group with its element set materialized."""

    def __init__(self, degree: int, generators: tuple[Permutation, ...],
                 elements: tuple[Permutation, ...]):
        self.degree = degree
        self.generators = generators
        self.elements = elements
        self.element_set = frozenset(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, sigma: Permutation) -> bool:
        return sigma in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, order={self.order}, <{gens}>)"

    def point_orbits(self) -> list[tuple[int, ...]]:
        """Orbits on points (0-based), each sorted, ordered by smallest point."""
        seen = [False] * self.degree
        orbits = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orbit = {start}
            frontier = [start]
            while frontier:
                p = frontier.pop()
                for g in self.generators:
                    q = g(p)
                    if q not in orbit:
                        orbit.add(q)
                        frontier.append(q)
            for p in orbit:
                seen[p] = True
            orbits.append(tuple(sorted(orbit)))
        return orbits


def _closure(degree: int, gens: list[Permutation], cap: int) -> tuple[Permutation, ...]:
    ident = identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = e * g
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise ClosureCapExceeded(
                            f"closure exceeded cap of {cap} elements")
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen, key=lambda p: p.images))


def generate(generators: list[Permutation] | tuple[Permutation, ...],
             cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Materialize the group generated by ``generators`` via BFS closure."""
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator (use identity for the trivial group)")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators have mixed degrees")
    return PermGroup(degree, tuple(gens), _closure(degree, gens, cap))


def trivial_group(n: int) -> PermGroup:
    return generate([identity(n)])


def subgroup(G: PermGroup, gens: list[Permutation], cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Closure of ``gens`` inside G; raises WitnessError if gens leave G."""
    for g in gens:
        if g not in G:
            raise WitnessError(f"element {g} is not in the group")
    return generate(gens if gens else [identity(G.degree)], cap=cap)


def is_transitive(G: PermGroup) -> bool:
    """True iff the orbit of point 1 under G is the whole point set."""
    return len(G.point_orbits()[0]) == G.degree


def is_cyclic(G: PermGroup) -> bool:
    """True iff some element has order |G|."""
    n = G.order
    return any(e.order() == n for e in G.elements)


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """True iff H (a subgroup of G) is closed under conjugation by G."""
    hset = H.element_set
    for g in G.generators:
        ginv = g.inverse()
        for h in H.elements:
            if g * h * ginv not in hset:
                return False
    return True


def normal_closure(G: PermGroup, seed: Permutation) -> PermGroup:
    """Smallest normal subgroup of G containing ``seed``."""
    if seed not in G:
        raise WitnessError("seed element is not in the group")
    gens = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for s in frontier:
            for g in G.generators:
                c = g * s * g.inverse()
                if c not in gens:
                    gens.add(c)
                    nxt.append(c)
        frontier = nxt
    return generate(sorted(gens, key=lambda p: p.images), cap=G.order)


class Quotient:
    """Coset table for G/H with H normal in G.

    Cosets are materialized as frozensets of elements; multiplication goes
    through representatives, which is well defined by normality.
    """

    def __init__(self, G: PermGroup, H: PermGroup):
        self.order = G.order // H.order
        coset_of: dict[Permutation, int] = {}
        reps: list[Permutation] = []
        for e in G.elements:
            if e in coset_of:
                continue
            cid = len(reps)
            reps.append(e)
            for h in H.elements:
                coset_of[e * h] = cid
        self.reps = reps
        self.coset_of = coset_of
        self._h = H.element_set

    def coset_order(self, cid: int) -> int:
        """Order of a coset in the quotient group."""
        r = self.reps[cid]
        acc = r
        k = 1
        while acc not in self._h:
            acc = acc * r
            k += 1
        return k

    def is_cyclic(self) -> bool:
        return any(self.coset_order(c) == self.order for c in range(self.order))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_power(n: int) -> int | None:
    """Return p if n = p^k for a prime p and k >= 1, else None."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return n if _is_prime(n) else None
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
    return None


@dataclass(frozen=True)
class OliverWitness:
    """Witness for membership in psi_p (q is None) or psi_p^q."""

    p: int
    p_generators: tuple[Permutation, ...]
    q: int | None = None
    h_generators: tuple[Permutation, ...] | None = None


def verify_psi_p(G: PermGroup, w: OliverWitness) -> bool:
    """Check P = <w.p_generators> is a normal p-subgroup with cyclic quotient."""
    if w.q is not None:
        raise ValueError("psi_p witness must not carry q")
    P = subgroup(G, list(w.p_generators))
    if _prime_power(P.order) != w.p:
        return False
    if not is_normal(G, P):
        return False
    return Quotient(G, P).is_cyclic()


def verify_psi_pq(G: PermGroup, w: OliverWitness) -> bool:
    """Check the chain P normal-in H normal-in G with |P| a p-power,
    H/P cyclic, and |G/H| a q-power."""
    if w.q is None or w.h_generators is None:
        raise ValueError("psi_p^q witness needs q and H generators")
    P = subgroup(G, list(w.p_generators))
    H = subgroup(G, list(w.h_generators))
    if not P.element_set <= H.element_set:
        raise WitnessError("P is not contained in H")
    if _prime_power(P.order) != w.p:
        return False
    if not is_normal(H, P) or not is_normal(G, H):
        return False
    if not Quotient(H, P).is_cyclic():
        return False
    index = G.order // H.order
    return index == 1 or _prime_power(index) == w.q


def verify_sylow_lemma(G: PermGroup) -> Permutation | None:
    """For degree n with n-1 =: p prime, p | |G| and p^2 not | |G|, return an
    element of order p fixing exactly one point (a p-cycle on the rest)."""
    p = G.degree - 1
    if not _is_prime(p):
        return None
    if G.order % p != 0 or G.order % (p * p) == 0:
        return None
    for e in G.elements:
        if e.order() == p and len(e.fixed_points()) == 1:
            return e
    return None


@dataclass(frozen=True)
class Classification:
    """Outcome of classify(); kind is one of cyclic / psi_p / psi_pq /
    sylow_lemma / unresolved."""

    kind: str
    p: int | None = None
    q: int | None = None
    witness: OliverWitness | Permutation | None = None
    note: str = ""

    @property
    def chi_condition(self) -> tuple[str, int] | None:
        """The fixed-point Euler condition this classification licenses:
        ('exact', 1) or ('mod', q); None when unresolved."""
        if self.kind in ("cyclic", "psi_p", "sylow_lemma"):
            return ("exact", 1)
        if self.kind == "psi_pq":
            return ("mod", self.q)
        return None


def conjugacy_class_representatives(G: PermGroup) -> list[Permutation]:
    """One element per conjugacy class, smallest image tuple first."""
    seen: set[Permutation] = set()
    reps: list[Permutation] = []
    gen_pairs = [(g, g.inverse()) for g in G.generators]
    for e in G.elements:
        if e in seen:
            continue
        reps.append(e)
        cls = {e}
        frontier = [e]
        while frontier:
            x = frontier.pop()
            for g, ginv in gen_pairs:
                y = g * x * ginv
                if y not in cls:
                    cls.add(y)
                    frontier.append(y)
        seen |= cls
    return reps


def _heuristic_oliver_search(G: PermGroup) -> Classification | None:
    """Bounded witness search: candidate normal subgroups are normal
    closures of single elements of prime-power order.  Sound but
    deliberately incomplete.  Normal closures and the derived chains are
    class functions, so one representative per conjugacy class suffices."""
    reps = conjugacy_class_representatives(G)
    candidates: list[PermGroup] = []
    seen_sets: set[frozenset[Permutation]] = set()
    for e in reps:
        if e.is_identity() or _prime_power(e.order()) is None:
            continue
        P = normal_closure(G, e)
        if P.element_set in seen_sets:
            continue
        seen_sets.add(P.element_set)
        if _prime_power(P.order) is not None:
            candidates.append(P)
    candidates.sort(key=lambda P: P.order)
    for P in candidates:
        p = _prime_power(P.order)
        if Quotient(G, P).is_cyclic():
            w = OliverWitness(p=p, p_generators=P.generators)
            return Classification("psi_p", p=p, witness=w, note="heuristic witness")
    for P in candidates:
        p = _prime_power(P.order)
        seen_h: set[frozenset[Permutation]] = set()
        for e in reps:
            if e.is_identity():
                continue
            hgens = list(P.generators) + [e]
            H = subgroup(G, hgens)
            if H.element_set in seen_h or H.order == G.order:
                continue
            seen_h.add(H.element_set)
            index = G.order // H.order
            q = _prime_power(index)
            if q is None:
                continue
            if not is_normal(G, H) or not Quotient(H, P).is_cyclic():
                continue
            w = OliverWitness(p=p, q=q, p_generators=P.generators,
                              h_generators=H.generators)
            return Classification("psi_pq", p=p, q=q, witness=w,
                                  note="heuristic witness")
    return None


def classify(G: PermGroup, bundled_witness: OliverWitness | None = None, *,
             use_sylow: bool = True, use_heuristic: bool = True) -> Classification:
    """Classify G for the elusiveness argument.

    Tries, in order: cyclic test, bundled witness verification, the Sylow
    prime test, and the bounded heuristic witness search.  Deterministic.
    The keyword switches exist for negative-path testing.
    """
    if is_cyclic(G):
        order = max((e for e in G.elements), key=lambda e: (e.order(), e.images))
        return Classification("cyclic", witness=order)
    if bundled_witness is not None:
        if bundled_witness.q is None:
            if verify_psi_p(G, bundled_witness):
                return Classification("psi_p", p=bundled_witness.p,
                                      witness=bundled_witness, note="bundled witness")
        else:
            if verify_psi_pq(G, bundled_witness):
                return Classification("psi_pq", p=bundled_witness.p,
                                      q=bundled_witness.q,
                                      witness=bundled_witness, note="bundled witness")
    if use_sylow:
        sylow = verify_sylow_lemma(G)
        if sylow is not None:
            return Classification("sylow_lemma", p=G.degree - 1, witness=sylow)
    if use_heuristic:
        found = _heuristic_oliver_search(G)
        if found is not None:
            return found
    return Classification("unresolved", note="neither cyclic nor a found Oliver witness")
