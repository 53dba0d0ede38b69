"""Genus cardinality, crystal-class counting, bounds, and classification.

The crystal-class count is an exact Burnside orbit count of the Galois
group (or its special subgroup H_D) on the product of class groups over
the divisors of the holonomy order.  The genus is the sum over class-tuple
representatives of per-prime normalizer-orbit terms; those terms are
resolved through a provenance-tracked criterion ladder:

  T1  delta in {6, 10, 14} or delta prime: every term is 1.
  T2  the lattice is the regular module plus a trivial line (R(delta)+Z
      up to reordering): the normalizer contains the holomorph, which is
      transitive on each nonzero fixed set, so every term is 1.
  T3  user-supplied counts (per prime and representative).
  T4  otherwise the term is unknown and the genus is reported as bounds.

Nothing is ever silently defaulted; unresolved terms surface as bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from pathlib import Path

from .errors import (
    EnumerationBoundExceeded,
    MissingConductor,
    NoBieberbachGroup,
    NotSpecial,
    OutOfRange,
    ParseError,
)
from .arith import SquarefreeContext, divisors, is_prime
from .abelian import UnitGroup, fixed_point_count, subgroup_hd, unit_group
from .classgroups import Registry, restriction_action
from .cohomology import fixed_nonzero_count, h2, special_primes, x_size
from .lattice import (
    CANCELLABLE,
    InvariantTuple,
    LatticeSpec,
    RegularBlock,
    TrivialBlock,
    compile_matrix,
    invariants_of,
)

ENUMERATION_BOUND = 10**6


@dataclass(frozen=True)
class OrbitPolicy:
    """User-supplied normalizer-orbit counts, keyed by (prime, representative index)."""

    supplied: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for key, count in self.supplied.items():
            if count < 1:
                raise OutOfRange(f"orbit count for {key} must be positive, got {count}")

    @classmethod
    def from_file(cls, path: str | Path) -> "OrbitPolicy":
        """Parse 'p rep_index count' triples, one per line, '#' comments allowed."""
        supplied: dict[tuple[int, int], int] = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"orbit-term line needs 'p rep_index count': '{line}'")
            p, rep, count = (int(tok) for tok in parts)
            supplied[(p, rep)] = count
        return cls(supplied)


@dataclass(frozen=True)
class OrbitTerm:
    prime: int
    rep_index: int
    value: int | None
    provenance: str


@dataclass
class GenusReport:
    delta: int
    lattice: str
    rank: int
    special_primes: tuple[int, ...]
    crystal_class_size: int
    representatives: list[tuple[tuple[int, ...], ...]] | None
    terms: list[OrbitTerm]
    genus: int | None
    lower_bound: int
    upper_bound: int
    x_size: int
    notes: list[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.genus is not None

    def __post_init__(self):
        if self.genus is not None:
            assert self.genus <= self.upper_bound, "exact genus must respect its bound"


class _ProductAction:
    """The acting unit set and its per-divisor restriction matrices."""

    def __init__(self, ctx: SquarefreeContext, registry: Registry, special):
        self.ctx = ctx
        self.registry = registry
        for d in ctx.divisors:
            if d not in registry:
                raise MissingConductor(f"registry has no record for conductor {d}")
        self.units: UnitGroup = unit_group(ctx.delta)
        if special:
            self.acting = subgroup_hd(self.units, set(special)).elements()
        else:
            self.acting = self.units.elements()
        self.groups = {d: registry.get(d).group for d in ctx.divisors}
        self.tables = {
            u: {
                d: restriction_action(self.units, u, d, registry)
                for d in ctx.divisors
            }
            for u in self.acting
        }

    def orbit_count(self) -> int:
        total = 0
        for u in self.acting:
            total += prod(fixed_point_count(a) for a in self.tables[u].values())
        count, rem = divmod(total, len(self.acting))
        assert rem == 0, "Burnside average must be an integer"
        return count

    def product_order(self) -> int:
        return prod(g.order for g in self.groups.values())

    def representatives(self, bound: int | None = None):
        """Lexicographically least element of each orbit of class tuples."""
        if bound is None:
            bound = ENUMERATION_BOUND
        if self.product_order() > bound:
            raise EnumerationBoundExceeded(
                f"class-tuple product has order {self.product_order()} > {bound}"
            )
        ds = self.ctx.divisors
        seen: set[tuple] = set()
        reps = []
        for tup in itertools.product(*(sorted(self.groups[d].elements()) for d in ds)):
            if tup in seen:
                continue
            orbit = {tup}
            frontier = [tup]
            while frontier:
                x = frontier.pop()
                for u in self.acting:
                    y = tuple(self.tables[u][d].apply(xi) for d, xi in zip(ds, x))
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
            seen |= orbit
            reps.append(min(orbit))
        return reps


def crystal_class_size(inv: InvariantTuple, special, registry: Registry) -> int:
    """Orbit count of H_D (or the full Galois group when D is empty) on the
    product of class groups over all divisors of delta."""
    return _ProductAction(inv.context, registry, tuple(special)).orbit_count()


def representatives_T(inv: InvariantTuple, special, registry: Registry,
                      bound: int = ENUMERATION_BOUND):
    """One class tuple per orbit of the crystal-class action, lexicographically least."""
    return _ProductAction(inv.context, registry, tuple(special)).representatives(bound)


def _is_regular_plus_line(spec: LatticeSpec) -> bool:
    kinds = sorted(
        ("R", b.e) if isinstance(b, RegularBlock)
        else ("Z", 1) if isinstance(b, TrivialBlock)
        else ("I", b.d)
        for b in spec.blocks
    )
    return kinds == sorted([("R", spec.context.delta), ("Z", 1)])


def genus_upper_bound(spec: LatticeSpec, registry: Registry) -> int:
    """|H at delta|^(number of divisors) times the largest nonzero fixed
    count to the power (number of prime divisors)."""
    ctx = spec.context
    matrix = compile_matrix(spec)
    h_delta = registry.get(ctx.delta).group.order
    biggest = max(
        fixed_nonzero_count(h2(matrix, p, ctx.delta)) for p in ctx.primes
    )
    return h_delta ** len(ctx.divisors) * biggest ** len(ctx.primes)


def _ladder_criterion(spec: LatticeSpec) -> str | None:
    """The uniform (representative-independent) transitivity criteria."""
    delta = spec.context.delta
    if delta in CANCELLABLE:
        return "small-delta-theorem"
    if is_prime(delta):
        return "prime-order-transitivity"
    if _is_regular_plus_line(spec):
        return "holomorph-of-regular-module"
    return None


def _genus_report(spec: LatticeSpec, registry: Registry, policy, notes) -> GenusReport:
    ctx = spec.context
    matrix = compile_matrix(spec)
    size = x_size(matrix, ctx)
    if size == 0:
        raise NoBieberbachGroup(
            "X(G, M) is empty: some restriction has no nonzero fixed class"
        )
    special = special_primes(matrix, ctx)
    counts = {p: fixed_nonzero_count(h2(matrix, p, ctx.delta)) for p in ctx.primes}
    action = _ProductAction(ctx, registry, special)
    crystal = action.orbit_count()
    try:
        reps = action.representatives()
    except EnumerationBoundExceeded:
        reps = None
        notes.append(
            f"class-tuple product too large to enumerate; |T| = {crystal} by Burnside"
        )
    if reps is not None:
        assert len(reps) == crystal, "Burnside and brute-force orbit counts must agree"
    upper = genus_upper_bound(spec, registry)

    criterion = _ladder_criterion(spec)
    terms: list[OrbitTerm] = []
    if criterion is not None:
        notes.append(f"orbit terms resolved by {criterion}")
        rep_indices = list(range(crystal)) if reps is not None else [-1]
        terms = [
            OrbitTerm(p, i, 1, criterion) for i in rep_indices for p in ctx.primes
        ]
        genus = crystal
        lower = genus
    elif reps is None:
        terms = [OrbitTerm(p, -1, None, "unknown") for p in ctx.primes]
        genus = None
        lower = crystal
        notes.append("unresolved normalizer terms; genus reported as bounds")
    else:
        for i in range(crystal):
            for p in ctx.primes:
                c = policy.supplied.get((p, i)) if policy else None
                if c is None:
                    terms.append(OrbitTerm(p, i, None, "unknown"))
                elif c > counts[p]:
                    raise OutOfRange(
                        f"supplied orbit term {c} at p={p} exceeds the "
                        f"{counts[p]} nonzero fixed classes"
                    )
                else:
                    terms.append(OrbitTerm(p, i, c, "user-supplied"))
        per_rep = {i: 1 for i in range(crystal)}
        for t in terms:
            per_rep[t.rep_index] *= t.value if t.value is not None else 1
        if all(t.value is not None for t in terms):
            genus = sum(per_rep.values())
            lower = genus
        else:
            genus = None
            lower = sum(per_rep.values())
            unresolved = sorted({t.prime for t in terms if t.value is None})
            notes.append(
                "unresolved normalizer terms at "
                + ", ".join(f"p={p}" for p in unresolved)
                + "; genus reported as bounds"
            )

    return GenusReport(
        delta=ctx.delta,
        lattice=spec.text(),
        rank=spec.rank,
        special_primes=special,
        crystal_class_size=crystal,
        representatives=reps,
        terms=terms,
        genus=genus,
        lower_bound=lower,
        upper_bound=upper,
        x_size=size,
        notes=notes,
    )


def genus_cardinality(spec: LatticeSpec, registry: Registry,
                      policy: OrbitPolicy | None = None) -> GenusReport:
    """The genus formula: sum over class-tuple representatives of the product
    over primes of normalizer-orbit counts on the nonzero fixed classes."""
    notes: list[str] = []
    report = _genus_report(spec, registry, policy, notes)
    if report.special_primes:
        report.notes.append(
            "lattice is special at " + ", ".join(str(p) for p in report.special_primes)
        )
    return report


def genus_special(spec: LatticeSpec, registry: Registry,
                  policy: OrbitPolicy | None = None) -> GenusReport:
    """The special-case product form; requires at least one special prime.

    The special primes contribute their orbit terms with the Galois action
    restricted to H_D, exactly as in genus_cardinality; the two entry
    points differ only in the non-special rejection.
    """
    ctx = spec.context
    matrix = compile_matrix(spec)
    if not special_primes(matrix, ctx):
        raise NotSpecial("no prime restriction is exceptional")
    notes = ["special-case product over special and non-special primes"]
    return _genus_report(spec, registry, policy, notes)


# ----- classification of prime-order holonomy -----

@dataclass
class CharlapReport:
    prime: int
    nonexceptional: list[tuple[int, int, int]]
    theta_nonexceptional: int
    exceptional_b: list[int]
    theta_exceptional: int

    @property
    def total(self) -> int:
        return (
            len(self.nonexceptional) * self.theta_nonexceptional
            + len(self.exceptional_b) * self.theta_exceptional
        )


def _theta_counts(p: int, registry: Registry) -> tuple[int, int]:
    """Orbit counts of the full Galois group and of {+-1} on H at p."""
    group = registry.get(p).group
    if group.rank == 0 or p == 2:
        return 1, 1
    units = unit_group(p)
    full = _orbits_of_units(units, units.elements(), p, registry, group)
    pm = subgroup_hd(units, {p}).elements()
    c2 = _orbits_of_units(units, pm, p, registry, group)
    return full, c2


def _orbits_of_units(units, elements, d, registry, group) -> int:
    total = sum(
        fixed_point_count(restriction_action(units, u, d, registry)) for u in elements
    )
    count, rem = divmod(total, len(elements))
    assert rem == 0
    return count


def charlap_enumerate(p: int, bounds: tuple[int, int, int], registry: Registry,
                      dimension: int | None = None) -> CharlapReport:
    """Enumerate the classified tuples for prime-order holonomy.

    Non-exceptional classes are 4-tuples (a, b, c; theta) with a > 0,
    b >= 0, c >= 0, (a, c) != (1, 0), (b, c) != (0, 0) and theta ranging
    over Galois orbits of the class group; exceptional classes are pairs
    (b, theta) with b > 0 and theta over orbits of the order-2 subgroup.
    ``dimension``, when given, keeps only tuples with total rank
    a(p-1) + b + cp (respectively b(p-1) + 1); that filter is derived
    bookkeeping, not part of the classification.
    """
    if not is_prime(p):
        raise OutOfRange(f"{p} is not prime")
    a_max, b_max, c_max = bounds
    theta_full, theta_c2 = _theta_counts(p, registry)
    nonexceptional = []
    for a in range(1, a_max + 1):
        for b in range(0, b_max + 1):
            for c in range(0, c_max + 1):
                if (a, c) == (1, 0) or (b, c) == (0, 0):
                    continue
                if dimension is not None and a * (p - 1) + b + c * p != dimension:
                    continue
                nonexceptional.append((a, b, c))
    exceptional = [
        b for b in range(1, b_max + 1)
        if dimension is None or b * (p - 1) + 1 == dimension
    ]
    return CharlapReport(p, nonexceptional, theta_full, exceptional, theta_c2)
