"""Finite abelian groups in invariant-factor form, actions, and orbit counts.

Elements are coordinate tuples modulo the invariant factors.  Endomorphisms
are integer matrices on generator coordinates; Burnside counting and a
brute-force orbit enumerator cross-validate each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod

from .errors import (
    EnumerationBoundExceeded,
    EvenSpecialPrime,
    IllDefinedAction,
    NotAGroupAction,
    OutOfRange,
    PrimeNotInModulus,
)
from .arith import euler_phi, factorize, mult_order
from .intmat import IntMatrix, freeze, identity, mat_mul, smith_normal_form, snf_diagonal

__all__ = [
    "FinAbGroup",
    "ActionMatrix",
    "UnitGroup",
    "SubgroupHD",
    "smith_normal_form",
    "unit_group",
    "subgroup_hd",
    "fixed_point_count",
    "orbit_count",
    "brute_force_orbits",
    "group_action_from_generators",
]

ENUMERATION_BOUND = 10**6


@dataclass(frozen=True)
class FinAbGroup:
    """Z/d1 x ... x Z/dr with d1 | d2 | ... | dr, all di >= 2.

    The empty tuple is the trivial group.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise OutOfRange(f"invariant factor {d} must be >= 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise OutOfRange(f"invariant factors must form a chain: {a} does not divide {b}")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def identity_element(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, coords) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(coords, self.invariant_factors))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))


@dataclass(frozen=True)
class ActionMatrix:
    """An endomorphism of a FinAbGroup given by an integer matrix.

    Entry (i, j) is read modulo invariant factor d_i; rows are stored
    reduced so equal endomorphisms compare equal.  Well-definedness needs
    entry (i, j) divisible by d_i / gcd(d_i, d_j).
    """

    group: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        fs = self.group.invariant_factors
        r = len(fs)
        rows = freeze(self.matrix)
        if len(rows) != r or any(len(row) != r for row in rows):
            raise IllDefinedAction(f"matrix must be {r}x{r}")
        rows = tuple(
            tuple(x % fs[i] for x in row) for i, row in enumerate(rows)
        )
        for i in range(r):
            for j in range(r):
                need = fs[i] // gcd(fs[i], fs[j])
                if rows[i][j] % need:
                    raise IllDefinedAction(
                        f"entry ({i},{j}) = {rows[i][j]} must be divisible by {need}"
                    )
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, group: FinAbGroup) -> "ActionMatrix":
        return cls(group, identity(group.rank))

    @classmethod
    def inversion(cls, group: FinAbGroup) -> "ActionMatrix":
        return cls(group, tuple(
            tuple(-1 if i == j else 0 for j in range(group.rank))
            for i in range(group.rank)
        ))

    @classmethod
    def scalar(cls, group: FinAbGroup, a: int) -> "ActionMatrix":
        return cls(group, tuple(
            tuple(a if i == j else 0 for j in range(group.rank))
            for i in range(group.rank)
        ))

    def apply(self, x) -> tuple[int, ...]:
        fs = self.group.invariant_factors
        return tuple(
            sum(self.matrix[i][j] * x[j] for j in range(len(fs))) % fs[i]
            for i in range(len(fs))
        )

    def compose(self, other: "ActionMatrix") -> "ActionMatrix":
        assert self.group == other.group
        if self.group.rank == 0:
            return self
        return ActionMatrix(self.group, mat_mul(self.matrix, other.matrix))

    def is_identity(self) -> bool:
        return self == ActionMatrix.identity(self.group)

    def is_automorphism(self) -> bool:
        return _kernel_size(self.group, self.matrix) == 1

    def order(self, cap: int) -> int | None:
        """Least k in 1..cap with self**k = identity, or None."""
        x = self
        for k in range(1, cap + 1):
            if x.is_identity():
                return k
            x = x.compose(self)
        return None


def _kernel_size(group: FinAbGroup, matrix: IntMatrix) -> int:
    """Number of x in the group with (matrix) x = 0 coordinatewise.

    Equals the index of M Z^r + D Z^r in Z^r (D = diag of invariant
    factors), read off the Smith normal form of the stacked matrix.
    """
    fs = group.invariant_factors
    r = len(fs)
    if r == 0:
        return 1
    stacked = tuple(
        tuple(matrix[i][j] for j in range(r))
        + tuple(fs[i] if i == j else 0 for j in range(r))
        for i in range(r)
    )
    diag = snf_diagonal(stacked)
    return prod(d for d in diag if d)


def fixed_point_count(action: ActionMatrix) -> int:
    """|{x : action(x) = x}| via Smith normal form of (A - I | D)."""
    r = action.group.rank
    a_minus_i = tuple(
        tuple(action.matrix[i][j] - (1 if i == j else 0) for j in range(r))
        for i in range(r)
    )
    return _kernel_size(action.group, a_minus_i)


# ----- unit groups (Z/n)^x and the subgroups H_D -----

@dataclass(frozen=True)
class UnitComponent:
    prime: int
    prime_power: int
    generators: tuple[int, ...]      # residues mod prime_power
    orders: tuple[int, ...]


@dataclass(frozen=True)
class UnitGroup:
    modulus: int
    generators: tuple[int, ...]      # CRT lifts, one list over all components
    generator_orders: tuple[int, ...]
    crt_components: tuple[UnitComponent, ...]

    @property
    def order(self) -> int:
        return euler_phi(self.modulus)

    def elements(self) -> list[int]:
        n = self.modulus
        return [u for u in range(1, n) if gcd(u, n) == 1]

    @cached_property
    def _dlog_table(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, tuple[int, ...]] = {}
        for exps in itertools.product(*(range(o) for o in self.generator_orders)):
            table.setdefault(self.from_exponents(exps), exps)
        return table

    def exponents_of(self, u: int) -> tuple[int, ...]:
        """Write u as a product of generator powers (table lookup)."""
        if gcd(u, self.modulus) != 1:
            raise OutOfRange(f"{u} is not a unit mod {self.modulus}")
        return self._dlog_table[u % self.modulus]

    def from_exponents(self, exps) -> int:
        n = self.modulus
        out = 1 % n
        for g, e in zip(self.generators, exps):
            out = out * pow(g, e, n) % n
        return out


def _crt_lift(residue: int, q: int, n: int) -> int:
    """x mod n with x = residue mod q and x = 1 mod n/q (q a factor of n, coprime to n/q)."""
    rest = n // q
    if rest == 1:
        return residue % n
    for x in range(1, n + 1):
        if x % q == residue % q and x % rest == 1:
            return x
    raise AssertionError("CRT lift must exist")


def _component(p: int, a: int) -> UnitComponent:
    q = p**a
    if p == 2:
        if a == 1:
            return UnitComponent(2, 2, (), ())
        if a == 2:
            return UnitComponent(2, 4, (3,), (2,))
        return UnitComponent(2, q, (q - 1, 3), (2, q // 4))
    target = euler_phi(q)
    for g in range(2, q):
        if gcd(g, q) == 1 and mult_order(g, q) == target:
            return UnitComponent(p, q, (g,), (target,))
    raise AssertionError(f"no primitive root mod {q}")


def unit_group(n: int) -> UnitGroup:
    if n < 2:
        raise OutOfRange(f"modulus {n} must be >= 2")
    comps = tuple(_component(p, a) for p, a in sorted(factorize(n).items()))
    gens: list[int] = []
    orders: list[int] = []
    for comp in comps:
        for g, o in zip(comp.generators, comp.orders):
            gens.append(_crt_lift(g, comp.prime_power, n))
            orders.append(o)
    return UnitGroup(n, tuple(gens), tuple(orders), comps)


@dataclass(frozen=True)
class SubgroupHD:
    """The subgroup of (Z/n)^x with {+-1} at each special prime component."""

    parent: UnitGroup
    special_primes: frozenset[int]
    generators: tuple[int, ...]
    generator_orders: tuple[int, ...]

    @property
    def order(self) -> int:
        return prod(self.generator_orders, start=1)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def elements(self) -> list[int]:
        n = self.parent.modulus
        seen = set()
        for exps in itertools.product(*(range(o) for o in self.generator_orders)):
            out = 1 % n
            for g, e in zip(self.generators, exps):
                out = out * pow(g, e, n) % n
            seen.add(out)
        assert len(seen) == self.order, "H_D generators must be independent"
        return sorted(seen)


def subgroup_hd(units: UnitGroup, special: set[int]) -> SubgroupHD:
    n = units.modulus
    special = frozenset(int(p) for p in special)
    for p in special:
        if n % p:
            raise PrimeNotInModulus(f"{p} does not divide {n}")
        if p == 2:
            raise EvenSpecialPrime("Gal of conductor 2 is trivial; no order-2 subgroup")
    gens: list[int] = []
    orders: list[int] = []
    for comp in units.crt_components:
        if comp.prime in special:
            gens.append(_crt_lift(comp.prime_power - 1, comp.prime_power, n))
            orders.append(2)
        else:
            for g, o in zip(comp.generators, comp.orders):
                gens.append(_crt_lift(g, comp.prime_power, n))
                orders.append(o)
    return SubgroupHD(units, special, tuple(gens), tuple(orders))


# ----- orbit counting -----

def _validate_action_list(group: FinAbGroup, actions) -> None:
    if not actions:
        raise NotAGroupAction("empty action list")
    if any(a.group != group for a in actions):
        raise NotAGroupAction("actions live on different groups")
    distinct = set(actions)
    if ActionMatrix.identity(group) not in distinct:
        raise NotAGroupAction("identity missing from the action list")
    for a in distinct:
        if not a.is_automorphism():
            raise NotAGroupAction("action list contains a non-automorphism")
    for a in distinct:
        for b in distinct:
            if a.compose(b) not in distinct:
                raise NotAGroupAction("action list is not closed under composition")


def orbit_count(group: FinAbGroup, actions) -> int:
    """Burnside count: orbits = average number of fixed points.

    ``actions`` is indexed by the elements of the acting group (one entry
    per element, repeats allowed when the action has kernel).
    """
    actions = list(actions)
    _validate_action_list(group, actions)
    total = sum(fixed_point_count(a) for a in actions)
    q, rem = divmod(total, len(actions))
    if rem:
        raise NotAGroupAction("fixed-point average is not an integer")
    return q


def brute_force_orbits(group: FinAbGroup, actions, bound: int = ENUMERATION_BOUND):
    """Explicit orbit partition; the oracle for orbit_count."""
    actions = list(actions)
    _validate_action_list(group, actions)
    if group.order > bound:
        raise EnumerationBoundExceeded(
            f"group order {group.order} exceeds enumeration bound {bound}"
        )
    seen: set[tuple[int, ...]] = set()
    orbits = []
    for x in group.elements():
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for a in actions:
                z = a.apply(y)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


def group_action_from_generators(group: FinAbGroup, generators) -> list[ActionMatrix]:
    """Expand commuting generator actions (with declared orders) to the full list.

    ``generators`` is a sequence of (ActionMatrix, order) pairs.  Validity is
    checked on the generators and their defining relations: each must be an
    automorphism with gen**order = identity, and the generators must commute.
    The result has one entry per element of the abstract product group.
    """
    gens = [(a, int(o)) for a, o in generators]
    for a, o in gens:
        if a.group != group:
            raise NotAGroupAction("generator acts on the wrong group")
        if not a.is_automorphism():
            raise NotAGroupAction("generator is not an automorphism")
        if o < 1:
            raise NotAGroupAction("generator order must be positive")
        k = a.order(o)
        if k is None or o % k:
            raise NotAGroupAction("declared order is not a multiple of the true order")
    for (a, _), (b, _) in itertools.combinations(gens, 2):
        if a.compose(b) != b.compose(a):
            raise NotAGroupAction("generators do not commute")
    powers = []
    for a, o in gens:
        ps = [ActionMatrix.identity(group)]
        for _ in range(o - 1):
            ps.append(ps[-1].compose(a))
        powers.append(ps)
    out = []
    for exps in itertools.product(*(range(o) for _, o in gens)):
        m = ActionMatrix.identity(group)
        for ps, e in zip(powers, exps):
            m = m.compose(ps[e])
        out.append(m)
    return out or [ActionMatrix.identity(group)]
