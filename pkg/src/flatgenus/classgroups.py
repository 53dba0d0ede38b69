"""Cyclotomic class groups: file-ingested registry plus an analytic oracle.

Class-group structures and their Galois actions are data, not computed;
the registry ships with the package and is validated on load.  The
independent cross-check is the relative class number h-(d), assembled
exactly from generalized Bernoulli numbers B_{1,chi} of the odd Dirichlet
characters, with character arithmetic done in Q[x] modulo cyclotomic
polynomials (never floating point).

Conventions for the relative class number formula, which data producers
must share:  h-(d) = Q * w * prod_{chi odd} (-B_{1,chi} / 2), the product
over odd characters of (Z/d)^x, each evaluated through the primitive
character inducing it.  A conductor d = 2 mod 4 is first replaced by d/2
(same field).  Then Q = 1 for prime-power d and 2 otherwise, and w = 2d
for odd d, w = d for d = 0 mod 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm
from pathlib import Path

from .errors import (
    BoundExceeded,
    DecompositionFailure,
    DuplicateConductor,
    InternalNonInteger,
    MissingConductor,
    OutOfRange,
    ParseError,
    ValidationError,
)
from .arith import cyclotomic_poly, factorize, mult_order
from .abelian import ActionMatrix, FinAbGroup, UnitGroup, unit_group

DEFAULT_ORACLE_BOUND = 210


# ----- Dirichlet characters of (Z/m)^x -----

@dataclass(frozen=True)
class DirichletCharacter:
    """A character given by exponents on the unit-group generators.

    chi(g_i) = zeta^(gen_exponents[i] * N / orders[i]) for a fixed primitive
    N-th root zeta, N = exponent of the unit group.  ``order`` is the order
    of chi; values are powers of a primitive root of unity of that order.
    """

    units: UnitGroup
    gen_exponents: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.units.modulus

    @cached_property
    def _big_order(self) -> int:
        return lcm(*self.units.generator_orders) if self.units.generator_orders else 1

    @cached_property
    def order(self) -> int:
        os = self.units.generator_orders
        return lcm(*(o // gcd(o, c) for o, c in zip(os, self.gen_exponents))) if os else 1

    def exponent_at(self, u: int) -> int:
        """t with chi(u) = zeta_order ** t."""
        big = self._big_order
        exps = self.units.exponents_of(u)
        t_big = sum(
            c * e * (big // o)
            for c, e, o in zip(self.gen_exponents, exps, self.units.generator_orders)
        ) % big
        # chi(u) lies in the mu_order subgroup, so this division is exact
        return t_big * self.order // big

    @cached_property
    def parity(self) -> str:
        m = self.modulus
        if m <= 2:
            return "even"
        t = self.exponent_at(m - 1)
        return "odd" if 2 * t == self.order else "even"

    @property
    def value_exponents(self) -> dict[int, int]:
        return {u: self.exponent_at(u) for u in self.units.elements()}

    @cached_property
    def conductor(self) -> int:
        """Conductor of the primitive character inducing chi."""
        m = self.modulus
        divs = sorted(d for d in range(1, m + 1) if m % d == 0)
        for f in divs:
            if all(self.exponent_at(u) == 0 for u in self.units.elements() if u % f == 1 % f):
                return f
        raise AssertionError("conductor search cannot fail")

    def primitive_exponent_at(self, a: int, f: int) -> int:
        """Exponent of the conductor-f primitive character at a (a coprime to f)."""
        m = self.modulus
        u = a % f
        while gcd(u, m) != 1:
            u += f
        return self.exponent_at(u)


def characters(units: UnitGroup) -> list[DirichletCharacter]:
    """All Dirichlet characters of the given unit group."""
    return [
        DirichletCharacter(units, exps)
        for exps in itertools.product(*(range(o) for o in units.generator_orders))
    ]


# ----- exact rational polynomial arithmetic modulo a cyclotomic polynomial -----

def _frac_poly_mod(coeffs: list[Fraction], modpoly: tuple[int, ...]) -> list[Fraction]:
    out = list(coeffs)
    deg = len(modpoly) - 1
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            for j, m in enumerate(modpoly):
                out[k - deg + j] -= c * m
        out.pop()
    while len(out) < deg:
        out.append(Fraction(0))
    return out


def _frac_poly_mul(a: list[Fraction], b: list[Fraction], modpoly) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _frac_poly_mod(out, modpoly)


def _b1_polynomial(char: DirichletCharacter) -> list[Fraction]:
    """-B_{1,chi}/2 as an element of Q[x]/Phi_m(x), m = order of chi.

    B_{1,chi} = (1/f) sum_{a=1..f} chi(a) a over the primitive character of
    conductor f; zeta_m stands for the indeterminate x.
    """
    m = char.order
    f = char.conductor
    phi_m = cyclotomic_poly(m)
    acc = [Fraction(0)] * max(m, len(phi_m) - 1)
    for a in range(1, f + 1):
        if gcd(a, f) == 1:
            t = char.primitive_exponent_at(a, f)
            acc[t] += Fraction(a)
    acc = [c / f for c in acc]
    b1 = _frac_poly_mod(acc, phi_m)
    return [-c / 2 for c in b1]


def _galois_orbit(char: DirichletCharacter) -> frozenset[tuple[int, ...]]:
    m = char.order
    os = char.units.generator_orders
    return frozenset(
        tuple(j * c % o for c, o in zip(char.gen_exponents, os))
        for j in range(1, m + 1)
        if gcd(j, m) == 1
    )


def _orbit_norm(char: DirichletCharacter) -> Fraction:
    """prod over the Galois orbit of chi of (-B_{1,chi}/2), an exact rational."""
    m = char.order
    phi_m = cyclotomic_poly(m)
    base = _b1_polynomial(char)
    out = [Fraction(1)] + [Fraction(0)] * (len(phi_m) - 2)
    for j in range(1, m + 1):
        if gcd(j, m) != 1:
            continue
        conj = [Fraction(0)] * m
        for i, c in enumerate(base):
            conj[i * j % m] += c
        out = _frac_poly_mul(out, _frac_poly_mod(conj, phi_m), phi_m)
    if any(out[1:]):
        raise InternalNonInteger("Galois orbit product is not rational")
    return out[0]


@lru_cache(maxsize=None)
def minus_class_number(d: int, bound: int = DEFAULT_ORACLE_BOUND) -> int:
    """Exact relative class number h-(d) of the cyclotomic field of conductor d."""
    if d < 3:
        raise OutOfRange(f"conductor {d} must be >= 3")
    if d > bound:
        raise BoundExceeded(f"conductor {d} exceeds oracle bound {bound}")
    if d % 4 == 2:
        d //= 2  # same field as conductor d/2
    if d < 3:
        return 1
    units = unit_group(d)
    seen_orbits: set[frozenset[tuple[int, ...]]] = set()
    total = Fraction(1)
    for char in characters(units):
        if char.parity != "odd":
            continue
        orb = _galois_orbit(char)
        if orb in seen_orbits:
            continue
        seen_orbits.add(orb)
        total *= _orbit_norm(char)
    q_factor = 1 if len(factorize(d)) == 1 else 2
    w = 2 * d if d % 2 else d
    total *= q_factor * w
    if total.denominator != 1 or total <= 0:
        raise InternalNonInteger(f"assembled h-({d}) = {total} is not a positive integer")
    return int(total)


# ----- the registry -----

@dataclass(frozen=True)
class ClassGroupRecord:
    conductor: int
    group: FinAbGroup
    generator_actions: dict[int, ActionMatrix]
    provenance: str
    plus_part_order: int | None


@dataclass
class ValidationReport:
    conductor: int
    issues: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    checks: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


class Registry:
    """Immutable conductor-keyed collection of ClassGroupRecords."""

    def __init__(self, records):
        self._records: dict[int, ClassGroupRecord] = {}
        for rec in records:
            if rec.conductor in self._records:
                raise DuplicateConductor(f"conductor {rec.conductor} appears twice")
            self._records[rec.conductor] = rec

    def __iter__(self):
        return iter(sorted(self._records.values(), key=lambda r: r.conductor))

    def __len__(self):
        return len(self._records)

    def __contains__(self, d: int) -> bool:
        return d in self._records

    def conductors(self) -> list[int]:
        return sorted(self._records)

    def get(self, d: int) -> ClassGroupRecord:
        if d not in self._records:
            raise MissingConductor(f"registry has no record for conductor {d}")
        return self._records[d]


def bundled_registry_path() -> Path:
    return Path(__file__).parent / "data" / "registry.txt"


def _parse_records(text: str):
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    pos = 0

    def take(prefix: str) -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of registry, wanted '{prefix}'")
        line = lines[pos]
        if not line.startswith(prefix):
            raise ParseError(f"expected '{prefix}', got '{line}'")
        pos += 1
        return line[len(prefix):].strip()

    while pos < len(lines):
        conductor = int(take("conductor"))
        inv = tuple(int(tok) for tok in take("invariants").split())
        group = FinAbGroup(inv)
        plus_tok = take("plus_part")
        plus = None if plus_tok == "unknown" else int(plus_tok)
        actions: dict[int, ActionMatrix] = {}
        while pos < len(lines) and lines[pos].startswith("gen "):
            body = take("gen")
            try:
                gen_tok, matrix_part = body.split("matrix", 1)
            except ValueError:
                raise ParseError(f"gen line for conductor {conductor} lacks 'matrix'")
            g = int(gen_tok.strip())
            entries = [int(tok) for tok in matrix_part.split()]
            r = group.rank
            if len(entries) != r * r:
                raise ParseError(
                    f"conductor {conductor}: generator {g} matrix needs {r * r} entries"
                )
            rows = tuple(tuple(entries[i * r:(i + 1) * r]) for i in range(r))
            if g in actions:
                raise ParseError(f"conductor {conductor}: generator {g} repeated")
            actions[g] = ActionMatrix(group, rows)
        provenance = take("provenance").strip('"')
        take("end")
        yield ClassGroupRecord(conductor, group, actions, provenance, plus)


def _decompose_over_gens(rec: ClassGroupRecord, target: int) -> ActionMatrix:
    """Action of the unit ``target`` mod rec.conductor, composed from stored gens."""
    d = rec.conductor
    target %= d if d > 1 else 1
    if d <= 2 or rec.group.rank == 0:
        return ActionMatrix.identity(rec.group)
    gens = sorted(rec.generator_actions)
    orders = [mult_order(g, d) for g in gens]
    for exps in itertools.product(*(range(o) for o in orders)):
        value = 1
        for g, e in zip(gens, exps):
            value = value * pow(g, e, d) % d
        if value == target:
            act = ActionMatrix.identity(rec.group)
            for g, e in zip(gens, exps):
                for _ in range(e):
                    act = act.compose(rec.generator_actions[g])
            return act
    raise DecompositionFailure(
        f"unit {target} mod {d} not generated by the stored generators"
    )


def restriction_action(units: UnitGroup, a: int, d: int, registry: Registry) -> ActionMatrix:
    """Action of the Galois element a (a unit mod delta) on the class group at d."""
    delta = units.modulus
    if gcd(a, delta) != 1:
        raise OutOfRange(f"{a} is not a unit mod {delta}")
    if delta % d:
        raise OutOfRange(f"{d} does not divide {delta}")
    return _decompose_over_gens(registry.get(d), a)


def validate_record(
    rec: ClassGroupRecord,
    oracle: bool = False,
    oracle_bound: int = DEFAULT_ORACLE_BOUND,
) -> ValidationReport:
    """Check the algebraic invariants of a record; never raises for bad data."""
    report = ValidationReport(rec.conductor)
    d = rec.conductor
    phi = len([u for u in range(1, max(d, 2)) if gcd(u, d) == 1]) if d > 1 else 1

    for g, act in sorted(rec.generator_actions.items()):
        if d <= 1 or gcd(g, d) != 1:
            report.issues.append(f"generator {g} is not a unit mod {d}")
            continue
        if act.group != rec.group:
            report.issues.append(f"generator {g} acts on the wrong group")
            continue
        if not act.is_automorphism():
            report.issues.append(f"action of generator {g} is not an automorphism")
            continue
        unit_order = mult_order(g, d)
        act_order = act.order(unit_order)
        if act_order is None or unit_order % act_order:
            report.issues.append(
                f"order of the action of {g} does not divide its unit order {unit_order}"
            )
    report.checks.append("generator actions are automorphisms of declared order")

    acts = [rec.generator_actions[g] for g in sorted(rec.generator_actions)]
    for a, b in itertools.combinations(acts, 2):
        if a.compose(b) != b.compose(a):
            report.issues.append("generator actions do not commute")
            break
    report.checks.append("generator actions commute")

    if d > 2 and rec.group.rank:
        generated = {1}
        frontier = [1]
        while frontier:
            x = frontier.pop()
            for g in rec.generator_actions:
                y = x * g % d
                if y not in generated:
                    generated.add(y)
                    frontier.append(y)
        if len(generated) != phi:
            report.issues.append(
                f"stored generators span {len(generated)} of {phi} units mod {d}"
            )
        report.checks.append("stored generators generate the unit group")

    if rec.plus_part_order == 1 and not report.issues:
        if d > 2 and rec.group.rank:
            try:
                act = _decompose_over_gens(rec, d - 1)
            except DecompositionFailure as exc:
                report.issues.append(str(exc))
            else:
                if act != ActionMatrix.inversion(rec.group):
                    report.issues.append("action of -1 is not inversion despite plus part 1")
        report.checks.append("minus-part inversion rule for -1")
        if oracle:
            expected = 1 if d < 3 else minus_class_number(d, oracle_bound)
            if rec.group.order != expected:
                report.issues.append(
                    f"registry order {rec.group.order} != h-({d}) = {expected}"
                )
            report.checks.append("group order certified by the Bernoulli oracle")
    elif rec.plus_part_order != 1:
        report.flags.append("uncertified order")

    return report


def load_registry(source: str | Path | None = None, oracle: bool = False) -> Registry:
    """Parse and validate a registry document (default: the bundled data file)."""
    path = Path(source) if source is not None else bundled_registry_path()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read registry {path}: {exc}")
    return loads_registry(text, oracle=oracle)


def loads_registry(text: str, oracle: bool = False) -> Registry:
    registry = Registry(_parse_records(text))
    for rec in registry:
        report = validate_record(rec, oracle=oracle)
        if not report.ok:
            raise ValidationError(rec.conductor, "; ".join(report.issues))
    return registry
