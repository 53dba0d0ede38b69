"""Structural lattices over a cyclic group of square-free order.

A lattice is given as a catalog of blocks: rank-1 trivial blocks, ideal
blocks of conductor d (rank phi(d), optionally decorated with an ideal
class from the registry), and regular blocks (the group ring of the
order-e cyclic quotient).  The catalog compiles to an explicit integer
matrix for the holonomy generator and maps to its isomorphism invariants:
per-conductor ranks r(d), the ideal-class tuple, and the gluing ranks rho
at each prime-ratio divisor pair.

Nontrivial ideal classes compile to the principal-class companion matrix:
the cohomology engine only sees the p-adic completion, which is
class-independent, so one matrix serves every class decoration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import lcm

from .errors import (
    ContextMismatch,
    MissingConductor,
    NotFaithful,
    OutOfRange,
    ParseError,
    UnknownClassLabel,
)
from .arith import (
    PrimeRatioPair,
    SquarefreeContext,
    build_context,
    compute_v,
    cyclotomic_poly,
    euler_phi,
    is_prime,
    prime_ratio_pairs,
)
from .abelian import FinAbGroup, unit_group
from .classgroups import Registry, restriction_action
from .intmat import IntMatrix, block_diag, companion, cyclic_shift

CANCELLABLE = {6, 10, 14}


@dataclass(frozen=True)
class TrivialBlock:
    """Rank-1 block with trivial action (conductor 1)."""

    def rank(self, ctx) -> int:
        return 1

    def text(self) -> str:
        return "Z"


@dataclass(frozen=True)
class IdealBlock:
    """An ideal of the conductor-d cyclotomic ring; class None = principal."""

    d: int
    class_label: tuple[int, ...] | None = None

    def rank(self, ctx) -> int:
        return euler_phi(self.d)

    def text(self) -> str:
        if self.class_label is None:
            return f"I({self.d})"
        return f"I({self.d},{'.'.join(str(c) for c in self.class_label)})"


@dataclass(frozen=True)
class RegularBlock:
    """The group ring of the order-e cyclic quotient (cyclic shift action)."""

    e: int

    def rank(self, ctx) -> int:
        return self.e

    def text(self) -> str:
        return f"R({self.e})"


Block = TrivialBlock | IdealBlock | RegularBlock


@dataclass(frozen=True)
class LatticeSpec:
    context: SquarefreeContext
    blocks: tuple[Block, ...]

    def __post_init__(self):
        delta = self.context.delta
        for b in self.blocks:
            d = getattr(b, "d", getattr(b, "e", 1))
            if isinstance(b, (IdealBlock, RegularBlock)) and (d <= 1 or delta % d):
                raise OutOfRange(f"block order {d} must be a divisor of delta = {delta} exceeding 1")

    @property
    def rank(self) -> int:
        return sum(b.rank(self.context) for b in self.blocks)

    def is_faithful(self) -> bool:
        covered = set()
        for b in self.blocks:
            d = getattr(b, "d", getattr(b, "e", 1))
            covered.update(p for p in self.context.primes if d % p == 0)
        return covered == set(self.context.primes)

    def text(self) -> str:
        return "+".join(b.text() for b in self.blocks)


_TERM = re.compile(r"^(Z|R\((\d+)\)|I\((\d+)(?:,([0-9.]+))?\))$")


def parse_lattice(text: str, delta: int | None = None, registry: Registry | None = None) -> LatticeSpec:
    """Parse the '+'-separated lattice format: Z, I(d), I(d,label), R(e).

    A class label is a dot-separated coordinate tuple in the registry's
    invariant-factor basis; when ``delta`` is omitted it is inferred as the
    lcm of the block orders.
    """
    blocks: list[Block] = []
    for raw in text.split("+"):
        term = raw.strip()
        m = _TERM.match(term)
        if not m:
            raise ParseError(f"cannot parse lattice term '{term}'")
        if term == "Z":
            blocks.append(TrivialBlock())
        elif m.group(2) is not None:
            blocks.append(RegularBlock(int(m.group(2))))
        else:
            d = int(m.group(3))
            label = None
            if m.group(4) is not None:
                try:
                    coords = tuple(int(tok) for tok in m.group(4).split("."))
                except ValueError:
                    raise ParseError(f"bad class label in '{term}'")
                label = _resolve_label(d, coords, registry)
            blocks.append(IdealBlock(d, label))
    if not blocks:
        raise ParseError("empty lattice specification")
    if delta is None:
        delta = lcm(*(getattr(b, "d", getattr(b, "e", 1)) for b in blocks))
    ctx = build_context(delta)
    return LatticeSpec(ctx, tuple(blocks))


def _resolve_label(d: int, coords: tuple[int, ...], registry: Registry | None):
    if registry is None or d not in registry:
        raise UnknownClassLabel(f"no registry record for conductor {d}")
    group = registry.get(d).group
    if len(coords) != group.rank:
        raise UnknownClassLabel(
            f"label {coords} has {len(coords)} coordinates; H at {d} has rank {group.rank}"
        )
    coords = group.reduce(coords)
    return coords if any(coords) else None


@dataclass(frozen=True, eq=True)
class InvariantTuple:
    """Full isomorphism invariants: ranks r(d), class tuple, gluing ranks rho.

    classes holds only the non-identity entries (coordinates in the
    registry presentation of H at d); class_groups carries the matching
    group structure so tuples can be multiplied without a registry.
    """

    context: SquarefreeContext
    r: dict[int, int] = field(default_factory=dict)
    classes: dict[int, tuple[int, ...]] = field(default_factory=dict)
    class_groups: dict[int, FinAbGroup] = field(default_factory=dict)
    rho: dict[PrimeRatioPair, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        r = {d: 0 for d in self.context.divisors}
        for d, n in self.r.items():
            if d not in r or n < 0:
                raise OutOfRange(f"bad rank entry r({d}) = {n}")
            r[d] = int(n)
        rho = {pair: (0,) * compute_v(pair) for pair in prime_ratio_pairs(self.context)}
        for pair, vec in self.rho.items():
            if pair not in rho or len(vec) != compute_v(pair):
                raise OutOfRange(f"bad rho entry at {pair}")
            for k, x in enumerate(vec):
                if not 0 <= x <= min(r[pair.s], r[pair.t]):
                    raise OutOfRange(
                        f"rho_{k}{(pair.s, pair.t)} = {x} outside [0, min(r(s), r(t))]"
                    )
            rho[pair] = tuple(int(x) for x in vec)
        classes = {}
        groups = {}
        for d, coords in self.classes.items():
            if d not in r:
                raise OutOfRange(f"class entry at {d}, not a divisor of delta")
            group = self.class_groups.get(d)
            if group is None:
                raise UnknownClassLabel(f"class at {d} has no group structure attached")
            coords = group.reduce(coords)
            if any(coords):
                classes[d] = coords
                groups[d] = group
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "class_groups", groups)

    def __eq__(self, other):
        if not isinstance(other, InvariantTuple):
            return NotImplemented
        return (
            self.context == other.context
            and self.r == other.r
            and self.rho == other.rho
            and self.classes == other.classes
        )

    @property
    def rank(self) -> int:
        return sum(n * euler_phi(d) for d, n in self.r.items())

    def class_at(self, d: int) -> tuple[int, ...] | None:
        return self.classes.get(d)


def invariants_of(spec: LatticeSpec, registry: Registry | None = None) -> InvariantTuple:
    """Oppenheim invariants of a catalog lattice.

    Regular blocks contribute rank one at every divisor of e with maximal
    gluing (rho += 1 in every field coordinate of every pair inside e),
    forced by the cohomological triviality of free modules.
    """
    ctx = spec.context
    r = {d: 0 for d in ctx.divisors}
    rho = {pair: [0] * compute_v(pair) for pair in prime_ratio_pairs(ctx)}
    classes: dict[int, tuple[int, ...]] = {}
    groups: dict[int, FinAbGroup] = {}
    for block in spec.blocks:
        if isinstance(block, TrivialBlock):
            r[1] += 1
        elif isinstance(block, IdealBlock):
            r[block.d] += 1
            if block.class_label is not None:
                if registry is None or block.d not in registry:
                    raise UnknownClassLabel(f"no registry record for conductor {block.d}")
                group = registry.get(block.d).group
                prev = classes.get(block.d, group.identity_element())
                classes[block.d] = group.add(prev, group.reduce(block.class_label))
                groups[block.d] = group
        else:
            for d in ctx.divisors:
                if block.e % d == 0:
                    r[d] += 1
            for pair in rho:
                if block.e % pair.s == 0 and block.e % pair.t == 0:
                    rho[pair] = [x + 1 for x in rho[pair]]
    return InvariantTuple(
        ctx,
        r=r,
        classes=classes,
        class_groups=groups,
        rho={pair: tuple(vec) for pair, vec in rho.items()},
    )


def direct_sum(a: InvariantTuple, b: InvariantTuple) -> InvariantTuple:
    """Componentwise sums of r and rho; componentwise products of classes."""
    if a.context != b.context:
        raise ContextMismatch("invariant tuples live over different holonomy orders")
    r = {d: a.r[d] + b.r[d] for d in a.context.divisors}
    rho = {
        pair: tuple(x + y for x, y in zip(a.rho[pair], b.rho[pair]))
        for pair in a.rho
    }
    classes: dict[int, tuple[int, ...]] = {}
    groups: dict[int, FinAbGroup] = {}
    for d in set(a.classes) | set(b.classes):
        group = a.class_groups.get(d) or b.class_groups.get(d)
        ca = a.classes.get(d, group.identity_element())
        cb = b.classes.get(d, group.identity_element())
        classes[d] = group.add(ca, cb)
        groups[d] = group
    return InvariantTuple(a.context, r=r, classes=classes, class_groups=groups, rho=rho)


def profinitely_isomorphic(a: InvariantTuple, b: InvariantTuple) -> bool:
    """True iff all r(d) and all rho ranks agree; classes are invisible."""
    if a.context != b.context:
        raise ContextMismatch("invariant tuples live over different holonomy orders")
    return a.r == b.r and a.rho == b.rho


def semilinearly_isomorphic(a: InvariantTuple, b: InvariantTuple, registry: Registry) -> bool:
    """Profinite agreement plus one Galois unit carrying the class tuple of a to b."""
    if not profinitely_isomorphic(a, b):
        return False
    ctx = a.context
    for d in ctx.divisors:
        if a.r[d] > 0 and d not in registry:
            raise MissingConductor(f"registry has no record for conductor {d}")
    relevant = sorted(set(a.classes) | set(b.classes))
    if not relevant:
        return True
    units = unit_group(ctx.delta)
    for u in units.elements():
        ok = True
        for d in relevant:
            group = registry.get(d).group
            ca = a.classes.get(d, group.identity_element())
            cb = b.classes.get(d, group.identity_element())
            if restriction_action(units, u, d, registry).apply(ca) != cb:
                ok = False
                break
        if ok:
            return True
    return False


class Undecidable:
    """Sentinel: cancellation fails and the invariants do not decide."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Undecidable"


UNDECIDABLE = Undecidable()


def linearly_isomorphic(a: InvariantTuple, b: InvariantTuple, registry: Registry):
    """Linear isomorphism where cancellation holds; Undecidable elsewhere.

    For delta in {6, 10, 14} or delta prime the invariants plus a single
    Galois unit decide linear isomorphism; outside that range the answer
    is the UNDECIDABLE sentinel, never a guess.
    """
    if a.context != b.context:
        raise ContextMismatch("invariant tuples live over different holonomy orders")
    delta = a.context.delta
    if delta in CANCELLABLE or is_prime(delta):
        return semilinearly_isomorphic(a, b, registry)
    return UNDECIDABLE


def compile_matrix(spec: LatticeSpec) -> IntMatrix:
    """Block-diagonal holonomy generator: [1], companion of Phi_d, or e-cycle.

    The matrix has order exactly delta when every prime of delta divides
    some block order (faithfulness); otherwise no holonomy action exists.
    """
    if not spec.is_faithful():
        missing = sorted(
            set(spec.context.primes)
            - {
                p
                for b in spec.blocks
                for p in spec.context.primes
                if getattr(b, "d", getattr(b, "e", 1)) % p == 0
            }
        )
        raise NotFaithful(f"primes {missing} act trivially on every block")
    mats = []
    for block in spec.blocks:
        if isinstance(block, TrivialBlock):
            mats.append(((1,),))
        elif isinstance(block, IdealBlock):
            mats.append(companion(cyclotomic_poly(block.d)))
        else:
            mats.append(cyclic_shift(block.e))
    return block_diag(mats)
