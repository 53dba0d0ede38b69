"""Exception types shared across the package.

Every error raised by the library derives from FlatGenusError so callers
(and the CLI) can map failures to diagnostics uniformly.
"""


class FlatGenusError(Exception):
    """Base class for all library errors."""


# ----- arithmetic context -----

class OutOfRange(FlatGenusError):
    """An integer argument is outside its documented range."""


class NotSquarefree(FlatGenusError):
    """The holonomy order is divisible by the square of a prime."""


class NotCoprime(FlatGenusError):
    """Multiplicative order requested for a non-unit."""


# ----- abelian groups and actions -----

class IllDefinedAction(FlatGenusError):
    """An integer matrix does not induce an endomorphism of the group."""


class NotAGroupAction(FlatGenusError):
    """A family of matrices fails the group-action checks."""


class EnumerationBoundExceeded(FlatGenusError):
    """A brute-force enumeration would exceed the configured bound."""


class EvenSpecialPrime(FlatGenusError):
    """p = 2 admits no order-2 Galois subgroup, so it cannot be special."""


class PrimeNotInModulus(FlatGenusError):
    """A special prime does not divide the unit-group modulus."""


# ----- class-group registry -----

class ParseError(FlatGenusError):
    """The registry document is malformed."""


class ValidationError(FlatGenusError):
    """A registry record fails its algebraic consistency checks."""

    def __init__(self, conductor, reason):
        super().__init__(f"conductor {conductor}: {reason}")
        self.conductor = conductor
        self.reason = reason


class DuplicateConductor(FlatGenusError):
    """Two registry records share a conductor."""


class MissingConductor(FlatGenusError):
    """A computation needs class-group data that the registry lacks."""


class DecompositionFailure(FlatGenusError):
    """A unit cannot be written over the stored generators (corrupt registry)."""


class BoundExceeded(FlatGenusError):
    """Analytic class-number oracle called above its configured bound."""


class InternalNonInteger(FlatGenusError):
    """The assembled Bernoulli product is not a rational integer (a bug)."""


# ----- lattice catalog -----

class ContextMismatch(FlatGenusError):
    """Two invariant tuples live over different holonomy orders."""


class UnknownClassLabel(FlatGenusError):
    """An ideal-class label does not name a registry group element."""


class NotFaithful(FlatGenusError):
    """Some prime of the holonomy order acts trivially on the lattice."""


# ----- cohomology -----

class OrderMismatch(FlatGenusError):
    """The holonomy matrix does not satisfy A**delta = I."""


class InconsistentCensus(FlatGenusError):
    """Block multiplicities do not solve the rank equations."""


# ----- genus -----

class NoBieberbachGroup(FlatGenusError):
    """X(G, M) is empty: no torsion-free extension exists."""


class NotSpecial(FlatGenusError):
    """The special-case formula was invoked with no special primes."""
