"""Integer-exact second cohomology of prime-order subgroups of the holonomy.

H^2 of the order-p subgroup with coefficients in the lattice is computed as
fixed-sublattice modulo norm-image, entirely through Smith normal form; no
cocycles appear.  The holonomy generator induces an action on the quotient,
expressed in the (deterministic) Smith basis so results are reproducible
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentCensus, OrderMismatch, OutOfRange
from .arith import SquarefreeContext, is_prime
from .abelian import ActionMatrix, FinAbGroup
from .intmat import (
    IntMatrix,
    freeze,
    identity,
    kernel_basis,
    mat_mul,
    mat_pow,
    rank_mod_p,
    smith_normal_form,
    solve_columns,
    transpose,
    unimodular_inverse,
)


@dataclass(frozen=True)
class CohomologyResult:
    """H^2(C_p, M) as an elementary abelian p-group with its induced action."""

    prime: int
    group: FinAbGroup
    g_action: ActionMatrix

    @property
    def b_p(self) -> int:
        return self.group.rank

    @property
    def order(self) -> int:
        return self.group.order


@dataclass(frozen=True)
class BlockCensus:
    """Multiplicities of the three indecomposable shapes at the prime p.

    a_p ideal-type summands (rank p-1), b_p trivial summands (rank 1),
    c_p extension-type summands (rank p).
    """

    prime: int
    a_p: int
    b_p: int
    c_p: int


def _validate(matrix: IntMatrix, p: int, delta: int) -> IntMatrix:
    matrix = freeze(matrix)
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise OutOfRange("holonomy matrix must be square")
    if not is_prime(p) or delta % p:
        raise OutOfRange(f"{p} must be a prime divisor of {delta}")
    if mat_pow(matrix, delta) != identity(n):
        raise OrderMismatch(f"matrix does not satisfy A^{delta} = I")
    return matrix


def h2(matrix: IntMatrix, p: int, delta: int) -> CohomologyResult:
    """H^2 of the order-p subgroup, with the action induced by the generator.

    Let B = A^(delta/p) generate the order-p subgroup.  The result is the
    saturated fixed lattice ker(B - I) modulo the image of the norm
    1 + B + ... + B^(p-1), an elementary abelian p-group.
    """
    matrix = _validate(matrix, p, delta)
    n = len(matrix)
    b = mat_pow(matrix, delta // p)
    b_minus_i = tuple(
        tuple(b[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    kernel = kernel_basis(b_minus_i)
    f = len(kernel)
    if f == 0:
        group = FinAbGroup(())
        return CohomologyResult(p, group, ActionMatrix.identity(group))
    kmat = transpose(kernel)  # n x f, columns are the kernel basis

    norm = identity(n)
    power = identity(n)
    for _ in range(p - 1):
        power = mat_mul(power, b)
        norm = tuple(
            tuple(x + y for x, y in zip(rn, rp)) for rn, rp in zip(norm, power)
        )
    # norm image and the holonomy action, in kernel-basis coordinates
    norm_coords = solve_columns(kmat, norm)             # f x n
    action_coords = solve_columns(kmat, mat_mul(matrix, kmat))  # f x f

    u, d, _ = smith_normal_form(norm_coords)
    diag = [d[i][i] for i in range(f)]
    assert all(diag), "norm image must have finite index in the fixed lattice"
    keep = [i for i in range(f) if diag[i] != 1]
    assert all(diag[i] == p for i in keep), "quotient must be elementary abelian"
    group = FinAbGroup((p,) * len(keep))
    induced = mat_mul(mat_mul(u, action_coords), unimodular_inverse(u))
    rows = tuple(tuple(induced[i][j] % p for j in keep) for i in keep)
    return CohomologyResult(p, group, ActionMatrix(group, rows))


def fixed_rank(matrix: IntMatrix, p: int, delta: int) -> int:
    """Rank of the fixed sublattice of the order-p subgroup generator."""
    matrix = _validate(matrix, p, delta)
    n = len(matrix)
    b = mat_pow(matrix, delta // p)
    b_minus_i = tuple(
        tuple(b[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    return len(kernel_basis(b_minus_i))


def census(matrix: IntMatrix, p: int, delta: int) -> BlockCensus:
    """Block multiplicities at p, recovered from ranks.

    b_p = exponent rank of H^2; c_p = fixed rank - b_p; a_p solves
    a(p-1) + b + pc = n.  Failure of the rank equations signals a matrix
    outside the catalog shapes and is surfaced, never repaired.
    """
    matrix = freeze(matrix)
    n = len(matrix)
    b_p = h2(matrix, p, delta).b_p
    f = fixed_rank(matrix, p, delta)
    c_p = f - b_p
    numerator = n - b_p - p * c_p
    if c_p < 0 or numerator < 0 or numerator % (p - 1):
        raise InconsistentCensus(
            f"counts (n={n}, fixed={f}, b={b_p}) at p={p} solve no block census"
        )
    return BlockCensus(p, numerator // (p - 1), b_p, c_p)


def is_exceptional_at(matrix: IntMatrix, p: int, delta: int) -> bool:
    """All summands of rank p-1 except a single trivial one."""
    c = census(matrix, p, delta)
    return c.a_p >= 1 and c.b_p == 1 and c.c_p == 0


def special_primes(matrix: IntMatrix, context: SquarefreeContext) -> tuple[int, ...]:
    """The set D of primes where the restriction is exceptional."""
    return tuple(
        p for p in context.primes if is_exceptional_at(matrix, p, context.delta)
    )


def fixed_nonzero_count(coh: CohomologyResult) -> int:
    """|fixed nonzero elements of the induced action on H^2| = p^t - 1."""
    b = coh.group.rank
    if b == 0:
        return 0
    p = coh.prime
    a_minus_i = tuple(
        tuple(coh.g_action.matrix[i][j] - (1 if i == j else 0) for j in range(b))
        for i in range(b)
    )
    t = b - rank_mod_p(a_minus_i, p)
    return p**t - 1


def x_size(matrix: IntMatrix, context: SquarefreeContext) -> int:
    """|X(G, M)|: the number of cohomology classes defining Bieberbach groups.

    The product over p | delta of the nonzero fixed counts; zero means no
    torsion-free extension exists over this lattice.
    """
    out = 1
    for p in context.primes:
        out *= fixed_nonzero_count(h2(matrix, p, context.delta))
    return out
