"""Exact integer matrices (nested tuples) and Smith normal form.

Matrices are small here (a holonomy matrix for order 105 is 106 x 106 at
worst), so the routines favor clarity and determinism over asymptotics.
Pivots are chosen by least absolute value with a fixed tie-break, which
makes every downstream basis choice reproducible bit for bit.
"""

from __future__ import annotations

from collections.abc import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


def freeze(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b) -> IntMatrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    assert all(len(row) == k for row in a) or not a
    bt = list(zip(*b)) if b else []
    return tuple(
        tuple(sum(ra[t] * col[t] for t in range(k)) for col in bt) for ra in a
    )


def mat_pow(a: IntMatrix, e: int) -> IntMatrix:
    out = identity(len(a))
    base = a
    while e:
        if e & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        e >>= 1
    return out


def mat_sub(a, b) -> IntMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(a) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for row in b:
            rows.append((0,) * off + tuple(row) + (0,) * (n - off - len(row)))
        off += len(b)
    return tuple(rows)


def companion(poly: tuple[int, ...]) -> IntMatrix:
    """Companion matrix of a monic integer polynomial (constant term first)."""
    assert poly[-1] == 1
    k = len(poly) - 1
    rows = [[0] * k for _ in range(k)]
    for i in range(1, k):
        rows[i][i - 1] = 1
    for i in range(k):
        rows[i][k - 1] = -poly[i]
    return freeze(rows)


def cyclic_shift(e: int) -> IntMatrix:
    """Permutation matrix of the e-cycle (order exactly e)."""
    rows = [[0] * e for _ in range(e)]
    for j in range(e):
        rows[(j + 1) % e][j] = 1
    return freeze(rows)


def matrix_order(a: IntMatrix, cap: int) -> int | None:
    """Least k in 1..cap with a**k = I, or None."""
    ident = identity(len(a))
    x = a
    for k in range(1, cap + 1):
        if x == ident:
            return k
        x = mat_mul(x, a)
    return None


def smith_normal_form(a) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with U A V = D.

    Diagonal entries are nonnegative and form a divisibility chain
    d1 | d2 | ... ; zero entries come last.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        for t in range(n):
            d[i][t] -= q * d[j][t]
        for t in range(m):
            u[i][t] -= q * u[j][t]

    def col_op(i, j, q):  # col_i -= q * col_j
        for t in range(m):
            d[t][i] -= q * d[t][j]
        for t in range(n):
            v[t][i] -= q * v[t][j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for t in range(m):
            d[t][i], d[t][j] = d[t][j], d[t][i]
        for t in range(n):
            v[t][i], v[t][j] = v[t][j], v[t][i]

    def negate_row(i):
        for t in range(n):
            d[i][t] = -d[i][t]
        for t in range(m):
            u[i][t] = -u[i][t]

    def find_pivot(k):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        return best

    k = 0
    while k < min(m, n):
        pos = find_pivot(k)
        if pos is None:
            break
        swap_rows(k, pos[0])
        swap_cols(k, pos[1])
        while True:
            # clear column k, then row k; pivot may shrink, so iterate
            dirty = False
            for i in range(k + 1, m):
                if d[i][k]:
                    q = d[i][k] // d[k][k]
                    row_op(i, k, q)
                    if d[i][k]:  # remainder became the new smallest entry
                        swap_rows(i, k)
                        dirty = True
            for j in range(k + 1, n):
                if d[k][j]:
                    q = d[k][j] // d[k][k]
                    col_op(j, k, q)
                    if d[k][j]:
                        swap_cols(j, k)
                        dirty = True
            if not dirty:
                break
        # enforce divisibility of the remaining block by the pivot
        fixed = True
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if d[i][j] % d[k][k]:
                    row_op(k, i, -1)  # add row i to row k, retry this step
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if d[k][k] < 0:
            negate_row(k)
        k += 1

    return freeze(u), freeze(d), freeze(v)


def snf_diagonal(a) -> list[int]:
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix (via its Smith decomposition)."""
    u, d, v = smith_normal_form(a)
    n = len(a)
    assert all(d[i][i] == 1 for i in range(n)), "matrix is not unimodular"
    return mat_mul(v, u)


def kernel_basis(a) -> list[tuple[int, ...]]:
    """Basis (as column vectors) of the saturated lattice ker(A) in Z^n."""
    m = len(a)
    n = len(a[0]) if m else 0
    _, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(m, n)) if d[i][i] != 0)
    return [tuple(v[t][j] for t in range(n)) for j in range(rank, n)]


def solve_columns(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Integer X with A X = B, for A of full column rank; raises if none."""
    m = len(a)
    n = len(a[0]) if m else 0
    u, d, v = smith_normal_form(a)
    diag = [d[i][i] for i in range(n)]
    assert all(diag), "matrix must have full column rank"
    ub = mat_mul(u, b)
    cols = len(b[0]) if b else 0
    z = [[0] * cols for _ in range(n)]
    for j in range(cols):
        for i in range(n):
            q, r = divmod(ub[i][j], diag[i])
            if r:
                raise ValueError("no integral solution")
            z[i][j] = q
        for i in range(n, m):
            if ub[i][j]:
                raise ValueError("no integral solution")
    return mat_mul(v, freeze(z))


def rank_mod_p(a, p: int) -> int:
    """Rank of an integer matrix over F_p, by Gaussian elimination."""
    rows = [[x % p for x in row] for row in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = next((i for i in range(rank, m) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank
