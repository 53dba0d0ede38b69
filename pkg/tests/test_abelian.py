import random
from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatgenus.abelian import (
    ActionMatrix,
    FinAbGroup,
    brute_force_orbits,
    fixed_point_count,
    group_action_from_generators,
    orbit_count,
    smith_normal_form,
    subgroup_hd,
    unit_group,
)
from flatgenus.arith import build_context
from flatgenus.errors import (
    EnumerationBoundExceeded,
    EvenSpecialPrime,
    IllDefinedAction,
    NotAGroupAction,
    NotSquarefree,
    PrimeNotInModulus,
)
from flatgenus.intmat import freeze, identity, mat_mul


def det(matrix):
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            out = -out
        out *= m[k][k]
        for i in range(k + 1, n):
            c = m[i][k] / m[k][k]
            m[i] = [x - c * y for x, y in zip(m[i], m[k])]
    return int(out)


matrices = st.integers(min_value=1, max_value=8).flatmap(
    lambda m: st.integers(min_value=1, max_value=8).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(min_value=-50, max_value=50), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


class TestSmithNormalForm:
    def test_identity(self):
        u, d, v = smith_normal_form(identity(3))
        assert d == identity(3)

    def test_known_case(self):
        a = freeze([[2, 4], [6, 8]])
        u, d, v = smith_normal_form(a)
        assert (d[0][0], d[1][1]) == (2, 4)
        assert mat_mul(mat_mul(u, a), v) == d

    def test_zero_matrix(self):
        _, d, _ = smith_normal_form(freeze([[0]]))
        assert d == ((0,),)

    @settings(max_examples=500, deadline=None)
    @given(matrices)
    def test_postconditions(self, rows):
        a = freeze(rows)
        u, d, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == d
        assert abs(det(u)) == 1
        assert abs(det(v)) == 1
        diag = [d[i][i] for i in range(min(len(a), len(a[0])))]
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0
        for x, y in zip(diag, diag[1:]):
            assert x >= 0 and y >= 0
            if x == 0:
                assert y == 0
            else:
                assert y % x == 0


class TestGroupsAndActions:
    def test_chain_enforced(self):
        with pytest.raises(Exception):
            FinAbGroup((4, 6))

    def test_ill_defined_action(self):
        g = FinAbGroup((2, 4))
        with pytest.raises(IllDefinedAction):
            ActionMatrix(g, ((1, 0), (1, 1)))  # entry (1,0) must be even
        ActionMatrix(g, ((1, 1), (2, 1)))  # fine

    def test_fixed_points(self):
        g5 = FinAbGroup((5,))
        assert fixed_point_count(ActionMatrix.identity(g5)) == 5
        g3 = FinAbGroup((3,))
        assert fixed_point_count(ActionMatrix.inversion(g3)) == 1
        g7 = FinAbGroup((7,))
        assert fixed_point_count(ActionMatrix.scalar(g7, 2)) == 1

    def test_fixed_points_identity_is_order(self):
        for factors in [(2,), (2, 4), (3, 9), (2, 2, 2)]:
            g = FinAbGroup(factors)
            assert fixed_point_count(ActionMatrix.identity(g)) == g.order


class TestUnitGroups:
    def test_23_cyclic(self):
        u = unit_group(23)
        assert u.generator_orders == (22,)
        assert u.generators == (5,)

    def test_15_components(self):
        u = unit_group(15)
        assert sorted(u.generator_orders) == [2, 4]

    def test_2_trivial(self):
        u = unit_group(2)
        assert u.generator_orders == ()
        assert u.elements() == [1]

    def test_exponents_roundtrip(self):
        for n in (15, 23, 46, 55, 105):
            u = unit_group(n)
            for x in u.elements():
                assert u.from_exponents(u.exponents_of(x)) == x


class TestSubgroupHD:
    def test_conjugation_subgroup(self):
        u = unit_group(23)
        hd = subgroup_hd(u, {23})
        assert hd.order == 2
        assert hd.elements() == [1, 22]

    def test_empty_special_set(self):
        u = unit_group(15)
        hd = subgroup_hd(u, set())
        assert hd.order == 8 == u.order

    def test_mixed(self):
        u = unit_group(15)
        hd = subgroup_hd(u, {5})
        assert hd.order == 4
        assert hd.elements() == [1, 4, 11, 14]

    def test_even_prime_rejected(self):
        with pytest.raises(EvenSpecialPrime):
            subgroup_hd(unit_group(6), {2})

    def test_prime_not_in_modulus(self):
        with pytest.raises(PrimeNotInModulus):
            subgroup_hd(unit_group(15), {7})

    def test_index_formula(self):
        # index of H_D = prod (p-1)/2 over odd special primes
        for delta in range(3, 211, 2):
            try:
                ctx = build_context(delta)
            except NotSquarefree:
                continue
            u = unit_group(delta)
            primes = ctx.primes
            for mask in range(1, 2 ** len(primes)):
                special = {p for i, p in enumerate(primes) if mask >> i & 1}
                hd = subgroup_hd(u, special)
                assert hd.index == prod((p - 1) // 2 for p in special)


def make_action(group, rows):
    return ActionMatrix(group, freeze(rows))


class TestOrbitCounting:
    def test_trivial_action(self):
        g = FinAbGroup((9,))
        assert orbit_count(g, [ActionMatrix.identity(g)]) == 9

    def test_inversion_orbits(self):
        g = FinAbGroup((3,))
        acts = group_action_from_generators(g, [(ActionMatrix.inversion(g), 2)])
        assert orbit_count(g, acts) == 2
        g2 = FinAbGroup((3, 3))
        acts2 = group_action_from_generators(g2, [(ActionMatrix.inversion(g2), 2)])
        assert orbit_count(g2, acts2) == 5

    def test_brute_force_examples(self):
        g2 = FinAbGroup((2,))
        assert brute_force_orbits(g2, [ActionMatrix.identity(g2)]) == [[(0,)], [(1,)]]
        g5 = FinAbGroup((5,))
        inv = ActionMatrix.inversion(g5)
        acts = group_action_from_generators(g5, [(inv, 2)])
        assert brute_force_orbits(g5, acts) == [[(0,)], [(1,), (4,)], [(2,), (3,)]]
        mul2 = ActionMatrix.scalar(g5, 2)
        acts4 = group_action_from_generators(g5, [(mul2, 4)])
        assert brute_force_orbits(g5, acts4) == [[(0,)], [(1,), (2,), (3,), (4,)]]

    def test_enumeration_bound(self):
        g = FinAbGroup((101, 101))
        with pytest.raises(EnumerationBoundExceeded):
            brute_force_orbits(g, [ActionMatrix.identity(g)], bound=100)

    def test_not_closed_rejected(self):
        g = FinAbGroup((5,))
        mul2 = ActionMatrix.scalar(g, 2)
        with pytest.raises(NotAGroupAction):
            orbit_count(g, [ActionMatrix.identity(g), mul2])  # 2^2 = 4 missing

    def test_identity_required(self):
        g = FinAbGroup((5,))
        with pytest.raises(NotAGroupAction):
            orbit_count(g, [ActionMatrix.inversion(g)])

    def test_wrong_declared_order(self):
        g = FinAbGroup((5,))
        mul2 = ActionMatrix.scalar(g, 2)
        with pytest.raises(NotAGroupAction):
            group_action_from_generators(g, [(mul2, 3)])  # true order is 4


def random_group(rng, max_order):
    while True:
        factors = []
        d = rng.randint(2, 12)
        for _ in range(rng.randint(1, 3)):
            factors.append(d)
            d *= rng.choice([1, 1, 2, 3])
        g = FinAbGroup(tuple(factors))
        if g.order <= max_order:
            return g


def random_automorphism(rng, group, tries=300):
    from math import gcd

    fs = group.invariant_factors
    r = group.rank
    for _ in range(tries):
        rows = []
        for i in range(r):
            row = []
            for j in range(r):
                need = fs[i] // gcd(fs[i], fs[j])
                row.append(need * rng.randrange(0, fs[i] // need))
            rows.append(row)
        a = ActionMatrix(group, freeze(rows))
        if a.is_automorphism():
            return a
    return ActionMatrix.identity(group)


class TestBurnsideAgainstBruteForce:
    def test_random_cases(self):
        rng = random.Random(20240811)
        for _ in range(100):
            g = random_group(rng, 10**4)
            a = random_automorphism(rng, g)
            order = a.order(g.order)
            acts = group_action_from_generators(g, [(a, order)])
            assert orbit_count(g, acts) == len(brute_force_orbits(g, acts))
