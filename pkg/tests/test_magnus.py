import itertools
import random

import numpy as np
import pytest

from oracles import infiltration, naive_expand, random_element
from promild.magnus import (
    IDENTITY,
    GroupElement,
    TruncatedSeries,
    expand,
    index_word,
    rho,
    word_index,
    zassenhaus_degree,
)
from promild.words import shuffle

x1, x2, x3 = (GroupElement.letter(a) for a in range(3))


def comm(g, h):
    return GroupElement.commutator(g, h)


class TestGroupElement:
    def test_free_reduction(self):
        g = GroupElement(((0, 2), (1, 1), (1, -1), (0, -2), (2, 3)))
        assert g.reduced() == GroupElement(((2, 3),))

    def test_inverse_cancels(self):
        g = comm(x1, x2) * x3 ** 4
        assert (g * g.inverse()).is_trivial

    def test_zero_exponent_rejected(self):
        with pytest.raises(ValueError):
            GroupElement(((0, 0),))

    def test_exponent_sums(self):
        assert comm(x1, x2).exponent_sums() == {0: 0, 1: 0}

    def test_word_index_roundtrip(self):
        for w in itertools.product(range(3), repeat=4):
            assert index_word(word_index(w, 3), 4, 3) == w


class TestExpand:
    def test_generator(self):
        assert expand(x1, 5, 3, 2).as_dict() == {(): 1, (0,): 1}

    def test_inverse_generator(self):
        # (1 + x)^-1 = 1 - x + x^2 - ...
        assert expand(x1.inverse(), 5, 3, 1).as_dict() == {(): 1, (0,): 4, (0, 0): 1, (0, 0, 0): 4}

    def test_power_is_binomial(self):
        s = expand(x1 ** 3, 3, 4, 1)
        # (1+x)^3 = 1 + 3x + 3x^2 + x^3 = 1 + x^3 mod 3
        assert s.as_dict() == {(): 1, (0, 0, 0): 1}

    def test_commutator_degree_two(self):
        s = expand(comm(x1, x2), 7, 2, 2)
        assert s.as_dict() == {(): 1, (0, 1): 1, (1, 0): 6}

    def test_identity(self):
        assert expand(IDENTITY, 3, 4, 2) == TruncatedSeries.one(3, 4, 2)

    def test_cap_validation(self):
        with pytest.raises(ValueError):
            expand(x1, 3, 0, 1)
        with pytest.raises(ValueError):
            expand(x3, 3, 2, 2)

    def test_coefficient_beyond_cap(self):
        with pytest.raises(ValueError):
            expand(x1, 3, 2, 1).coefficient((0, 0, 0))

    def test_matches_naive(self):
        rng = random.Random(11)
        for _ in range(150):
            d = rng.randint(1, 3)
            p = rng.choice([2, 3, 5, 7])
            g = random_element(rng, d)
            assert expand(g, p, 5, d).as_dict() == naive_expand(g, p, 5)

    def test_homomorphism(self):
        rng = random.Random(12)
        for _ in range(100):
            d, p = rng.randint(1, 3), rng.choice([2, 3, 5])
            g, h = random_element(rng, d), random_element(rng, d)
            assert expand(g * h, p, 5, d) == expand(g, p, 5, d) * expand(h, p, 5, d)

    def test_series_inverse_and_power(self):
        rng = random.Random(13)
        for _ in range(30):
            g = random_element(rng, 2)
            s = expand(g, 5, 4, 2)
            assert s * s.inverse() == TruncatedSeries.one(5, 4, 2)
            assert s ** -3 == expand(g ** -3, 5, 4, 2)

    def test_infiltration_identity(self):
        # eps_u * eps_v = sum over the infiltration product u ↑ v
        rng = random.Random(14)
        for _ in range(40):
            d, p = rng.randint(1, 3), rng.choice([2, 3, 5, 7])
            s = expand(random_element(rng, d), p, 5, d)
            for n in range(2, 6):
                for a in range(1, n):
                    for u in itertools.product(range(d), repeat=a):
                        for v in itertools.product(range(d), repeat=n - a):
                            rhs = sum(c * s.coefficient(w) for w, c in infiltration(u, v))
                            assert (s.coefficient(u) * s.coefficient(v) - rhs) % p == 0

    def test_plain_shuffle_identity_fails_for_one_plus_x(self):
        # eps_x1(x1)^2 = 1 but x1 ⧢ x1 = 2 x1x1 and eps_x1x1(x1) = 0
        s = expand(x1, 5, 2, 1)
        lhs = s.coefficient((0,)) ** 2
        rhs = sum(c * s.coefficient(w) for w, c in shuffle((0,), (0,)).items())
        assert lhs % 5 != rhs % 5

    def test_shuffles_vanish_on_deep_elements(self):
        # entry degree >= n: sum over u ⧢ v of eps_w is zero for |u| + |v| = n
        rng = random.Random(15)
        for _ in range(20):
            p = rng.choice([3, 5, 7])
            g = comm(comm(random_element(rng, 3, 3, 2), random_element(rng, 3, 3, 2)), random_element(rng, 3, 3, 2))
            s = expand(g, p, 3, 3)
            for a in (1, 2):
                for u in itertools.product(range(3), repeat=a):
                    for v in itertools.product(range(3), repeat=3 - a):
                        total = sum(c * s.coefficient(w) for w, c in shuffle(u, v).items())
                        assert total % p == 0


class TestZassenhaus:
    def test_commutator(self):
        assert str(zassenhaus_degree(comm(x1, x2), 3, 5, 2)) == "Degree(2)"

    def test_p_power(self):
        assert str(zassenhaus_degree(x1 ** 3, 3, 5, 1)) == "Degree(3)"
        assert str(zassenhaus_degree(x1 ** 9, 3, 5, 1)) == "BeyondCap(5)"

    def test_identity(self):
        assert str(zassenhaus_degree(x1 * x1.inverse(), 3, 5, 1)) == "Identity"

    def test_triple_commutator(self):
        assert zassenhaus_degree(comm(comm(x1, x2), x3), 5, 4, 3).n == 3


class TestRho:
    def test_unitriangular(self):
        rng = random.Random(16)
        for _ in range(20):
            g = random_element(rng, 3)
            w = tuple(rng.randrange(3) for _ in range(4))
            R = rho(g, w, 5, 4, 3)
            assert np.all(np.diag(R) == 1)
            assert np.all(np.tril(R, -1) == 0)

    def test_homomorphism(self):
        rng = random.Random(17)
        for _ in range(30):
            p = rng.choice([2, 3, 5])
            g, h = random_element(rng, 3), random_element(rng, 3)
            w = tuple(rng.randrange(3) for _ in range(3))
            assert np.array_equal(rho(g * h, w, p, 3, 3), rho(g, w, p, 3, 3) @ rho(h, w, p, 3, 3) % p)
