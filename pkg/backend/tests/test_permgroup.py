import itertools
import math
import unittest

import numpy as np
import pytest

from backend.app.errors import CycleNotationError, DegreeMismatchError
from backend.app.services.permgroup import (
    LEFT_TO_RIGHT,
    RIGHT_TO_LEFT,
    GeneratingTuple,
    Permutation,
    build_bsgs,
    compose,
    cycle_count,
    cycle_type,
    default_domain,
    diagnose_product,
    evaluate_word,
    format_cycle_type,
    format_cycles,
    format_word,
    inverse,
    multiply_all,
    order_of,
    parse_cycles,
    parse_group_file,
    parse_tuple_file,
    parse_word,
    power,
    relation_tuple,
    tuple_product_check,
)

M12_DOMAIN = tuple('0123456789X') + ('∞',)
M11_DOMAIN = tuple('0123456789X')


def _closure(generators):
    """All elements of <generators> by breadth-first multiplication."""
    identity = Permutation.identity(generators[0].degree, generators[0].labels)
    seen = {identity.images: identity}
    queue = [identity]
    for g in queue:
        for s in generators:
            h = compose(g, s)
            if h.images not in seen:
                seen[h.images] = h
                queue.append(h)
    return list(seen.values())


class CycleNotationTests(unittest.TestCase):
    def test_parses_single_character_domain_without_separators(self):
        p = parse_cycles('(058263X4179)', M11_DOMAIN)
        self.assertEqual(p(0), 5)
        self.assertEqual(p(9), 0)
        self.assertEqual(p(M11_DOMAIN.index('X')), 4)
        self.assertEqual(cycle_type(p), (11,))

    def test_parses_infinity_token(self):
        p = parse_cycles('(0∞92)(13)(458X)(67)', M12_DOMAIN)
        self.assertEqual(p(0), 11)
        self.assertEqual(p(11), 9)
        self.assertEqual(cycle_type(p), (4, 4, 2, 2))

    def test_spaces_and_commas_are_separators(self):
        a = parse_cycles('(0 1 2)(3, 4)', default_domain(5))
        b = parse_cycles('(012)(34)', default_domain(5))
        self.assertEqual(a.images, b.images)

    def test_multi_character_tokens(self):
        domain = tuple(f'p{i}' for i in range(12))
        p = parse_cycles('(p0 p11)(p3 p10 p2)', domain)
        self.assertEqual(p(0), 11)
        self.assertEqual(p(10), 2)

    def test_identity_prints_as_empty_cycle(self):
        self.assertEqual(format_cycles(Permutation.identity(4)), '()')

    def test_format_round_trip_on_random_elements(self):
        group = build_bsgs([parse_cycles('(0123456)', default_domain(7)),
                            parse_cycles('(01)', default_domain(7))])
        rng = np.random.default_rng(3)
        for _ in range(50):
            g = group.random_element(rng)
            self.assertEqual(parse_cycles(format_cycles(g), default_domain(7)).images, g.images)

    def test_rejects_unknown_token(self):
        with self.assertRaises(CycleNotationError):
            parse_cycles('(0 7)', default_domain(5))

    def test_rejects_repeated_token(self):
        with self.assertRaises(CycleNotationError):
            parse_cycles('(0 1)(1 2)', default_domain(5))

    def test_rejects_unbalanced_parentheses(self):
        for text in ('(0 1', '0 1)', '((0 1))', '(0 1) 2'):
            with self.assertRaises(CycleNotationError):
                parse_cycles(text, default_domain(5))


class ArithmeticTests(unittest.TestCase):
    def setUp(self):
        self.domain = default_domain(4)
        self.a = parse_cycles('(0 1)', self.domain)
        self.b = parse_cycles('(1 2)', self.domain)

    def test_right_to_left_applies_the_right_factor_first(self):
        ab = compose(self.a, self.b, RIGHT_TO_LEFT)
        # 1 -> 2 under b, 2 fixed by a
        self.assertEqual(ab(1), 2)
        self.assertEqual(ab.images, parse_cycles('(0 1 2)', self.domain).images)

    def test_left_to_right_applies_the_left_factor_first(self):
        ab = compose(self.a, self.b, LEFT_TO_RIGHT)
        self.assertEqual(ab.images, parse_cycles('(0 2 1)', self.domain).images)

    def test_conventions_are_reverses_of_each_other(self):
        for x, y in itertools.product([self.a, self.b, compose(self.a, self.b)], repeat=2):
            self.assertEqual(compose(x, y, LEFT_TO_RIGHT).images, compose(y, x, RIGHT_TO_LEFT).images)

    def test_inverse_and_power(self):
        g = parse_cycles('(0 1 2 3)', self.domain)
        self.assertTrue(compose(g, inverse(g)).is_identity())
        self.assertEqual(power(g, 2).images, parse_cycles('(0 2)(1 3)', self.domain).images)
        self.assertEqual(power(g, -1).images, inverse(g).images)
        self.assertTrue(power(g, 4).is_identity())

    def test_order_is_lcm_of_cycle_lengths(self):
        g = parse_cycles('(0 1 2)(3 4)', default_domain(6))
        self.assertEqual(order_of(g), 6)
        self.assertEqual(cycle_count(g), 3)
        self.assertEqual(cycle_type(g), (3, 2, 1))

    def test_format_cycle_type(self):
        self.assertEqual(format_cycle_type((2,) * 12), '2^12')
        self.assertEqual(format_cycle_type((8, 2, 1)), '8 2 1')

    def test_mixing_domains_is_an_error(self):
        with self.assertRaises(DegreeMismatchError):
            compose(self.a, parse_cycles('(0 1)', default_domain(5)))
        with self.assertRaises(DegreeMismatchError):
            compose(self.a, parse_cycles('(a b)', ('a', 'b', 'c', 'd')))

    def test_invalid_images_rejected(self):
        with self.assertRaises(ValueError):
            Permutation((0, 0, 1))


class WordTests(unittest.TestCase):
    def test_parse_and_format(self):
        names = ('g1', 'g2')
        word = parse_word('g1 g2^-1 g1^3', names)
        self.assertEqual(word, ((0, 1), (1, -1), (0, 3)))
        self.assertEqual(format_word(word, names), 'g1 g2^-1 g1^3')

    def test_unknown_generator(self):
        with self.assertRaises(CycleNotationError):
            parse_word('g3', ('g1', 'g2'))

    def test_evaluate_matches_compose(self):
        domain = default_domain(4)
        gens = [parse_cycles('(0 1 2 3)', domain), parse_cycles('(0 1)', domain)]
        w = evaluate_word(((0, 1), (1, -1)), gens)
        self.assertEqual(w.images, compose(gens[0], inverse(gens[1])).images)


class ProductTests(unittest.TestCase):
    def test_m12_display_holds_right_to_left(self):
        a = parse_cycles('(058263X4179)', M12_DOMAIN)
        b = parse_cycles('(0∞92)(13)(458X)(67)', M12_DOMAIN)
        c = parse_cycles('(0∞)(1X)(25)(37)(48)(69)', M12_DOMAIN)
        self.assertEqual(compose(a, b, RIGHT_TO_LEFT).images, c.images)
        check = tuple_product_check(relation_tuple(a, b, c))
        self.assertTrue(check.holds)
        self.assertEqual(check.convention, RIGHT_TO_LEFT)

    def test_broken_relation_fails_both_conventions(self):
        domain = default_domain(4)
        t = GeneratingTuple((parse_cycles('(0 1)', domain), parse_cycles('(0 1 2)', domain)))
        check = tuple_product_check(t)
        self.assertFalse(check.holds)
        self.assertEqual(check.conventions, ())

    def test_diagnose_recovers_each_position(self):
        domain = default_domain(5)
        a = parse_cycles('(0 1 2 3 4)', domain)
        b = parse_cycles('(0 2)(1 4)', domain)
        c = compose(a, b)
        wrong = parse_cycles('(0 1)', domain)
        for index in range(3):
            entries = [a, b, c]
            truth = entries[index]
            entries[index] = wrong
            d = diagnose_product(GeneratingTuple(tuple(entries)), index)
            self.assertEqual(d.implied.images, truth.images)
            self.assertFalse(d.relation_holds)
            self.assertFalse(d.matches_given)
            self.assertEqual(d.order, order_of(truth))

    def test_diagnose_keeps_a_correct_relation(self):
        domain = default_domain(5)
        a = parse_cycles('(0 1 2 3 4)', domain)
        b = parse_cycles('(0 2)(1 4)', domain)
        d = diagnose_product(GeneratingTuple((a, b, compose(a, b))), 0)
        self.assertTrue(d.relation_holds)
        self.assertTrue(d.matches_given)

    def test_diagnose_needs_a_triple(self):
        domain = default_domain(3)
        with self.assertRaises(ValueError):
            diagnose_product(GeneratingTuple((parse_cycles('(0 1)', domain),)), 0)


class SchreierSimsTests(unittest.TestCase):
    def test_symmetric_group_orders(self):
        for n in range(2, 9):
            domain = default_domain(n)
            gens = [parse_cycles('(' + ' '.join(domain) + ')', domain), parse_cycles('(0 1)', domain)]
            self.assertEqual(build_bsgs(gens).order, math.factorial(n))

    def test_alternating_group_order(self):
        domain = default_domain(7)
        gens = [parse_cycles('(0 1 2)', domain), parse_cycles('(0 1 2 3 4 5 6)', domain)]
        self.assertEqual(build_bsgs(gens).order, 2520)

    def test_m11_order(self):
        gens = [parse_cycles('(0183649X257)', M11_DOMAIN), parse_cycles('(07365481)(29)', M11_DOMAIN)]
        group = build_bsgs(gens)
        self.assertEqual(group.order, 7920)
        self.assertTrue(group.is_transitive())

    def test_order_matches_enumeration_for_small_groups(self):
        domain = default_domain(6)
        cases = [
            [parse_cycles('(0 1 2)(3 5 4)', domain), parse_cycles('(0 3)(1 4)(2 5)', domain)],
            [parse_cycles('(0 1)(2 3)', domain), parse_cycles('(1 2)(4 5)', domain)],
            [parse_cycles('(0 1 2 3)', domain), parse_cycles('(0 2)', domain), parse_cycles('(4 5)', domain)],
        ]
        for gens in cases:
            self.assertEqual(build_bsgs(gens).order, len(_closure(gens)))

    def test_membership_agrees_with_enumeration(self):
        domain = default_domain(5)
        gens = [parse_cycles('(0 1 2 3 4)', domain), parse_cycles('(1 4)(2 3)', domain)]
        group = build_bsgs(gens)
        members = {g.images for g in _closure(gens)}
        for images in itertools.permutations(range(5)):
            self.assertEqual(group.contains(Permutation(images, domain)), images in members)

    def test_order_matches_enumeration_for_random_subgroups_of_s5(self):
        domain = default_domain(5)
        rng = np.random.default_rng(2024)
        for _ in range(40):
            gens = [Permutation(tuple(int(x) for x in rng.permutation(5)), domain)
                    for _ in range(int(rng.integers(1, 4)))]
            with self.subTest(generators=[format_cycles(g) for g in gens]):
                self.assertEqual(build_bsgs(gens).order, len(_closure(gens)))

    def test_membership_in_subgroups_of_s7(self):
        domain = default_domain(7)
        rng = np.random.default_rng(7)
        cases = [
            [parse_cycles('(0 1 2 3 4 5 6)', domain), parse_cycles('(0 1)', domain)],
            [parse_cycles('(0 1 2)', domain), parse_cycles('(0 1 2 3 4 5 6)', domain)],
            [parse_cycles('(0 1 2 3 4 5 6)', domain), parse_cycles('(1 2 4)(3 6 5)', domain)],
            [parse_cycles('(0 1 2)(3 4)', domain), parse_cycles('(5 6)', domain)],
        ]
        cases += [[Permutation(tuple(int(x) for x in rng.permutation(7)), domain) for _ in range(2)]
                  for _ in range(2)]
        everything = list(itertools.permutations(range(7)))
        for gens in cases:
            group = build_bsgs(gens)
            members = {g.images for g in _closure(gens)}
            self.assertEqual(group.order, len(members))
            self.assertLessEqual(group.order, 5040)
            with self.subTest(generators=[format_cycles(g) for g in gens]):
                self.assertTrue(all(group.contains(Permutation(images, domain)) == (images in members)
                                    for images in everything))

    def test_random_elements_are_members_and_cover_the_group(self):
        domain = default_domain(4)
        group = build_bsgs([parse_cycles('(0 1 2 3)', domain), parse_cycles('(0 1)', domain)])
        rng = np.random.default_rng(0)
        seen = set()
        for _ in range(600):
            g = group.random_element(rng)
            self.assertIn(g, group)
            seen.add(g.images)
        self.assertEqual(len(seen), 24)

    def test_orbits_of_intransitive_group(self):
        domain = default_domain(5)
        group = build_bsgs([parse_cycles('(0 1)', domain), parse_cycles('(2 3 4)', domain)])
        self.assertEqual(group.orbits(), [(0, 1), (2, 3, 4)])
        self.assertFalse(group.is_transitive())

    def test_trivial_group(self):
        group = build_bsgs([Permutation.identity(3)])
        self.assertEqual(group.order, 1)

    def test_empty_generator_list(self):
        with self.assertRaises(ValueError):
            build_bsgs([])


def test_multiply_all_right_to_left():
    domain = default_domain(3)
    a = parse_cycles('(0 1)', domain)
    b = parse_cycles('(1 2)', domain)
    assert multiply_all([a, b, a], RIGHT_TO_LEFT).images == compose(compose(a, b), a).images


def test_parse_group_and_tuple_files():
    domain, gens = parse_group_file('# S3\n0 1 2\n(0 1 2)\n(0 1)\n')
    assert domain == ('0', '1', '2')
    assert len(gens) == 2
    entries = parse_tuple_file('(0 1)\ng1 g2^-1\n2A, 3A\n', domain, ('g1', 'g2'))
    assert entries[0].images == (1, 0, 2)
    assert entries[1] == ((0, 1), (1, -1))
    assert entries[2:] == ['2A', '3A']


def test_group_file_error_carries_line_number():
    with pytest.raises(CycleNotationError) as excinfo:
        parse_group_file('0 1 2\n(0 1)\n(0 5)\n', source='bad.grp')
    assert excinfo.value.line_number == 3
    assert str(excinfo.value).startswith('bad.grp:3:')
