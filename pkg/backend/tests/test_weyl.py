import unittest
from fractions import Fraction

import numpy as np

from backend.app.errors import RootSystemError
from backend.app.services import exactlin
from backend.app.services.permgroup import build_bsgs, multiply_all
from backend.app.services.weyl import (
    SUITE,
    _check_dynkin_tree,
    build_root_system,
    expected_root_count,
    full_tuple,
    matrix_from_root_permutation,
    parse_label,
    path_decomposition,
    random_weyl_word,
    rotation_tuple,
    weyl_order,
    weyl_report,
)


def _trace_average(m):
    order = exactlin.matrix_order(m)
    total = sum((exactlin.trace(exactlin.mat_pow(m, k)) for k in range(order)), Fraction(0))
    return total / order


class RootSystemTests(unittest.TestCase):
    def test_a2_reflections_in_simple_root_coordinates(self):
        rs = build_root_system('A', 2)
        self.assertEqual(rs.reflection_matrices[0].to_rows(), [[-1, 1], [0, 1]])
        self.assertEqual(rs.reflection_matrices[1].to_rows(), [[1, 0], [1, -1]])

    def test_root_counts(self):
        for root_type, rank in SUITE:
            with self.subTest(label=f'{root_type}{rank}'):
                rs = build_root_system(root_type, rank)
                self.assertEqual(len(rs.roots), expected_root_count(root_type, rank))

    def test_known_weyl_orders(self):
        self.assertEqual(weyl_order('E', 8), 696729600)
        self.assertEqual(weyl_order('F', 4), 1152)
        self.assertEqual(weyl_order('D', 4), 192)
        self.assertEqual(weyl_order('B', 3), 48)

    def test_bad_types(self):
        for root_type, rank in [('E', 5), ('D', 3), ('C', 2), ('A', 0), ('G', 3), ('F', 5)]:
            with self.subTest(label=f'{root_type}{rank}'):
                with self.assertRaises(RootSystemError):
                    build_root_system(root_type, rank)
        with self.assertRaises(RootSystemError):
            parse_label('H3')
        with self.assertRaises(RootSystemError):
            parse_label('E8', rank=7)
        with self.assertRaises(RootSystemError):
            parse_label('E')

    def test_parse_label(self):
        self.assertEqual(parse_label('e8'), ('E', 8))
        self.assertEqual(parse_label('D', rank=5), ('D', 5))

    def test_matrix_from_root_permutation_agrees_with_words(self):
        rng = np.random.default_rng(3)
        for label in ('A4', 'B3', 'D5', 'E6', 'F4', 'G2'):
            rs = build_root_system(*parse_label(label))
            for _ in range(25):
                word = random_weyl_word(rs, int(rng.integers(0, 12)), rng)
                with self.subTest(label=label, word=word):
                    self.assertEqual(matrix_from_root_permutation(rs, rs.perm_of_word(word)),
                                     rs.matrix_of_word(word))


class GenusOneTests(unittest.TestCase):
    def test_full_tuple_has_product_one(self):
        rs = build_root_system('D', 4)
        t = full_tuple(rs)
        self.assertEqual(t.n, 2 * rs.rank + 2)
        self.assertTrue(multiply_all(list(t.elements)).is_identity())

    def test_suite_full_tuples_have_genus_one(self):
        for root_type, rank in SUITE:
            with self.subTest(label=f'{root_type}{rank}'):
                report = weyl_report(root_type, rank)
                self.assertEqual(report.full.genus, 1)
                self.assertEqual(report.bsgs_order, weyl_order(root_type, rank))
                self.assertEqual(report.invariant_dim, 0)
                self.assertTrue(report.passed)

    def test_rotation_tuples_for_rank_three_and_up(self):
        for root_type, rank in SUITE:
            if rank < 3:
                continue
            with self.subTest(label=f'{root_type}{rank}'):
                report = weyl_report(root_type, rank, rotation=True)
                self.assertEqual(report.rotation.genus, 1)
                self.assertEqual(report.rotation.n, rank + 1)
                self.assertEqual(set(report.rotation_subgroup.determinants), {'1'})
                self.assertEqual(report.rotation_subgroup.order, weyl_order(root_type, rank) // 2)
                self.assertTrue(report.passed)

    def test_e8_rotation_subgroup_order(self):
        rs = build_root_system('E', 8)
        t = rotation_tuple(rs)
        self.assertEqual(build_bsgs(list(t.elements)).order, 348364800)

    def test_rotation_needs_two_edges(self):
        with self.assertRaises(RootSystemError):
            weyl_report('A', 2, rotation=True)


class PathDecompositionTests(unittest.TestCase):
    def test_path_diagram(self):
        d = path_decomposition(build_root_system('A', 4))
        self.assertEqual((d.path1, d.path2), ((1, 2), (2, 3, 4)))

    def test_d4_branch(self):
        d = path_decomposition(build_root_system('D', 4))
        self.assertEqual((d.path1, d.path2), ((1, 2, 3), (4, 2)))

    def test_e8_branch(self):
        d = path_decomposition(build_root_system('E', 8))
        self.assertEqual((d.path1, d.path2), ((8, 7, 6, 5, 4, 3, 1), (2, 4)))


class FixedSpaceTests(unittest.TestCase):
    def test_kernel_matches_trace_average_on_random_elements(self):
        rng = np.random.default_rng(500)
        systems = [build_root_system(*parse_label(label)) for label in ('E6', 'D5', 'B4', 'A5', 'F4')]
        for k in range(500):
            rs = systems[k % len(systems)]
            m = rs.matrix_of_word(random_weyl_word(rs, int(rng.integers(1, 20)), rng))
            fixed = exactlin.kernel_dimension(exactlin.mat_sub(m, exactlin.identity(rs.rank)))
            self.assertEqual(fixed, _trace_average(m))


class DynkinTreeTests(unittest.TestCase):
    def test_accepts_trees(self):
        _check_dynkin_tree(4, [(1, 2), (2, 3), (2, 4)])
        _check_dynkin_tree(1, [])
        for root_type, rank in SUITE:
            rs = build_root_system(root_type, rank)
            _check_dynkin_tree(rank, rs.edges)

    def test_rejects_a_cycle_with_an_isolated_vertex(self):
        with self.assertRaises(RootSystemError) as ctx:
            _check_dynkin_tree(4, [(1, 2), (2, 3), (3, 1)])
        self.assertIn('[4]', str(ctx.exception))

    def test_rejects_bad_edges(self):
        for edges in ([(1, 1), (2, 3)], [(1, 2), (2, 5)], [(1, 2)]):
            with self.subTest(edges=edges), self.assertRaises(RootSystemError):
                _check_dynkin_tree(3, edges)

    def test_rejects_a_vertex_of_degree_four(self):
        with self.assertRaises(RootSystemError):
            _check_dynkin_tree(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
