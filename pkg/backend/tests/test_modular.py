import itertools
import math
import unittest
from pathlib import Path

import pytest

from backend.app.services.cremona import parse_allcurves
from backend.app.services.modular import (
    STATUS_ABSENT,
    STATUS_INSUFFICIENT,
    STATUS_WITNESS,
    genus_zero_levels,
    genus_zero_report,
    index_gamma0,
    index_gamma_mn,
    index_gamma_psl,
    sl2_order,
    steinberg_dim,
    steinberg_witness,
    verify_corollary,
    x0_certificate,
    x0_genus,
)

DATA = Path(__file__).resolve().parents[2] / 'data'
FULL_EXTRACT = DATA / 'cremona' / 'allcurves.25000'

GENUS_ZERO = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25]


def _count_roots(n, poly):
    return sum(1 for x in range(n) if poly(x) % n == 0)


class IndexTests(unittest.TestCase):
    def test_sl2_order_matches_enumeration(self):
        for m in range(1, 13):
            with self.subTest(m=m):
                count = sum(1 for a, b, c, d in itertools.product(range(m), repeat=4) if (a * d - b * c) % m == 1 % m)
                self.assertEqual(sl2_order(m), count)

    def test_gamma0_index_counts_projective_line(self):
        for n in range(1, 41):
            with self.subTest(n=n):
                pairs = sum(1 for c, d in itertools.product(range(n), repeat=2) if math.gcd(math.gcd(c, d), n) == 1)
                units = sum(1 for u in range(n) if math.gcd(u, n) == 1)
                self.assertEqual(index_gamma0(n), pairs // units)

    def test_psl_index(self):
        self.assertEqual(index_gamma_psl(2), 6)
        self.assertEqual(index_gamma_psl(3), 12)
        self.assertEqual(index_gamma_psl(7), 168)

    def test_gamma_mn(self):
        self.assertEqual(index_gamma_mn(3, 4), sl2_order(3) * 6)
        with self.assertRaises(ValueError):
            index_gamma_mn(4, 6)
        with self.assertRaises(ValueError):
            index_gamma_mn(0, 5)

    def test_steinberg_dimension_is_p(self):
        for p in (2, 3, 5, 7, 11, 997):
            self.assertEqual(steinberg_dim(p), p)
        with self.assertRaises(ValueError):
            steinberg_dim(9)


class X0GenusTests(unittest.TestCase):
    def test_known_genera(self):
        self.assertEqual(x0_genus(11)[0], 1)
        self.assertEqual(x0_genus(37)[0], 2)
        self.assertEqual(x0_genus(100)[0], 7)
        self.assertEqual(x0_genus(389)[0], 32)
        self.assertEqual(x0_genus(1), (0, 1, 1, 1, 1))

    def test_elliptic_points_match_brute_force(self):
        for n in range(1, 301):
            with self.subTest(n=n):
                cert = x0_certificate(n)
                self.assertEqual(cert.nu2, _count_roots(n, lambda x: x * x + 1))
                self.assertEqual(cert.nu3, _count_roots(n, lambda x: x * x + x + 1))

    def test_genus_identity_up_to_ten_thousand(self):
        for n in range(1, 10_001):
            cert = x0_certificate(n)
            self.assertGreaterEqual(cert.genus, 0)
            self.assertEqual(12 * (cert.genus - 1) + 3 * cert.nu2 + 4 * cert.nu3 + 6 * cert.nu_inf, cert.mu)
            if n > 25:
                self.assertGreater(cert.genus, 0)

    def test_genus_zero_levels(self):
        self.assertEqual(genus_zero_levels(100), GENUS_ZERO)
        self.assertEqual(genus_zero_levels(1), [1])
        self.assertEqual(genus_zero_levels(5000), GENUS_ZERO)
        self.assertEqual(genus_zero_report(30).levels, GENUS_ZERO)

    def test_large_bounds_reuse_one_scan(self):
        self.assertEqual(genus_zero_levels(10**6), GENUS_ZERO)
        self.assertEqual(genus_zero_levels(24), GENUS_ZERO[:-1])

    def test_bad_level(self):
        with self.assertRaises(ValueError):
            x0_certificate(0)
        with self.assertRaises(ValueError):
            genus_zero_levels(0)


class SteinbergTests(unittest.TestCase):
    def setUp(self):
        self.db = parse_allcurves((DATA / 'cremona' / 'allcurves.sample').read_text(), source='sample')

    def test_witnesses_on_the_sample(self):
        expected = {2: (7, '14a1'), 3: (5, '15a1'), 5: (3, '15a1'), 7: (2, '14a1'), 11: (1, '11a1'),
                    13: (2, '26a1'), 17: (1, '17a1'), 19: (1, '19a1'), 37: (1, '37a1')}
        for p, (level, curve) in expected.items():
            with self.subTest(p=p):
                w = steinberg_witness(p, self.db)
                self.assertEqual(w.status, STATUS_WITNESS)
                self.assertEqual((w.level, w.curve), (level, curve))
                self.assertEqual(w.conductor, p * level)
                self.assertEqual(w.certificate.genus, 0)
                self.assertEqual(w.steinberg_dim, p)

    def test_coverage_gap_is_not_a_counterexample(self):
        w = steinberg_witness(23, self.db)
        self.assertEqual(w.status, STATUS_INSUFFICIENT)
        self.assertIn(46, w.uncovered_conductors)

    def test_absent_inside_coverage(self):
        db = parse_allcurves('# coverage: 1-100000\n11 a 1 [0,-1,1,-10,-20] 0 5\n')
        self.assertEqual(steinberg_witness(2, db).status, STATUS_ABSENT)

    def test_single_conductor_table(self):
        db = parse_allcurves('11 a 1 [0,-1,1,-10,-20] 0 5\n')
        report = verify_corollary(3, db)
        self.assertFalse(report.passed)
        self.assertEqual(report.insufficient_data, [2])
        self.assertEqual(report.absent, [])

    def test_corollary_below_twenty_on_the_sample(self):
        report = verify_corollary(20, self.db)
        self.assertTrue(report.passed)
        self.assertEqual(report.prime_count, 8)
        self.assertEqual(report.coverage, [1, 27])

    def test_corollary_reports_gaps(self):
        report = verify_corollary(30, self.db)
        self.assertFalse(report.passed)
        self.assertEqual(report.insufficient_data, [23, 29])


@pytest.mark.skipif(not FULL_EXTRACT.exists(), reason='run scripts/fetch_cremona_extract.py first')
def test_all_primes_below_one_thousand_have_witnesses():
    db = parse_allcurves(FULL_EXTRACT.read_text(), source=str(FULL_EXTRACT))
    report = verify_corollary(1000, db)
    assert report.passed
    assert report.prime_count == 168
    for w in report.witnesses:
        assert math.gcd(w.level, w.p) == 1
        assert w.level in GENUS_ZERO
        assert db.by_conductor[w.conductor]
