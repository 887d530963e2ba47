import unittest
from pathlib import Path

from backend.app.errors import CurveDataError, SingularCurveError
from backend.app.services.cremona import (
    ABSENT,
    OUTSIDE_COVERAGE,
    PRESENT,
    c_invariants,
    discriminant,
    has_conductor,
    lookup,
    parse_allcurves,
    parse_line,
    serialize_allcurves,
)

DATA = Path(__file__).resolve().parents[2] / 'data'


class CurveRecordTests(unittest.TestCase):
    def test_11a1(self):
        record = parse_line('11 a 1 [0,-1,1,-10,-20] 0 5')
        self.assertEqual(record.label, '11a1')
        self.assertEqual(record.discriminant, -161051)
        self.assertEqual(c_invariants(record.ainvs), (496, 20008))
        self.assertTrue(record.satisfies_c_identity())

    def test_flat_and_bracketed_lines_agree(self):
        self.assertEqual(parse_line('37 a 1 0 0 1 -1 0 1 1'), parse_line('37 a 1 [0,0,1,-1,0] 1 1'))

    def test_singular_curve(self):
        with self.assertRaises(SingularCurveError):
            parse_line('11 a 1 0 0 0 -3 2 0 1', source='bad.txt', number=4)
        self.assertEqual(discriminant((0, 0, 0, -3, 2)), 0)

    def test_malformed_lines(self):
        for line in ('11 a 1 [0,-1,1,-10] 0 5', '11 a', '11 1 1 [0,-1,1,-10,-20] 0 5',
                     '11 a 1 [0,-1,1,-10,-20] -1 5', 'x a 1 [0,-1,1,-10,-20] 0 5'):
            with self.subTest(line=line):
                with self.assertRaises(CurveDataError):
                    parse_line(line)


class CurveDatabaseTests(unittest.TestCase):
    def setUp(self):
        self.db = parse_allcurves((DATA / 'cremona' / 'allcurves.sample').read_text(), source='sample')

    def test_sample_contents(self):
        self.assertEqual(self.db.record_count, 18)
        self.assertEqual(self.db.coverage, (1, 27))
        self.assertEqual(self.db.observed_range, (11, 5077))
        self.assertEqual([r.label for r in lookup(self.db, 11)], ['11a1', '11a2', '11a3'])
        self.assertTrue(self.db.provenance)

    def test_every_sample_curve_is_consistent(self):
        for record in self.db.records():
            with self.subTest(curve=record.label):
                self.assertNotEqual(record.discriminant, 0)
                self.assertTrue(record.satisfies_c_identity())

    def test_lookup_statuses(self):
        self.assertEqual(has_conductor(self.db, 26).status, PRESENT)
        self.assertEqual(len(has_conductor(self.db, 26).records), 2)
        self.assertEqual(has_conductor(self.db, 23).status, ABSENT)
        self.assertEqual(has_conductor(self.db, 46).status, OUTSIDE_COVERAGE)
        # extras beyond the declared coverage still count as present
        self.assertTrue(has_conductor(self.db, 389).present)
        self.assertFalse(has_conductor(self.db, 46).in_coverage)

    def test_coverage_defaults_to_observed_range(self):
        db = parse_allcurves(['11 a 1 [0,-1,1,-10,-20] 0 5', '14 a 1 [1,0,1,4,-6] 0 6'])
        self.assertEqual(db.coverage, (11, 14))
        self.assertEqual(has_conductor(db, 12).status, ABSENT)
        self.assertEqual(has_conductor(db, 10).status, OUTSIDE_COVERAGE)

    def test_serialized_table_parses_back(self):
        again = parse_allcurves(serialize_allcurves(self.db))
        self.assertEqual(again.records(), self.db.records())
        self.assertEqual(again.declared_coverage, self.db.declared_coverage)

    def test_bad_coverage_header(self):
        with self.assertRaises(CurveDataError) as ctx:
            parse_allcurves('# coverage: 30-10\n', source='bad.txt')
        self.assertIn('bad.txt:1', str(ctx.exception))

    def test_error_reports_line_number(self):
        with self.assertRaises(SingularCurveError) as ctx:
            parse_allcurves('11 a 1 [0,-1,1,-10,-20] 0 5\n11 b 1 0 0 0 -3 2 0 1\n', source='bad.txt')
        self.assertIn('bad.txt:2', str(ctx.exception))
