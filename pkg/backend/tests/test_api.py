import unittest
from pathlib import Path

from backend.app import create_app

DATA = Path(__file__).resolve().parents[2] / 'data'


class VerificationApiTests(unittest.TestCase):
    def setUp(self):
        self.app = create_app({
            'TESTING': True,
            'GENUS_DATA_DIR': str(DATA),
            'CREMONA_BUNDLE': 'cremona-sample',
        })
        self.client = self.app.test_client()

    def test_health(self):
        resp = self.client.get('/api/health')
        self.assertEqual(resp.status_code, 200)
        self.assertTrue(resp.get_json()['ok'])

    def test_x0_genus(self):
        resp = self.client.get('/api/modular/x0/100')
        body = resp.get_json()
        self.assertEqual(resp.status_code, 200)
        self.assertTrue(body['success'])
        self.assertEqual(body['data']['genus'], 7)

    def test_bad_level(self):
        resp = self.client.get('/api/modular/x0/0')
        self.assertEqual(resp.status_code, 400)
        self.assertFalse(resp.get_json()['success'])

    def test_genus_zero_levels(self):
        resp = self.client.get('/api/modular/genus-zero?bound=30')
        self.assertEqual(resp.get_json()['data']['levels'], [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25])
        resp = self.client.get('/api/modular/genus-zero?bound=lots')
        self.assertEqual(resp.status_code, 400)

    def test_weyl(self):
        resp = self.client.get('/api/weyl/D4?rotation=true')
        data = resp.get_json()['data']
        self.assertEqual(resp.status_code, 200)
        self.assertTrue(data['passed'])
        self.assertEqual(data['path_decomposition'], {'path1': [1, 2, 3], 'path2': [4, 2]})

    def test_unknown_weyl_type(self):
        resp = self.client.get('/api/weyl/H3')
        self.assertEqual(resp.status_code, 400)
        self.assertEqual(resp.get_json()['error'], 'Bad Request')

    def test_steinberg_from_configured_bundle(self):
        resp = self.client.get('/api/steinberg/13')
        body = resp.get_json()
        self.assertEqual(body['data']['curve'], '26a1')
        self.assertIn('cremona/allcurves.sample', body['meta']['files'])
        self.assertEqual(self.client.get('/api/steinberg/9').status_code, 400)

    def test_missing_bundle_is_not_found(self):
        app = create_app({'TESTING': True, 'GENUS_DATA_DIR': str(DATA), 'CREMONA_BUNDLE': 'nope'})
        resp = app.test_client().get('/api/steinberg/2')
        self.assertEqual(resp.status_code, 404)

    def test_mathieu(self):
        resp = self.client.get('/api/mathieu')
        data = resp.get_json()['data']
        self.assertEqual(resp.status_code, 200)
        self.assertFalse(data['passed'])
        self.assertEqual(len(data['records']), 5)
