import io
import json
from pathlib import Path

import pytest

from backend.app.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run

DATA = Path(__file__).resolve().parents[2] / 'data'


def _run(*argv):
    out = io.StringIO()
    status = run(list(argv), stdout=out)
    return status, out.getvalue()


def _json(*argv):
    status, text = _run(*argv, '--output', 'json', '--data-dir', str(DATA))
    return status, json.loads(text), text


def test_verify_mathieu_fails_on_the_m23_display():
    status, doc, _ = _json('verify-mathieu')
    assert status == EXIT_FAILED
    assert doc['command'] == 'verify-mathieu'
    assert doc['passed'] is False
    ids = {r['display_id']: r for r in doc['report']['records']}
    assert ids['M24']['verbatim']['genus'] == 1
    assert ids['M23']['diagnosis']['index'] == 1
    assert 'mathieu/m23.tuple' in doc['data_files']


def test_weyl_e6_passes():
    status, doc, _ = _json('weyl', '--type', 'E6', '--rotation')
    assert status == EXIT_OK
    assert doc['report']['label'] == 'E6'
    assert doc['report']['rotation']['genus'] == 1
    assert doc['report']['rotation_subgroup']['order'] == 25920


def test_json_output_is_deterministic():
    args = ('search', '--group', str(DATA / 'groups' / 's4.grp'), '--n', '3', '--target', '0',
            '--budget', '400', '--seed', '5')
    _, _, first = _json(*args)
    _, _, second = _json(*args)
    assert first == second


def test_genus_with_permutation_rep():
    status, doc, _ = _json('genus', '--group', str(DATA / 'groups' / 's4.grp'),
                           '--tuple', str(DATA / 'groups' / 's4_genus0.tuple'), '--expected-genus', '0')
    assert status == EXIT_OK
    assert doc['report']['fixed_dims'] == [0, 1, 2]


def test_genus_with_matrix_rep():
    status, doc, _ = _json('genus', '--group', str(DATA / 'groups' / 's3_coxeter.grp'),
                           '--tuple', str(DATA / 'groups' / 's3_coxeter_words.tuple'),
                           '--rep', 'matrix', str(DATA / 'matrices' / 'weyl_a2.mat'))
    assert status == EXIT_OK
    assert doc['report']['representation'] == 'exact_matrix'
    assert doc['report']['genus'] == 0


def test_genus_with_character_rep():
    status, doc, _ = _json('genus', '--tuple', str(DATA / 'groups' / 's3_classes.tuple'),
                           '--rep', 'char', f"{DATA / 'chartab' / 'small' / 's3.tbl'}:chi2")
    assert status == EXIT_OK
    assert doc['report']['fixed_dims'] == [1, 1, 0]


def test_class_genus_and_triple_count():
    table = str(DATA / 'chartab' / 'sporadic' / 'j2.tbl')
    status, doc, _ = _json('class-genus', '--table', table, '--chi', 'chi12', '--classes', '2B,3B,7A',
                           '--expected-genus', '1')
    assert status == EXIT_OK
    assert doc['report']['genus'] == 1

    status, doc, _ = _json('triple-count', '--table', str(DATA / 'chartab' / 'small' / 's3.tbl'),
                           '--classes', '2A,2A,3A')
    assert status == EXIT_OK
    assert doc['report']['count'] == 6


def test_modular_commands():
    status, doc, _ = _json('x0genus', '--n', '389')
    assert status == EXIT_OK
    assert doc['report']['genus'] == 32

    status, doc, _ = _json('x0genus', '--genus-zero', '--bound', '100')
    assert doc['report']['levels'][-1] == 25

    sample = str(DATA / 'cremona' / 'allcurves.sample')
    status, doc, _ = _json('steinberg', '--all-below', '20', '--cremona', sample)
    assert status == EXIT_OK
    assert len(doc['report']['witnesses']) == 8

    status, doc, _ = _json('steinberg', '--p', '23', '--cremona', sample)
    assert status == EXIT_FAILED
    assert doc['report']['status'] == 'insufficient_data'


def test_validate():
    status, doc, _ = _json('validate', '--cremona', str(DATA / 'cremona' / 'allcurves.sample'))
    assert status == EXIT_OK
    assert doc['report']['round_trip_ok'] is True

    status, doc, _ = _json('validate', '--table', str(DATA / 'chartab' / 'small' / 's5.tbl'))
    assert status == EXIT_OK
    assert doc['report']['complete'] is True


def test_table_output():
    status, text = _run('x0genus', '--n', '11', '--output', 'table')
    assert status == EXIT_OK
    assert '== X_0(N) ==' in text
    assert text.rstrip().endswith('RESULT: PASS')


@pytest.mark.parametrize('argv', [
    ['no-such-command'],
    ['weyl', '--rank', 'two'],
    ['validate'],
    ['validate', '--table', 'a.tbl', '--cremona', 'b.txt'],
    ['x0genus', '--n', '5', '--output', 'yaml'],
])
def test_usage_errors(argv):
    assert _run(*argv)[0] == EXIT_USAGE


def test_data_errors_exit_with_two(tmp_path):
    assert _run('class-genus', '--table', str(tmp_path / 'missing.tbl'), '--chi', 'x', '--classes', '1A')[0] \
        == EXIT_USAGE
    assert _run('weyl', '--type', 'E5')[0] == EXIT_USAGE
    assert _run('x0genus')[0] == EXIT_USAGE

    bad = tmp_path / 'bad.txt'
    bad.write_text('11 a 1 0 0 0 -3 2 0 1\n')
    assert _run('validate', '--cremona', str(bad))[0] == EXIT_USAGE


def test_negative_seed_is_a_usage_error():
    assert _run('x0genus', '--n', '5', '--seed', '-1')[0] == EXIT_USAGE


def test_steinberg_without_the_large_extract_uses_the_sample(tmp_path):
    (tmp_path / 'cremona').mkdir()
    (tmp_path / 'cremona' / 'allcurves.sample').write_text((DATA / 'cremona' / 'allcurves.sample').read_text())
    status, text = _run('steinberg', '--all-below', '30', '--output', 'json', '--data-dir', str(tmp_path))
    doc = json.loads(text)
    assert status == EXIT_FAILED
    assert doc['report']['insufficient_data'] == [23, 29]
    assert doc['report']['absent'] == []
    assert list(doc['data_files']) == ['cremona/allcurves.sample']
