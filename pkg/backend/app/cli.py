"""
Command-line front end.

Every subcommand builds one pydantic report and prints it either as pandas tables
(``--output table``) or as a JSON document with sorted keys (``--output json``).
Logs go to stderr, so the JSON on stdout is byte-identical for identical inputs.

Exit status: 0 when every check passes, 1 when a verification fails (the report
says which), 2 for usage and data errors.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator

from . import config
from .errors import BundleNotFoundError, RepresentationError, ToolkitError
from .models.reports import (
    CremonaValidationReport,
    GenusReport,
    SearchReport,
    WeylReport,
)
from .observability import StageTimer
from .repositories import load_bundle, load_curve_bundle, sha256_of
from .services import chartab, cremona, exactlin, modular, weyl
from .services.mathieu import verify_mathieu
from .services.permgroup import (
    GeneratingTuple,
    Permutation,
    build_bsgs,
    evaluate_word,
    generator_names_for,
    parse_group_file,
    parse_tuple_file,
)
from .services.repgenus import (
    DeletedPermutation,
    ExactMatrix,
    genus_of_tuple,
    report_rows,
    search_tuples,
    summary_row,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

OUTPUT_MODES = ('table', 'json')


class RunConfig(BaseModel):
    """Validated run configuration assembled from flags and environment defaults."""
    subcommand: str
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input role -> file path")
    seed: int = Field(config.DEFAULT_SEED, ge=0)
    output: str = Field(config.DEFAULT_OUTPUT, description="table or json")
    data_dir: str

    @field_validator('output')
    @classmethod
    def _known_output(cls, value: str) -> str:
        if value not in OUTPUT_MODES:
            raise ValueError(f'output must be one of {", ".join(OUTPUT_MODES)}')
        return value


class _Outcome:
    """Report plus the data files it was computed from."""

    def __init__(self, report: BaseModel, passed: bool, tables: Sequence[Tuple[str, List[Dict[str, Any]]]] = (),
                 files: Optional[Dict[str, str]] = None):
        self.report = report
        self.passed = passed
        self.tables = list(tables)
        self.files = files or {}


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _read(path: str, files: Dict[str, str]) -> str:
    p = Path(path)
    if not p.is_file():
        raise BundleNotFoundError(f'{path} does not exist')
    files[p.as_posix()] = sha256_of(p)
    return p.read_text(encoding='utf-8')


def _split_list(text: str) -> List[str]:
    return [token.strip() for token in text.split(',') if token.strip()]


def _genus_tables(reports: Sequence[GenusReport]) -> List[Tuple[str, List[Dict[str, Any]]]]:
    tables = [('summary', [summary_row(r) for r in reports])]
    rows = [row for r in reports for row in report_rows(r)]
    if rows:
        tables.append(('entries', rows))
    witnesses = [{'tuple': r.name or '', 'check': w.check, 'detail': w.detail}
                 for r in reports for w in r.witnesses]
    if witnesses:
        tables.append(('witnesses', witnesses))
    return tables


def _load_tuple(group_path: str, tuple_path: str, files: Dict[str, str]):
    domain, generators = parse_group_file(_read(group_path, files), source=group_path)
    names = generator_names_for(len(generators))
    entries = parse_tuple_file(_read(tuple_path, files), domain, names, source=tuple_path)
    return domain, generators, names, entries


def _perm_tuple(entries, generators: Sequence[Permutation], name: str) -> GeneratingTuple:
    elements = []
    words = []
    for entry in entries:
        if isinstance(entry, Permutation):
            elements.append(entry)
            words.append(None)
        elif isinstance(entry, tuple):
            elements.append(evaluate_word(entry, generators))
            words.append(entry)
        else:
            raise RepresentationError(f'tuple entry {entry!r} is a class name; use --rep char')
    all_words = all(w is not None for w in words)
    return GeneratingTuple(tuple(elements), words=tuple(words) if all_words else None, name=name)


def _curve_db(args, files: Dict[str, str]) -> cremona.CurveDatabase:
    if args.cremona:
        return cremona.parse_allcurves(_read(args.cremona, files), source=args.cremona)
    bundle = load_curve_bundle(args.data_dir)
    files.update(bundle.checksums)
    return bundle.data


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_verify_mathieu(args) -> _Outcome:
    bundle = load_bundle('mathieu', args.data_dir)
    report = verify_mathieu(bundle.data)
    genus_reports = []
    diagnoses = []
    for record in report.records:
        genus_reports.append(record.verbatim)
        if record.repaired is not None:
            genus_reports.append(record.repaired)
        if record.diagnosis is not None:
            diagnoses.append({
                'display': record.display_id,
                'entry': record.diagnosis.index,
                'implied': record.diagnosis.implied,
                'type': record.diagnosis.cycle_type,
                'order': record.diagnosis.order,
                'relation holds': record.diagnosis.relation_holds,
            })
    tables = _genus_tables(genus_reports)
    if diagnoses:
        tables.append(('diagnosis', diagnoses))
    return _Outcome(report, report.passed, tables, bundle.checksums)


class _WeylSuite(BaseModel):
    reports: List[WeylReport]
    passed: bool


def cmd_weyl(args) -> _Outcome:
    if args.suite:
        labels = list(weyl.SUITE)
    else:
        if not args.type:
            raise ValueError('weyl needs --type (or --suite)')
        labels = [weyl.parse_label(args.type, args.rank)]
    reports = [weyl.weyl_report(t, r, rotation=args.rotation and (not args.suite or r >= 3))
               for t, r in labels]
    rows = [{
        'type': r.label,
        'roots': r.root_count,
        '|W|': r.weyl_order,
        'bsgs': r.bsgs_order,
        'genus': r.full.genus,
        'rotation genus': r.rotation.genus if r.rotation else '-',
        'rotation order': r.rotation_subgroup.order if r.rotation_subgroup else '-',
        'result': 'PASS' if r.passed else 'FAIL',
    } for r in reports]
    passed = all(r.passed for r in reports)
    report = reports[0] if len(reports) == 1 else _WeylSuite(reports=reports, passed=passed)
    return _Outcome(report, passed, [('weyl', rows)])


def cmd_genus(args) -> _Outcome:
    files: Dict[str, str] = {}
    kind = args.rep[0]
    if kind == 'char':
        if len(args.rep) != 2 or ':' not in args.rep[1]:
            raise ValueError('--rep char needs FILE:CHI')
        table_path, chi = args.rep[1].rsplit(':', 1)
        table = chartab.parse_table(_read(table_path, files), source=table_path)
        classes = []
        if args.group:
            domain, _ = parse_group_file(_read(args.group, files), source=args.group)
        else:
            domain = ()
        for entry in parse_tuple_file(_read(args.tuple, files), domain, source=args.tuple):
            if not isinstance(entry, str):
                raise RepresentationError('--rep char needs class names in the tuple file')
            classes.append(entry)
        report = chartab.class_genus(chartab.class_tuple(table, chi, classes), expected_genus=args.expected_genus)
        return _Outcome(report, report.passed, _genus_tables([report]), files)

    if not args.group:
        raise ValueError(f'--rep {kind} needs --group')
    domain, generators, names, entries = _load_tuple(args.group, args.tuple, files)
    t = _perm_tuple(entries, generators, name=Path(args.tuple).stem)
    group = build_bsgs(generators, seed=args.seed)

    if kind == 'perm':
        if len(args.rep) != 1:
            raise ValueError('--rep perm takes no argument')
        rep = DeletedPermutation(group)
        report = genus_of_tuple(rep, t, expected_genus=args.expected_genus)
    elif kind == 'matrix':
        if len(args.rep) != 2:
            raise ValueError('--rep matrix needs FILE')
        matrices = exactlin.parse_matrix_file(_read(args.rep[1], files), source=args.rep[1])
        rep = ExactMatrix(matrices, perm_generators=generators, group_order=group.order, generator_names=names)
        report = genus_of_tuple(rep, t, expected_genus=args.expected_genus)
        relation_witnesses = rep.validate_relations(seed=args.seed)
        if relation_witnesses:
            report = report.model_copy(update={
                'witnesses': report.witnesses + relation_witnesses,
                'passed': False,
            })
    else:
        raise ValueError(f'unknown representation {kind!r}; use perm, matrix FILE or char FILE:CHI')
    return _Outcome(report, report.passed, _genus_tables([report]), files)


def cmd_class_genus(args) -> _Outcome:
    files: Dict[str, str] = {}
    table = chartab.parse_table(_read(args.table, files), source=args.table)
    ct = chartab.class_tuple(table, args.chi, _split_list(args.classes))
    report = chartab.class_genus(ct, expected_genus=args.expected_genus)
    return _Outcome(report, report.passed, _genus_tables([report]), files)


def cmd_triple_count(args) -> _Outcome:
    files: Dict[str, str] = {}
    table = chartab.parse_table(_read(args.table, files), source=args.table)
    report = chartab.triple_count_report(table, _split_list(args.classes))
    row = {'group': report.group, 'classes': ','.join(report.classes), 'count': report.count,
           'structure constant': report.structure_constant if report.structure_constant is not None else '-'}
    return _Outcome(report, True, [('triple count', [row])], files)


def cmd_search(args) -> _Outcome:
    files: Dict[str, str] = {}
    _, generators = parse_group_file(_read(args.group, files), source=args.group)
    group = build_bsgs(generators, seed=args.seed)
    rep = DeletedPermutation(group)
    found = search_tuples(group, rep, args.n, args.target, seed=args.seed, budget=args.budget)
    results = [genus_of_tuple(rep, t, expected_genus=args.target) for t in found]
    report = SearchReport(n=args.n, target_genus=args.target, seed=args.seed, budget=args.budget, results=results)
    tables = _genus_tables(results) if results else [('search', [{'found': 0, 'budget': args.budget}])]
    return _Outcome(report, all(r.passed for r in results), tables, files)


def cmd_x0genus(args) -> _Outcome:
    if args.genus_zero:
        report = modular.genus_zero_report(args.bound)
        return _Outcome(report, True, [('genus 0 levels', [{'bound': report.bound,
                                                             'levels': ' '.join(map(str, report.levels))}])])
    if args.n is None:
        raise ValueError('x0genus needs --n N or --genus-zero --bound B')
    report = modular.x0_certificate(args.n)
    return _Outcome(report, True, [('X_0(N)', [report.model_dump()])])


def cmd_steinberg(args) -> _Outcome:
    files: Dict[str, str] = {}
    db = _curve_db(args, files)
    if args.all_below is not None:
        report = modular.verify_corollary(args.all_below, db)
        witnesses = report.witnesses
        passed = report.passed
    elif args.p is not None:
        report = modular.steinberg_witness(args.p, db)
        witnesses = [report]
        passed = report.status == modular.STATUS_WITNESS
    else:
        raise ValueError('steinberg needs --p P or --all-below B')
    rows = [{
        'p': w.p,
        'status': w.status,
        'N': w.level if w.level is not None else '-',
        'conductor': w.conductor if w.conductor is not None else '-',
        'curve': w.curve or '-',
        'genus X_0(N)': w.certificate.genus if w.certificate else '-',
    } for w in witnesses]
    return _Outcome(report, passed, [('steinberg', rows)], files)


def validate_curves(db: cremona.CurveDatabase) -> CremonaValidationReport:
    identity_ok = all(r.satisfies_c_identity() for r in db.records())
    again = cremona.parse_allcurves(cremona.serialize_allcurves(db), source=db.source)
    round_trip_ok = (
        again.records() == db.records()
        and again.declared_coverage == db.declared_coverage
        and again.provenance == db.provenance
    )
    return CremonaValidationReport(
        record_count=db.record_count,
        conductor_count=len(db.by_conductor),
        coverage=list(db.coverage) if db.coverage else None,
        declared_coverage=list(db.declared_coverage) if db.declared_coverage else None,
        identity_ok=identity_ok,
        round_trip_ok=round_trip_ok,
    )


def cmd_validate(args) -> _Outcome:
    files: Dict[str, str] = {}
    if args.table:
        table = chartab.parse_table(_read(args.table, files), source=args.table)
        report = chartab.validate_table(table)
        return _Outcome(report, report.burnside_ok, [('table', [report.model_dump()])], files)
    if args.cremona:
        db = cremona.parse_allcurves(_read(args.cremona, files), source=args.cremona)
        report = validate_curves(db)
        return _Outcome(report, report.identity_ok and report.round_trip_ok, [('cremona', [report.model_dump()])], files)
    raise ValueError('validate needs --table FILE or --cremona FILE')


COMMANDS = {
    'verify-mathieu': cmd_verify_mathieu,
    'weyl': cmd_weyl,
    'genus': cmd_genus,
    'class-genus': cmd_class_genus,
    'triple-count': cmd_triple_count,
    'search': cmd_search,
    'x0genus': cmd_x0genus,
    'steinberg': cmd_steinberg,
    'validate': cmd_validate,
}

_INPUT_FLAGS = ('group', 'tuple', 'table', 'cremona')


# ---------------------------------------------------------------------------
# Parser and output
# ---------------------------------------------------------------------------

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('--output', choices=OUTPUT_MODES, default=None,
                        help='table (default, or GENUS_OUTPUT) or json')
    common.add_argument('--data-dir', default=None, help='data directory (default GENUS_DATA_DIR or <repo>/data)')
    common.add_argument('--seed', type=int, default=None, help='seed for randomized steps (default GENUS_SEED or 0)')
    common.add_argument('--log-level', default=None, help='log level (default LOG_LEVEL or INFO)')

    parser = _ArgumentParser(prog='verify', description='Verification toolkit for genus computations.')
    sub = parser.add_subparsers(dest='subcommand', required=True, parser_class=_ArgumentParser)

    sub.add_parser('verify-mathieu', parents=[common], help='verify the bundled Mathieu generating pairs')

    p = sub.add_parser('weyl', parents=[common], help='full and rotation tuples of a Weyl group')
    p.add_argument('--type', help='root system type, e.g. E or E8')
    p.add_argument('--rank', type=int)
    p.add_argument('--rotation', action='store_true')
    p.add_argument('--suite', action='store_true', help='run every type of the standard suite')

    p = sub.add_parser('genus', parents=[common], help='genus of a tuple over a representation')
    p.add_argument('--group', help='group file')
    p.add_argument('--tuple', required=True, help='tuple file')
    p.add_argument('--rep', nargs='+', default=['perm'], help='perm | matrix FILE | char FILE:CHI')
    p.add_argument('--expected-genus', type=int)

    p = sub.add_parser('class-genus', parents=[common], help='genus of a class tuple from character data')
    p.add_argument('--table', required=True)
    p.add_argument('--chi', required=True)
    p.add_argument('--classes', required=True, help='comma-separated class names')
    p.add_argument('--expected-genus', type=int)

    p = sub.add_parser('triple-count', parents=[common], help='class multiplication count')
    p.add_argument('--table', required=True)
    p.add_argument('--classes', required=True, help='c1,c2,c3')

    p = sub.add_parser('search', parents=[common], help='random search for tuples of a given genus')
    p.add_argument('--group', required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--target', type=int, required=True)
    p.add_argument('--budget', type=int, default=config.SEARCH_BUDGET)

    p = sub.add_parser('x0genus', parents=[common], help='genus of X_0(N)')
    p.add_argument('--n', type=int)
    p.add_argument('--genus-zero', action='store_true')
    p.add_argument('--bound', type=int, default=modular.GENUS_ZERO_SWEEP)

    p = sub.add_parser('steinberg', parents=[common], help='Steinberg witnesses from a curve table')
    p.add_argument('--p', type=int)
    p.add_argument('--all-below', type=int)
    p.add_argument('--cremona', help='allcurves file (default: the cremona-25000 bundle)')

    p = sub.add_parser('validate', parents=[common], help='validate a character table or a curve table')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--table')
    group.add_argument('--cremona')
    return parser


def _run_config(args) -> RunConfig:
    inputs = {flag: getattr(args, flag) for flag in _INPUT_FLAGS if getattr(args, flag, None)}
    return RunConfig(
        subcommand=args.subcommand,
        inputs=inputs,
        seed=args.seed if args.seed is not None else config.DEFAULT_SEED,
        output=args.output or config.DEFAULT_OUTPUT,
        data_dir=str(config.data_dir(args.data_dir)),
    )


def render(outcome: _Outcome, run_config: RunConfig) -> str:
    if run_config.output == 'json':
        document = {
            'command': run_config.subcommand,
            'passed': outcome.passed,
            'report': outcome.report.model_dump(mode='json'),
            'data_files': dict(sorted(outcome.files.items())),
        }
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)
    blocks = []
    for title, rows in outcome.tables:
        frame = pd.DataFrame(rows)
        blocks.append(f'== {title} ==\n{frame.to_string(index=False)}')
    blocks.append('RESULT: ' + ('PASS' if outcome.passed else 'FAIL'))
    return '\n\n'.join(blocks)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """Parse ``argv``, run one subcommand, print its report. Returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        run_config = _run_config(args)
    except (_UsageError, ValidationError) as e:
        print(f'usage error: {e}', file=sys.stderr)
        return EXIT_USAGE

    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    args.seed = run_config.seed
    args.data_dir = run_config.data_dir

    try:
        with StageTimer(args.subcommand, output_type=run_config.output):
            outcome = COMMANDS[args.subcommand](args)
    except (ToolkitError, ValueError) as e:
        logger.error('%s failed: %s', args.subcommand, e)
        print(f'error: {e}', file=sys.stderr)
        return EXIT_USAGE

    print(render(outcome, run_config), file=stdout)
    return EXIT_OK if outcome.passed else EXIT_FAILED
