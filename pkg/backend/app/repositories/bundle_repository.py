"""
Named data bundles under the data directory.

    mathieu         data/mathieu/*.tuple          PrintedTupleRecord per display
    char-small      data/chartab/small/*.tbl      complete rational character tables
    sporadic        data/chartab/sporadic/*.tbl   partial ATLAS-derived tables
    groups          data/groups/*.grp             (domain, generators) per group
    cremona-sample  data/cremona/allcurves.sample small curve table, coverage 1-27
    cremona-25000   data/cremona/allcurves.25000  curve table, coverage 1-25000
                                                  (fetched by scripts/fetch_cremona_extract.py)
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..config import data_dir
from ..errors import BundleNotFoundError, ToolkitError
from ..models.reports import BundleInfo
from ..services.chartab import parse_table
from ..services.cremona import parse_allcurves
from ..services.permgroup import parse_group_file
from .base import FileRepository

logger = logging.getLogger(__name__)

PASSES = 'passes'
FAILS = 'fails'

_REQUIRED_KEYS = ('display', 'group', 'order', 'domain', 'a', 'b', 'c')


@dataclass(frozen=True)
class PrintedTupleRecord:
    """
    One printed generating pair ``a b = c``, stored exactly as printed apart from
    the LaTeX markup (``printed`` keeps the raw display).
    """

    display_id: str
    group: str
    order: int
    domain: Tuple[str, ...]
    a: str
    b: str
    c: str
    character: str = 'chi2'
    genus: int = 1
    expected_verification: str = PASSES
    broken_index: Optional[int] = None
    printed: Optional[str] = None
    provenance: Tuple[str, ...] = ()
    source: Optional[str] = None

    @property
    def cycles(self) -> Tuple[str, str, str]:
        return self.a, self.b, self.c


def parse_printed_record(text: str, source: Optional[str] = None) -> PrintedTupleRecord:
    """``key value`` lines; values run to the end of the line and are not trimmed inside."""
    values: Dict[str, str] = {}
    provenance: List[str] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith('#'):
            note = stripped.lstrip('#').strip()
            if note.lower().startswith('source:'):
                provenance.append(note)
            continue
        key, _, value = stripped.partition(' ')
        if not value.strip():
            raise ToolkitError(f'{key!r} has no value', source=source, line_number=number)
        if key in values:
            raise ToolkitError(f'duplicate key {key!r}', source=source, line_number=number)
        values[key] = value.strip()

    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ToolkitError(f'missing keys: {", ".join(missing)}', source=source)
    expected = values.get('expected_verification', PASSES)
    if expected not in (PASSES, FAILS):
        raise ToolkitError(f'expected_verification must be {PASSES} or {FAILS}, got {expected!r}', source=source)
    try:
        order = int(values['order'])
        genus = int(values.get('genus', '1'))
        broken_index = int(values['broken_index']) if 'broken_index' in values else None
    except ValueError as e:
        raise ToolkitError(f'bad integer field: {e}', source=source) from e
    if broken_index is not None and not 1 <= broken_index <= 3:
        raise ToolkitError(f'broken_index must be 1, 2 or 3, got {broken_index}', source=source)

    return PrintedTupleRecord(
        display_id=values['display'],
        group=values['group'],
        order=order,
        domain=tuple(values['domain'].split()),
        a=values['a'],
        b=values['b'],
        c=values['c'],
        character=values.get('character', 'chi2'),
        genus=genus,
        expected_verification=expected,
        broken_index=broken_index,
        printed=values.get('printed'),
        provenance=tuple(provenance),
        source=source,
    )


def _group_parser(text: str, source: str):
    return parse_group_file(text, source=source)


def _curve_parser(text: str, source: str):
    return parse_allcurves(text, source=source)


# name -> (directory, glob, parser, single file)
_BUNDLES = {
    'mathieu': ('mathieu', '*.tuple', parse_printed_record, False),
    'char-small': ('chartab/small', '*.tbl', parse_table, False),
    'sporadic': ('chartab/sporadic', '*.tbl', parse_table, False),
    'groups': ('groups', '*.grp', _group_parser, False),
    'cremona-sample': ('cremona', 'allcurves.sample', _curve_parser, True),
    'cremona-25000': ('cremona', 'allcurves.25000', _curve_parser, True),
}

BUNDLE_NAMES = tuple(_BUNDLES)


@dataclass
class Bundle:
    name: str
    data: Any
    checksums: Dict[str, str] = field(default_factory=dict)

    def info(self) -> BundleInfo:
        return BundleInfo(name=self.name, files=dict(sorted(self.checksums.items())))


def bundle_repository(name: str, root: Optional[Union[str, Path]] = None) -> FileRepository:
    if name not in _BUNDLES:
        raise BundleNotFoundError(f'unknown bundle {name!r}; known: {", ".join(BUNDLE_NAMES)}')
    base = data_dir(root)
    directory, pattern, parser, _ = _BUNDLES[name]
    return FileRepository(base / directory, pattern, parser, data_root=base)


def load_bundle(name: str, root: Optional[Union[str, Path]] = None) -> Bundle:
    """
    Load and parse a named bundle.

    Args:
        name: One of BUNDLE_NAMES
        root: Data directory; defaults to GENUS_DATA_DIR or <repo>/data

    Returns:
        Bundle whose ``data`` is a list of PrintedTupleRecord (mathieu), a dict of
        stem -> CharacterTable or (domain, generators), or a CurveDatabase

    Raises:
        BundleNotFoundError: If the bundle is unknown or its files are missing
        ToolkitError: If a file fails to parse
    """
    repo = bundle_repository(name, root)
    single = _BUNDLES[name][3]
    if single:
        data = repo.load(repo.pattern)
    else:
        loaded = repo.load_all()
        data = list(loaded.values()) if name == 'mathieu' else loaded
    logger.info('Loaded bundle', extra={'stage': 'load_bundle', 'bundle': name, 'files': len(repo.checksums)})
    return Bundle(name=name, data=data, checksums=dict(repo.checksums))


CURVE_BUNDLE = 'cremona-25000'
FALLBACK_CURVE_BUNDLE = 'cremona-sample'


def load_curve_bundle(root: Optional[Union[str, Path]] = None) -> Bundle:
    """
    The conductor <= 25000 curve table, or the bundled sample when it was never fetched.

    The sample declares its own coverage, so conductors beyond it come back as
    ``insufficient_data`` rather than as missing curves.
    """
    try:
        return load_bundle(CURVE_BUNDLE, root)
    except BundleNotFoundError as e:
        logger.warning(
            'Falling back to the sample curve table; run scripts/fetch_cremona_extract.py for full coverage',
            extra={'stage': 'load_bundle', 'bundle': FALLBACK_CURVE_BUNDLE, 'reason': str(e)},
        )
        return load_bundle(FALLBACK_CURVE_BUNDLE, root)
