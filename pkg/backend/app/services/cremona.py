"""
Ingestion of elliptic-curve tables in Cremona's ``allcurves`` layout.

Accepted line shapes (whitespace separated, ``#`` comments, blank lines skipped):

    11 a 1 [0,-1,1,-10,-20] 0 5       bracketed a-invariants, as distributed
    11 a 1 0 -1 1 -10 -20 0 5         flat

Header comments carry provenance. ``# coverage: 1-25000`` declares the conductor
interval over which the file lists every isogeny class; without it the coverage
is the observed min/max conductor. Lookups distinguish a conductor that is absent
inside the coverage (no curve exists) from one outside it (unknown).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple, Union

from ..errors import CurveDataError, SingularCurveError

logger = logging.getLogger(__name__)

_COVERAGE_PATTERN = re.compile(r'^coverage:\s*(\d+)\s*-\s*(\d+)\s*$', re.IGNORECASE)

PRESENT = 'present'
ABSENT = 'absent'
OUTSIDE_COVERAGE = 'outside_coverage'


def b_invariants(ainvs: Tuple[int, int, int, int, int]) -> Tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(ainvs: Tuple[int, int, int, int, int]) -> int:
    b2, b4, b6, b8 = b_invariants(ainvs)
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def c_invariants(ainvs: Tuple[int, int, int, int, int]) -> Tuple[int, int]:
    b2, b4, b6, _ = b_invariants(ainvs)
    return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6


@dataclass(frozen=True)
class EllipticCurveRecord:
    conductor: int
    isogeny_class: str
    number: int
    ainvs: Tuple[int, int, int, int, int]
    rank: int
    torsion: int

    @property
    def label(self) -> str:
        return f'{self.conductor}{self.isogeny_class}{self.number}'

    @property
    def discriminant(self) -> int:
        return discriminant(self.ainvs)

    def satisfies_c_identity(self) -> bool:
        c4, c6 = c_invariants(self.ainvs)
        return c4 ** 3 - c6 ** 2 == 1728 * self.discriminant


@dataclass(frozen=True)
class ConductorLookup:
    conductor: int
    status: str
    records: Tuple[EllipticCurveRecord, ...] = ()

    @property
    def present(self) -> bool:
        return self.status == PRESENT

    @property
    def in_coverage(self) -> bool:
        return self.status != OUTSIDE_COVERAGE


@dataclass
class CurveDatabase:
    by_conductor: Dict[int, List[EllipticCurveRecord]] = field(default_factory=dict)
    declared_coverage: Optional[Tuple[int, int]] = None
    provenance: Tuple[str, ...] = ()
    source: Optional[str] = None

    @property
    def record_count(self) -> int:
        return sum(len(records) for records in self.by_conductor.values())

    @property
    def observed_range(self) -> Optional[Tuple[int, int]]:
        if not self.by_conductor:
            return None
        return min(self.by_conductor), max(self.by_conductor)

    @property
    def coverage(self) -> Optional[Tuple[int, int]]:
        return self.declared_coverage or self.observed_range

    def covers(self, conductor: int) -> bool:
        coverage = self.coverage
        return coverage is not None and coverage[0] <= conductor <= coverage[1]

    def records(self) -> List[EllipticCurveRecord]:
        return [r for n in sorted(self.by_conductor) for r in self.by_conductor[n]]


def _parse_int(token: str, what: str, source: Optional[str], number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CurveDataError(f'{what} must be an integer, got {token!r}', source=source, line_number=number)


def parse_line(line: str, source: Optional[str] = None, number: int = 0) -> EllipticCurveRecord:
    parts = line.split()
    if len(parts) >= 4 and parts[3].startswith('['):
        if len(parts) != 6 or not parts[3].endswith(']'):
            raise CurveDataError('expected: conductor class number [a1,a2,a3,a4,a6] rank torsion',
                                 source=source, line_number=number)
        ainv_tokens = parts[3][1:-1].split(',')
        tail = parts[4:]
    else:
        if len(parts) != 10:
            raise CurveDataError(f'expected 10 fields, got {len(parts)}', source=source, line_number=number)
        ainv_tokens = parts[3:8]
        tail = parts[8:]
    if len(ainv_tokens) != 5:
        raise CurveDataError(f'expected 5 a-invariants, got {len(ainv_tokens)}', source=source, line_number=number)

    conductor = _parse_int(parts[0], 'conductor', source, number)
    if conductor < 1:
        raise CurveDataError('conductor must be positive', source=source, line_number=number)
    isogeny_class = parts[1]
    if not isogeny_class.isalpha():
        raise CurveDataError(f'bad isogeny class {isogeny_class!r}', source=source, line_number=number)
    curve_number = _parse_int(parts[2], 'curve number', source, number)
    ainvs = tuple(_parse_int(a, 'a-invariant', source, number) for a in ainv_tokens)
    rank = _parse_int(tail[0], 'rank', source, number)
    torsion = _parse_int(tail[1], 'torsion order', source, number)
    if rank < 0 or torsion < 1:
        raise CurveDataError('rank must be >= 0 and torsion >= 1', source=source, line_number=number)

    record = EllipticCurveRecord(conductor, isogeny_class, curve_number, ainvs, rank, torsion)
    if record.discriminant == 0:
        raise SingularCurveError(f'singular curve {record.label} {list(ainvs)}', source=source, line_number=number)
    return record


def parse_allcurves(stream: Union[str, Iterable[str]], source: Optional[str] = None) -> CurveDatabase:
    lines = stream.splitlines() if isinstance(stream, str) else stream
    db = CurveDatabase(source=source)
    provenance = []
    for number, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith('#'):
            note = stripped.lstrip('#').strip()
            match = _COVERAGE_PATTERN.match(note)
            if match:
                low, high = int(match.group(1)), int(match.group(2))
                if low > high:
                    raise CurveDataError(f'empty coverage interval {low}-{high}', source=source, line_number=number)
                db.declared_coverage = (low, high)
            elif note.lower().startswith('source:'):
                provenance.append(note)
            continue
        line = stripped.split('#', 1)[0].strip()
        record = parse_line(line, source=source, number=number)
        db.by_conductor.setdefault(record.conductor, []).append(record)

    db.provenance = tuple(provenance)
    logger.info(
        'Parsed curve table',
        extra={'stage': 'cremona_parse', 'records': db.record_count, 'conductors': len(db.by_conductor),
               'source': source},
    )
    return db


def lookup(db: CurveDatabase, conductor: int) -> List[EllipticCurveRecord]:
    return list(db.by_conductor.get(conductor, []))


def has_conductor(db: CurveDatabase, conductor: int) -> ConductorLookup:
    records = tuple(db.by_conductor.get(conductor, ()))
    if records:
        return ConductorLookup(conductor, PRESENT, records)
    if db.covers(conductor):
        return ConductorLookup(conductor, ABSENT)
    return ConductorLookup(conductor, OUTSIDE_COVERAGE)


def format_record(record: EllipticCurveRecord) -> str:
    ainvs = ','.join(str(a) for a in record.ainvs)
    return f'{record.conductor} {record.isogeny_class} {record.number} [{ainvs}] {record.rank} {record.torsion}'


def serialize_allcurves(db: CurveDatabase) -> str:
    lines = [f'# {note}' for note in db.provenance]
    if db.declared_coverage is not None:
        lines.append(f'# coverage: {db.declared_coverage[0]}-{db.declared_coverage[1]}')
    lines.extend(format_record(r) for r in db.records())
    return '\n'.join(lines) + '\n'
