"""
Character tables: file format, validation, fixed-space dimensions from character
values, genus of class tuples and class-multiplication counts.

Line-oriented format (``#`` starts a comment; ``# source: ...`` lines are kept as
provenance):

    group <name> <order>
    class <name> <element-order> <size> [<fused>]   fused: number of Galois-conjugate
                                                    classes merged into this one
    power <prime> <class> <class-of-p-th-powers>
    char <name> <degree> <v_1> <v_2> ...      values in class-declaration order
    galois <char> <m>                         row is the sum of m Galois conjugates
    alias <token> <class>

Tables may be partial (only the classes a genus computation needs, closed under
the required power maps). Values are rational integers; a row marked ``galois``
carries the sum of m conjugate irreducibles, which keeps tables of groups with
irrational characters (A4, A5) complete over the rational classes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import divisors, factorint, isprime, totient

from ..errors import CharacterTableError, InconsistentCharacterData, UnsupportedTableError
from ..models.reports import GenusReport, TableValidationReport, TripleCountReport
from .repgenus import CharacterData, genus_of_tuple

logger = logging.getLogger(__name__)

CENTRAL_TWIST_PREFIX = '-'


@dataclass(frozen=True)
class ConjugacyClass:
    name: str
    order: int
    size: int
    fused: int = 1


@dataclass(frozen=True)
class Character:
    name: str
    degree: int
    values: Tuple[int, ...]
    galois: int = 1

    def is_trivial(self) -> bool:
        return self.galois == 1 and self.degree == 1 and all(v == 1 for v in self.values)


@dataclass
class CharacterTable:
    name: str
    order: int
    classes: Tuple[ConjugacyClass, ...]
    power_maps: Dict[int, Dict[str, str]]
    characters: Tuple[Character, ...]
    aliases: Dict[str, str] = field(default_factory=dict)
    provenance: Tuple[str, ...] = ()
    source: Optional[str] = None

    def __post_init__(self):
        self._class_index = {c.name: i for i, c in enumerate(self.classes)}
        self._characters = {ch.name: ch for ch in self.characters}

    @property
    def is_complete(self) -> bool:
        return (
            len(self.characters) == len(self.classes)
            and sum(c.size for c in self.classes) == self.order
        )

    @property
    def identity_class(self) -> ConjugacyClass:
        return next(c for c in self.classes if c.order == 1)

    def class_by_name(self, name: str) -> ConjugacyClass:
        return self.classes[self.class_index(name)]

    def class_index(self, name: str) -> int:
        try:
            return self._class_index[self.resolve_class(name)]
        except KeyError:
            raise CharacterTableError(f'{self.name}: unknown class {name!r}', source=self.source)

    def resolve_class(self, token: str) -> str:
        token = token.strip()
        if token in self._class_index:
            return token
        if token in self.aliases:
            return self.aliases[token]
        if token.startswith(CENTRAL_TWIST_PREFIX):
            raise CharacterTableError(
                f'{self.name}: {token!r} needs an explicit alias line naming the class of the twisted element',
                source=self.source,
            )
        raise CharacterTableError(f'{self.name}: unknown class {token!r}', source=self.source)

    def character(self, name: str) -> Character:
        if name not in self._characters:
            raise CharacterTableError(f'{self.name}: unknown character {name!r}', source=self.source)
        return self._characters[name]

    def value(self, character: str, class_name: str) -> int:
        return self.character(character).values[self.class_index(class_name)]

    def power_class(self, class_name: str, k: int) -> str:
        """Class of g^k for g in ``class_name``, k a divisor of the element order."""
        current = self.resolve_class(class_name)
        for p, multiplicity in sorted(factorint(k).items()):
            for _ in range(multiplicity):
                mapping = self.power_maps.get(p, {})
                if current not in mapping:
                    raise CharacterTableError(
                        f'{self.name}: missing power map {p} for class {current}', source=self.source
                    )
                current = mapping[current]
        return current

    def burnside_sum(self, character: str, class_name: str) -> Tuple[int, int]:
        """(sum_k chi(g^k) over k mod n, n). Uses chi(g^k) = chi(g^gcd(k, n))."""
        n = self.class_by_name(class_name).order
        total = 0
        for d in divisors(n):
            total += int(totient(n // d)) * self.value(character, self.power_class(class_name, d))
        return total, n

    def burnside_fixed_dim(self, character: str, class_name: str) -> int:
        total, n = self.burnside_sum(character, class_name)
        degree = self.character(character).degree
        if total % n or not 0 <= total // n <= degree:
            raise InconsistentCharacterData(
                f'{self.name}: Burnside average of {character} on {class_name} is {Fraction(total, n)}, '
                f'not an integer in [0, {degree}]',
                source=self.source,
            )
        return total // n


@dataclass(frozen=True)
class ClassTuple:
    table: CharacterTable
    character: str
    classes: Tuple[str, ...]

    @property
    def resolved(self) -> Tuple[str, ...]:
        return tuple(self.table.resolve_class(c) for c in self.classes)


def _parse_int(token: str, what: str, source: Optional[str], number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CharacterTableError(f'{what} must be an integer, got {token!r}', source=source, line_number=number)


def parse_table(text: str, source: Optional[str] = None) -> CharacterTable:
    """Parse and validate a table; every violation is a CharacterTableError."""
    name: Optional[str] = None
    order = 0
    classes: List[ConjugacyClass] = []
    class_lines: Dict[str, int] = {}
    power_maps: Dict[int, Dict[str, str]] = {}
    power_lines: List[Tuple[int, int, str, str]] = []
    char_rows: List[Tuple[int, str, int, List[str]]] = []
    galois: Dict[str, int] = {}
    aliases: Dict[str, str] = {}
    provenance: List[str] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith('#'):
            note = stripped.lstrip('#').strip()
            if note.lower().startswith('source:'):
                provenance.append(note)
            continue
        line = stripped.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword = parts[0]

        if keyword == 'group':
            if name is not None:
                raise CharacterTableError('second group line', source=source, line_number=number)
            if len(parts) != 3:
                raise CharacterTableError('expected: group <name> <order>', source=source, line_number=number)
            name = parts[1]
            order = _parse_int(parts[2], 'group order', source, number)
            if order < 1:
                raise CharacterTableError('group order must be positive', source=source, line_number=number)
            continue
        if name is None:
            raise CharacterTableError('first directive must be "group"', source=source, line_number=number)

        if keyword == 'class':
            if len(parts) not in (4, 5):
                raise CharacterTableError('expected: class <name> <order> <size> [<fused>]',
                                          source=source, line_number=number)
            cname = parts[1]
            if cname in class_lines:
                raise CharacterTableError(f'duplicate class {cname}', source=source, line_number=number)
            elt_order = _parse_int(parts[2], 'element order', source, number)
            size = _parse_int(parts[3], 'class size', source, number)
            fused = _parse_int(parts[4], 'fused class count', source, number) if len(parts) == 5 else 1
            if elt_order < 1 or size < 1 or fused < 1:
                raise CharacterTableError('element order, class size and fused count must be positive',
                                          source=source, line_number=number)
            if size % fused:
                raise CharacterTableError(f'class size {size} is not {fused} classes of equal size',
                                          source=source, line_number=number)
            # each fused class is a genuine conjugacy class of size size / fused
            if order % (size // fused):
                raise CharacterTableError(f'class size {size // fused} does not divide |G| = {order}',
                                          source=source, line_number=number)
            if order % elt_order:
                raise CharacterTableError(f'element order {elt_order} does not divide |G| = {order}',
                                          source=source, line_number=number)
            classes.append(ConjugacyClass(cname, elt_order, size, fused))
            class_lines[cname] = number
        elif keyword == 'power':
            if len(parts) != 4:
                raise CharacterTableError('expected: power <prime> <class> <class>', source=source, line_number=number)
            p = _parse_int(parts[1], 'prime', source, number)
            if not isprime(p):
                raise CharacterTableError(f'{p} is not prime', source=source, line_number=number)
            power_lines.append((number, p, parts[2], parts[3]))
        elif keyword == 'char':
            if len(parts) < 3:
                raise CharacterTableError('expected: char <name> <degree> <values...>', source=source, line_number=number)
            degree = _parse_int(parts[2], 'degree', source, number)
            char_rows.append((number, parts[1], degree, parts[3:]))
        elif keyword == 'galois':
            if len(parts) != 3:
                raise CharacterTableError('expected: galois <char> <m>', source=source, line_number=number)
            m = _parse_int(parts[2], 'Galois multiplicity', source, number)
            if m < 1:
                raise CharacterTableError('Galois multiplicity must be positive', source=source, line_number=number)
            galois[parts[1]] = m
        elif keyword == 'alias':
            if len(parts) != 3:
                raise CharacterTableError('expected: alias <token> <class>', source=source, line_number=number)
            aliases[parts[1]] = parts[2]
        else:
            raise CharacterTableError(f'unknown directive {keyword!r}', source=source, line_number=number)

    if name is None:
        raise CharacterTableError('missing group line', source=source)
    if not classes:
        raise CharacterTableError('table declares no classes', source=source)

    identity = [c for c in classes if c.order == 1]
    if len(identity) != 1 or identity[0].size != 1:
        raise CharacterTableError('table needs exactly one identity class of size 1', source=source)
    total_size = sum(c.size for c in classes)
    if total_size > order:
        raise CharacterTableError(f'class sizes sum to {total_size} > |G| = {order}', source=source)

    by_name = {c.name: c for c in classes}
    for number, p, src, dst in power_lines:
        if src not in by_name or dst not in by_name:
            raise CharacterTableError('power map mentions an unknown class', source=source, line_number=number)
        expected = by_name[src].order // math.gcd(by_name[src].order, p)
        if by_name[dst].order != expected:
            raise CharacterTableError(
                f'power map {p}: {src} (order {by_name[src].order}) -> {dst} has order '
                f'{by_name[dst].order}, expected {expected}',
                source=source, line_number=number,
            )
        power_maps.setdefault(p, {})[src] = dst

    for c in classes:
        for p in factorint(c.order):
            if c.name not in power_maps.get(p, {}):
                raise CharacterTableError(f'missing power map {p} for class {c.name}',
                                          source=source, line_number=class_lines[c.name])

    for token, target in aliases.items():
        if target not in by_name:
            raise CharacterTableError(f'alias {token} points to unknown class {target}', source=source)

    characters = []
    seen = set()
    identity_index = classes.index(identity[0])
    for number, cname, degree, raw_values in char_rows:
        if cname in seen:
            raise CharacterTableError(f'duplicate character {cname}', source=source, line_number=number)
        seen.add(cname)
        if len(raw_values) != len(classes):
            raise CharacterTableError(
                f'{cname} has {len(raw_values)} values for {len(classes)} classes',
                source=source, line_number=number,
            )
        values = tuple(_parse_int(v, f'value of {cname}', source, number) for v in raw_values)
        if values[identity_index] != degree:
            raise CharacterTableError(f'{cname}: value at the identity is {values[identity_index]}, degree {degree}',
                                      source=source, line_number=number)
        characters.append(Character(cname, degree, values, galois.get(cname, 1)))
    for cname in galois:
        if cname not in seen:
            raise CharacterTableError(f'galois line for unknown character {cname}', source=source)

    table = CharacterTable(
        name=name,
        order=order,
        classes=tuple(classes),
        power_maps=power_maps,
        characters=tuple(characters),
        aliases=aliases,
        provenance=tuple(provenance),
        source=source,
    )

    for character in table.characters:
        for c in table.classes:
            table.burnside_fixed_dim(character.name, c.name)

    if len(characters) == len(classes):
        if total_size != order:
            raise CharacterTableError(
                f'table has one row per class but class sizes sum to {total_size} != {order}', source=source)
        degree_sum = sum(Fraction(ch.degree * ch.degree, ch.galois) for ch in characters)
        if degree_sum != order:
            raise CharacterTableError(
                f'sum of squared degrees is {degree_sum}, expected |G| = {order}', source=source)

    logger.debug('Parsed character table %s: %d classes, %d characters', name, len(classes), len(characters))
    return table


def validate_table(table: CharacterTable) -> TableValidationReport:
    burnside_ok = True
    for character in table.characters:
        for c in table.classes:
            try:
                table.burnside_fixed_dim(character.name, c.name)
            except InconsistentCharacterData:
                burnside_ok = False
    return TableValidationReport(
        group=table.name,
        order=table.order,
        class_count=len(table.classes),
        character_count=len(table.characters),
        complete=table.is_complete,
        classes=[c.name for c in table.classes],
        characters=[ch.name for ch in table.characters],
        burnside_ok=burnside_ok,
    )


def class_tuple(table: CharacterTable, character: str, classes: Sequence[str]) -> ClassTuple:
    """Build a class tuple, resolving every token now so unknown classes fail early."""
    table.character(character)
    for token in classes:
        table.resolve_class(token)
    return ClassTuple(table, character, tuple(c.strip() for c in classes))


def class_genus(ct: ClassTuple, expected_genus: Optional[int] = None) -> GenusReport:
    """Genus over the character's representation; generation is assumed, not verified."""
    rep = CharacterData(ct.table, ct.character)
    resolved = ct.resolved
    renamed = [f'{raw}={res}' for raw, res in zip(ct.classes, resolved) if raw != res]
    name = f'{ct.table.name} {ct.character} ({",".join(ct.classes)})'
    if renamed:
        name += f' [{", ".join(renamed)}]'
    return genus_of_tuple(rep, ct, name=name, expected_genus=expected_genus)


def _require_complete(table: CharacterTable) -> None:
    if not table.is_complete:
        raise UnsupportedTableError(
            f'{table.name}: class multiplication needs a complete table '
            f'({len(table.characters)} characters for {len(table.classes)} classes)',
            source=table.source,
        )


def class_triple_count(table: CharacterTable, c1: str, c2: str, c3: str) -> int:
    """
    Number of (x, y, z) in C1 x C2 x C3 with xyz = 1:

        |C1| |C2| |C3| / |G| * sum_psi psi(c1) psi(c2) psi(c3) / (m_psi * psi(1))

    summed over the rows psi of a complete rational table (m_psi the Galois
    multiplicity). Classes are rational, hence closed under inversion.
    """
    _require_complete(table)
    k1, k2, k3 = (table.class_by_name(c) for c in (c1, c2, c3))
    i1, i2, i3 = (table.class_index(c) for c in (c1, c2, c3))
    total = Fraction(0)
    for ch in table.characters:
        total += Fraction(ch.values[i1] * ch.values[i2] * ch.values[i3], ch.galois * ch.degree)
    count = Fraction(k1.size * k2.size * k3.size, table.order) * total
    if count.denominator != 1 or count < 0:
        raise InconsistentCharacterData(
            f'{table.name}: triple count for ({c1}, {c2}, {c3}) is {count}, not a non-negative integer',
            source=table.source,
        )
    return int(count)


def class_structure_constant(table: CharacterTable, c1: str, c2: str, c3: str) -> int:
    """Number of (x, y) in C1 x C2 with xy = z for one fixed z in C3."""
    count = class_triple_count(table, c1, c2, c3)
    size = table.class_by_name(c3).size
    if count % size:
        raise UnsupportedTableError(
            f'{table.name}: products into {c3} are not equidistributed over the fused class', source=table.source
        )
    return count // size


def triple_count_report(table: CharacterTable, classes: Sequence[str]) -> TripleCountReport:
    if len(classes) != 3:
        raise CharacterTableError(f'triple count needs three classes, got {len(classes)}')
    c1, c2, c3 = (table.resolve_class(c) for c in classes)
    count = class_triple_count(table, c1, c2, c3)
    size = table.class_by_name(c3).size
    return TripleCountReport(
        group=table.name,
        classes=[c1, c2, c3],
        count=count,
        structure_constant=count // size if count % size == 0 else None,
    )
