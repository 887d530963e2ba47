"""
Exact permutation arithmetic and permutation-group algorithms.

Permutations are immutable image tuples over a labelled domain. Groups are held
as a base and strong generating set (deterministic Schreier-Sims), which gives
exact orders and membership tests for the groups the verifications need
(Mathieu groups up to degree 24, Weyl groups acting on up to 240 roots).

Composition convention is explicit everywhere:
    RIGHT_TO_LEFT: (a*b)(x) = a(b(x))   (function composition, matrices on columns)
    LEFT_TO_RIGHT: (a*b)(x) = b(a(x))   (apply a first, GAP/ATLAS style)
"""
from __future__ import annotations

import logging
import math
import os
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import CycleNotationError, DegreeMismatchError

logger = logging.getLogger(__name__)

RIGHT_TO_LEFT = 'right_to_left'
LEFT_TO_RIGHT = 'left_to_right'
CONVENTIONS = (RIGHT_TO_LEFT, LEFT_TO_RIGHT)

SCHREIER_LOG_EVERY = int(os.environ.get('GENUS_SCHREIER_LOG_EVERY', '0'))

_CYCLE_PATTERN = re.compile(r'\(([^()]*)\)')
_WORD_TOKEN = re.compile(r'^(?P<name>[A-Za-z_][A-Za-z_0-9]*)(?:\^(?P<exp>-?\d+))?$')

# A word is a product of generator powers: ((generator_index, exponent), ...).
Word = Tuple[Tuple[int, int], ...]
Images = Tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0, ..., degree-1}, optionally with display labels."""

    images: Images
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, 'images', images)
        if sorted(images) != list(range(len(images))):
            raise ValueError('images do not form a bijection')
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(images):
                raise ValueError('label count does not match degree')
            if len(set(labels)) != len(labels):
                raise ValueError('labels are not pairwise distinct')
            object.__setattr__(self, 'labels', labels)

    @classmethod
    def _unchecked(cls, images: Images, labels: Optional[Tuple[str, ...]] = None) -> 'Permutation':
        perm = object.__new__(cls)
        object.__setattr__(perm, 'images', images)
        object.__setattr__(perm, 'labels', labels)
        return perm

    @classmethod
    def identity(cls, degree: int, labels: Optional[Sequence[str]] = None) -> 'Permutation':
        return cls._unchecked(tuple(range(degree)), tuple(labels) if labels is not None else None)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> List[Tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point, in order of that point."""
        seen = [False] * self.degree
        result = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cycle) > 1 or include_fixed:
                result.append(tuple(cycle))
        return result

    def __str__(self) -> str:
        return format_cycles(self)


@dataclass(frozen=True)
class GeneratingTuple:
    """An ordered tuple (g_1, ..., g_n) of elements on one domain.

    ``words`` optionally records each entry as a word in the generators of the
    ambient group; matrix representations evaluate those words.
    """

    elements: Tuple[Permutation, ...]
    convention: Optional[str] = None
    words: Optional[Tuple[Word, ...]] = None
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'elements', tuple(self.elements))
        if self.words is not None:
            object.__setattr__(self, 'words', tuple(tuple(w) for w in self.words))
            if len(self.words) != len(self.elements):
                raise ValueError('words and elements differ in length')
        if self.convention is not None and self.convention not in CONVENTIONS:
            raise ValueError(f'unknown convention {self.convention!r}')
        if self.elements:
            first = self.elements[0]
            for element in self.elements[1:]:
                _check_same_domain(first, element)

    @property
    def n(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ProductCheck:
    holds: bool
    conventions: Tuple[str, ...]

    @property
    def convention(self) -> Optional[str]:
        return self.conventions[0] if self.conventions else None


@dataclass(frozen=True)
class ProductDiagnosis:
    index: int
    implied: Permutation
    cycle_type: Tuple[int, ...]
    order: int
    convention: str
    relation_holds: bool
    matches_given: bool


# ---------------------------------------------------------------------------
# Cycle notation
# ---------------------------------------------------------------------------

def parse_cycles(text: str, domain: Sequence[str]) -> Permutation:
    """
    Parse whitespace-insensitive cycle notation over ``domain``.

    Tokens inside a cycle may be separated by spaces or commas. A separator-free
    chunk that is not itself a domain token is read one character at a time,
    which is how single-character domains such as ``0..9,X,∞`` are printed.

    Raises:
        CycleNotationError: unknown token, repeated token, unbalanced parentheses
    """
    domain = tuple(domain)
    index = {token: i for i, token in enumerate(domain)}
    if len(index) != len(domain):
        raise CycleNotationError('domain tokens are not pairwise distinct')

    stripped = (text or '').strip()
    depth = 0
    for ch in stripped:
        if ch == '(':
            depth += 1
            if depth > 1:
                raise CycleNotationError(f'nested parenthesis in {text!r}')
        elif ch == ')':
            depth -= 1
            if depth < 0:
                raise CycleNotationError(f'unbalanced parentheses in {text!r}')
    if depth != 0:
        raise CycleNotationError(f'unbalanced parentheses in {text!r}')

    leftover = _CYCLE_PATTERN.sub('', stripped).replace('\\', '')
    if leftover.strip():
        raise CycleNotationError(f'text outside cycles: {leftover.strip()!r}')

    images = list(range(len(domain)))
    used = set()
    for match in _CYCLE_PATTERN.finditer(stripped):
        tokens = _split_cycle_tokens(match.group(1), index)
        points = []
        for token in tokens:
            if token not in index:
                raise CycleNotationError(f'unknown token {token!r}')
            point = index[token]
            if point in used:
                raise CycleNotationError(f'repeated token {token!r}')
            used.add(point)
            points.append(point)
        for i, point in enumerate(points):
            images[point] = points[(i + 1) % len(points)]

    return Permutation._unchecked(tuple(images), domain)


def _split_cycle_tokens(body: str, index: Dict[str, int]) -> List[str]:
    tokens: List[str] = []
    single_char = all(len(token) == 1 for token in index)
    for chunk in re.split(r'[\s,]+', body.strip()):
        if not chunk:
            continue
        if chunk in index:
            tokens.append(chunk)
        elif single_char:
            tokens.extend(chunk)
        else:
            tokens.append(chunk)
    return tokens


def format_cycles(p: Permutation) -> str:
    """Print ``p`` in cycle notation; ``()`` for the identity."""
    labels = p.labels or tuple(str(i) for i in range(p.degree))
    separator = '' if all(len(label) == 1 for label in labels) else ' '
    parts = [
        '(' + separator.join(labels[point] for point in cycle) + ')'
        for cycle in p.cycles()
    ]
    return ''.join(parts) if parts else '()'


def default_domain(degree: int) -> Tuple[str, ...]:
    return tuple(str(i) for i in range(degree))


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def _check_same_domain(a: Permutation, b: Permutation) -> None:
    if a.degree != b.degree:
        raise DegreeMismatchError(f'degree mismatch: {a.degree} vs {b.degree}')
    if a.labels is not None and b.labels is not None and a.labels != b.labels:
        raise DegreeMismatchError('permutations act on different labelled domains')


def _mul(a: Images, b: Images) -> Images:
    # apply a, then b
    return tuple(map(b.__getitem__, a))


def _inv(a: Images) -> Images:
    result = [0] * len(a)
    for i, x in enumerate(a):
        result[x] = i
    return tuple(result)


def compose(a: Permutation, b: Permutation, convention: str = RIGHT_TO_LEFT) -> Permutation:
    _check_same_domain(a, b)
    labels = a.labels if a.labels is not None else b.labels
    if convention == LEFT_TO_RIGHT:
        return Permutation._unchecked(_mul(a.images, b.images), labels)
    if convention == RIGHT_TO_LEFT:
        return Permutation._unchecked(_mul(b.images, a.images), labels)
    raise ValueError(f'unknown convention {convention!r}')


def multiply_all(elements: Sequence[Permutation], convention: str = RIGHT_TO_LEFT) -> Permutation:
    if not elements:
        raise ValueError('cannot multiply an empty sequence')
    result = elements[0]
    for element in elements[1:]:
        result = compose(result, element, convention)
    return result


def inverse(p: Permutation) -> Permutation:
    return Permutation._unchecked(_inv(p.images), p.labels)


def conjugate(g: Permutation, h: Permutation) -> Permutation:
    """h^-1 g h (right to left)."""
    return compose(compose(inverse(h), g), h)


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(p), -k)
    k %= order_of(p)
    result = Permutation.identity(p.degree, p.labels)
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def cycle_type(p: Permutation) -> Tuple[int, ...]:
    """All cycle lengths including fixed points, largest first."""
    return tuple(sorted((len(c) for c in p.cycles(include_fixed=True)), reverse=True))


def cycle_count(p: Permutation) -> int:
    return len(p.cycles(include_fixed=True))


def fixed_points(p: Permutation) -> int:
    return sum(1 for i, x in enumerate(p.images) if i == x)


def order_of(p: Permutation) -> int:
    return math.lcm(*(len(c) for c in p.cycles(include_fixed=True))) if p.degree else 1


def format_cycle_type(shape: Sequence[int]) -> str:
    """Exponential notation, e.g. (8, 2, 1) -> '8 2 1', (2,)*12 -> '2^12'."""
    counts: Dict[int, int] = {}
    for length in shape:
        counts[length] = counts.get(length, 0) + 1
    parts = []
    for length in sorted(counts, reverse=True):
        parts.append(f'{length}^{counts[length]}' if counts[length] > 1 else str(length))
    return ' '.join(parts)


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

def parse_word(text: str, generator_names: Sequence[str]) -> Word:
    """Parse ``g1 g2^-1 g3^2`` (``*`` also accepted as separator)."""
    lookup = {name: i for i, name in enumerate(generator_names)}
    word = []
    for token in re.split(r'[\s*]+', text.strip()):
        if not token:
            continue
        match = _WORD_TOKEN.match(token)
        if not match or match.group('name') not in lookup:
            raise CycleNotationError(f'unknown generator in word: {token!r}')
        exponent = int(match.group('exp')) if match.group('exp') else 1
        word.append((lookup[match.group('name')], exponent))
    return tuple(word)


def format_word(word: Word, generator_names: Sequence[str]) -> str:
    if not word:
        return '1'
    return ' '.join(
        generator_names[i] if e == 1 else f'{generator_names[i]}^{e}'
        for i, e in word
    )


def evaluate_word(word: Word, generators: Sequence[Permutation], convention: str = RIGHT_TO_LEFT) -> Permutation:
    if not generators:
        raise ValueError('no generators to evaluate the word with')
    result = Permutation.identity(generators[0].degree, generators[0].labels)
    for index, exponent in word:
        result = compose(result, power(generators[index], exponent), convention)
    return result


# ---------------------------------------------------------------------------
# Tuples
# ---------------------------------------------------------------------------

def relation_tuple(a: Permutation, b: Permutation, c: Permutation, convention: Optional[str] = None,
                   name: Optional[str] = None) -> GeneratingTuple:
    """Product-one tuple (a, b, c^-1) for a display written ``a b = c``."""
    return GeneratingTuple((a, b, inverse(c)), convention=convention, name=name)


def tuple_product_check(t: GeneratingTuple) -> ProductCheck:
    """Try both composition conventions; report which ones give the identity."""
    if not t.elements:
        return ProductCheck(holds=True, conventions=CONVENTIONS)
    preferred = (t.convention,) if t.convention else ()
    order = preferred + tuple(c for c in CONVENTIONS if c not in preferred)
    holding = tuple(c for c in order if multiply_all(t.elements, c).is_identity())
    return ProductCheck(holds=bool(holding), conventions=holding)


def diagnose_product(relation: GeneratingTuple, broken_index: int,
                     fallback_convention: str = RIGHT_TO_LEFT) -> ProductDiagnosis:
    """
    For a relation triple g1 g2 = g3, return the element at ``broken_index`` forced
    by the other two. The convention is the one under which the relation holds,
    else ``relation.convention``, else ``fallback_convention``.
    """
    if relation.n != 3:
        raise ValueError('diagnose_product expects a relation triple g1 g2 = g3')
    if not 0 <= broken_index < 3:
        raise IndexError(f'broken_index {broken_index} out of range 0..2')

    g1, g2, g3 = relation.elements
    holding = [c for c in CONVENTIONS if compose(g1, g2, c).images == g3.images]
    if relation.convention in holding:
        convention = relation.convention
    elif holding:
        convention = holding[0]
    else:
        convention = relation.convention or fallback_convention

    if broken_index == 0:
        implied = compose(g3, inverse(g2), convention)
    elif broken_index == 1:
        implied = compose(inverse(g1), g3, convention)
    else:
        implied = compose(g1, g2, convention)

    return ProductDiagnosis(
        index=broken_index,
        implied=implied,
        cycle_type=cycle_type(implied),
        order=order_of(implied),
        convention=convention,
        relation_holds=bool(holding),
        matches_given=implied.images == relation.elements[broken_index].images,
    )


# ---------------------------------------------------------------------------
# Schreier-Sims
# ---------------------------------------------------------------------------

def _orbit_transversal(generators: Sequence[Images], alpha: int, identity: Images) -> Dict[int, Images]:
    """Coset representatives u_beta with u_beta(alpha) = beta, in BFS order."""
    transversal = {alpha: identity}
    queue = [alpha]
    for x in queue:
        u_x = transversal[x]
        for gen in generators:
            y = gen[x]
            if y not in transversal:
                transversal[y] = _mul(u_x, gen)
                queue.append(y)
    return transversal


def _sift(h: Images, base: Sequence[int], inverse_transversals: Sequence[Dict[int, Images]],
          start: int) -> Tuple[Images, int]:
    for level in range(start, len(base)):
        beta = h[base[level]]
        if beta == base[level]:
            continue
        u_inv = inverse_transversals[level].get(beta)
        if u_inv is None:
            return h, level
        h = _mul(h, u_inv)
    return h, len(base)


class PermutationGroup:
    """Group given by generators, held as a base and strong generating set."""

    def __init__(self, generators: Sequence[Permutation], base: List[int],
                 strong_generators: List[Images], transversals: List[Dict[int, Images]],
                 seed: int = 0):
        self.generators = tuple(generators)
        self.base = tuple(base)
        self.strong_generators = tuple(
            Permutation._unchecked(g, self.labels) for g in strong_generators
        )
        self._transversals = transversals
        self._inverse_transversals = [
            {beta: _inv(u) for beta, u in level.items()} for level in transversals
        ]
        self.seed = seed
        self.order = math.prod(len(level) for level in transversals)

    @property
    def degree(self) -> int:
        return self.generators[0].degree

    @property
    def labels(self) -> Optional[Tuple[str, ...]]:
        return self.generators[0].labels

    @property
    def basic_orbit_sizes(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self._transversals)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, level = _sift(g.images, self.base, self._inverse_transversals, 0)
        return level == len(self.base) and all(i == x for i, x in enumerate(h))

    __contains__ = contains

    def random_element(self, rng: Optional[np.random.Generator] = None) -> Permutation:
        """Uniform random element: a product of one random coset representative per level."""
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        result = tuple(range(self.degree))
        for level in reversed(self._transversals):
            reps = list(level.values())
            result = _mul(result, reps[int(rng.integers(len(reps)))])
        return Permutation._unchecked(result, self.labels)

    def orbits(self) -> List[Tuple[int, ...]]:
        seen = set()
        result = []
        for start in range(self.degree):
            if start in seen:
                continue
            orbit = [start]
            seen.add(start)
            for x in orbit:
                for gen in self.generators:
                    y = gen.images[x]
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
            result.append(tuple(sorted(orbit)))
        return result

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def __repr__(self) -> str:
        return f'PermutationGroup(degree={self.degree}, order={self.order})'


def build_bsgs(generators: Sequence[Permutation], seed: int = 0) -> PermutationGroup:
    """
    Deterministic incremental Schreier-Sims.

    The construction itself uses no randomness; ``seed`` is kept on the group and
    drives ``random_element`` when no generator is passed in.
    """
    if not generators:
        raise ValueError('build_bsgs needs at least one generator')
    first = generators[0]
    for g in generators[1:]:
        _check_same_domain(first, g)

    degree = first.degree
    identity = tuple(range(degree))
    gens: List[Images] = []
    for g in generators:
        if g.images != identity and g.images not in gens:
            gens.append(g.images)

    if not gens:
        return PermutationGroup(generators, [], [], [], seed=seed)

    base: List[int] = []
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(x for x in range(degree) if g[x] != x))

    strong_by_level: List[List[Images]] = []
    for level in range(len(base)):
        fixing = [g for g in gens if all(g[b] == b for b in base[:level])]
        strong_by_level.append(fixing)

    transversals = [_orbit_transversal(strong_by_level[i], base[i], identity) for i in range(len(base))]
    inverse_transversals = [{beta: _inv(u) for beta, u in t.items()} for t in transversals]
    new_strong: List[Images] = []
    restarts = 0

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta, u_beta in list(transversals[i].items()):
            for gen in strong_by_level[i]:
                u_gb_inv = inverse_transversals[i][gen[beta]]
                schreier = _mul(_mul(u_beta, gen), u_gb_inv)
                if schreier == identity:
                    continue
                h, level = _sift(schreier, base, inverse_transversals, i + 1)
                if level == len(base):
                    if h == identity:
                        continue
                    moved = next(x for x in range(degree) if h[x] != x)
                    base.append(moved)
                    strong_by_level.append([])
                    transversals.append({moved: identity})
                    inverse_transversals.append({moved: identity})
                new_strong.append(h)
                for l in range(i + 1, level + 1):
                    strong_by_level[l].append(h)
                    transversals[l] = _orbit_transversal(strong_by_level[l], base[l], identity)
                    inverse_transversals[l] = {b: _inv(u) for b, u in transversals[l].items()}
                restarts += 1
                if SCHREIER_LOG_EVERY and restarts % SCHREIER_LOG_EVERY == 0:
                    logger.debug('Schreier-Sims: %d restarts, base length %d', restarts, len(base))
                i = level
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1

    group = PermutationGroup(generators, base, gens + new_strong, transversals, seed=seed)
    logger.debug('BSGS built: degree=%d order=%d base=%s', degree, group.order, group.base)
    return group


def generated_order(elements: Iterable[Permutation]) -> int:
    return build_bsgs(list(elements)).order


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def parse_group_file(text: str, source: Optional[str] = None) -> Tuple[Tuple[str, ...], List[Permutation]]:
    """First line: domain tokens. Each following line: one generator in cycle notation."""
    lines = _content_lines(text)
    if not lines:
        raise CycleNotationError('empty group file', source=source)
    domain = tuple(lines[0][1].split())
    generators = []
    for number, line in lines[1:]:
        try:
            generators.append(parse_cycles(line, domain))
        except CycleNotationError as e:
            raise CycleNotationError(e.message, source=source, line_number=number) from e
    if not generators:
        raise CycleNotationError('group file lists no generators', source=source)
    return domain, generators


TupleEntry = Union[Permutation, Word, str]


def parse_tuple_file(text: str, domain: Sequence[str], generator_names: Sequence[str] = (),
                     source: Optional[str] = None) -> List[TupleEntry]:
    """
    One tuple entry per line: cycle notation (starts with ``(``), a generator word
    such as ``g1 g2^-1``, or a bare class name (returned as a string).
    """
    entries: List[TupleEntry] = []
    for number, line in _content_lines(text):
        try:
            if line.startswith('('):
                entries.append(parse_cycles(line, domain))
            elif generator_names and all(
                _WORD_TOKEN.match(tok) and _WORD_TOKEN.match(tok).group('name') in generator_names
                for tok in re.split(r'[\s*]+', line) if tok
            ):
                entries.append(parse_word(line, generator_names))
            else:
                entries.extend(token.strip() for token in line.split(',') if token.strip())
        except CycleNotationError as e:
            raise CycleNotationError(e.message, source=source, line_number=number) from e
    return entries


def generator_names_for(count: int) -> Tuple[str, ...]:
    return tuple(f'g{i + 1}' for i in range(count))
