"""
Root systems and Weyl groups of irreducible crystallographic types.

Vectors of V are written in simple-root coordinates, so V = Q^r for every type
and the reflection representation is integral. Simple reflections act as

    s_i(beta) = beta - <beta, alpha_i^vee> alpha_i,   <alpha_j, alpha_i^vee> = A_ji

with the Cartan matrix A_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j) computed
from the ambient simple roots below. Dynkin vertices are numbered 1..r as in
Bourbaki's plates; E6 and E7 use the first six and seven simple roots of E8.

Two generating tuples with product one are built, both of genus 1 over V:
the full tuple (s_1, s_1, s_2, s_2, ..., s_r, s_r, s_1, s_1) of length 2r + 2, and
for rank >= 3 the rotation tuple obtained by splitting the Dynkin diagram into two
paths i_1..i_p and j_1..j_q sharing one vertex:

    (s_{i1} s_{i2}, ..., s_{ip} s_{i1}, s_{j1} s_{j2}, ..., s_{jq} s_{j1})

which generates the kernel of the determinant, of index 2 in W.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import RootSystemError
from ..models.reports import PathDecompositionReport, RotationSubgroupReport, WeylReport, Witness
from . import exactlin
from .exactlin import RationalMatrix
from .permgroup import (
    RIGHT_TO_LEFT,
    GeneratingTuple,
    Permutation,
    Word,
    build_bsgs,
    evaluate_word,
)
from .repgenus import ExactMatrix, genus_of_tuple

logger = logging.getLogger(__name__)

MIN_RANK = {'A': 1, 'B': 2, 'C': 3, 'D': 4}
EXCEPTIONAL_RANKS = {'E': (6, 7, 8), 'F': (4,), 'G': (2,)}

Vector = Tuple[Fraction, ...]
Coords = Tuple[int, ...]

_HALF = Fraction(1, 2)


def _unit(n: int, i: int, scale: Fraction = Fraction(1)) -> List[Fraction]:
    v = [Fraction(0)] * n
    v[i] = scale
    return v


def _add(*vectors: Sequence[Fraction]) -> Vector:
    return tuple(sum(parts, Fraction(0)) for parts in zip(*vectors))


def _neg(v: Sequence[Fraction]) -> Vector:
    return tuple(-x for x in v)


def _e8_simple_roots() -> List[Vector]:
    n = 8
    roots = [tuple(_HALF * s for s in (1, -1, -1, -1, -1, -1, -1, 1))]
    roots.append(_add(_unit(n, 0), _unit(n, 1)))
    roots.append(_add(_unit(n, 1), _neg(_unit(n, 0))))
    for i in range(2, 7):
        roots.append(_add(_unit(n, i), _neg(_unit(n, i - 1))))
    return roots


def ambient_simple_roots(root_type: str, rank: int) -> List[Vector]:
    """Simple roots in the usual ambient Euclidean space."""
    validate_type(root_type, rank)
    if root_type == 'A':
        n = rank + 1
        return [_add(_unit(n, i), _neg(_unit(n, i + 1))) for i in range(rank)]
    if root_type in 'BCD':
        n = rank
        roots = [_add(_unit(n, i), _neg(_unit(n, i + 1))) for i in range(rank - 1)]
        if root_type == 'B':
            roots.append(tuple(_unit(n, n - 1)))
        elif root_type == 'C':
            roots.append(tuple(_unit(n, n - 1, Fraction(2))))
        else:
            roots.append(_add(_unit(n, n - 2), _unit(n, n - 1)))
        return roots
    if root_type == 'E':
        return _e8_simple_roots()[:rank]
    if root_type == 'F':
        n = 4
        return [
            _add(_unit(n, 1), _neg(_unit(n, 2))),
            _add(_unit(n, 2), _neg(_unit(n, 3))),
            tuple(_unit(n, 3)),
            tuple(_HALF * s for s in (1, -1, -1, -1)),
        ]
    n = 3
    return [
        _add(_unit(n, 0), _neg(_unit(n, 1))),
        tuple(Fraction(x) for x in (-2, 1, 1)),
    ]


def validate_type(root_type: str, rank: int) -> None:
    if root_type in MIN_RANK:
        if rank < MIN_RANK[root_type]:
            raise RootSystemError(f'{root_type}{rank} is not a valid type: rank must be >= {MIN_RANK[root_type]}')
        return
    if root_type in EXCEPTIONAL_RANKS:
        if rank not in EXCEPTIONAL_RANKS[root_type]:
            raise RootSystemError(f'{root_type}{rank} is not a valid type')
        return
    raise RootSystemError(f'unknown root system type {root_type!r}')


def parse_label(label: str, rank: Optional[int] = None) -> Tuple[str, int]:
    """'E8' -> ('E', 8); 'E' with rank=8 -> ('E', 8)."""
    text = label.strip().upper()
    if not text or text[0] not in 'ABCDEFG':
        raise RootSystemError(f'unknown root system type {label!r}')
    root_type, digits = text[0], text[1:]
    if digits:
        if not digits.isdigit():
            raise RootSystemError(f'bad root system label {label!r}')
        parsed = int(digits)
        if rank is not None and rank != parsed:
            raise RootSystemError(f'label {label} disagrees with rank {rank}')
        rank = parsed
    if rank is None:
        raise RootSystemError(f'rank missing for type {root_type}')
    validate_type(root_type, rank)
    return root_type, rank


def weyl_order(root_type: str, rank: int) -> int:
    """Classical order formula."""
    validate_type(root_type, rank)
    if root_type == 'A':
        return math.factorial(rank + 1)
    if root_type in 'BC':
        return 2 ** rank * math.factorial(rank)
    if root_type == 'D':
        return 2 ** (rank - 1) * math.factorial(rank)
    return {('E', 6): 51_840, ('E', 7): 2_903_040, ('E', 8): 696_729_600,
            ('F', 4): 1_152, ('G', 2): 12}[(root_type, rank)]


def expected_root_count(root_type: str, rank: int) -> int:
    validate_type(root_type, rank)
    if root_type == 'A':
        return rank * (rank + 1)
    if root_type in 'BC':
        return 2 * rank * rank
    if root_type == 'D':
        return 2 * rank * (rank - 1)
    return {('E', 6): 72, ('E', 7): 126, ('E', 8): 240, ('F', 4): 48, ('G', 2): 12}[(root_type, rank)]


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RootSystem:
    root_type: str
    rank: int
    simple_roots: Tuple[Vector, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    roots: Tuple[Coords, ...]
    edges: Tuple[Tuple[int, int], ...]
    reflection_matrices: Tuple[RationalMatrix, ...]
    reflection_perms: Tuple[Permutation, ...]

    @property
    def label(self) -> str:
        return f'{self.root_type}{self.rank}'

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def neighbours(self, vertex: int) -> List[int]:
        return sorted({b for a, b in self.edges if a == vertex} | {a for a, b in self.edges if b == vertex})

    def root_index(self, coords: Coords) -> int:
        return self._index()[coords]

    def _index(self) -> Dict[Coords, int]:
        cached = self.__dict__.get('_root_index')
        if cached is None:
            cached = {root: i for i, root in enumerate(self.roots)}
            object.__setattr__(self, '_root_index', cached)
        return cached

    def reflect(self, i: int, coords: Coords) -> Coords:
        """s_i applied to a vector in simple-root coordinates (0-based i)."""
        pairing = sum(coords[j] * self.cartan[j][i] for j in range(self.rank))
        result = list(coords)
        result[i] -= pairing
        return tuple(result)

    def matrix_of_word(self, word: Word) -> RationalMatrix:
        result = exactlin.identity(self.rank)
        for index, exponent in word:
            result = exactlin.mat_mul(result, exactlin.mat_pow(self.reflection_matrices[index], exponent % 2))
        return result

    def perm_of_word(self, word: Word) -> Permutation:
        return evaluate_word(word, self.reflection_perms, RIGHT_TO_LEFT)


@dataclass(frozen=True)
class PathDecomposition:
    """Two Dynkin paths (1-based vertices) sharing exactly one vertex."""
    path1: Tuple[int, ...]
    path2: Tuple[int, ...]


def build_root_system(root_type: str, rank: int) -> RootSystem:
    root_type = root_type.upper()
    validate_type(root_type, rank)
    simple = ambient_simple_roots(root_type, rank)
    cartan = tuple(
        tuple(int(2 * _dot(simple[i], simple[j]) / _dot(simple[j], simple[j])) for j in range(rank))
        for i in range(rank)
    )

    # reflection matrix columns: s_i(alpha_j) = alpha_j - A_ji alpha_i
    matrices = []
    for i in range(rank):
        rows = [[Fraction(int(r == c)) for c in range(rank)] for r in range(rank)]
        for j in range(rank):
            rows[i][j] -= cartan[j][i]
        matrices.append(exactlin.from_rows(rows))

    def reflect(i: int, coords: Coords) -> Coords:
        pairing = sum(coords[j] * cartan[j][i] for j in range(rank))
        result = list(coords)
        result[i] -= pairing
        return tuple(result)

    start = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    found = set(start)
    queue = list(start)
    for beta in queue:
        for i in range(rank):
            image = reflect(i, beta)
            if image not in found:
                found.add(image)
                queue.append(image)

    def sort_key(coords: Coords):
        height = sum(coords)
        return (height < 0, abs(height), tuple(abs(x) for x in coords), coords)

    roots = tuple(sorted(found, key=sort_key))
    expected = expected_root_count(root_type, rank)
    if len(roots) != expected:
        raise RootSystemError(f'{root_type}{rank}: generated {len(roots)} roots, expected {expected}')

    index = {root: k for k, root in enumerate(roots)}
    perms = []
    for i in range(rank):
        images = tuple(index[reflect(i, root)] for root in roots)
        perms.append(Permutation(images))

    edges = tuple(
        (i + 1, j + 1) for i in range(rank) for j in range(i + 1, rank) if cartan[i][j] != 0
    )
    _check_dynkin_tree(rank, edges)

    return RootSystem(
        root_type=root_type,
        rank=rank,
        simple_roots=tuple(simple),
        cartan=cartan,
        roots=roots,
        edges=edges,
        reflection_matrices=tuple(matrices),
        reflection_perms=tuple(perms),
    )


def _check_dynkin_tree(rank: int, edges: Sequence[Tuple[int, int]]) -> None:
    if len(edges) != rank - 1:
        raise RootSystemError(f'Dynkin diagram has {len(edges)} edges, expected {rank - 1}')
    degree = {v: 0 for v in range(1, rank + 1)}
    adjacent: Dict[int, List[int]] = {v: [] for v in degree}
    for a, b in edges:
        if a == b or a not in degree or b not in degree:
            raise RootSystemError(f'Dynkin diagram has a bad edge {a}-{b}')
        degree[a] += 1
        degree[b] += 1
        adjacent[a].append(b)
        adjacent[b].append(a)
    # n - 1 edges and one component make a tree
    reached = {1}
    frontier = [1]
    while frontier:
        v = frontier.pop()
        for w in adjacent[v]:
            if w not in reached:
                reached.add(w)
                frontier.append(w)
    if len(reached) != rank:
        missing = sorted(set(degree) - reached)
        raise RootSystemError(f'Dynkin diagram is not connected: vertices {missing} are unreachable from 1')
    if sum(1 for d in degree.values() if d >= 3) > 1 or any(d > 3 for d in degree.values()):
        raise RootSystemError('Dynkin diagram has more than one branch vertex')


def reflection_rep(rs: RootSystem) -> ExactMatrix:
    return ExactMatrix(
        rs.reflection_matrices,
        perm_generators=rs.reflection_perms,
        group_order=weyl_order(rs.root_type, rs.rank),
        generator_names=tuple(f's{i}' for i in rs.vertices),
    )


def _tuple_from_words(rs: RootSystem, words: Sequence[Word], name: str) -> GeneratingTuple:
    elements = tuple(rs.perm_of_word(w) for w in words)
    return GeneratingTuple(elements, convention=RIGHT_TO_LEFT, words=tuple(words), name=name)


def full_tuple(rs: RootSystem) -> GeneratingTuple:
    words: List[Word] = []
    for i in list(range(rs.rank)) + [0]:
        words.extend([((i, 1),), ((i, 1),)])
    return _tuple_from_words(rs, words, f'{rs.label} full')


def _walk_arm(rs: RootSystem, branch: int, first: int) -> List[int]:
    arm = [first]
    previous, current = branch, first
    while True:
        nxt = [v for v in rs.neighbours(current) if v != previous]
        if not nxt:
            return arm
        previous, current = current, nxt[0]
        arm.append(current)


def path_decomposition(rs: RootSystem) -> PathDecomposition:
    """
    Canonical split of the Dynkin diagram into two paths sharing one vertex.

    A path diagram is walked from its lowest-numbered end and split at its second
    vertex. A diagram with branch vertex b has its three arms ordered by length
    (longest first, ties by smallest vertex); path1 runs along the first arm into
    b and out along the second, path2 runs along the third arm into b.
    """
    if rs.rank < 3:
        raise RootSystemError(f'{rs.label}: rotation tuples need rank >= 3 (at least two Dynkin edges)')

    branch = [v for v in rs.vertices if len(rs.neighbours(v)) == 3]
    if not branch:
        start = min(v for v in rs.vertices if len(rs.neighbours(v)) == 1)
        order = [start] + _walk_arm(rs, start, rs.neighbours(start)[0])
        path1, path2 = tuple(order[:2]), tuple(order[1:])
    else:
        b = branch[0]
        arms = sorted((_walk_arm(rs, b, n) for n in rs.neighbours(b)), key=lambda arm: (-len(arm), min(arm)))
        path1 = tuple(reversed(arms[0])) + (b,) + tuple(arms[1])
        path2 = tuple(reversed(arms[2])) + (b,)

    decomposition = PathDecomposition(path1, path2)
    _check_decomposition(rs, decomposition)
    return decomposition


def _check_decomposition(rs: RootSystem, d: PathDecomposition) -> None:
    if len(d.path1) + len(d.path2) != rs.rank + 1:
        raise RootSystemError('path lengths do not add up to rank + 1')
    if len(set(d.path1) & set(d.path2)) != 1 or set(d.path1) | set(d.path2) != set(rs.vertices):
        raise RootSystemError('paths must cover the diagram and meet in one vertex')
    if min(len(d.path1), len(d.path2)) < 2:
        raise RootSystemError('each path needs at least two vertices')
    edge_set = set(rs.edges) | {(b, a) for a, b in rs.edges}
    for path in (d.path1, d.path2):
        for a, b in zip(path, path[1:]):
            if (a, b) not in edge_set:
                raise RootSystemError(f'vertices {a} and {b} are not adjacent')


def rotation_words(d: PathDecomposition) -> List[Word]:
    words: List[Word] = []
    for path in (d.path1, d.path2):
        for k, vertex in enumerate(path):
            following = path[(k + 1) % len(path)]
            words.append(((vertex - 1, 1), (following - 1, 1)))
    return words


def rotation_tuple(rs: RootSystem) -> GeneratingTuple:
    return _tuple_from_words(rs, rotation_words(path_decomposition(rs)), f'{rs.label} rotation')


def rotation_rep(rs: RootSystem, t: GeneratingTuple) -> ExactMatrix:
    """Reflection representation restricted to the subgroup generated by the rotation coordinates."""
    return ExactMatrix(
        [rs.matrix_of_word(w) for w in t.words],
        perm_generators=list(t.elements),
        group_order=weyl_order(rs.root_type, rs.rank) // 2,
        generator_names=tuple(f'r{i + 1}' for i in range(t.n)),
    )


def rotation_coordinates_tuple(t: GeneratingTuple) -> GeneratingTuple:
    """The rotation tuple re-expressed as words in its own coordinates."""
    return GeneratingTuple(t.elements, convention=t.convention,
                           words=tuple(((i, 1),) for i in range(t.n)), name=t.name)


def verify_rotation_subgroup(rs: RootSystem, t: GeneratingTuple) -> RotationSubgroupReport:
    order = build_bsgs(list(t.elements)).order
    expected = weyl_order(rs.root_type, rs.rank) // 2
    determinants = [exactlin.determinant(rs.matrix_of_word(w)) for w in t.words]
    determinants_ok = all(d == 1 for d in determinants)
    witnesses = []
    for k, d in enumerate(determinants, start=1):
        if d != 1:
            witnesses.append(Witness(check='determinant', detail=f'coordinate {k} has determinant {d}',
                                     data={'index': k, 'determinant': str(d)}))
    if order != expected:
        witnesses.append(Witness(check='index_two', detail=f'<tuple> has order {order}, expected {expected}',
                                 data={'order': order, 'expected': expected}))
    return RotationSubgroupReport(
        order=order,
        expected_order=expected,
        determinants=[str(d) for d in determinants],
        determinants_ok=determinants_ok,
        index_two_ok=order == expected,
        passed=determinants_ok and order == expected,
        witnesses=witnesses,
    )


def matrix_from_root_permutation(rs: RootSystem, perm: Permutation) -> RationalMatrix:
    """
    The linear map determined by where ``perm`` sends the simple roots: column j is
    the root at position perm(index(alpha_j)). Independent of the word encoding.
    """
    columns = []
    for j in range(rs.rank):
        simple = tuple(int(i == j) for i in range(rs.rank))
        columns.append(rs.roots[perm(rs.root_index(simple))])
    return exactlin.from_rows([[columns[j][i] for j in range(rs.rank)] for i in range(rs.rank)])


def random_weyl_word(rs: RootSystem, length: int, rng: np.random.Generator) -> Word:
    return tuple((int(rng.integers(rs.rank)), 1) for _ in range(length))


def weyl_report(root_type: str, rank: int, rotation: bool = False) -> WeylReport:
    rs = build_root_system(root_type, rank)
    rep = reflection_rep(rs)
    order = weyl_order(rs.root_type, rs.rank)
    bsgs_order = build_bsgs(list(rs.reflection_perms)).order
    full = genus_of_tuple(rep, full_tuple(rs), expected_genus=1)
    passed = (
        full.passed
        and bsgs_order == order
        and len(rs.roots) == expected_root_count(rs.root_type, rs.rank)
        and rep.invariant_dim() == 0
    )

    decomposition_report = None
    rotation_report = None
    subgroup_report = None
    if rotation:
        decomposition = path_decomposition(rs)
        decomposition_report = PathDecompositionReport(path1=list(decomposition.path1),
                                                       path2=list(decomposition.path2))
        t = rotation_tuple(rs)
        rotation_report = genus_of_tuple(rotation_rep(rs, t), rotation_coordinates_tuple(t), expected_genus=1)
        subgroup_report = verify_rotation_subgroup(rs, t)
        passed = passed and rotation_report.passed and subgroup_report.passed

    logger.info('Weyl verification finished', extra={'stage': 'weyl', 'label': rs.label,
                                                      'group_order': bsgs_order, 'passed': passed})
    return WeylReport(
        label=rs.label,
        rank=rs.rank,
        root_count=len(rs.roots),
        expected_root_count=expected_root_count(rs.root_type, rs.rank),
        weyl_order=order,
        bsgs_order=bsgs_order,
        invariant_dim=rep.invariant_dim(),
        full=full,
        path_decomposition=decomposition_report,
        rotation=rotation_report,
        rotation_subgroup=subgroup_report,
        passed=passed,
    )


SUITE = (
    [('A', r) for r in range(2, 9)]
    + [('B', r) for r in range(2, 9)]
    + [('C', r) for r in range(3, 9)]
    + [('D', r) for r in range(4, 9)]
    + [('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)]
)
