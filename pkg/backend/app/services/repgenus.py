"""
Genus of a tuple (G, V, g) over a rational representation V.

For a product-one tuple g_1 ... g_n in G:

    lhs   = -2 dim V + 2 dim V^G + sum_i (dim V - dim V^{g_i})
    genus = lhs / 2

Generating tuples satisfy Scott's inequality lhs >= 0, and lhs is even when V is
rational. Checks never raise on bad data; failures become report fields with
witnesses.

Three encodings of V are supported:
    DeletedPermutation  the (degree - 1)-dimensional complement of the trivial
                        summand of a transitive permutation module
    ExactMatrix         rational matrices for the generators of G
    CharacterData       a rational character, evaluated through power maps
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import RepresentationError
from ..models.reports import EntryReport, GenusReport, Witness
from . import exactlin
from .exactlin import RationalMatrix
from .permgroup import (
    RIGHT_TO_LEFT,
    GeneratingTuple,
    Permutation,
    PermutationGroup,
    Word,
    build_bsgs,
    conjugate,
    cycle_count,
    cycle_type,
    evaluate_word,
    fixed_points,
    format_cycle_type,
    format_cycles,
    format_word,
    generator_names_for,
    inverse,
    multiply_all,
    order_of,
    power,
    tuple_product_check,
)

logger = logging.getLogger(__name__)

GENERATION_VERIFIED = 'verified'
GENERATION_FAILED = 'failed'
GENERATION_ASSUMED = 'assumed'
GENERATION_UNKNOWN = 'unknown'


class RationalRep(ABC):
    """A rational representation V of G, in one of three encodings."""

    kind: str = ''

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def fixed_dim(self, g: Any) -> int:
        """dim V^g for an element in this encoding's vocabulary."""

    @abstractmethod
    def invariant_dim(self) -> int:
        """dim V^G."""

    @property
    def group_order(self) -> Optional[int]:
        return None

    def entries_of(self, t: Any) -> List[Any]:
        return list(t.elements)

    def describe(self, g: Any, t: Any, index: int) -> Dict[str, Any]:
        return {'label': str(g), 'order': None, 'cycle_type': None}

    def product_check(self, t: Any) -> Tuple[Optional[bool], Optional[str]]:
        result = tuple_product_check(t)
        return result.holds, result.convention

    def generation(self, t: Any) -> Tuple[Optional[bool], str, Optional[int]]:
        return None, GENERATION_UNKNOWN, None


class DeletedPermutation(RationalRep):
    """
    Complement of the trivial summand in the permutation module of a transitive
    group of degree d; dim V = d - 1 and dim V^g = (number of cycles of g) - 1.

    ``group`` is checked for transitivity. When only the abstract order of G is
    known (as for a printed tuple that is supposed to generate G), pass ``degree``
    and ``group_order`` instead.
    """

    kind = 'deleted_permutation'

    def __init__(self, group: Optional[PermutationGroup] = None, degree: Optional[int] = None,
                 group_order: Optional[int] = None):
        if group is None and degree is None:
            raise RepresentationError('DeletedPermutation needs a group or a degree')
        if group is not None and not group.is_transitive():
            raise RepresentationError(
                f'group of degree {group.degree} is not transitive '
                f'({len(group.orbits())} orbits); the deleted permutation module has invariants'
            )
        self.group = group
        self.degree = group.degree if group is not None else degree
        self._group_order = group_order if group_order is not None else (group.order if group else None)

    @property
    def dim(self) -> int:
        return self.degree - 1

    @property
    def group_order(self) -> Optional[int]:
        return self._group_order

    def fixed_dim(self, g: Permutation) -> int:
        if g.degree != self.degree:
            raise RepresentationError(f'element of degree {g.degree} in a degree-{self.degree} representation')
        return cycle_count(g) - 1

    def invariant_dim(self) -> int:
        return 0

    def describe(self, g: Permutation, t: Any, index: int) -> Dict[str, Any]:
        return {
            'label': format_cycles(g),
            'order': order_of(g),
            'cycle_type': format_cycle_type(cycle_type(g)),
        }

    def generation(self, t: GeneratingTuple) -> Tuple[Optional[bool], str, Optional[int]]:
        order = build_bsgs(list(t.elements)).order
        if self._group_order is None:
            return None, GENERATION_UNKNOWN, order
        ok = order == self._group_order
        return ok, GENERATION_VERIFIED if ok else GENERATION_FAILED, order


class ExactMatrix(RationalRep):
    """
    Matrices rho(s_1), ..., rho(s_k) for generators of G, acting on column vectors.

    Tuple entries are words in the generators (``GeneratingTuple.words``) or
    matrices. A word w = x_1 x_2 ... x_m maps to rho(x_1) rho(x_2) ... rho(x_m).
    ``perm_generators`` gives a faithful permutation encoding of the same
    generators, used for product and generation checks and for relation
    spot-checks.
    """

    kind = 'exact_matrix'

    def __init__(self, generators: Sequence[RationalMatrix],
                 perm_generators: Optional[Sequence[Permutation]] = None,
                 group_order: Optional[int] = None,
                 generator_names: Optional[Sequence[str]] = None):
        if not generators:
            raise RepresentationError('ExactMatrix needs at least one generator matrix')
        size = generators[0].rows
        for i, m in enumerate(generators, start=1):
            if not m.is_square or m.rows != size:
                raise RepresentationError(f'generator {i} is not a {size}x{size} matrix')
            if exactlin.determinant(m) == 0:
                raise RepresentationError(f'generator {i} is singular')
        if perm_generators is not None and len(perm_generators) != len(generators):
            raise RepresentationError('permutation and matrix generator counts differ')
        self.generators = tuple(generators)
        self.perm_generators = tuple(perm_generators) if perm_generators is not None else None
        self.generator_names = tuple(generator_names or generator_names_for(len(generators)))
        self._group_order = group_order
        self._inverses: Dict[int, RationalMatrix] = {}
        self._invariant_dim: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.generators[0].rows

    @property
    def group_order(self) -> Optional[int]:
        if self._group_order is None and self.perm_generators is not None:
            self._group_order = build_bsgs(list(self.perm_generators)).order
        return self._group_order

    def _generator_power(self, index: int, exponent: int) -> RationalMatrix:
        if exponent >= 0:
            return exactlin.mat_pow(self.generators[index], exponent)
        if index not in self._inverses:
            order = exactlin.matrix_order(self.generators[index])
            self._inverses[index] = exactlin.mat_pow(self.generators[index], order - 1)
        return exactlin.mat_pow(self._inverses[index], -exponent)

    def image(self, word: Word) -> RationalMatrix:
        result = exactlin.identity(self.dim)
        for index, exponent in word:
            result = exactlin.mat_mul(result, self._generator_power(index, exponent))
        return result

    def _as_matrix(self, g: Any) -> RationalMatrix:
        if isinstance(g, RationalMatrix):
            return g
        return self.image(tuple(g))

    def fixed_dim(self, g: Any) -> int:
        m = self._as_matrix(g)
        return exactlin.kernel_dimension(exactlin.mat_sub(m, exactlin.identity(self.dim)))

    def invariant_dim(self) -> int:
        """Common kernel of rho(s) - I over the generators."""
        if self._invariant_dim is None:
            one = exactlin.identity(self.dim)
            stacked = exactlin.stack(exactlin.mat_sub(m, one) for m in self.generators)
            self._invariant_dim = exactlin.kernel_dimension(stacked)
        return self._invariant_dim

    def entries_of(self, t: Any) -> List[Any]:
        if isinstance(t, GeneratingTuple):
            if t.words is None:
                raise RepresentationError('matrix representation needs tuple entries as generator words')
            return list(t.words)
        return list(t)

    def describe(self, g: Any, t: Any, index: int) -> Dict[str, Any]:
        if isinstance(g, RationalMatrix):
            return {'label': f'matrix {index}', 'order': exactlin.matrix_order(g), 'cycle_type': None}
        described = {'label': format_word(g, self.generator_names), 'order': None, 'cycle_type': None}
        if isinstance(t, GeneratingTuple) and t.elements:
            described['order'] = order_of(t.elements[index - 1])
        else:
            described['order'] = exactlin.matrix_order(self.image(g))
        return described

    def product_check(self, t: Any) -> Tuple[Optional[bool], Optional[str]]:
        matrices = [self._as_matrix(g) for g in self.entries_of(t)]
        product = exactlin.identity(self.dim)
        for m in matrices:
            product = exactlin.mat_mul(product, m)
        matrix_ok = exactlin.is_identity(product)
        if isinstance(t, GeneratingTuple) and t.elements:
            perm_result = tuple_product_check(t)
            return matrix_ok and perm_result.holds, perm_result.convention or RIGHT_TO_LEFT
        return matrix_ok, RIGHT_TO_LEFT

    def generation(self, t: Any) -> Tuple[Optional[bool], str, Optional[int]]:
        if not isinstance(t, GeneratingTuple) or not t.elements:
            if self.perm_generators is None or not isinstance(t, GeneratingTuple) or t.words is None:
                return None, GENERATION_UNKNOWN, None
            elements = [evaluate_word(w, self.perm_generators) for w in t.words]
        else:
            elements = list(t.elements)
        order = build_bsgs(elements).order
        expected = self.group_order
        if expected is None:
            return None, GENERATION_UNKNOWN, order
        ok = order == expected
        return ok, GENERATION_VERIFIED if ok else GENERATION_FAILED, order

    def validate_relations(self, samples: int = 20, seed: int = 0, max_length: int = 6) -> List[Witness]:
        """
        Spot-check that the matrices satisfy relations of the permutation generators:
        for random words w, rho(w)^k = I where k is the order of the permutation w.
        Returns witnesses for violated relations (empty when all hold).
        """
        if self.perm_generators is None:
            return []
        rng = np.random.default_rng(seed)
        witnesses = []
        words: List[Word] = [((i, 1),) for i in range(len(self.generators))]
        for _ in range(samples):
            length = int(rng.integers(1, max_length + 1))
            words.append(tuple(
                (int(rng.integers(len(self.generators))), int(rng.choice([-1, 1])))
                for _ in range(length)
            ))
        for word in words:
            k = order_of(evaluate_word(word, self.perm_generators))
            if not exactlin.is_identity(exactlin.mat_pow(self.image(word), k)):
                witnesses.append(Witness(
                    check='relation',
                    detail=f'rho(w)^{k} != I for w = {format_word(word, self.generator_names)}',
                    data={'word': [list(x) for x in word], 'order': k},
                ))
        return witnesses


class CharacterData(RationalRep):
    """
    A nontrivial irreducible rational character chi of a (possibly partial) table.

    dim V^g is the Burnside average (1/n) sum_k chi(g^k), n = ord(g), read through
    the table's power maps. dim V^G = 0.
    """

    kind = 'character_data'

    def __init__(self, table: Any, character: str):
        self.table = table
        self.character = table.character(character)
        if self.character.is_trivial():
            raise RepresentationError(f'{character} is the trivial character of {table.name}')

    @property
    def dim(self) -> int:
        return self.character.degree

    @property
    def group_order(self) -> Optional[int]:
        return self.table.order

    def fixed_dim(self, g: str) -> int:
        return self.table.burnside_fixed_dim(self.character.name, g)

    def invariant_dim(self) -> int:
        return 0

    def entries_of(self, t: Any) -> List[str]:
        classes = getattr(t, 'classes', t)
        return [self.table.resolve_class(c) for c in classes]

    def describe(self, g: str, t: Any, index: int) -> Dict[str, Any]:
        return {'label': g, 'order': self.table.class_by_name(g).order, 'cycle_type': None}

    def product_check(self, t: Any) -> Tuple[Optional[bool], Optional[str]]:
        return None, None

    def generation(self, t: Any) -> Tuple[Optional[bool], str, Optional[int]]:
        return None, GENERATION_ASSUMED, None


def fixed_dim(rep: RationalRep, g: Any) -> int:
    return rep.fixed_dim(g)


def burnside_fixed_dim(g: Permutation) -> int:
    """Independent count for the deleted permutation module: orbits of <g> minus one."""
    n = order_of(g)
    total = sum(fixed_points(power(g, k)) for k in range(n))
    if total % n:
        raise ArithmeticError('Burnside average of fixed points is not integral')
    return total // n - 1


def genus_of_tuple(rep: RationalRep, t: Any, name: Optional[str] = None,
                   expected_genus: Optional[int] = None) -> GenusReport:
    entries = rep.entries_of(t)
    if not entries:
        raise ValueError('genus_of_tuple needs a nonempty tuple')

    dim = rep.dim
    invariant = rep.invariant_dim()
    entry_reports = []
    fixed_dims = []
    for index, g in enumerate(entries, start=1):
        fd = rep.fixed_dim(g)
        fixed_dims.append(fd)
        described = rep.describe(g, t, index)
        entry_reports.append(EntryReport(index=index, fixed_dim=fd, codim=dim - fd, **described))

    lhs = -2 * dim + 2 * invariant + sum(dim - fd for fd in fixed_dims)
    parity_ok = lhs % 2 == 0
    genus = lhs // 2 if parity_ok else None
    product_ok, convention = rep.product_check(t)
    generates, generation_status, generated_order = rep.generation(t)
    scott_ok = lhs >= 0

    witnesses = []
    if product_ok is False:
        witnesses.append(Witness(
            check='product',
            detail='product of the tuple is not the identity under either composition convention',
        ))
    if generates is False:
        long_orders = [e.order for e in entry_reports if e.order and rep.group_order and e.order > 0
                       and rep.group_order % e.order]
        detail = f'<tuple> has order {generated_order}, expected {rep.group_order}'
        if long_orders:
            detail += f'; element orders {long_orders} do not divide |G|'
        witnesses.append(Witness(
            check='generation',
            detail=detail,
            data={'generated_order': generated_order, 'group_order': rep.group_order,
                  'bad_element_orders': long_orders},
        ))
    if not parity_ok:
        witnesses.append(Witness(
            check='parity',
            detail=f'lhs = {lhs} is odd',
            data={'lhs': lhs, 'fixed_dims': fixed_dims},
        ))
    if not scott_ok:
        witnesses.append(Witness(
            check='scott',
            detail=f'slack {lhs} < 0',
            data={'slack': lhs},
        ))
    if expected_genus is not None and genus != expected_genus:
        witnesses.append(Witness(
            check='expected_genus',
            detail=f'genus {genus} differs from the expected {expected_genus}',
            data={'genus': genus, 'expected': expected_genus},
        ))

    passed = (
        product_ok is not False
        and generates is not False
        and parity_ok
        and scott_ok
        and (expected_genus is None or genus == expected_genus)
    )

    return GenusReport(
        name=name or getattr(t, 'name', None),
        representation=rep.kind,
        n=len(entries),
        dim=dim,
        invariant_dim=invariant,
        fixed_dims=fixed_dims,
        entries=entry_reports,
        lhs=lhs,
        genus=genus,
        product_ok=product_ok,
        product_convention=convention,
        generates=generates,
        generation_status=generation_status,
        generated_order=generated_order,
        group_order=rep.group_order,
        scott_ok=scott_ok,
        scott_slack=lhs,
        parity_ok=parity_ok,
        expected_genus=expected_genus,
        passed=passed,
        witnesses=witnesses,
    )


def scott_check(rep: RationalRep, t: Any) -> Tuple[bool, int]:
    """Scott's inequality; the slack equals the lhs of the genus formula."""
    generates, status, _ = rep.generation(t)
    if generates is False:
        logger.warning('scott_check on a tuple that does not generate G; the inequality is not claimed here')
    dim = rep.dim
    codims = sum(dim - rep.fixed_dim(g) for g in rep.entries_of(t))
    slack = codims - (2 * dim - 2 * rep.invariant_dim())
    return slack >= 0, slack


def _fingerprint(elements: Sequence[Permutation], fixed_dims: Sequence[int], lhs: int) -> Tuple:
    return (
        tuple(sorted((cycle_type(g), fd) for g, fd in zip(elements, fixed_dims))),
        lhs,
    )


Constraint = Union[Tuple[int, ...], Permutation]

# uniform draws used to collect class representatives for cycle-type constraints
CLASS_POOL_DRAWS = 5000
CLASS_POOL_SIZE = 64


def _shape(constraint: Optional[Constraint]) -> Optional[Tuple[int, ...]]:
    if constraint is None:
        return None
    if isinstance(constraint, Permutation):
        return cycle_type(constraint)
    return tuple(constraint)


def _class_pools(group: PermutationGroup, constraints: Sequence[Optional[Constraint]],
                 rng: np.random.Generator) -> Dict[int, List[Permutation]]:
    """
    Representatives to conjugate for each constrained free position.

    An explicit Permutation is its own pool. A cycle type gets the elements of
    that type among CLASS_POOL_DRAWS uniform draws, so a type that splits into
    several G-classes keeps each class in proportion to its size.
    """
    pools: Dict[int, List[Permutation]] = {}
    by_shape: Dict[Tuple[int, ...], List[Permutation]] = {}
    for i, constraint in enumerate(constraints):
        if isinstance(constraint, Permutation):
            if not group.contains(constraint):
                raise RepresentationError(f'constraint {i + 1} is not an element of the group')
            pools[i] = [constraint]
        elif constraint is not None:
            by_shape.setdefault(tuple(constraint), [])
    if by_shape:
        for _ in range(CLASS_POOL_DRAWS):
            g = group.random_element(rng)
            pool = by_shape.get(cycle_type(g))
            if pool is not None and len(pool) < CLASS_POOL_SIZE:
                pool.append(g)
            if all(len(p) == CLASS_POOL_SIZE for p in by_shape.values()):
                break
    for i, constraint in enumerate(constraints):
        if constraint is not None and not isinstance(constraint, Permutation):
            pools[i] = by_shape[tuple(constraint)]
    return pools


def search_tuples(group: PermutationGroup, rep: RationalRep, n: int, target_genus: int,
                  constraints: Optional[Sequence[Optional[Constraint]]] = None,
                  seed: int = 0, budget: int = 10_000) -> List[GeneratingTuple]:
    """
    Random search for generating product-one tuples of a given genus.

    Free positions g_1 .. g_{n-1} are uniform group elements, or uniform
    conjugates h^-1 c h of a class representative c when ``constraints[i]``
    names a cycle type or a representative. g_n is the inverse of their
    product and is only checked against its constraint. Tuples that hit
    ``target_genus`` and generate are kept. ``budget`` bounds the number of
    sampled tuples. Results are deduplicated by the multiset of
    (cycle type, dim V^g) pairs together with lhs.
    """
    if n < 2:
        raise ValueError('search_tuples needs n >= 2')
    if budget <= 0:
        raise ValueError('search budget must be positive')
    if constraints is not None and len(constraints) != n:
        raise ValueError(f'{len(constraints)} constraints for a tuple of length {n}')
    if target_genus < 0:
        return []

    rng = np.random.default_rng(seed)
    dim = rep.dim
    target_lhs = 2 * target_genus
    base_lhs = -2 * dim + 2 * rep.invariant_dim()
    found: List[GeneratingTuple] = []
    seen = set()

    pools: Dict[int, List[Permutation]] = {}
    last_shape = None
    if constraints is not None:
        pools = _class_pools(group, constraints[:-1], rng)
        last_shape = _shape(constraints[-1])
        empty = [i + 1 for i, pool in pools.items() if not pool]
        if empty:
            logger.warning('No element of the constrained cycle type found',
                           extra={'stage': 'search', 'positions': empty, 'draws': CLASS_POOL_DRAWS})
            return []

    for _ in range(budget):
        elements: List[Permutation] = []
        for i in range(n - 1):
            pool = pools.get(i)
            if pool is None:
                elements.append(group.random_element(rng))
            else:
                representative = pool[int(rng.integers(len(pool)))]
                elements.append(conjugate(representative, group.random_element(rng)))
        last = inverse(multiply_all(elements, RIGHT_TO_LEFT))
        if last_shape is not None and cycle_type(last) != last_shape:
            continue
        elements.append(last)

        fixed_dims = [rep.fixed_dim(g) for g in elements]
        lhs = base_lhs + sum(dim - fd for fd in fixed_dims)
        if lhs != target_lhs:
            continue
        key = _fingerprint(elements, fixed_dims, lhs)
        if key in seen:
            continue
        if build_bsgs(elements).order != group.order:
            continue
        seen.add(key)
        found.append(GeneratingTuple(tuple(elements), convention=RIGHT_TO_LEFT,
                                     name=f'search#{len(found) + 1}'))

    logger.info('Tuple search finished', extra={'stage': 'search', 'found': len(found), 'budget': budget})
    return found


def report_rows(report: GenusReport) -> List[Dict[str, Any]]:
    """Flatten a report into per-entry rows for a human-readable table."""
    rows = []
    for entry in report.entries:
        rows.append({
            'tuple': report.name or '',
            'i': entry.index,
            'element': entry.label,
            'order': entry.order if entry.order is not None else '',
            'type': entry.cycle_type or '',
            'dim V^g': entry.fixed_dim,
            'codim': entry.codim,
        })
    return rows


def summary_row(report: GenusReport) -> Dict[str, Any]:
    return {
        'tuple': report.name or '',
        'rep': report.representation,
        'n': report.n,
        'dim V': report.dim,
        'dim V^G': report.invariant_dim,
        'lhs': report.lhs,
        'genus': report.genus if report.genus is not None else '-',
        'product': _flag(report.product_ok),
        'generates': _flag(report.generates) if report.generates is not None else report.generation_status,
        'scott': _flag(report.scott_ok),
        'parity': _flag(report.parity_ok),
        'result': 'PASS' if report.passed else 'FAIL',
    }


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return 'n/a'
    return 'ok' if value else 'FAIL'
