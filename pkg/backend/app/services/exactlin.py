"""
Exact linear algebra over the rationals.

Entries are ``fractions.Fraction`` (unbounded numerator and denominator, always
reduced, denominator positive). Rank, kernel dimension and determinant go through
fraction-free (Bareiss) elimination on integer rows, so intermediate values are
minors of the input and never need rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import DimensionMismatchError

BigRational = Fraction
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(x) for x in self.entries)
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError('matrix dimensions must be non-negative')
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f'{len(entries)} entries for a {self.rows}x{self.cols} matrix'
            )
        object.__setattr__(self, 'entries', entries)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: 'RationalMatrix') -> 'RationalMatrix':
        return mat_mul(self, other)

    def __sub__(self, other: 'RationalMatrix') -> 'RationalMatrix':
        return mat_sub(self, other)

    def __str__(self) -> str:
        return '\n'.join(' '.join(str(x) for x in self.row(i)) for i in range(self.rows))


def from_rows(rows: Sequence[Sequence[Scalar]]) -> RationalMatrix:
    rows = [list(r) for r in rows]
    if not rows:
        return RationalMatrix(0, 0, ())
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatchError('ragged rows')
    return RationalMatrix(len(rows), width, tuple(Fraction(x) for r in rows for x in r))


def identity(n: int) -> RationalMatrix:
    return RationalMatrix(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))


def zero(rows: int, cols: int) -> RationalMatrix:
    return RationalMatrix(rows, cols, (Fraction(0),) * (rows * cols))


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if a.cols != b.rows:
        raise DimensionMismatchError(f'cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}')
    b_cols = [b.entries[j::b.cols] for j in range(b.cols)] if b.cols else []
    entries = []
    for i in range(a.rows):
        row = a.row(i)
        for col in b_cols:
            entries.append(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)))
    return RationalMatrix(a.rows, b.cols, tuple(entries))


def mat_sub(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise DimensionMismatchError(f'cannot subtract {b.rows}x{b.cols} from {a.rows}x{a.cols}')
    return RationalMatrix(a.rows, a.cols, tuple(x - y for x, y in zip(a.entries, b.entries)))


def mat_pow(a: RationalMatrix, k: int) -> RationalMatrix:
    if not a.is_square:
        raise DimensionMismatchError('matrix power needs a square matrix')
    if k < 0:
        raise ValueError('negative exponent')
    result = identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def trace(a: RationalMatrix) -> Fraction:
    if not a.is_square:
        raise DimensionMismatchError('trace needs a square matrix')
    return sum((a[i, i] for i in range(a.rows)), Fraction(0))


def transpose(a: RationalMatrix) -> RationalMatrix:
    return RationalMatrix(a.cols, a.rows, tuple(a[i, j] for j in range(a.cols) for i in range(a.rows)))


def stack(matrices: Iterable[RationalMatrix]) -> RationalMatrix:
    """Vertical concatenation; all blocks need the same column count."""
    matrices = list(matrices)
    if not matrices:
        raise ValueError('nothing to stack')
    cols = matrices[0].cols
    if any(m.cols != cols for m in matrices):
        raise DimensionMismatchError('stacked blocks differ in column count')
    entries = tuple(x for m in matrices for x in m.entries)
    return RationalMatrix(sum(m.rows for m in matrices), cols, entries)


def _integer_rows(a: RationalMatrix) -> Tuple[List[List[int]], Fraction]:
    """Clear denominators row by row. Returns the integer rows and the product of row scales."""
    rows = []
    scale = Fraction(1)
    for i in range(a.rows):
        row = a.row(i)
        lcm = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * lcm) for x in row])
        scale *= lcm
    return rows, scale


def _bareiss(rows: List[List[int]], ncols: int) -> Tuple[int, int, int]:
    """
    Fraction-free row echelon form in place.

    Returns (rank, last pivot, sign of the row permutation). Every entry stays an
    integer minor of the input, so the division by the previous pivot is exact.
    """
    nrows = len(rows)
    rank = 0
    previous = 1
    sign = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot_row = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != rank:
            rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
            sign = -sign
        pivot = rows[rank][col]
        pivot_line = rows[rank]
        for r in range(rank + 1, nrows):
            line = rows[r]
            factor = line[col]
            for c in range(col + 1, ncols):
                line[c] = (line[c] * pivot - factor * pivot_line[c]) // previous
            line[col] = 0
        previous = pivot
        rank += 1
    return rank, previous, sign


def rank(a: RationalMatrix) -> int:
    rows, _ = _integer_rows(a)
    r, _, _ = _bareiss(rows, a.cols)
    return r


def kernel_dimension(a: RationalMatrix) -> int:
    """Nullity of ``a`` acting on column vectors: cols - rank."""
    return a.cols - rank(a)


def determinant(a: RationalMatrix) -> Fraction:
    if not a.is_square:
        raise DimensionMismatchError('determinant needs a square matrix')
    if a.rows == 0:
        return Fraction(1)
    rows, scale = _integer_rows(a)
    r, last_pivot, sign = _bareiss(rows, a.cols)
    if r < a.rows:
        return Fraction(0)
    return Fraction(sign * last_pivot) / scale


def is_identity(a: RationalMatrix) -> bool:
    return a.is_square and a == identity(a.rows)


def matrix_order(a: RationalMatrix, limit: int = 10_000) -> int:
    """Smallest k >= 1 with a^k = I; raises ValueError past ``limit``."""
    if not a.is_square:
        raise DimensionMismatchError('order needs a square matrix')
    one = identity(a.rows)
    current = a
    for k in range(1, limit + 1):
        if current == one:
            return k
        current = mat_mul(current, a)
    raise ValueError(f'matrix order exceeds {limit}')


def parse_matrix_file(text: str, source: Optional[str] = None) -> List[RationalMatrix]:
    """
    Blocks headed ``gen <i>`` (1-based, in order) followed by whitespace-separated
    rational rows such as ``1 -1/2 0``. ``#`` starts a comment.
    """
    blocks: List[List[List[Fraction]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == 'gen':
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) != len(blocks) + 1:
                raise DimensionMismatchError(f'expected "gen {len(blocks) + 1}"', source=source, line_number=number)
            blocks.append([])
            continue
        if not blocks:
            raise DimensionMismatchError('matrix row before the first "gen" header', source=source, line_number=number)
        try:
            blocks[-1].append([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError) as e:
            raise DimensionMismatchError(f'bad rational entry: {e}', source=source, line_number=number) from e

    matrices = []
    for index, block in enumerate(blocks, start=1):
        try:
            matrix = from_rows(block)
        except DimensionMismatchError as e:
            raise DimensionMismatchError(f'gen {index}: {e.message}', source=source) from e
        if not matrix.is_square:
            raise DimensionMismatchError(f'gen {index} is not square', source=source)
        matrices.append(matrix)
    if matrices and any(m.rows != matrices[0].rows for m in matrices):
        raise DimensionMismatchError('generator matrices differ in size', source=source)
    return matrices
