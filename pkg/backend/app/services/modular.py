"""
Congruence-subgroup indices, the genus of X_0(N), and the Steinberg criterion.

An elliptic curve of conductor pN with p prime, gcd(N, p) = 1 and X_0(N) of genus
0 puts the Steinberg representation of SL_2(F_p) (dimension p) in Mordell-Weil.
``verify_corollary`` checks that every prime below a bound has such a witness in
a curve table, reporting data gaps as ``insufficient_data``.

X_0(N) genus:
    mu     = N prod_{p|N} (1 + 1/p)
    nu2    = 0 if 4 | N else prod_{p|N} (1 + (-4/p))
    nu3    = 0 if 9 | N else prod_{p|N} (1 + (-3/p))
    nu_inf = sum_{d|N} phi(gcd(d, N/d))
    12 (g - 1) = mu - 3 nu2 - 4 nu3 - 6 nu_inf
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import factorint, isprime, primerange

from ..models.reports import CorollaryReport, GenusZeroReport, SteinbergWitnessReport, X0Certificate
from .cremona import OUTSIDE_COVERAGE, PRESENT, CurveDatabase, has_conductor

logger = logging.getLogger(__name__)

# Genus-0 levels stop at 25. The exact scan and the witness search both run this far;
# larger bounds reuse the scan.
GENUS_ZERO_SWEEP = 1000

STATUS_WITNESS = 'witness'
STATUS_ABSENT = 'absent'
STATUS_INSUFFICIENT = 'insufficient_data'


def _check_positive(value: int, name: str) -> None:
    if value < 1:
        raise ValueError(f'{name} must be >= 1, got {value}')


def sl2_order(m: int) -> int:
    """|SL_2(Z/mZ)| = m^3 prod_{p|m} (1 - p^-2)."""
    _check_positive(m, 'm')
    result = m ** 3
    for p in factorint(m):
        result = result // (p * p) * (p * p - 1)
    return result


def index_gamma0(n: int) -> int:
    """[SL_2(Z) : Gamma_0(n)] = n prod_{p|n} (1 + 1/p)."""
    _check_positive(n, 'n')
    result = n
    for p in factorint(n):
        result = result // p * (p + 1)
    return result


def index_gamma(m: int) -> int:
    """[SL_2(Z) : Gamma(m)] as matrix groups, equal to |SL_2(Z/mZ)| for every m >= 1."""
    return sl2_order(m)


def index_gamma_psl(m: int) -> int:
    """Index of the image of Gamma(m) in PSL_2(Z); -I lies in Gamma(m) only for m <= 2."""
    return sl2_order(m) if m <= 2 else sl2_order(m) // 2


def index_gamma_mn(m: int, n: int) -> int:
    """[SL_2(Z) : Gamma(m) cap Gamma_0(n)] for coprime m, n."""
    _check_positive(m, 'm')
    _check_positive(n, 'n')
    if math.gcd(m, n) != 1:
        raise ValueError(f'm = {m} and n = {n} are not coprime')
    return index_gamma(m) * index_gamma0(n)


def borel_order(p: int) -> int:
    """Order of the upper-triangular subgroup of SL_2(F_p)."""
    return p * (p - 1)


def steinberg_dim(p: int) -> int:
    """[SL_2(F_p) : B] - 1, which is p."""
    if not isprime(p):
        raise ValueError(f'{p} is not prime')
    return sl2_order(p) // borel_order(p) - 1


def kronecker_minus4(p: int) -> int:
    """(-4/p): 0 at p = 2, otherwise (-1)^((p-1)/2) by Euler's criterion."""
    if p == 2:
        return 0
    return 1 if pow(p - 1, (p - 1) // 2, p) == 1 else -1


def kronecker_minus3(p: int) -> int:
    """(-3/p): 0 at p = 3, -1 at p = 2, otherwise Euler's criterion for -3 mod p."""
    if p == 3:
        return 0
    if p == 2:
        return -1
    return 1 if pow((-3) % p, (p - 1) // 2, p) == 1 else -1


def _local_cusp_count(p: int, e: int) -> int:
    # sum over i = 0..e of phi(p^min(i, e - i))
    total = 0
    for i in range(e + 1):
        k = min(i, e - i)
        total += 1 if k == 0 else p ** k - p ** (k - 1)
    return total


def x0_certificate(n: int, factors: Optional[Dict[int, int]] = None) -> X0Certificate:
    _check_positive(n, 'N')
    factors = factors if factors is not None else factorint(n)
    mu = n
    nu2 = 0 if n % 4 == 0 else 1
    nu3 = 0 if n % 9 == 0 else 1
    nu_inf = 1
    for p, e in factors.items():
        mu = mu // p * (p + 1)
        nu2 *= 1 + kronecker_minus4(p)
        nu3 *= 1 + kronecker_minus3(p)
        nu_inf *= _local_cusp_count(p, e)
    twelve_g_minus_one = mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf
    if twelve_g_minus_one % 12:
        raise ArithmeticError(f'genus formula is not integral at N = {n}')
    return X0Certificate(level=n, genus=twelve_g_minus_one // 12 + 1, mu=mu, nu2=nu2, nu3=nu3, nu_inf=nu_inf)


def x0_genus(n: int) -> Tuple[int, int, int, int, int]:
    """(genus, mu, nu2, nu3, nu_inf) for X_0(n)."""
    c = x0_certificate(n)
    return c.genus, c.mu, c.nu2, c.nu3, c.nu_inf


def _smallest_prime_factors(bound: int) -> np.ndarray:
    spf = np.zeros(bound + 1, dtype=np.int64)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    unset = np.nonzero(spf == 0)[0]
    spf[unset] = unset
    return spf


def _factor_with(spf: np.ndarray, n: int) -> Dict[int, int]:
    factors: Dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        factors[p] = factors.get(p, 0) + 1
        n //= p
    return factors


@lru_cache(maxsize=1)
def _genus_zero_scan() -> Tuple[int, ...]:
    spf = _smallest_prime_factors(GENUS_ZERO_SWEEP)
    return tuple(n for n in range(1, GENUS_ZERO_SWEEP + 1) if x0_certificate(n, _factor_with(spf, n)).genus == 0)


def genus_zero_levels(bound: int) -> List[int]:
    """Levels N <= bound with X_0(N) of genus 0, from one exact scan of N <= GENUS_ZERO_SWEEP."""
    _check_positive(bound, 'bound')
    return [n for n in _genus_zero_scan() if n <= bound]


def genus_zero_report(bound: int) -> GenusZeroReport:
    return GenusZeroReport(bound=bound, levels=genus_zero_levels(bound))


def steinberg_witness(p: int, db: CurveDatabase) -> SteinbergWitnessReport:
    """
    Smallest genus-0 level N prime to p with a curve of conductor pN in ``db``.

    Without a witness the status is ``insufficient_data`` when some candidate
    conductor lies outside the table's coverage, else ``absent``.
    """
    dim = steinberg_dim(p)
    uncovered = []
    for n in genus_zero_levels(GENUS_ZERO_SWEEP):
        if math.gcd(n, p) != 1:
            continue
        result = has_conductor(db, p * n)
        if result.status == PRESENT:
            record = sorted(result.records, key=lambda r: (r.isogeny_class, r.number))[0]
            return SteinbergWitnessReport(
                p=p,
                status=STATUS_WITNESS,
                level=n,
                conductor=p * n,
                curve=record.label,
                ainvs=list(record.ainvs),
                certificate=x0_certificate(n),
                steinberg_dim=dim,
                uncovered_conductors=uncovered,
            )
        if result.status == OUTSIDE_COVERAGE:
            uncovered.append(p * n)
    return SteinbergWitnessReport(
        p=p,
        status=STATUS_INSUFFICIENT if uncovered else STATUS_ABSENT,
        steinberg_dim=dim,
        uncovered_conductors=uncovered,
    )


def verify_corollary(bound: int, db: CurveDatabase) -> CorollaryReport:
    """Every prime p < bound needs a witness; coverage gaps are never counterexamples."""
    primes = list(primerange(2, bound))
    witnesses = [steinberg_witness(int(p), db) for p in primes]
    insufficient = [w.p for w in witnesses if w.status == STATUS_INSUFFICIENT]
    absent = [w.p for w in witnesses if w.status == STATUS_ABSENT]
    coverage = list(db.coverage) if db.coverage else None
    passed = not insufficient and not absent
    if insufficient:
        logger.warning('Curve table too small for %d primes below %d', len(insufficient), bound)
    return CorollaryReport(
        bound=bound,
        prime_count=len(primes),
        witnesses=witnesses,
        insufficient_data=insufficient,
        absent=absent,
        coverage=coverage,
        passed=passed,
    )
