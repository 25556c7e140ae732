# exact_arithmetic.py
#
# Copyright 2026 The badapprox contributors.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
#
# SPDX-License-Identifier: GPL-3.0-or-later

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

import gmpy2
import mpmath

from ..errors import ConfigError, ParameterError
from ..models.quadratic import ContinuedFraction, QuadraticNumber
from .logger_service import get_logger

Exact = Union[int, Fraction, QuadraticNumber]

logger = get_logger('exact_arithmetic')

# Guard for the periodic expansion loop; real periods are far shorter.
MAX_CF_TERMS = 1_000_000


@dataclass(frozen=True)
class HomogeneousMinimum:
    """Smallest q**2 * ||q*theta|| seen for 1 <= q <= q_max"""
    value: QuadraticNumber
    q: int
    q_max: int
    holds: bool


def floor_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0"""
    if n < 0:
        raise ParameterError(f"floor_root of negative {n}")
    return int(gmpy2.iroot(n, k)[0])


def floor_rational_power(base: Union[int, Fraction], exponent: Fraction) -> int:
    """floor(base ** exponent) computed with integer roots only"""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ParameterError(f"floor_rational_power needs a positive base, got {base}")
    p, q = exponent.numerator, exponent.denominator
    powered = base ** p
    # m**q <= N/D  iff  m**q <= floor(N/D)
    return floor_root(powered.numerator // powered.denominator, q)


def compare_rational_power(x: Exact, base: Union[int, Fraction], exponent: Fraction) -> int:
    """Sign of x - base**exponent for x >= 0 and base > 0.

    Both sides are raised to the exponent's denominator so the test runs on
    exact values only.
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ParameterError(f"compare_rational_power needs a positive base, got {base}")
    if x < 0:
        raise ParameterError("compare_rational_power needs x >= 0")
    p, q = exponent.numerator, exponent.denominator
    left = x ** q
    right = base ** p
    if left < right:
        return -1
    if left > right:
        return 1
    return 0


def nearest_int(x: Exact) -> int:
    """Nearest integer, half-integers round down"""
    n = x.__floor__() if isinstance(x, QuadraticNumber) else int(Fraction(x).__floor__())
    if x - n > Fraction(1, 2):
        n += 1
    return n


def nearest_int_dist(x: Exact) -> Union[Fraction, QuadraticNumber]:
    """||x||, the exact distance from x to the nearest integer"""
    if isinstance(x, QuadraticNumber):
        frac = x - x.floor()
        return frac if frac <= Fraction(1, 2) else 1 - frac
    x = Fraction(x)
    frac = x - (x.numerator // x.denominator)
    return frac if frac <= Fraction(1, 2) else 1 - frac


def nearest_int_dist_enclosed(x: Exact, tolerance: Fraction) -> Tuple[Union[Fraction, QuadraticNumber], Tuple[Fraction, Fraction]]:
    """||x|| together with a rational enclosure of width <= tolerance"""
    value = nearest_int_dist(x)
    if isinstance(value, QuadraticNumber):
        return value, value.enclose(tolerance)
    return value, (value, value)


def continued_fraction_of(x: QuadraticNumber) -> ContinuedFraction:
    """Exact periodic expansion of a quadratic irrational"""
    if x.is_rational:
        raise ParameterError(f"{x} is rational, its expansion is finite")
    # write x = (P + sqrt(D)) / Q with Q | D - P**2
    D = x.b * x.b * x.d
    if x.b > 0:
        P, Q = x.a, x.c
    else:
        P, Q = -x.a, -x.c
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = int(gmpy2.isqrt(D))

    terms: List[int] = []
    seen = {}
    while len(terms) < MAX_CF_TERMS:
        state = (P, Q)
        if state in seen:
            return ContinuedFraction(tuple(terms), seen[state])
        seen[state] = len(terms)
        if Q > 0:
            term = (P + s) // Q
        else:
            term = -((P + s) // (-Q)) - 1
        terms.append(term)
        P = term * Q - P
        Q = (D - P * P) // Q
    raise ParameterError(f"No period found within {MAX_CF_TERMS} terms")


def cf_convergents(cf: ContinuedFraction, count: int) -> List[Fraction]:
    """The first count convergents p_k/q_k of cf"""
    if count < 1:
        raise ParameterError("count must be >= 1")
    return [Fraction(p, q) for p, q in cf_convergent_pairs(cf, count)]


def cf_convergent_pairs(cf: ContinuedFraction, count: int) -> List[Tuple[int, int]]:
    """Convergents as (p_k, q_k) pairs, already in lowest terms"""
    result: List[Tuple[int, int]] = []
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for index, term in enumerate(cf.iter_terms()):
        if index >= count:
            break
        if index == 0:
            p, q = term, 1
        else:
            p_prev, p = p, term * p + p_prev
            q_prev, q = q, term * q + q_prev
        result.append((p, q))
    return result


def check_homogeneous(theta: QuadraticNumber, delta: Fraction, q_max: int,
                      exhaustive: bool = False) -> HomogeneousMinimum:
    """Minimum of q**2 * ||q*theta|| over 1 <= q <= q_max.

    By default only convergent denominators are visited: for q_k <= q < q_{k+1}
    we have ||q*theta|| >= ||q_k*theta||, so no other q can be smaller.
    """
    if q_max < 1:
        raise ParameterError(f"q_max must be >= 1, got {q_max}")
    if not isinstance(theta, QuadraticNumber) or theta.is_rational:
        raise ParameterError("theta must be a quadratic irrational")

    if exhaustive:
        candidates = range(1, q_max + 1)
    else:
        denominators = []
        q_prev, q = 0, 1
        for index, term in enumerate(continued_fraction_of(theta).iter_terms()):
            if index == 0:
                q = 1
            else:
                q_prev, q = q, term * q + q_prev
            if q > q_max:
                break
            if not denominators or denominators[-1] != q:
                denominators.append(q)
        candidates = denominators

    best_value = None
    best_q = 0
    for q in candidates:
        value = q * q * nearest_int_dist(theta * q)
        if best_value is None or value < best_value:
            best_value, best_q = value, q

    holds = best_value >= delta
    logger.debug(f"check_homogeneous: min {approx(best_value)} at q={best_q} (q_max={q_max})")
    return HomogeneousMinimum(value=best_value, q=best_q, q_max=q_max, holds=holds)


def to_mpf(x: Exact, digits: int = 30) -> mpmath.mpf:
    """Decimal approximation, for reports only"""
    with mpmath.workdps(digits + 10):
        if isinstance(x, QuadraticNumber):
            return (mpmath.mpf(x.a) + x.b * mpmath.sqrt(x.d)) / x.c
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator


def approx(x: Exact, digits: int = 20) -> str:
    """Render x with the given number of significant digits"""
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(to_mpf(x, digits), digits)


def parse_theta(spec: str) -> QuadraticNumber:
    """Parse 'quad:a,b,c,d' or 'cf:a0,a1,...~k' into a quadratic irrational"""
    spec = spec.strip()
    kind, _, body = spec.partition(':')
    try:
        if kind == 'quad':
            parts = [int(part) for part in body.split(',')]
            if len(parts) != 4:
                raise ConfigError(f"quad needs four integers a,b,c,d, got {body!r}")
            a, b, c, d = parts
            if c == 0:
                raise ConfigError("quad denominator c must be non-zero")
            value = QuadraticNumber.from_surd(a, b, c, d)
        elif kind == 'cf':
            terms_text, tilde, start_text = body.partition('~')
            terms = tuple(int(part) for part in terms_text.split(','))
            period_start = int(start_text) if tilde else None
            value = ContinuedFraction(terms, period_start).to_quadratic()
        else:
            raise ConfigError(f"Unknown theta kind {kind!r}, expected quad: or cf:")
    except ValueError as e:
        raise ConfigError(f"Cannot parse theta {spec!r}: {e}") from e
    except ParameterError as e:
        raise ConfigError(f"Invalid theta {spec!r}: {e}") from e

    if not isinstance(value, QuadraticNumber) or value.is_rational:
        raise ConfigError(f"theta {spec!r} is rational, a quadratic irrational is required")
    logger.info(f"Parsed theta {spec} as {value} ~ {approx(value)}")
    return value
