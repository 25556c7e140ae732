# quadratic.py
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
from functools import total_ordering
from math import gcd
from typing import Iterator, List, Optional, Tuple, Union

import gmpy2
from sympy import factorint

from ..errors import ParameterError

Rational = Union[int, Fraction]


def squarefree_decompose(n: int) -> Tuple[int, int]:
    """Split a positive integer as f**2 * s with s square-free.

    Returns:
        The pair (f, s)
    """
    if n <= 0:
        raise ParameterError(f"Cannot decompose non-positive integer {n}")
    f, s = 1, 1
    for prime, exponent in factorint(n).items():
        f *= prime ** (exponent // 2)
        if exponent % 2:
            s *= prime
    return f, s


@total_ordering
class QuadraticNumber:
    """Exact real number (a + b*sqrt(d)) / c.

    The representation is kept canonical: c > 0 and gcd(a, b, c) = 1.
    b = 0 is allowed, such values are rational but stay in the field so
    that mixed arithmetic never leaves exact integers.
    """

    __slots__ = ('a', 'b', 'c', 'd')

    def __init__(self, a: int, b: int, c: int, d: int):
        a, b, c, d = int(a), int(b), int(c), int(d)
        if c == 0:
            raise ZeroDivisionError("QuadraticNumber with zero denominator")
        if d <= 1 or gmpy2.is_square(d):
            raise ParameterError(f"Radicand {d} must be a non-square integer > 1")
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def from_surd(cls, a: int, b: int, c: int, n: int) -> Union['QuadraticNumber', Fraction]:
        """Build (a + b*sqrt(n)) / c, pulling square factors out of n.

        Returns a Fraction when n is a perfect square.
        """
        if n < 0:
            raise ParameterError(f"Negative radicand {n}")
        if n == 0 or gmpy2.is_square(n):
            return Fraction(a + b * int(gmpy2.isqrt(n)), c)
        f, s = squarefree_decompose(n)
        return cls(a, b * f, c, s)

    @classmethod
    def from_rational(cls, value: Rational, d: int) -> 'QuadraticNumber':
        value = Fraction(value)
        return cls(value.numerator, 0, value.denominator, d)

    # -- inspection -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    def to_spec(self) -> str:
        """Serialise as 'a,b,c,d'"""
        return f"{self.a},{self.b},{self.c},{self.d}"

    def sign(self) -> int:
        """Sign of the value using integer arithmetic only"""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        # opposite signs: compare a**2 against b**2 * d
        diff = a * a - b * b * self.d
        if a > 0:
            return (diff > 0) - (diff < 0)
        return (diff < 0) - (diff > 0)

    def conjugate(self) -> 'QuadraticNumber':
        return QuadraticNumber(self.a, -self.b, self.c, self.d)

    def norm(self) -> Fraction:
        """Product with the conjugate"""
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.c * self.c)

    # -- coercion -------------------------------------------------------

    def _coerce(self, other) -> Optional['QuadraticNumber']:
        if isinstance(other, QuadraticNumber):
            if other.d == self.d:
                return other
            if other.b == 0:
                return QuadraticNumber(other.a, 0, other.c, self.d)
            if self.b == 0:
                return None
            raise ParameterError(
                f"Cannot mix quadratic fields sqrt({self.d}) and sqrt({other.d})")
        if isinstance(other, (int, Fraction)):
            value = Fraction(other)
            return QuadraticNumber(value.numerator, 0, value.denominator, self.d)
        return None

    def _lift(self, other) -> Tuple['QuadraticNumber', 'QuadraticNumber']:
        """Return (self, other) over a common radicand"""
        if isinstance(other, QuadraticNumber) and other.d != self.d and self.b == 0 and other.b != 0:
            return QuadraticNumber(self.a, 0, self.c, other.d), other
        coerced = self._coerce(other)
        if coerced is None:
            raise TypeError(f"Unsupported operand {other!r}")
        return self, coerced

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        x, y = self._lift(other)
        return QuadraticNumber(x.a * y.c + y.a * x.c, x.b * y.c + y.b * x.c, x.c * y.c, x.d)

    __radd__ = __add__

    def __neg__(self) -> 'QuadraticNumber':
        return QuadraticNumber(-self.a, -self.b, self.c, self.d)

    def __pos__(self) -> 'QuadraticNumber':
        return self

    def __sub__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        x, y = self._lift(other)
        return QuadraticNumber(
            x.a * y.a + x.b * y.b * x.d,
            x.a * y.b + x.b * y.a,
            x.c * y.c,
            x.d,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> 'QuadraticNumber':
        num = self.a * self.a - self.b * self.b * self.d
        if num == 0:
            raise ZeroDivisionError("QuadraticNumber division by zero")
        # c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
        return QuadraticNumber(self.c * self.a, -self.c * self.b, num, self.d)

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        x, y = self._lift(other)
        return x * y.reciprocal()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.reciprocal() * other

    def __pow__(self, exponent: int) -> 'QuadraticNumber':
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = QuadraticNumber(1, 0, 1, self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __abs__(self) -> 'QuadraticNumber':
        return -self if self.sign() < 0 else self

    # -- comparison -----------------------------------------------------

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        try:
            return self._cmp(other) == 0
        except ParameterError:
            return False

    def __lt__(self, other) -> bool:
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    # -- rounding -------------------------------------------------------

    def __floor__(self) -> int:
        b2d = self.b * self.b * self.d
        if self.b > 0:
            whole = self.a + int(gmpy2.isqrt(b2d))
        elif self.b < 0:
            # sqrt(b2d) is irrational, so floor(-x) = -floor(x) - 1
            whole = self.a - int(gmpy2.isqrt(b2d)) - 1
        else:
            whole = self.a
        return whole // self.c

    def __ceil__(self) -> int:
        return -(-self).__floor__()

    def floor(self) -> int:
        return self.__floor__()

    def ceil(self) -> int:
        return self.__ceil__()

    def enclose(self, tolerance: Fraction) -> Tuple[Fraction, Fraction]:
        """Rational lo <= value <= hi with hi - lo <= tolerance"""
        if self.b == 0:
            value = Fraction(self.a, self.c)
            return value, value
        tolerance = Fraction(tolerance)
        if tolerance <= 0:
            raise ParameterError("Enclosure tolerance must be positive")
        need = -(-tolerance.denominator // (tolerance.numerator * self.c))
        k = max(need - 1, 0).bit_length()
        scale = 1 << k
        s = int(gmpy2.isqrt(self.b * self.b * self.d * scale * scale))
        base = self.a * scale
        denom = self.c * scale
        if self.b > 0:
            return Fraction(base + s, denom), Fraction(base + s + 1, denom)
        return Fraction(base - s - 1, denom), Fraction(base - s, denom)

    # -- rendering ------------------------------------------------------

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(Fraction(self.a, self.c))
        sign = '+' if self.b > 0 else '-'
        body = f"{self.a} {sign} {abs(self.b)}*sqrt({self.d})"
        return f"({body})" if self.c == 1 else f"({body})/{self.c}"


@dataclass(frozen=True)
class ContinuedFraction:
    """Simple continued fraction [a0; a1, a2, ...].

    When period_start is set the terms from that index on repeat forever.
    """
    terms: Tuple[int, ...]
    period_start: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(int(term) for term in self.terms))
        if not self.terms:
            raise ParameterError("Continued fraction needs at least one term")
        for i, term in enumerate(self.terms[1:], start=1):
            if term < 1:
                raise ParameterError(f"Partial quotient a_{i} = {term} must be >= 1")
        if self.period_start is not None:
            if not 0 <= self.period_start < len(self.terms):
                raise ParameterError(f"Period start {self.period_start} outside the term list")
            if self.period_start == 0 and self.terms[0] < 1:
                raise ParameterError("A purely periodic expansion needs a0 >= 1")

    @property
    def is_periodic(self) -> bool:
        return self.period_start is not None

    @property
    def period(self) -> Tuple[int, ...]:
        if self.period_start is None:
            return ()
        return self.terms[self.period_start:]

    def term(self, index: int) -> Optional[int]:
        """The index-th partial quotient, None past the end of a finite expansion"""
        if index < len(self.terms):
            return self.terms[index]
        if self.period_start is None:
            return None
        period = len(self.terms) - self.period_start
        return self.terms[self.period_start + (index - self.period_start) % period]

    def iter_terms(self) -> Iterator[int]:
        index = 0
        while True:
            term = self.term(index)
            if term is None:
                return
            yield term
            index += 1

    def max_partial_quotient(self) -> int:
        """Largest a_i over i >= 1 (one full period included)"""
        tail = [self.term(i) for i in range(1, len(self.terms) + 1)]
        tail = [term for term in tail if term is not None]
        return max(tail) if tail else 0

    def to_quadratic(self) -> QuadraticNumber:
        """Exact value of a periodic expansion"""
        if self.period_start is None:
            raise ParameterError("A finite continued fraction is rational")
        period = self.period
        # convergents of the repeating block
        p_prev, p = 1, period[0]
        q_prev, q = 0, 1
        for term in period[1:]:
            p_prev, p = p, term * p + p_prev
            q_prev, q = q, term * q + q_prev
        # y = (p*y + p_prev) / (q*y + q_prev), take the root y > 1
        lin = q_prev - p
        disc = lin * lin + 4 * q * p_prev
        y = QuadraticNumber.from_surd(-lin, 1, 2 * q, disc)
        if isinstance(y, Fraction):
            raise ParameterError(f"Period {period} does not give a quadratic irrational")

        # prefix convergents p_{s-1}/q_{s-1}, p_{s-2}/q_{s-2}
        P_prev, P = 0, 1
        Q_prev, Q = 1, 0
        for term in self.terms[:self.period_start]:
            P_prev, P = P, term * P + P_prev
            Q_prev, Q = Q, term * Q + Q_prev
        return (y * P + P_prev) / (y * Q + Q_prev)

    def __str__(self) -> str:
        parts = [str(term) for term in self.terms]
        if self.period_start is not None:
            parts[self.period_start] = '(' + parts[self.period_start]
            parts[-1] += ')...'
        if len(parts) == 1:
            return f"[{parts[0]}]"
        return f"[{parts[0]}; {', '.join(parts[1:])}]"
