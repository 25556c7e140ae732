# parameters.py
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

from fractions import Fraction
from typing import Optional, Tuple

import gmpy2

from ..errors import ParameterError
from ..models.sieve import LAMBDA, KappaMode, Params, RegimeFlags
from .exact_arithmetic import compare_rational_power, floor_rational_power, floor_root
from .logger_service import get_logger

logger = get_logger('parameters')

STRICT_MIN_R = 2 ** 422
STRICT_MAX_DELTA = Fraction(1, 2 ** 1622)


def standard_kappa(R: int, delta: Fraction) -> Tuple[Fraction, bool]:
    """kappa = delta * floor(R**(6/5)) and whether the root was exact"""
    root, exact = gmpy2.iroot(R ** 6, 5)
    return Fraction(delta) * int(root), bool(exact)


def make_params(R: int, delta: Fraction, kappa: Optional[Fraction] = None,
                strict_mode: bool = False, lam: Fraction = LAMBDA) -> Params:
    """Build and validate Params; kappa=None selects the standard choice"""
    delta = Fraction(delta)
    if R < 2:
        raise ParameterError(f"R must be >= 2, got {R}")
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")

    if kappa is None:
        kappa, exact = standard_kappa(R, delta)
        mode = KappaMode.STANDARD
    else:
        kappa, exact = Fraction(kappa), True
        mode = KappaMode.USER
    if kappa <= 0:
        raise ParameterError(f"kappa must be positive, got {kappa}")
    if kappa / R > 1:
        raise ParameterError(f"J_1 of length kappa/R = {kappa / R} does not fit in [0, 1]")

    params = Params(R=R, delta=delta, kappa=kappa, lam=Fraction(lam),
                    strict_mode=strict_mode, kappa_mode=mode, kappa_exact=exact)
    if not exact:
        logger.info(f"R={R} is not a fifth power, kappa rounded down to {kappa}")

    if strict_mode:
        if R < STRICT_MIN_R:
            raise ParameterError(f"strict mode needs R >= 2^422, got R={R}")
        if delta > STRICT_MAX_DELTA:
            raise ParameterError("strict mode needs delta <= 2^-1622")
        if not kappa_small(params):
            raise ParameterError("strict mode needs kappa <= 1/(3 R^(lambda/2))")
    return params


def kappa_small(params: Params) -> bool:
    """kappa <= 1 / (3 R**(lambda/2))"""
    return compare_rational_power(3 * params.kappa, params.R, -params.lam / 2) <= 0


def k_range(R: int) -> range:
    """All k with 1 <= 2**k <= R"""
    return range(0, R.bit_length())


def _check_k(params: Params, k: int):
    if k not in k_range(params.R):
        raise ParameterError(f"k={k} outside 0..{params.R.bit_length() - 1} for R={params.R}")


def derived_dk(params: Params, k: int) -> int:
    """d_k = floor((kappa/delta * 2**k/R)**(2/3) * R**(2/165))"""
    _check_k(params, k)
    ratio = params.kappa / params.delta * Fraction(2 ** k, params.R)
    # X**165 = ratio**110 * R**2
    powered = ratio ** 110 * params.R ** 2
    return floor_root(powered.numerator // powered.denominator, 165)


def derived_Kk(params: Params, k: int) -> Fraction:
    """K_k = (delta/kappa) * R**2 / 2**k"""
    _check_k(params, k)
    return params.delta / params.kappa * Fraction(params.R ** 2, 2 ** k)


def dyadic_class(H: int, n: int, R: int) -> int:
    """The k with 2**k * R**(n-1) <= H < 2**(k+1) * R**(n-1)"""
    low = R ** (n - 1)
    if not low <= H < low * R:
        raise ParameterError(f"H={H} outside [R^{n - 1}, R^{n}) for R={R}")
    return (H // low).bit_length() - 1


def slope_class(B: int, n: int, params: Params) -> int:
    """0 when B > R**(n/3 - lambda), otherwise the l >= 1 whose bracket holds B.

    A B on the shared endpoint of two brackets goes to the smaller l.
    """
    if B < 1:
        raise ParameterError(f"slope_class needs B >= 1, got {B}")

    def exponent(l: int) -> Fraction:
        return Fraction(n, 3) - params.lam * l

    if compare_rational_power(B, params.R, exponent(1)) > 0:
        return 0
    l = 1
    while compare_rational_power(B, params.R, exponent(l + 1)) < 0:
        l += 1
    return l


def regime_flags(params: Params) -> RegimeFlags:
    """Evaluate every large-R condition the counting argument relies on"""
    R = params.R
    floor_8_55 = floor_rational_power(R, Fraction(8, 55))
    dk_lower = dk_upper = dk_kk = True
    for k in k_range(R):
        d = derived_dk(params, k)
        if d < floor_8_55:
            dk_lower = False
        if compare_rational_power(d, R, Fraction(134, 165)) > 0:
            dk_upper = False
        if compare_rational_power(d * derived_Kk(params, k), R, Fraction(52, 55)) > 0:
            dk_kk = False
    return RegimeFlags(
        r_large=R >= STRICT_MIN_R,
        delta_small=params.delta <= STRICT_MAX_DELTA,
        delta_vs_r=compare_rational_power(3 * params.delta, R, Fraction(-2533, 660)) < 0,
        kappa_small=kappa_small(params),
        floor_r_8_55_ge_2=floor_8_55 >= 2,
        dk_lower=dk_lower,
        dk_upper=dk_upper,
        dk_kk_product=dk_kk,
    )


def estimate_work(params: Params, depth: int) -> int:
    """Coarse count of line and child tests for `depth` steps, used only as a gate.

    Lines with H < R**n number about 4 R**(2n/3); each step also visits up
    to R**n children. Where J_1 sits is ignored: with |J_1| = kappa/R small,
    each (A, B) pair contributes only a few C values to any window.
    """
    R = params.R
    total = 0
    for n in range(1, depth + 1):
        total += 4 * floor_root(R ** (2 * n), 3) + R ** n
    return total
