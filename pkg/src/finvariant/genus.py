"""Level-N Eisenstein-type series, the elliptic-genus expansion, and numeric oracles.

Exact side: the weight-k coefficient series G_hat of the level-N genus
expansion Ell(x) = 1 + sum_k G_hat_k x^k/(k-1)!, their constant-free parts
G_tilde, the quaternionic expansion, and the weight-two combination g2.

Numeric side: floating-point evaluation of the genus via the standard
triple-product form of the Jacobi-type Phi function, and of the auxiliary
coth-plus-lattice sum psi. These exist purely as oracles for the exact series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (CycNum, EpsPoly, bernoulli,
                       eisenstein_weight_one_constant)
from .qseries import QSeries, divisor_weighted_series, divisors, sigma


def weight_constant(level: int, k: int) -> CycNum:
    """Constant term c_k of G_hat_k: 1/2 + zeta/(1-zeta) for k = 1, B_k/k above."""
    if k < 1:
        raise ValueError("weight must be >= 1")
    if k == 1:
        return eisenstein_weight_one_constant(level)
    return CycNum.from_rational(level, bernoulli(k) / k)


def g_hat(level: int, k: int, prec: int) -> QSeries:
    """The weight-k coefficient series of the level-N genus expansion.

    G_hat_k = c_k - sum_{n>=1} (sum_{d|n} (zeta^(-n/d) + (-1)^k zeta^(n/d)) d^(k-1)) q^n.
    """
    if level < 2:
        raise ValueError("level must be >= 2")
    sign = 1 if k % 2 == 0 else -1
    series = divisor_weighted_series(level, prec, k, sign)
    return QSeries(level, prec, (EpsPoly.constant(weight_constant(level, k)),)) - series


def g_tilde(level: int, k: int, prec: int) -> QSeries:
    """G_hat_k with its constant term removed (starts at q^1)."""
    f = g_hat(level, k, prec)
    return f - QSeries(f.level, prec, (f.coefficient(0),))


def g_tilde_level1(level: int, k: int, prec: int) -> QSeries:
    """Constant-free classical Eisenstein series sum_{n>=1} sigma_(k-1)(n) q^n.

    Normalization: G_k = -B_k/(2k) + sum sigma_(k-1)(n) q^n, constant removed.
    Represented at the given cyclotomic level so it can join level-N arithmetic.
    """
    values = [0] + [sigma(n, k - 1) for n in range(1, prec)]
    return QSeries.from_rationals(level, prec, values)


def eisenstein_level1(level: int, k: int, prec: int) -> QSeries:
    """Classical weight-k Eisenstein series G_k = -B_k/(2k) + sum sigma_(k-1)(n) q^n."""
    f = g_tilde_level1(level, k, prec)
    return f + QSeries.from_rationals(level, prec, (-bernoulli(k) / (2 * k),))


@dataclass(frozen=True)
class EllExpansion:
    """Taylor data of the genus: Ell(x) = 1 + sum_k g_hat[k-1] x^k/(k-1)!."""

    level: int
    x_order: int
    prec: int
    g_hat: tuple[QSeries, ...]

    def x_coefficient(self, k: int) -> QSeries:
        """Coefficient of x^k, i.e. g_hat_k / (k-1)!."""
        if not 1 <= k <= self.x_order:
            raise IndexError(f"x-order {k} outside 1..{self.x_order}")
        return self.g_hat[k - 1] * Fraction(1, math.factorial(k - 1))


def ell_expansion(level: int, x_order: int, prec: int) -> EllExpansion:
    """Assemble g_hat_k for k = 1..x_order with the 1/(k-1)! bookkeeping exposed."""
    if x_order < 1:
        raise ValueError("x_order must be >= 1")
    return EllExpansion(level, x_order, prec,
                        tuple(g_hat(level, k, prec) for k in range(1, x_order + 1)))


@dataclass(frozen=True)
class TwistTable:
    """Exact coefficient pairs of the line-bundle-twisted reduced genus.

    entry (n, d), defined for d | n with 1 <= n < prec, is the pair
    (-zeta^(-n/d), +zeta^(n/d)) multiplying ch(lambda^d) and ch(lambda^(-d)).
    """

    level: int
    prec: int
    entries: dict[tuple[int, int], tuple[CycNum, CycNum]]

    def pair(self, n: int, d: int) -> tuple[CycNum, CycNum]:
        return self.entries[(n, d)]


def twist_table(level: int, prec: int) -> TwistTable:
    entries = {}
    for n in range(1, prec):
        for d in divisors(n):
            j = n // d
            entries[(n, d)] = (-CycNum.zeta(level, -j), CycNum.zeta(level, j))
    return TwistTable(level, prec, entries)


def _ell_poly(level: int, x_order: int, prec: int,
              negate_x: bool) -> list[QSeries]:
    """Coefficients (in x) of Ell(+-x) up to x^x_order; index j holds x^j."""
    out = [QSeries.one(level, prec)]
    for k in range(1, x_order + 1):
        c = g_hat(level, k, prec) * Fraction(1, math.factorial(k - 1))
        if negate_x and k % 2 == 1:
            c = -c
        out.append(c)
    return out


def ell_quaternionic(level: int, c2_order: int, prec: int) -> list[QSeries]:
    """x^2-power coefficients of (1 - Ell(x)Ell(-x)) / x^2.

    For a quaternionic line bundle with Chern roots +-x one has c2 = -x^2,
    so entry 0 is the weight-two combination g2 = G_hat_1^2 - 2 G_hat_2 and
    entry 1 collapses to minus the classical weight-four Eisenstein series,
    independent of the level.
    """
    if c2_order < 0:
        raise ValueError("c2_order must be >= 0")
    x_order = 2 * c2_order + 2
    plus = _ell_poly(level, x_order, prec, negate_x=False)
    minus = _ell_poly(level, x_order, prec, negate_x=True)
    entries = []
    for j in range(c2_order + 1):
        deg = 2 * j + 2
        acc = QSeries.zero(level, prec)
        for i in range(deg + 1):
            if plus[i] and minus[deg - i]:
                acc = acc + plus[i] * minus[deg - i]
        entries.append(-acc)
    return entries


def g2(level: int, prec: int) -> QSeries:
    """The weight-two modular combination G_hat_1^2 - 2 G_hat_2.

    Contract: g2 - 1/12 expands integrally over Z[zeta, 1/level].
    """
    g1 = g_hat(level, 1, prec)
    return g1 * g1 - g_hat(level, 2, prec) * 2


# ---------------------------------------------------------------------------
# Numeric oracles


class PoleError(ArithmeticError):
    """Evaluation point lies on the pole lattice 2*pi*i*(Z + tau*Z)."""


class DivergenceError(ArithmeticError):
    """Evaluation point outside the absolute-convergence region."""


def _check_tau(tau: complex) -> complex:
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    return cmath.exp(2j * cmath.pi * tau)


def _on_pole_lattice(tau: complex, x: complex, tol: float = 1e-9) -> bool:
    w = x / (2j * cmath.pi)
    v = w.imag / tau.imag if tau.imag else 0.0
    u = w.real - v * tau.real
    return (abs(u - round(u)) < tol and abs(v - round(v)) < tol)


def phi_numeric(tau: complex, x: complex, terms: int = 200) -> complex:
    """Triple-product evaluation of the odd Jacobi-type function Phi(tau, x).

    Phi = (e^(x/2) - e^(-x/2)) * prod_{n>=1} (1-q^n e^x)(1-q^n e^-x)/(1-q^n)^2,
    truncated after `terms` factors. Vanishes exactly on 2*pi*i*(Z + tau*Z).
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    q = _check_tau(tau)
    acc = cmath.exp(x / 2) - cmath.exp(-x / 2)
    ex, emx = cmath.exp(x), cmath.exp(-x)
    qn = 1 + 0j
    for _ in range(terms):
        qn *= q
        acc *= (1 - qn * ex) * (1 - qn * emx) / (1 - qn) ** 2
    return acc


def ell_numeric(level: int, tau: complex, x: complex,
                terms: int = 200) -> complex:
    """Floating-point genus x * Phi(tau, x - 2*pi*i/N) / (Phi(tau, x) Phi(tau, -2*pi*i/N)).

    Raises PoleError when x sits on the pole lattice (away from the removable
    origin).
    """
    shift = 2j * cmath.pi / level
    if _on_pole_lattice(tau, x) and abs(x) > 1e-9:
        raise PoleError(f"x = {x} lies on the pole lattice")
    if abs(x) < 1e-12:
        return 1.0 + 0j
    return (x * phi_numeric(tau, x - shift, terms)
            / (phi_numeric(tau, x, terms) * phi_numeric(tau, -shift, terms)))


def psi_numeric(level: int, tau: complex, x: complex,
                terms: int = 400) -> complex:
    """Direct evaluation of the coth-plus-lattice sum.

    psi(x) = coth(x/2)/2 + sum_{n>=1} [zeta^n q^n e^-x/(1-q^n e^-x)
                                       - zeta^-n q^n e^x/(1-q^n e^x)],
    absolutely convergent for |q| < min(|e^x|, |e^-x|).
    """
    q = _check_tau(tau)
    if abs(q) >= math.exp(-abs(x.real)):
        raise DivergenceError("|q| >= min(|e^x|, |e^-x|): sum diverges")
    z = cmath.exp(2j * cmath.pi / level)
    ex, emx = cmath.exp(x), cmath.exp(-x)
    acc = 0.5 / cmath.tanh(x / 2)
    qn = 1 + 0j
    zn = 1 + 0j
    for _ in range(terms):
        qn *= q
        zn *= z
        acc += zn * qn * emx / (1 - qn * emx)
        acc -= qn * ex / ((1 - qn * ex) * zn)
    return acc


def numeric_taylor(fn, order: int, radius: float = 0.4,
                   samples: int = 64) -> list[complex]:
    """Taylor coefficients a_0..a_order of an analytic fn via a circle DFT.

    Independent finite-difference-style extraction used by the oracle tests:
    a_k = (1/m) sum_j fn(r e^(2 pi i j/m)) e^(-2 pi i j k/m) / r^k.
    """
    if samples <= order:
        raise ValueError("need more samples than the requested order")
    values = [fn(radius * cmath.exp(2j * cmath.pi * j / samples))
              for j in range(samples)]
    out = []
    for k in range(order + 1):
        acc = 0j
        for j, v in enumerate(values):
            acc += v * cmath.exp(-2j * cmath.pi * j * k / samples)
        out.append(acc / (samples * radius ** k))
    return out


def series_value(f: QSeries, tau: complex) -> complex:
    """Numeric value of an eps-free exact series at q = e^(2 pi i tau)."""
    q = _check_tau(tau)
    acc = 0j
    qn = 1 + 0j
    for c in f.coeffs:
        if not c.is_eps_free():
            raise ValueError("cannot evaluate a series with eps-part")
        acc += c.constant_part().to_complex() * qn
        qn *= q
    return acc
