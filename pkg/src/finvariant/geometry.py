"""Spectral and geometric inputs for the worked examples.

Circle spectra (exact eps-linear xi-values and a Hurwitz-zeta oracle),
Chebyshev polynomials and the induced operations on the representation ring
of SU(2), the SU(3)/SU(2) kernel-parity enumeration, the quaternionic-plane
index, and the symbolic Chern-Simons computation on the five-dimensional
homogeneous space with global coframe (L1*, L2*, w1*, w2*, w3*).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

from .exactnum import EpsPoly, IntPoly, bernoulli

_ZERO = Fraction(0)
_ONE = Fraction(1)


class CalibrationError(ArithmeticError):
    """The norm-shell enumeration lost its expected real-line solution."""


# ---------------------------------------------------------------------------
# Circle spectra


def circle_xi(level: int, d: int, use_eps: bool = True) -> EpsPoly:
    """xi-representative 1/2 - d*eps of the d-th power twist on the circle.

    The twisted operator on the circle has spectrum 2*pi*(k + d*eps), whence
    (eta + dim ker)/2 = 1/2 - d*eps mod Z. d = 0 is the untwisted case and is
    handled by the trivial-bundle example, not here.
    """
    if d == 0:
        raise ValueError("d = 0 is the e-invariant input, not a twist")
    if not use_eps:
        return EpsPoly.rational(level, Fraction(1, 2))
    return EpsPoly.linear(level, Fraction(1, 2), -d)


def hurwitz_zeta_zero(x: float, correction_terms: int = 12,
                      cutoff: int = 40) -> float:
    """Numeric Hurwitz zeta value at s = 0 via Euler-Maclaurin continuation.

    Oracle contract: the continuation gives 1/2 - x on (0, 1), so the circle
    eta-combination zeta(0, eps) - zeta(0, 1-eps) evaluates to 1 - 2*eps.
    """
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    s = 0.0
    # sum_{n<M} (n+x)^-s  +  (M+x)^(1-s)/(s-1)  +  (M+x)^-s / 2  + corrections
    total = float(cutoff)  # each of the M = cutoff leading terms is (n+x)^0 = 1
    total += -((cutoff + x) ** (1.0 - s)) / (1.0 - s)
    total += 0.5 * (cutoff + x) ** (-s)
    poch = s  # s*(s+1)*...*(s+2j-2), vanishes identically at s = 0
    power = (cutoff + x) ** (-s - 1.0)
    for j in range(1, correction_terms + 1):
        b = float(bernoulli(2 * j))
        total += b / math.factorial(2 * j) * poch * power
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power /= (cutoff + x) ** 2
    return total


# ---------------------------------------------------------------------------
# Chebyshev polynomials and SU(2) operations


@lru_cache(maxsize=None)
def chebyshev(kind: str, d: int) -> IntPoly:
    """Chebyshev polynomial of the first (T) or second (U) kind.

    T_0 = 1, T_1 = x, T_{n+1} = 2x T_n - T_{n-1}; U likewise with U_1 = 2x.
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    if kind not in ("T", "U"):
        raise ValueError("kind must be 'T' or 'U'")
    if d == 0:
        return IntPoly.one()
    if d == 1:
        return IntPoly.x() if kind == "T" else IntPoly.x() * 2
    two_x = IntPoly.x() * 2
    prev, cur = chebyshev(kind, d - 2), chebyshev(kind, d - 1)
    return two_x * cur - prev


@lru_cache(maxsize=None)
def adams_psi_poly(d: int) -> IntPoly:
    """2*T_d(x/2) expanded with integer coefficients.

    Expresses the d-th Adams operation on a quaternionic line bundle in terms
    of complex tensor powers. Integer recurrence: A_0 = 2, A_1 = x,
    A_{n+1} = x*A_n - A_{n-1}.
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    if d == 0:
        return IntPoly((2,))
    if d == 1:
        return IntPoly.x()
    return IntPoly.x() * adams_psi_poly(d - 1) - adams_psi_poly(d - 2)


def psi_as_irreps(d: int) -> dict[int, int]:
    """The d-th Adams operation as the virtual module V_{d+1} - V_{d-1}.

    Keys are dimensions of SU(2) irreducibles, values are (virtual)
    multiplicities. Requires d >= 2; use adams_psi_poly for smaller d.
    """
    if d < 2:
        raise ValueError("d >= 2 required; smaller d handled by adams_psi_poly")
    return {d + 1: 1, d - 1: -1}


def su2_tensor(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    """Tensor product of (virtual) SU(2) modules by dimension.

    Clebsch-Gordan: V_m (x) V_n = V_{|m-n|+1} + V_{|m-n|+3} + ... + V_{m+n-1},
    extended bilinearly; zero multiplicities are dropped.
    """
    out: dict[int, int] = {}
    for m, am in a.items():
        if not am:
            continue
        for n, bn in b.items():
            if not bn:
                continue
            for k in range(abs(m - n) + 1, m + n, 2):
                out[k] = out.get(k, 0) + am * bn
    return {k: v for k, v in out.items() if v}


def su2_dim(decomp: Mapping[int, int]) -> int:
    return sum(k * v for k, v in decomp.items())


SPINOR_MODULE: dict[int, int] = {1: 2, 2: 1}
"""SU(2)-module structure of the spinors of the 5-dimensional isotropy module:
two trivial summands plus the defining 2-dimensional module."""


# ---------------------------------------------------------------------------
# SU(3): dimensions, branching, kernel parities


def su3_dim(m: int, n: int) -> int:
    """Dimension (m+1)(n+1)(m+n+2)/2 of the SU(3) module with labels (m, n)."""
    if m < 0 or n < 0:
        raise ValueError("labels must be nonnegative")
    return (m + 1) * (n + 1) * (m + n + 2) // 2


def su3_restrict_su2(m: int, n: int) -> dict[int, int]:
    """Branching of the (m, n) module to the upper-left SU(2) block.

    Via interlacing patterns for the highest weight (m+n, n, 0): each pair
    mu1 in [n, m+n], mu2 in [0, n] contributes the irreducible of dimension
    mu1 - mu2 + 1.
    """
    out: dict[int, int] = {}
    for mu1 in range(n, m + n + 1):
        for mu2 in range(0, n + 1):
            k = mu1 - mu2 + 1
            out[k] = out.get(k, 0) + 1
    return out


def _norm_shell(k: int) -> Iterator[tuple[int, int]]:
    """Dominant labels (m, n) with ||(m,n)+rho||^2 = (k+1)^2.

    In the hexagonal-lattice embedding the squared norm of (m,n)+rho is
    (a^2 + a*b + b^2)/3 with a = m+1, b = n+1, so the shell condition is
    a^2 + a*b + b^2 = 3*(k+1)^2.
    """
    target = 3 * (k + 1) ** 2
    a = 1
    while a * a <= target:
        # solve b^2 + a*b + (a^2 - target) = 0 over positive integers
        disc = a * a - 4 * (a * a - target)
        root = math.isqrt(disc)
        if root * root == disc and (root - a) % 2 == 0:
            b = (root - a) // 2
            if b >= 1:
                yield (a - 1, b - 1)
        a += 1


def su3_kernel_parity(k: int) -> int:
    """Parity of the kernel of the twisted operator for the 2k+2-dimensional twist.

    Enumerates all dominant labels on the norm shell ||gamma + rho_G||^2 =
    ||kappa + rho_H||^2 = (k+1)^2; conjugate pairs (m, n) <-> (n, m) carry
    equal even contributions and are discarded, and each self-conjugate
    label contributes dim W * dim Hom(W|_{SU(2)}, spinors (x) V_{2k+2}).
    Contract (checked by the acceptance suite): result == (k+1) mod 2.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    shell = list(_norm_shell(k))
    if (k, k) not in shell:
        raise CalibrationError(
            f"no real-line solution (k, k) on the norm shell for k = {k}")
    target = su2_tensor(SPINOR_MODULE, {2 * k + 2: 1})
    total = 0
    for m, n in shell:
        if m != n:
            continue  # conjugate pair: even contribution
        branch = su3_restrict_su2(m, n)
        hom_dim = sum(mult * target.get(dim, 0) for dim, mult in branch.items())
        total += su3_dim(m, n) * hom_dim
    return total % 2


def su3_psi_twist_kernel_parity(d: int) -> int:
    """Kernel parity for the d-th Adams-operation twist, odd d only.

    The virtual twist V_{d+1} - V_{d-1} reduces to the parities at
    k = (d-1)/2 and (d-3)/2 (single term for d = 1). Contract: equals 1.
    """
    if d < 1 or d % 2 == 0:
        raise ValueError("d must be odd and positive")
    if d == 1:
        return su3_kernel_parity(0)
    return (su3_kernel_parity((d - 1) // 2)
            + su3_kernel_parity((d - 3) // 2)) % 2


# ---------------------------------------------------------------------------
# The quaternionic plane index


def hp1_index(d: int) -> int:
    """Index d^2 of the chiral twisted operator on the quaternionic plane.

    Derived symbolically: the character of the d-th Adams twist is
    e^(dx) + e^(-dx), whose 4-form part is d^2 x^2 = -d^2 c2, paired against
    the fundamental class via the normalization integral of c2 being -1.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    ch2_coefficient = Fraction(d * d)      # (dx)^2/2! + (-dx)^2/2! = d^2 x^2
    c2_pairing = Fraction(-1)              # integral of c2 over the plane
    index = -ch2_coefficient * c2_pairing  # x^2 = -c2
    assert index.denominator == 1
    return int(index)


# ---------------------------------------------------------------------------
# Exterior calculus on the 5-dimensional homogeneous space

# Coefficients live in Q[y1, y2, y3] / (y1^2 + y2^2 + y3^2 - 1), normal form
# with y3-degree <= 1 (substitute y3^2 = 1 - y1^2 - y2^2); monomial keys are
# exponent triples.

PolyY = dict[tuple[int, int, int], Fraction]


def poly_zero() -> PolyY:
    return {}


def poly_const(c) -> PolyY:
    c = Fraction(c)
    return {(0, 0, 0): c} if c else {}


def poly_y(i: int) -> PolyY:
    e = [0, 0, 0]
    e[i] = 1
    return {tuple(e): _ONE}


def poly_add(a: PolyY, b: PolyY) -> PolyY:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, _ZERO) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def poly_scale(a: PolyY, c: Fraction) -> PolyY:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def poly_mul(a: PolyY, b: PolyY) -> PolyY:
    out: PolyY = {}
    for (e1, e2, e3), va in a.items():
        for (f1, f2, f3), vb in b.items():
            k = (e1 + f1, e2 + f2, e3 + f3)
            s = out.get(k, _ZERO) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return poly_normalize(out)


def poly_normalize(a: PolyY) -> PolyY:
    """Reduce y3-powers >= 2 through y3^2 = 1 - y1^2 - y2^2."""
    work = dict(a)
    out: PolyY = {}
    while work:
        (e1, e2, e3), v = work.popitem()
        if e3 <= 1:
            s = out.get((e1, e2, e3), _ZERO) + v
            if s:
                out[(e1, e2, e3)] = s
            else:
                out.pop((e1, e2, e3), None)
            continue
        # y3^e3 = y3^(e3-2) * (1 - y1^2 - y2^2)
        for delta, coeff in (((0, 0, -2), v), ((2, 0, -2), -v), ((0, 2, -2), -v)):
            k = (e1 + delta[0], e2 + delta[1], e3 + delta[2])
            work[k] = work.get(k, _ZERO) + coeff
            if not work[k]:
                del work[k]
    return out


def poly_diff(a: PolyY, i: int) -> PolyY:
    """Partial derivative with respect to y_{i+1} of a normal form."""
    out: PolyY = {}
    for exps, v in a.items():
        e = exps[i]
        if e:
            k = list(exps)
            k[i] = e - 1
            key = tuple(k)
            s = out.get(key, _ZERO) + v * e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


COFRAME = ("L1*", "L2*", "w1*", "w2*", "w3*")


class ExtForm:
    """Exterior-algebra element over the 5-element coframe with PolyY coefficients.

    Stored on strictly increasing index tuples; wedge products resort with the
    permutation sign and coefficients are kept in sphere-relation normal form.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], PolyY] | None = None):
        self.terms: dict[tuple[int, ...], PolyY] = {}
        if terms:
            for k, v in terms.items():
                vv = poly_normalize(v)
                if vv:
                    self.terms[k] = vv

    @classmethod
    def zero(cls) -> "ExtForm":
        return cls()

    @classmethod
    def function(cls, coeff: PolyY) -> "ExtForm":
        return cls({(): coeff})

    @classmethod
    def basis(cls, index: int, coeff: PolyY | None = None) -> "ExtForm":
        return cls({(index,): coeff if coeff is not None else poly_const(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtForm):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "ExtForm") -> "ExtForm":
        out = {k: dict(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            merged = poly_add(out.get(k, {}), v)
            if merged:
                out[k] = merged
            else:
                out.pop(k, None)
        return ExtForm(out)

    def __sub__(self, other: "ExtForm") -> "ExtForm":
        return self + other.scale(Fraction(-1))

    def __neg__(self) -> "ExtForm":
        return self.scale(Fraction(-1))

    def scale(self, c) -> "ExtForm":
        c = Fraction(c)
        if not c:
            return ExtForm.zero()
        return ExtForm({k: poly_scale(v, c) for k, v in self.terms.items()})

    def mul_poly(self, p: PolyY) -> "ExtForm":
        if not p:
            return ExtForm.zero()
        return ExtForm({k: poly_mul(v, p) for k, v in self.terms.items()})

    def wedge(self, other: "ExtForm") -> "ExtForm":
        out: dict[tuple[int, ...], PolyY] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                if set(ka) & set(kb):
                    continue
                merged, sign = _merge_indices(ka, kb)
                coeff = poly_mul(va, vb)
                if sign < 0:
                    coeff = poly_scale(coeff, Fraction(-1))
                acc = poly_add(out.get(merged, {}), coeff)
                if acc:
                    out[merged] = acc
                else:
                    out.pop(merged, None)
        return ExtForm(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            names = "^".join(COFRAME[i] for i in k) if k else "1"
            parts.append(f"({_poly_str(self.terms[k])}) {names}")
        return " + ".join(parts)


def _merge_indices(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Merge two strictly increasing index tuples, tracking the shuffle sign."""
    merged = list(a)
    sign = 1
    for idx in b:
        pos = len(merged)
        for i, m in enumerate(merged):
            if idx < m:
                pos = i
                break
        sign *= (-1) ** (len(merged) - pos)
        merged.insert(pos, idx)
    return tuple(merged), sign


def _poly_str(p: PolyY) -> str:
    parts = []
    for exps in sorted(p):
        v = p[exps]
        mono = "*".join(f"y{i+1}^{e}" if e > 1 else f"y{i+1}"
                        for i, e in enumerate(exps) if e)
        parts.append(f"{v}*{mono}" if mono else f"{v}")
    return " + ".join(parts) if parts else "0"


def _l3_star() -> ExtForm:
    """The dependent coframe element L3* = y1 w1* + y2 w2* + y3 w3*."""
    acc = ExtForm.zero()
    for i in range(3):
        acc = acc + ExtForm.basis(2 + i, poly_y(i))
    return acc


@lru_cache(maxsize=1)
def connection_matrix() -> tuple[tuple[ExtForm, ...], ...]:
    """The skew 5x5 connection form in the coframe (L1*, L2*, w1*, w2*, w3*)."""
    L1 = ExtForm.basis(0)
    L2 = ExtForm.basis(1)
    w = [ExtForm.basis(2 + i) for i in range(3)]
    L3 = _l3_star()
    y = [poly_y(i) for i in range(3)]

    def yw(i, form):  # y_i * form
        return form.mul_poly(y[i])

    zero = ExtForm.zero()
    row0 = (zero, -L3, yw(0, L2), yw(1, L2), yw(2, L2))
    row1 = (L3, zero, -yw(0, L1), -yw(1, L1), -yw(2, L1))
    row2 = (-yw(0, L2), yw(0, L1), zero,
            w[2].scale(2) - yw(2, L3).scale(2),
            yw(1, L3).scale(2) - w[1].scale(2))
    row3 = (-yw(1, L2), yw(1, L1),
            yw(2, L3).scale(2) - w[2].scale(2), zero,
            w[0].scale(2) - yw(0, L3).scale(2))
    row4 = (-yw(2, L2), yw(2, L1),
            w[1].scale(2) - yw(1, L3).scale(2),
            yw(0, L3).scale(2) - w[0].scale(2), zero)
    return (row0, row1, row2, row3, row4)


@lru_cache(maxsize=1)
def _dy_forms() -> tuple[ExtForm, ExtForm, ExtForm]:
    """dy1 = 2(y3 w2* - y2 w3*), dy2 = 2(y1 w3* - y3 w1*), dy3 = 2(y2 w1* - y1 w2*).

    Derived from the right-invariant action on the sphere functions; locked
    in by d(y1^2+y2^2+y3^2) = 0 and nilpotency of d on the coframe.
    """
    y = [poly_y(i) for i in range(3)]
    w = [ExtForm.basis(2 + i) for i in range(3)]
    dy1 = (w[1].mul_poly(y[2]) - w[2].mul_poly(y[1])).scale(2)
    dy2 = (w[2].mul_poly(y[0]) - w[0].mul_poly(y[2])).scale(2)
    dy3 = (w[0].mul_poly(y[1]) - w[1].mul_poly(y[0])).scale(2)
    return dy1, dy2, dy3


@lru_cache(maxsize=1)
def _dtheta() -> tuple[ExtForm, ...]:
    """d of each coframe element via the structure equation dtheta = -omega ^ theta."""
    omega = connection_matrix()
    theta = [ExtForm.basis(i) for i in range(5)]
    out = []
    for a in range(5):
        acc = ExtForm.zero()
        for b in range(5):
            acc = acc + omega[a][b].wedge(theta[b])
        out.append(-acc)
    return tuple(out)


def _d_poly(p: PolyY) -> ExtForm:
    dys = _dy_forms()
    acc = ExtForm.zero()
    for i in range(3):
        dp = poly_diff(p, i)
        if dp:
            acc = acc + dys[i].mul_poly(dp)
    return acc


def ext_d(form: ExtForm) -> ExtForm:
    """Exterior derivative: d(f theta_I) = df ^ theta_I + f * d(theta_I)."""
    dthetas = _dtheta()
    acc = ExtForm.zero()
    for indices, coeff in form.terms.items():
        base = ExtForm({indices: poly_const(1)})
        acc = acc + _d_poly(coeff).wedge(base)
        for j, idx in enumerate(indices):
            rest = indices[:j] + indices[j + 1:]
            sign = Fraction((-1) ** j)
            partial = dthetas[idx].wedge(ExtForm({rest: poly_const(1)}))
            acc = acc + partial.mul_poly(poly_const(sign)).mul_poly(coeff)
    return acc


def volume3_multiple(form: ExtForm) -> Fraction:
    """Express a 3-form as c * L1*^L2*^L3* with rational c, or raise.

    L1*^L2*^L3* expands to y1 L1 L2 w1 + y2 L1 L2 w2 + y3 L1 L2 w3, so the
    form must have exactly those components with coefficients c*y_i.
    """
    expected_keys = {(0, 1, 2): 0, (0, 1, 3): 1, (0, 1, 4): 2}
    c: Fraction | None = None
    for key, coeff in form.terms.items():
        if key not in expected_keys:
            raise ValueError(f"not a volume-form multiple: stray component {key}")
        i = expected_keys[key]
        mono = [0, 0, 0]
        mono[i] = 1
        if set(coeff) != {tuple(mono)}:
            raise ValueError(f"component {key} is not a multiple of y{i+1}")
        value = coeff[tuple(mono)]
        if c is None:
            c = value
        elif c != value:
            raise ValueError("inconsistent volume coefficients")
    if c is None:
        return _ZERO
    return c


def chern_simons_traces() -> tuple[ExtForm, ExtForm]:
    """The 3-form traces tr(omega ^ d omega) and tr(omega ^ omega ^ omega)."""
    omega = connection_matrix()
    domega = [[ext_d(omega[a][b]) for b in range(5)] for a in range(5)]
    tr_wdw = ExtForm.zero()
    for a in range(5):
        for b in range(5):
            if omega[a][b] and domega[b][a]:
                tr_wdw = tr_wdw + omega[a][b].wedge(domega[b][a])
    tr_www = ExtForm.zero()
    for a in range(5):
        for b in range(5):
            if not omega[a][b]:
                continue
            for c in range(5):
                if omega[b][c] and omega[c][a]:
                    tr_www = tr_www + omega[a][b].wedge(omega[b][c]).wedge(omega[c][a])
    return tr_wdw, tr_www


@lru_cache(maxsize=1)
def chern_simons_volume_coefficients() -> tuple[Fraction, Fraction]:
    """Rational coefficients of the two traces against the volume 3-form."""
    tr_wdw, tr_www = chern_simons_traces()
    return volume3_multiple(tr_wdw), volume3_multiple(tr_www)


# The normalization integral of L1*^L2*^L3* against the first Chern form of
# the tautological bundle equals 2*pi^2; only the pi^2-free ratio enters.
VOLUME_C1_INTEGRAL_OVER_PI2 = Fraction(2)
CS_GENUS_PREFACTOR = Fraction(-1, 24)
CS_TRACE_PREFACTOR = Fraction(-1, 8)   # times 1/pi^2, folded into the ratio above


def cs_integral(d: int) -> Fraction:
    """Chern-Simons correction for the d-th power twist; evaluates to d/12."""
    c_wdw, c_www = chern_simons_volume_coefficients()
    combination = c_wdw + Fraction(2, 3) * c_www
    return (CS_GENUS_PREFACTOR * CS_TRACE_PREFACTOR * combination
            * VOLUME_C1_INTEGRAL_OVER_PI2 * d)


# ---------------------------------------------------------------------------
# Example xi-tables (values only; the table containers live in fassembly)


def nu2_xi_values(level: int, dmax: int) -> dict[int, EpsPoly]:
    """xi_d = -(Chern-Simons term) for the homogeneous-space example.

    The spectral contribution vanishes (symmetric spectrum, trivial kernel),
    leaving xi_d = -d/12 exactly.
    """
    return {d: EpsPoly.rational(level, -cs_integral(d)) for d in range(1, dmax + 1)}


def etasigma_parity_values(level: int, dmax: int) -> dict[int, EpsPoly]:
    """Kernel parities d^2 mod 2 (= d^3 mod 2) of the product example, odd d only."""
    return {d: EpsPoly.rational(level, hp1_index(d) % 2)
            for d in range(1, dmax + 1, 2)}


def su3_parity_values(level: int, dmax: int) -> dict[int, EpsPoly]:
    """Kernel parities from the SU(3) enumeration, odd d only."""
    return {d: EpsPoly.rational(level, su3_psi_twist_kernel_parity(d))
            for d in range(1, dmax + 1, 2)}
