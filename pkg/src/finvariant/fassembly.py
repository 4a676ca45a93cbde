"""Assembly of f-invariant representatives from xi-tables, and the example pipelines.

The four assembly formulas take exact xi-values per twist power and produce
q-series starting at q^1.  Known representatives of the three nontrivial
examples are provided for comparison, and run_example wires table -> assembly
-> lattice verdict for each worked example.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from . import geometry
from .divcong import (EquivResult, IndeterminacyLattice, is_equivalent,
                      make_lattice, relative_integrality_check)
from .exactnum import CycNum, EpsPoly, Scalar
from .genus import g_tilde, g_tilde_level1
from .qseries import QSeries, divisors

COMPLEX_FULL = "complex_full"
COMPLEX_POSITIVE = "complex_positive"
QUATERNIONIC = "quaternionic"
QUATERNIONIC_KERNEL_PARITY = "quaternionic_kernel_parity"

_KINDS = (COMPLEX_FULL, COMPLEX_POSITIVE, QUATERNIONIC,
          QUATERNIONIC_KERNEL_PARITY)


class MissingTwistError(KeyError):
    """A required twist index is absent from the table (no silent zero-fill)."""


@dataclass(frozen=True)
class XiTable:
    """Map from twist index to an exact xi-representative.

    Values are chosen representatives, not mod-Z classes; the lattice test
    downstream supplies the quotient. The support must cover every divisor
    of every exponent up to the assembly precision (prec - 1).
    """

    kind: str
    level: int
    l: int
    entries: Mapping[int, EpsPoly]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")
        if self.l < 1:
            raise ValueError("l must be >= 1")
        for d in self.entries:
            if d == 0:
                raise ValueError("twist index 0 is not allowed")
            if d < 0 and self.kind != COMPLEX_FULL:
                raise ValueError(f"{self.kind} tables take positive indices only")

    def value(self, d: int) -> EpsPoly:
        try:
            return self.entries[d]
        except KeyError:
            raise MissingTwistError(f"twist {d} missing from {self.kind} table") from None

    @classmethod
    def constant(cls, kind: str, level: int, l: int, dmax: int,
                 value: Scalar, both_signs: bool = False) -> "XiTable":
        """Table with one constant rational value on 1..dmax (and negatives)."""
        v = EpsPoly.rational(level, value)
        ds = range(1, dmax + 1)
        entries = {}
        for d in ds:
            entries[d] = v
            if both_signs:
                entries[-d] = v
        return cls(kind, level, l, entries)


@dataclass(frozen=True)
class FRepresentative:
    """A representative series with its weight bound and provenance note."""

    series: QSeries
    weight_bound: int
    level: int
    note: str = ""

    def __post_init__(self):
        if self.series.coefficient(0):
            raise ValueError("representative must have zero constant term")


def assemble_complex(xi: XiTable, prec: int) -> FRepresentative:
    """Full two-sided assembly over all twist powers.

    coefficient(q^n) = sum_{d|n} (zeta^(-n/d) xi[d] - zeta^(n/d) xi[-d]).
    """
    if xi.kind != COMPLEX_FULL:
        raise ValueError("assemble_complex needs a complex_full table")
    _require_support(xi, prec, both_signs=True)
    level = xi.level
    coeffs = [EpsPoly.zero(level)]
    for n in range(1, prec):
        acc = EpsPoly.zero(level)
        for d in divisors(n):
            j = n // d
            acc = acc + xi.value(d) * CycNum.zeta(level, -j)
            acc = acc - xi.value(-d) * CycNum.zeta(level, j)
        coeffs.append(acc)
    series = QSeries(level, prec, tuple(coeffs))
    return FRepresentative(series, xi.l + 1, level, "complex transfer, all twists")


def assemble_complex_reduced(xi: XiTable, prec: int) -> FRepresentative:
    """One-sided assembly with the dimension-dependent sign.

    coefficient(q^n) = sum_{d|n} (zeta^(-n/d) + (-1)^(l+1) zeta^(n/d)) xi[d].
    """
    if xi.kind != COMPLEX_POSITIVE:
        raise ValueError("assemble_complex_reduced needs a complex_positive table")
    _require_support(xi, prec, both_signs=False)
    level = xi.level
    sign = 1 if (xi.l + 1) % 2 == 0 else -1
    coeffs = [EpsPoly.zero(level)]
    for n in range(1, prec):
        acc = EpsPoly.zero(level)
        for d in divisors(n):
            j = n // d
            weight = CycNum.zeta(level, -j) + sign * CycNum.zeta(level, j)
            acc = acc + xi.value(d) * weight
        coeffs.append(acc)
    series = QSeries(level, prec, tuple(coeffs))
    return FRepresentative(series, xi.l + 1, level, "complex transfer, positive twists")


def assemble_quaternionic(xi: XiTable, prec: int) -> FRepresentative:
    """Level-independent assembly coefficient(q^n) = sum_{d|n} xi[d]."""
    if xi.kind != QUATERNIONIC:
        raise ValueError("assemble_quaternionic needs a quaternionic table")
    _require_support(xi, prec, both_signs=False)
    level = xi.level
    coeffs = [EpsPoly.zero(level)]
    for n in range(1, prec):
        acc = EpsPoly.zero(level)
        for d in divisors(n):
            acc = acc + xi.value(d)
        coeffs.append(acc)
    series = QSeries(level, prec, tuple(coeffs))
    return FRepresentative(series, xi.l + 1, level, "quaternionic transfer")


def assemble_quaternionic_reduced(parities: XiTable, prec: int) -> FRepresentative:
    """Kernel-parity assembly: half the odd-divisor sum, or zero.

    For l = 0 mod 4: coefficient(q^n) = (1/2) sum over odd d | n of the
    stored kernel parity; for l = 2 mod 4 the representative is zero.
    """
    if parities.kind != QUATERNIONIC_KERNEL_PARITY:
        raise ValueError("assemble_quaternionic_reduced needs a kernel-parity table")
    if parities.l % 2:
        raise ValueError("kernel-parity reduction needs even l")
    level = parities.level
    if parities.l % 4 == 2:
        series = QSeries.zero(level, prec)
        return FRepresentative(series, parities.l + 1, level,
                               "quaternionic transfer, torsion-zero branch")
    _require_support(parities, prec, both_signs=False, odd_only=True)
    half = Fraction(1, 2)
    coeffs = [EpsPoly.zero(level)]
    for n in range(1, prec):
        acc = EpsPoly.zero(level)
        for d in divisors(n):
            if d % 2:
                acc = acc + parities.value(d)
        coeffs.append(acc * half)
    series = QSeries(level, prec, tuple(coeffs))
    return FRepresentative(series, parities.l + 1, level,
                           "quaternionic transfer, kernel parities")


def _require_support(xi: XiTable, prec: int, both_signs: bool,
                     odd_only: bool = False) -> None:
    for d in range(1, prec):
        if odd_only and d % 2 == 0:
            continue
        if d not in xi.entries:
            raise MissingTwistError(f"twist {d} missing (need support to {prec - 1})")
        if both_signs and -d not in xi.entries:
            raise MissingTwistError(f"twist {-d} missing (need both signs)")


# ---------------------------------------------------------------------------
# Known representatives


def known_representative(name: str, level: int, prec: int) -> FRepresentative:
    """Stored representatives of the worked examples.

    eta2 -> (1/2) Gtilde_1, weight bound 2 (any level >= 2);
    nu2 -> (1/2) Gtilde_2^2, weight bound 4 (odd level);
    etasigma -> (1/2) sum sigma_3(n) q^n, weight bound 5 (odd level).
    """
    if name == "eta2":
        series = g_tilde(level, 1, prec) * Fraction(1, 2)
        return FRepresentative(series, 2, level, "half the weight-one series")
    if name == "nu2":
        _require_odd(level, name)
        gt2 = g_tilde(level, 2, prec)
        return FRepresentative(gt2 * gt2 * Fraction(1, 2), 4, level,
                               "half the squared weight-two series")
    if name == "etasigma":
        _require_odd(level, name)
        series = g_tilde_level1(level, 4, prec) * Fraction(1, 2)
        return FRepresentative(series, 5, level, "half the classical weight-four series")
    raise ValueError(f"unknown representative {name!r}")


def _require_odd(level: int, name: str) -> None:
    if level % 2 == 0:
        raise ValueError(f"{name} is a representative at odd levels only")


# ---------------------------------------------------------------------------
# Example pipelines


EXAMPLES = ("trivial", "eta2_circle", "nu2_homogeneous", "etasigma_product",
            "su3_appendix")


@dataclass(frozen=True)
class ExampleReport:
    name: str
    level: int
    prec: int
    assembled: FRepresentative
    reference: Optional[FRepresentative]
    verdict: bool
    equivalence: Optional[EquivResult]
    details: dict

    def __bool__(self) -> bool:
        return self.verdict


def run_example(name: str, level: int, prec: int,
                e_invariant: Scalar = Fraction(1),
                lattice: Optional[IndeterminacyLattice] = None) -> ExampleReport:
    """Build the example's xi-table, assemble, and compare against the reference."""
    if name == "trivial":
        xi = XiTable.constant(COMPLEX_FULL, level, 1, prec - 1,
                              e_invariant, both_signs=True)
        assembled = assemble_complex(xi, prec)
        expected = g_tilde(level, 1, prec) * (-Fraction(e_invariant))
        verdict = assembled.series == expected
        return ExampleReport(name, level, prec, assembled,
                             FRepresentative(expected, 2, level, "-e * Gtilde_1"),
                             verdict, None,
                             {"e_invariant": Fraction(e_invariant)})

    if name == "eta2_circle":
        entries = {d: geometry.circle_xi(level, d) for d in range(1, prec)}
        xi = XiTable(COMPLEX_POSITIVE, level, 1, entries)
        assembled = assemble_complex_reduced(xi, prec)
        reference = known_representative("eta2", level, prec)
        lat = lattice or make_lattice(level, 2, prec, gtilde=g_tilde(level, 2, prec))
        eq = is_equivalent(assembled.series, reference.series, lat)
        return ExampleReport(name, level, prec, assembled, reference,
                             eq.equivalent, eq, {"xi": "1/2 - d*eps"})

    if name == "nu2_homogeneous":
        _require_odd(level, name)
        entries = geometry.nu2_xi_values(level, prec - 1)
        xi = XiTable(COMPLEX_POSITIVE, level, 3, entries)
        assembled = assemble_complex_reduced(xi, prec)
        exact_form = g_tilde(level, 2, prec) * Fraction(1, 12)
        reference = known_representative("nu2", level, prec)
        lat = lattice or make_lattice(level, 4, prec, gtilde=g_tilde(level, 4, prec))
        eq = is_equivalent(assembled.series, reference.series, lat)
        verdict = eq.equivalent and assembled.series == exact_form
        return ExampleReport(name, level, prec, assembled, reference, verdict, eq,
                             {"xi": "-d/12",
                              "collapses_to_twelfth_gtilde2": assembled.series == exact_form})

    if name in ("etasigma_product", "su3_appendix"):
        _require_odd(level, name)
        if name == "etasigma_product":
            entries = geometry.etasigma_parity_values(level, prec - 1)
            detail = {"parity": "d^2 mod 2 from the plane index"}
        else:
            entries = geometry.su3_parity_values(level, prec - 1)
            detail = {"parity": "enumerated kernel parities",
                      "parity_table": {k: geometry.su3_kernel_parity(k)
                                       for k in range(11)}}
        table = XiTable(QUATERNIONIC_KERNEL_PARITY, level, 4, entries)
        assembled = assemble_quaternionic_reduced(table, prec)
        reference = known_representative("etasigma", level, prec)
        integral = relative_integrality_check(reference.series - assembled.series)
        lat = lattice or make_lattice(level, 5, prec, gtilde=None)
        eq = is_equivalent(assembled.series, reference.series, lat)
        detail["difference_integral"] = integral.integral
        return ExampleReport(name, level, prec, assembled, reference,
                             eq.equivalent and integral.integral, eq, detail)

    raise ValueError(f"unknown example {name!r}; choose from {EXAMPLES}")
