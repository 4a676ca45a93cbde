"""Bases, Hermite normal form, and the lattice equivalence decision."""

import random
from fractions import Fraction

import pytest

from conftest import random_integral_series
from finvariant.divcong import (BasisError, PrecisionError, build_basis,
                                default_generators, hnf, is_equivalent,
                                make_lattice, policy_prec,
                                relative_integrality_check, series_to_vector,
                                sturm_bound, vector_to_series)
from finvariant.exactnum import CycNum, EpsPoly, eps
from finvariant.genus import g_hat, g_tilde
from finvariant.qseries import EpsPartError, QSeries, divisors


def test_sturm_bound_values():
    assert sturm_bound(3, 4) == 3   # index 8: ceil(32/12)
    assert sturm_bound(2, 4) == 1   # index 3: ceil(12/12)
    assert sturm_bound(3, 0) == 0
    assert sturm_bound(4, 6) == 6   # index 12: ceil(72/12)


# ---------------------------------------------------------------------------
# Hermite normal form


def _det(matrix):
    n = len(matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for cc in range(c, n):
                    m[r][cc] -= f * m[c][cc]
    return det


def _mat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B)))
             for j in range(len(B[0]))] for i in range(len(A))]


def _assert_hnf_shape(H):
    pivot_rows = []
    ncols = len(H[0]) if H else 0
    m = len(H)
    seen_zero = False
    for j in range(ncols):
        rows = [i for i in range(m) if H[i][j]]
        if not rows:
            seen_zero = True
            continue
        assert not seen_zero, "nonzero column after a zero column"
        r = rows[0]
        pivot = H[r][j]
        assert pivot > 0
        if pivot_rows:
            assert r > pivot_rows[-1]
        pivot_rows.append(r)
        # zeros to the right of the pivot in its row, reduced entries left
        for jj in range(j + 1, ncols):
            assert H[r][jj] == 0
        for jj in range(j):
            assert 0 <= H[r][jj] < pivot


def test_hnf_identity():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    H, U = hnf(I3)
    assert H == I3
    assert U == I3


def test_hnf_two_by_two():
    A = [[2, 1], [0, 1]]
    H, U = hnf(A)
    assert _mat_mul(A, U) == H
    assert abs(_det(U)) == 1
    assert abs(_det(H)) == abs(_det(A))
    _assert_hnf_shape(H)


def test_hnf_random_shapes():
    rng = random.Random(77)
    for _ in range(30):
        m, n = rng.randint(2, 6), rng.randint(2, 8)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        H, U = hnf(A)
        assert _mat_mul(A, U) == H
        assert abs(_det(U)) == 1
        _assert_hnf_shape(H)


# ---------------------------------------------------------------------------
# Bases


def test_default_generators_level3():
    gens = default_generators(3, 10)
    assert [(w, label) for w, label, _ in gens] == [(1, "Ghat1"), (3, "Ghat3")]


def test_default_generators_level2_weight1_slot_empty():
    # the weight-one series vanishes at level 2, so the generators start at 2
    gens = default_generators(2, 10)
    assert [w for w, _, _ in gens] == [2, 4]
    assert g_hat(2, 1, 10).is_zero()


def test_default_generators_unsupported_level():
    with pytest.raises(BasisError):
        default_generators(7, 10)


def test_build_basis_dimensions_level3():
    basis = build_basis(3, 4, 12)
    assert basis.dims == {0: 1, 1: 1, 2: 1, 3: 2, 4: 2}
    assert [e.label for e in basis.of_weight(0)] == ["1"]
    assert len(basis.of_weight(3)) == 2  # {Ghat1^3, Ghat3} independent


def test_build_basis_dimensions_levels_2_and_4():
    assert build_basis(2, 6, 12).dims == {0: 1, 1: 0, 2: 1, 3: 0, 4: 2, 5: 0, 6: 2}
    assert build_basis(4, 6, 16).dims == {0: 1, 1: 1, 2: 2, 3: 2, 4: 3, 5: 3, 6: 4}


def test_build_basis_dimensions_monotone_level3():
    dims = build_basis(3, 6, 16).dims
    for w in range(1, 7):
        assert dims[w] >= dims[w - 1] - (1 if w == 1 else 0)
    assert dims == {0: 1, 1: 1, 2: 1, 3: 2, 4: 2, 5: 2, 6: 3}


def test_build_basis_precision_policy():
    with pytest.raises(PrecisionError):
        build_basis(3, 4, policy_prec(3, 4) - 1)


def test_make_lattice_rejects_mismatched_basis():
    foreign = build_basis(2, 2, 10)
    with pytest.raises(BasisError):
        make_lattice(3, 2, 10, basis=foreign)
    shallow = build_basis(3, 2, 12)
    with pytest.raises(BasisError):
        make_lattice(3, 4, 10, basis=shallow)


def test_series_vector_round_trip():
    rng = random.Random(13)
    f = random_integral_series(rng, 3, 6)
    vec = series_to_vector(f, 6)
    assert vector_to_series(3, 6, vec) == f


# ---------------------------------------------------------------------------
# Equivalence decisions


@pytest.fixture(scope="module")
def lattice_k2():
    return make_lattice(3, 2, 12, gtilde=g_tilde(3, 2, 12))


@pytest.fixture(scope="module")
def lattice_k4():
    return make_lattice(3, 4, 12, gtilde=g_tilde(3, 4, 12))


def test_equivalent_reflexive(lattice_k2):
    rng = random.Random(1)
    f = random_integral_series(rng, 3, 12)
    res = is_equivalent(f, f, lattice_k2)
    assert res.equivalent
    cert = res.certificate
    assert not any(cert.basis_coeffs)
    assert not cert.gtilde_coeff and not cert.gtilde_eps_coeff
    assert cert.residual.is_zero()


def test_eta2_reconciliation(lattice_k2):
    # the half-sum with both root-of-unity signs differs from half the
    # constant-free weight-one series by a series with ring-integer coefficients
    prec = 12
    half = Fraction(1, 2)
    coeffs = [EpsPoly.zero(3)]
    for n in range(1, prec):
        acc = CycNum.zero(3)
        for d in divisors(n):
            j = n // d
            acc = acc + CycNum.zeta(3, -j) + CycNum.zeta(3, j)
        coeffs.append(EpsPoly.constant(acc * half))
    F = QSeries(3, prec, tuple(coeffs))
    G = g_tilde(3, 1, prec) * half
    diff = F - G
    for n in range(1, prec):
        expected = sum((CycNum.zeta(3, -(n // d)) for d in divisors(n)),
                       CycNum.zero(3))
        assert diff.coefficient(n) == EpsPoly.constant(expected)
    assert relative_integrality_check(diff).integral
    res = is_equivalent(F, G, lattice_k2)
    assert res.equivalent
    assert res.certificate.replay(lattice_k2) == diff
    assert relative_integrality_check(res.certificate.residual).integral


def test_nu2_divided_congruence(lattice_k4):
    gt2 = g_tilde(3, 2, 12)
    F = gt2 * Fraction(1, 12)
    G = gt2 * gt2 * Fraction(1, 2)
    res = is_equivalent(F, G, lattice_k4)
    assert res.equivalent
    assert res.false_is_proof
    # replay reconstructs F - G bit-exactly
    assert res.certificate.replay(lattice_k4) == F - G


def test_perturbed_congruence_rejected(lattice_k4):
    # replacing the 1/12 by 1/11 must break the weight-two/weight-four
    # congruence at proof-grade precision
    gt2 = g_tilde(3, 2, 12)
    res = is_equivalent(gt2 * Fraction(1, 11), gt2 * gt2 * Fraction(1, 2),
                        lattice_k4)
    assert not res.equivalent
    assert res.false_is_proof


def test_lattice_membership_level4():
    # exercise the engine on the level with complex fourth roots of unity
    rng = random.Random(7)
    prec = 10
    lattice = make_lattice(4, 2, prec, gtilde=g_tilde(4, 2, prec))
    zero = QSeries.zero(4, prec)
    weight2 = lattice.basis.of_weight(2)
    for _ in range(10):
        member = random_integral_series(rng, 4, prec)
        for entry in weight2:
            member = member + entry.series * Fraction(rng.randint(-5, 5),
                                                      rng.randint(1, 7))
        res = is_equivalent(member, zero, lattice)
        assert res.equivalent
        assert res.certificate.replay(lattice) == member
    bad = QSeries.from_rationals(4, prec, [0, Fraction(1, 3)])
    assert not is_equivalent(bad, zero, lattice).equivalent


def test_scaling_invariance_never_flips_true(lattice_k4):
    gt2 = g_tilde(3, 2, 12)
    F = gt2 * Fraction(1, 12)
    G = gt2 * gt2 * Fraction(1, 2)
    zero = QSeries.zero(3, 12)
    for scalar in (2, 5, 7):
        res = is_equivalent((F - G) * scalar, zero, lattice_k4)
        assert res.equivalent


def test_equivalence_symmetric_and_transitive(lattice_k2):
    rng = random.Random(101)
    base = random_integral_series(rng, 3, 12)
    # three lattice-equivalent series: shifts by lattice members
    g1 = lattice_k2.basis.entries[0].series  # the constant 1
    wk = lattice_k2.basis.of_weight(2)[0].series
    a = base + g1 * Fraction(3, 7) + random_integral_series(rng, 3, 12)
    b = a + wk * Fraction(-2, 5) + random_integral_series(rng, 3, 12)
    for x, y in ((base, a), (a, b), (base, b)):
        assert is_equivalent(x, y, lattice_k2).equivalent
        assert is_equivalent(y, x, lattice_k2).equivalent
    # certificates compose: the witnesses of (base,a) and (a,b) sum to one of (base,b)
    c_ab = is_equivalent(base, a, lattice_k2).certificate
    c_bc = is_equivalent(a, b, lattice_k2).certificate
    assert c_ab.replay(lattice_k2) + c_bc.replay(lattice_k2) == base - b


def test_eps_part_consumed_by_gtilde(lattice_k2):
    gt2 = g_tilde(3, 2, 12)
    F = gt2 * eps(3) * Fraction(3, 4)
    res = is_equivalent(F, QSeries.zero(3, 12), lattice_k2)
    assert res.equivalent
    assert res.certificate.gtilde_eps_coeff == Fraction(3, 4)


def test_eps_part_without_gtilde_fails():
    lattice = make_lattice(3, 2, 12, gtilde=None)
    F = g_tilde(3, 2, 12) * eps(3)
    res = is_equivalent(F, QSeries.zero(3, 12), lattice)
    assert not res.equivalent


def test_eps_part_not_multiple_fails(lattice_k2):
    F = QSeries(3, 12, (EpsPoly.zero(3), eps(3)))  # q * eps alone
    res = is_equivalent(F, QSeries.zero(3, 12), lattice_k2)
    assert not res.equivalent


def test_eps_degree_two_rejected(lattice_k2):
    e = eps(3)
    F = QSeries(3, 12, (e * e,))
    with pytest.raises(EpsPartError):
        is_equivalent(F, QSeries.zero(3, 12), lattice_k2)


def test_false_verdict_with_proof_flag(lattice_k2):
    F = QSeries.from_rationals(3, 12, [0, Fraction(1, 2)])
    res = is_equivalent(F, QSeries.zero(3, 12), lattice_k2)
    assert not res.equivalent
    assert res.false_is_proof  # prec 12 >= policy 7


def test_low_precision_false_not_a_proof():
    lattice = make_lattice(3, 2, 5, gtilde=None)
    F = QSeries.from_rationals(3, 5, [0, Fraction(1, 5)])
    res = is_equivalent(F, QSeries.zero(3, 5), lattice)
    assert not res.equivalent
    assert not res.false_is_proof


def test_certificate_spans_weight_zero_and_top_only(lattice_k4):
    # mid-weight coordinates stay zero in certificates
    gt2 = g_tilde(3, 2, 12)
    F = gt2 * Fraction(1, 12)
    G = gt2 * gt2 * Fraction(1, 2)
    cert = is_equivalent(F, G, lattice_k4).certificate
    for coeff, entry in zip(cert.basis_coeffs, lattice_k4.basis.entries):
        if entry.weight not in (0, 4):
            assert coeff == 0


def test_relative_integrality_check():
    ok = relative_integrality_check(QSeries.from_rationals(3, 6, [0, Fraction(1, 3)]))
    assert ok.integral and ok.first_failure is None
    bad = relative_integrality_check(QSeries.from_rationals(3, 6, [0, 0, Fraction(1, 4)]))
    assert not bad.integral
    assert bad.first_failure == 2


def test_relative_integrality_of_certified_residual(lattice_k4):
    # subtracting the certificate combination from the weight-two/weight-four
    # pair leaves an integral series by construction
    gt2 = g_tilde(3, 2, 12)
    F = gt2 * gt2 * Fraction(1, 2) - gt2 * Fraction(1, 12)
    res = is_equivalent(F, QSeries.zero(3, 12), lattice_k4)
    assert res.equivalent
    recombined = res.certificate.replay(lattice_k4) - res.certificate.residual
    assert relative_integrality_check(F - recombined).integral


def test_mid_weights_do_not_enlarge_the_lattice(lattice_k2):
    # a non-integral rational multiple of the weight-one series is not
    # equivalent to zero at weight bound 2
    F = g_hat(3, 1, 12) * Fraction(1, 2)
    res = is_equivalent(F, QSeries.zero(3, 12), lattice_k2)
    assert not res.equivalent
