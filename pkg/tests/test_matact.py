import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from primdyn import matact
from primdyn.freegroup import A, B, COMMUTATOR_AB
from primdyn.matact import (
    EVERY_POINT,
    DomainError,
    Mat2Q,
    MatrixError,
    MatrixOracle,
    aff_fixed_point,
    affine_product_closed_forms,
    affine_product_direct,
    classify_isometry,
    commutator,
    find_free_element,
    integer_log,
    mat_inv,
    mat_pow,
    parse_rational,
    default_gl2_pair,
    rp1_has_fixed_point,
    trace_direct_AnBk,
    trace_formula_AnBk,
    triangular_power_closed_form,
    verify_aff_counterexample,
    verify_gl2_counterexample,
)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=7)
pos_q = st.fractions(min_value=Fraction(1, 6), max_value=6, max_denominator=7)


def sym(m: Mat2Q):
    return sympy.Matrix([[sympy.Rational(str(v)) for v in row] for row in m.rows])


def test_parse_rational():
    assert parse_rational("13/100") == Fraction(13, 100)
    assert parse_rational("0.13") == Fraction(13, 100)
    assert parse_rational(3) == 3
    with pytest.raises(MatrixError):
        parse_rational(0.13)


def test_singular_rejected():
    with pytest.raises(MatrixError):
        Mat2Q(1, 2, 2, 4)


def test_spec_power_example():
    # [[2,1],[0,1]]^3 = [[8,7],[0,1]]
    assert mat_pow(Mat2Q(2, 1, 0, 1), 3) == Mat2Q(8, 7, 0, 1)
    assert mat_pow(Mat2Q(2, 1, 0, 1), -1) == Mat2Q(Fraction(1, 2), Fraction(-1, 2), 0, 1)


@given(small_q, small_q, small_q, small_q, st.integers(-6, 6))
@settings(max_examples=150)
def test_power_matches_sympy(a, b, c, d, m):
    if a * d - b * c == 0:
        return
    x = Mat2Q(a, b, c, d)
    assert sym(mat_pow(x, m)) == sym(x) ** m


@given(pos_q, small_q, st.integers(-30, 30))
def test_triangular_closed_form(p, off, m):
    x = Mat2Q(p, off, 0, 1)
    assert triangular_power_closed_form(x, m) == mat_pow(x, m)


@given(small_q, small_q, small_q, small_q, small_q, small_q, small_q, small_q)
def test_commutator_det_one(a, b, c, d, e, f, g, h):
    if a * d == b * c or e * h == f * g:
        return
    assert commutator(Mat2Q(a, b, c, d), Mat2Q(e, f, g, h)).det == 1


def test_matrix_oracle_relation():
    f, g = Mat2Q(2, 0, 0, 1), Mat2Q(1, 1, 0, 1)
    # BS(1,2): a b a^-1 = b^2
    oracle = MatrixOracle([f, g])
    assert oracle.is_identity(A * B * A.inverse() * B.inverse() * B.inverse())
    assert not oracle.is_identity(COMMUTATOR_AB)


# --- Aff+(R) ---


def test_aff_fixed_point_cases():
    assert aff_fixed_point(Mat2Q(2, 3, 0, 1)) == -3
    assert aff_fixed_point(Mat2Q(1, 0, 0, 1)) == EVERY_POINT
    assert aff_fixed_point(Mat2Q(1, 5, 0, 1)) is None
    with pytest.raises(DomainError):
        aff_fixed_point(Mat2Q(1, 0, 1, 1))


@given(pos_q, small_q, pos_q, small_q, st.integers(-6, 6))
@settings(max_examples=150)
def test_affine_closed_forms(a, b, c, d, n):
    f, g = Mat2Q(a, b, 0, 1), Mat2Q(c, d, 0, 1)
    assert affine_product_closed_forms(f, g, n) == affine_product_direct(f, g, n)


def test_integer_log_against_brute_force():
    bases = [Fraction(2), Fraction(3), Fraction(4), Fraction(2, 3), Fraction(9, 4), Fraction(1, 8)]
    for base in bases:
        for target in bases + [Fraction(1), Fraction(16), Fraction(27, 8), Fraction(6)]:
            brute = {n for n in range(-12, 13) if base ** n == target}
            assert integer_log(base, target) == brute
    assert integer_log(Fraction(1), Fraction(1)) == "all"
    assert integer_log(Fraction(1), Fraction(2)) == set()


def test_aff_default_pair():
    cert = verify_aff_counterexample(matact.DEFAULT_AFF_F, matact.DEFAULT_AFF_G)
    assert cert.verdict == "pass"
    f, g = matact.DEFAULT_AFF_F, matact.DEFAULT_AFF_G
    assert commutator(f, g) == Mat2Q(1, -2, 0, 1)
    assert aff_fixed_point(commutator(f, g)) is None


def test_aff_detects_hypothesis_failure():
    # slope 2 and 1/2: f g has slope 1
    cert = verify_aff_counterexample(Mat2Q(2, 0, 0, 1), Mat2Q(Fraction(1, 2), 1, 0, 1))
    assert cert.verdict == "fail"
    assert cert.witnesses[0]["clause"] == "hypothesis violated"
    assert cert.witnesses[0]["n"] == 1


def test_aff_commuting_pair_not_counterexample():
    cert = verify_aff_counterexample(Mat2Q(2, 0, 0, 1), Mat2Q(3, 0, 0, 1), (-3, 3))
    assert cert.verdict == "fail"
    assert any(w["clause"] == "not a counterexample" for w in cert.witnesses)


# --- SL(2,R) on H^2 ---


def test_classify_isometry():
    assert classify_isometry(Mat2Q(0, -1, 1, 0)).kind == "elliptic"
    assert classify_isometry(Mat2Q(1, 1, 0, 1)).kind == "parabolic"
    assert classify_isometry(Mat2Q(2, 0, 0, Fraction(1, 2))).kind == "hyperbolic"
    with pytest.raises(DomainError):
        classify_isometry(Mat2Q(2, 0, 0, 1))


def test_classification_conjugation_invariant(rng):
    for _ in range(200):
        a, b, c = (Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        if a == 0:
            continue
        y = Mat2Q(a, b, c, (1 + b * c) / a)  # det 1
        pa, pb, pc = rng.randint(1, 3), rng.randint(-3, 3), Fraction(rng.randint(-3, 3), 2)
        if pa == pb * pc:
            continue
        p = Mat2Q(pa, pb, pc, 1)
        z = p @ y @ mat_inv(p)
        assert z.det == 1
        assert classify_isometry(z).kind == classify_isometry(y).kind


def test_trace_formula_matches_numpy(rng):
    for _ in range(300):
        th, et = rng.uniform(-3, 3), rng.uniform(-3, 3)
        lam = rng.uniform(0.2, 5)
        n, k = rng.randint(-9, 9), rng.randint(-9, 9)
        assert abs(trace_formula_AnBk(th, et, lam, n, k) - trace_direct_AnBk(th, et, lam, n, k)) < 1e-9


def test_free_element_witness_is_hyperbolic():
    res = find_free_element(1.1, 0.7, 3.0, 1000)
    assert res.status == "witness"
    assert abs(trace_direct_AnBk(1.1, 0.7, 3.0, res.n, 1)) > 2


def test_free_element_commuting_control():
    res = find_free_element(1.0, 1.0, 1.0, 1000)
    assert res.status == "none"


def test_free_element_rejects_non_elliptic():
    with pytest.raises(DomainError):
        find_free_element(0.0, 1.0, 2.0, 10)


# --- GL(2,R) on RP^1 ---


def test_rp1_fixed_point_equals_real_eigenvector(rng):
    for _ in range(300):
        vals = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4)]
        if vals[0] * vals[3] - vals[1] * vals[2] == 0:
            continue
        x = Mat2Q(*vals)
        has, _ = rp1_has_fixed_point(x)
        eig = np.linalg.eigvals(x.to_float())
        real = bool(np.all(np.abs(eig.imag) < 1e-12))
        assert has == real


def test_gl2_default_pair():
    A_, B_ = default_gl2_pair()
    cert = verify_gl2_counterexample(A_, B_)
    assert cert.verdict == "pass"
    comm = mat_inv(B_) @ mat_inv(A_) @ B_ @ A_
    assert comm.det == 1
    assert abs(float(comm.trace) - -0.46194) < 1e-4
    printed = [[1.2, -83.7949], [0.0357341, -1.66194]]
    for i in range(2):
        for j in range(2):
            got = float(comm.rows[i][j])
            assert abs(got - printed[i][j]) <= 5e-4 * abs(printed[i][j])


def test_gl2_exact_2det_differs_from_print():
    # 2|det(A^m B)| is exactly 57/100; the printed 0.569998 is rounding
    A_, B_ = default_gl2_pair()
    for m in range(1, 6):
        assert 2 * abs((mat_pow(A_, m) @ B_).det) == Fraction(57, 100) * Fraction(247, 1000) ** m
        assert Fraction(57, 100) != Fraction("0.569998")


def test_gl2_trace_coefficients():
    A_, B_ = default_gl2_pair()
    for m in range(1, 11):
        t = float((mat_pow(A_, m) @ B_).trace)
        approx = 0.18220338 * 0.13 ** m + 1.86779662 * 1.9 ** m
        assert abs(t - approx) < 1e-6 * max(1, abs(t))


def test_gl2_fails_on_commuting_pair():
    cert = verify_gl2_counterexample(Mat2Q(2, 0, 0, 3), Mat2Q(5, 0, 0, 7), (-3, 3), 2)
    assert cert.verdict == "fail"


# --- Heisenberg ---


def test_heisenberg_fixed_vector(rng):
    for seed in range(5):
        r = random.Random(seed)
        a, b = matact.random_unitriangular(r), matact.random_unitriangular(r)
        assert matact.heisenberg_fixed_vector_check(a, b, seed=seed).verdict == "pass"


def test_heisenberg_inverse():
    x = matact.unitriangular(Fraction(1, 2), 3, Fraction(-2, 5))
    ident = matact.unitriangular(0, 0, 0)
    assert matact.mat3_mul(x, matact.mat3_inv_unitriangular(x)) == ident


def test_heisenberg_domain_guard():
    with pytest.raises(DomainError):
        matact.heisenberg_fixed_vector_check(matact.mat3([[2, 0, 0], [0, 1, 0], [0, 0, 1]]),
                                             matact.unitriangular(0, 0, 0))
