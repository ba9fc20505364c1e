"""Exact 2x2 rational matrices and the affine, hyperbolic and projective actions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from .certificate import Certificate, Timer, certify
from .freegroup import Word
from .girth import GroupOracle

EVERY_POINT = "every point"

# decimal values printed for the GL(2,R) example
GL2_DECIMALS_A = (("0.13", "0.95"), ("0", "1.9"))
GL2_DECIMALS_B = (("0.15", "0"), ("-0.06", "1.9"))
PRINTED_TRACE_AmB = ("0.18220338", "1.86779662")
PRINTED_TRACE_BmA = ("0.162571415", "1.867428585")
PRINTED_2DET_AmB = "0.569998"
PRINTED_2DET_BmA = "0.494"
PRINTED_COMMUTATOR = (("1.2", "-83.7949"), ("0.0357341", "-1.66194"))
PRINTED_COMMUTATOR_TRACE = "-0.461943"
PRINTED_2DET_COMMUTATOR = "2.00001"


class MatrixError(ValueError):
    pass


class DomainError(ValueError):
    pass


def parse_rational(value) -> Fraction:
    """Read ``"13/100"``, ``"0.13"``, ints or Fractions exactly.  Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise MatrixError(f"refusing inexact value {value!r}; pass it as a string")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixError(f"not a rational: {value!r}") from exc


@dataclass(frozen=True)
class Mat2Q:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if self.det == 0:
            raise MatrixError("matrix is singular")

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> "Mat2Q":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "Mat2Q":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Fraction:
        return self.a + self.d

    @property
    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "Mat2Q") -> "Mat2Q":
        return mat_mul(self, other)

    def __pow__(self, m: int) -> "Mat2Q":
        return mat_pow(self, m)

    def inverse(self) -> "Mat2Q":
        return mat_inv(self)

    def to_float(self) -> np.ndarray:
        return np.array([[float(self.a), float(self.b)], [float(self.c), float(self.d)]])

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, rows) -> "Mat2Q":
        return cls.of(rows)

    def __repr__(self) -> str:
        return f"Mat2Q([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def mat_mul(x: Mat2Q, y: Mat2Q) -> Mat2Q:
    return Mat2Q(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                 x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d)


def mat_inv(x: Mat2Q) -> Mat2Q:
    det = x.det
    return Mat2Q(x.d / det, -x.b / det, -x.c / det, x.a / det)


def mat_pow(x: Mat2Q, m: int) -> Mat2Q:
    if m < 0:
        x, m = mat_inv(x), -m
    result = Mat2Q.identity()
    while m:
        if m & 1:
            result = mat_mul(result, x)
        m >>= 1
        if m:
            x = mat_mul(x, x)
    return result


def mat_product(mats: Iterable[Mat2Q]) -> Mat2Q:
    out = Mat2Q.identity()
    for m in mats:
        out = mat_mul(out, m)
    return out


def commutator(x: Mat2Q, y: Mat2Q) -> Mat2Q:
    """``x y x⁻¹ y⁻¹``."""
    return mat_product([x, y, mat_inv(x), mat_inv(y)])


def triangular_power_closed_form(x: Mat2Q, m: int) -> Mat2Q:
    """``[[a, b], [0, 1]]^m = [[a^m, b(1 - a^m)/(1 - a)], [0, 1]]`` (``m b`` when a = 1)."""
    if x.c != 0 or x.d != 1:
        raise DomainError("closed form needs [[a, b], [0, 1]]")
    a, b = x.a, x.b
    am = a ** m
    top = m * b if a == 1 else b * (1 - am) / (1 - a)
    return Mat2Q(am, top, 0, 1)


class MatrixOracle(GroupOracle):
    """Word problem in a matrix group by exact evaluation of the images."""

    def __init__(self, images: Sequence[Mat2Q], name: str = "matrix"):
        self.images = list(images)
        self.inverses = [mat_inv(m) for m in self.images]
        self.oracle_id = name

    def evaluate(self, w: Word) -> Mat2Q:
        return mat_product(self.images[x - 1] if x > 0 else self.inverses[-x - 1]
                           for x in w.letters)

    def is_identity(self, w: Word) -> bool:
        return self.evaluate(w) == Mat2Q.identity()


# --- Aff+(R) acting on R ---------------------------------------------------------


def _check_affine(x: Mat2Q):
    if x.c != 0 or x.d != 1 or x.a <= 0:
        raise DomainError(f"{x} is not of the form [[a, b], [0, 1]] with a > 0")


def aff_fixed_point(x: Mat2Q):
    """Fixed point of ``t -> a t + b``: a Fraction, ``EVERY_POINT`` or None."""
    _check_affine(x)
    if x.a != 1:
        return x.b / (1 - x.a)
    return EVERY_POINT if x.b == 0 else None


def affine_product_closed_forms(f: Mat2Q, g: Mat2Q, n: int) -> dict[str, Mat2Q]:
    """Closed forms of f^n g, f^n g⁻¹, g^n f, g^n f⁻¹ for f = [[a,b],[0,1]], g = [[c,d],[0,1]]."""
    a, b, c, d = f.a, f.b, g.a, g.b

    def geo(r, s):
        return n * s if r == 1 else s * (1 - r ** n) / (1 - r)

    an, cn = a ** n, c ** n
    return {
        "f^n g": Mat2Q(an * c, an * d + geo(a, b), 0, 1),
        "f^n g^-1": Mat2Q(an / c, -an * d / c + geo(a, b), 0, 1),
        "g^n f": Mat2Q(cn * a, cn * b + geo(c, d), 0, 1),
        "g^n f^-1": Mat2Q(cn / a, -cn * b / a + geo(c, d), 0, 1),
    }


def affine_product_direct(f: Mat2Q, g: Mat2Q, n: int) -> dict[str, Mat2Q]:
    return {
        "f^n g": mat_pow(f, n) @ g,
        "f^n g^-1": mat_pow(f, n) @ mat_inv(g),
        "g^n f": mat_pow(g, n) @ f,
        "g^n f^-1": mat_pow(g, n) @ mat_inv(f),
    }


def _exponents(q: Fraction) -> dict[int, int]:
    out = dict(sympy.factorint(q.numerator))
    for p, e in sympy.factorint(q.denominator).items():
        out[p] = out.get(p, 0) - e
    return out


def integer_log(base: Fraction, target: Fraction) -> set[int] | str:
    """All integers n with ``base**n == target`` for positive rationals.

    Returns a set (empty or a singleton) or ``"all"`` when base == target == 1.
    Decided on prime exponent vectors: n e(base) = e(target).
    """
    if base <= 0 or target <= 0:
        raise DomainError("integer_log needs positive rationals")
    eb, et = _exponents(base), _exponents(target)
    if not eb:
        return "all" if not et else set()
    primes = set(eb) | set(et)
    p0 = next(iter(eb))
    if et.get(p0, 0) % eb[p0]:
        return set()
    n = et.get(p0, 0) // eb[p0]
    if all(n * eb.get(p, 0) == et.get(p, 0) for p in primes):
        return {n}
    return set()


SLOPE_FAMILIES = (
    # label, (exponent base, multiplier) so that slope = base^n * multiplier
    ("f^n g", "a", "c"),
    ("f^n g^-1", "a", "1/c"),
    ("g^n f", "c", "a"),
    ("g^n f^-1", "c", "1/a"),
)


def slope_one_exponents(a: Fraction, c: Fraction) -> list[dict]:
    """Every nonzero n where a first-step product has slope 1 (no fixed point).

    Slopes are a^n c, a^n/c, c^n a, c^n/a; slope s^n t = 1 iff s^n = 1/t.
    """
    vals = {"a": a, "c": c, "1/a": 1 / a, "1/c": 1 / c}
    hits = []
    for label, base, mult in SLOPE_FAMILIES:
        sols = integer_log(vals[base], 1 / vals[mult])
        if sols == "all":
            hits.append({"family": label, "n": "all"})
        else:
            hits.extend({"family": label, "n": n} for n in sorted(sols) if n != 0)
    return hits


def verify_aff_counterexample(f: Mat2Q, g: Mat2Q, n_range: tuple[int, int] = (-20, 20)) -> Certificate:
    """First-step products of f, g have fixed points on R while [f, g] has none."""
    timer = Timer()
    _check_affine(f)
    _check_affine(g)
    lo, hi = n_range
    failures = []
    fixed = []
    for n in sorted((n for n in range(lo, hi + 1) if n != 0), key=lambda n: (abs(n), -n)):
        closed = affine_product_closed_forms(f, g, n)
        direct = affine_product_direct(f, g, n)
        for label, m in direct.items():
            if closed[label] != m:
                failures.append({"clause": "closed-form", "family": label, "n": n})
            p = aff_fixed_point(m)
            if p is None:
                failures.append({"clause": "hypothesis violated", "family": label, "n": n,
                                 "matrix": m.to_json()})
            elif n == 1:
                fixed.append({"family": label, "n": n, "fixed_point": p})
    all_n = slope_one_exponents(f.a, g.a)
    for hit in all_n:
        if not any(w.get("family") == hit["family"] and w.get("n") == hit["n"] for w in failures):
            failures.append({"clause": "hypothesis violated (all n)", **hit})

    a, b, c, d = f.a, f.b, g.a, g.b
    comm = commutator(f, g)
    formula = Mat2Q(1, -d - c * b + b + a * d, 0, 1)
    if comm != formula:
        failures.append({"clause": "commutator formula", "direct": comm.to_json(),
                         "formula": formula.to_json()})
    comm_fix = aff_fixed_point(comm)
    if comm_fix is not None:
        failures.append({"clause": "not a counterexample", "commutator": comm.to_json(),
                         "commutator_fixed": comm_fix})
    params = {"f": f, "g": g, "n_range": [lo, hi]}
    notes = [
        "all-n extension: slope a^n c etc. equals 1 only if prime exponent vectors align; "
        + ("no such n exists" if not all_n else f"solutions {all_n}"),
        "fixed point of t -> s t + r is r/(1 - s) whenever s != 1",
    ]
    witnesses = [{"commutator": comm, "commutator_fixed_point": "none"}] + fixed
    return certify("prop.aff.counterexample", params, failures, timer, witnesses, notes)


DEFAULT_AFF_F = Mat2Q(2, 3, 0, 1)
DEFAULT_AFF_G = Mat2Q(3, 4, 0, 1)


# --- SL(2,R) acting on H^2 ---------------------------------------------------------


@dataclass(frozen=True)
class IsometryClass:
    kind: str  # "elliptic" | "parabolic" | "hyperbolic"
    discriminant: Fraction


def classify_isometry(x: Mat2Q) -> IsometryClass:
    if x.det != 1:
        raise DomainError("classification needs determinant exactly 1")
    disc = x.trace ** 2 - 4
    kind = "elliptic" if disc < 0 else "parabolic" if disc == 0 else "hyperbolic"
    return IsometryClass(kind, disc)


def trace_formula_AnBk(theta: float, eta: float, lam: float, n, k):
    """Closed form of trace(A^n B'^k); vectorises over numpy arrays of n, k."""
    if np.any(np.asarray(lam) <= 0):
        raise DomainError("lambda must be positive")
    n = np.asarray(n)
    k = np.asarray(k)
    out = (2 * np.cos(n * theta - k * eta)
           - (lam + 1 / lam) ** 2 * np.sin(n * theta) * np.sin(k * eta))
    return float(out) if out.ndim == 0 else out


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def conjugated_rotation(eta: float, lam: float) -> np.ndarray:
    """``B' = diag(λ, 1/λ) R(η) diag(1/λ, λ)``."""
    dg = np.diag([lam, 1 / lam])
    return dg @ rotation(eta) @ np.diag([1 / lam, lam])


def trace_direct_AnBk(theta: float, eta: float, lam: float, n: int, k: int) -> float:
    an = np.linalg.matrix_power(rotation(theta), int(n))
    bk = np.linalg.matrix_power(conjugated_rotation(eta, lam), int(k))
    return float(np.trace(an @ bk))


@dataclass
class FreeElementResult:
    status: str  # "witness" | "none"
    n: int | None
    trace: float | None
    searched: int
    boundary: list

    def to_json(self) -> dict:
        return {"status": self.status, "n": self.n, "trace": self.trace,
                "searched": self.searched, "boundary": self.boundary[:10]}


def find_free_element(theta: float, eta: float, lam: float, bound: int,
                      margin: float = 1e-6) -> FreeElementResult:
    """Search n in 1, -1, 2, -2, ... up to ``bound`` for |trace(A^n B')| > 2 + margin.

    Such an element is hyperbolic, so it moves every point of H^2.
    Traces within ``margin`` of ±2 are collected in ``boundary`` as
    inconclusive, never as witnesses.  "none" means none up to ``bound``.
    """
    if abs(math.sin(theta)) < 1e-12 or abs(math.sin(eta)) < 1e-12:
        raise DomainError("both generators must be genuinely elliptic (sin != 0)")
    ns = np.empty(2 * bound, dtype=np.int64)
    ns[0::2] = np.arange(1, bound + 1)
    ns[1::2] = -np.arange(1, bound + 1)
    traces = trace_formula_AnBk(theta, eta, lam, ns, 1)
    mag = np.abs(traces)
    hit = np.nonzero(mag > 2 + margin)[0]
    near = np.nonzero((mag > 2 - margin) & (mag <= 2 + margin))[0]
    boundary = [int(ns[i]) for i in near]
    if hit.size:
        i = int(hit[0])
        return FreeElementResult("witness", int(ns[i]), float(traces[i]), i + 1,
                                 [b for b in boundary if abs(b) <= abs(int(ns[i]))])
    return FreeElementResult("none", None, None, len(ns), boundary)


def random_elliptic_pair(rng: random.Random) -> tuple[float, float, float]:
    """θ, η away from multiples of π and λ in [1/8, 8] away from 1."""
    theta = rng.uniform(0.05, math.pi - 0.05)
    eta = rng.uniform(0.05, math.pi - 0.05)
    while True:
        lam = math.exp(rng.uniform(math.log(1 / 8), math.log(8)))
        if abs(lam - 1) > 0.05:
            return theta, eta, lam


def verify_sl2(samples: int = 1000, pairs: int = 50, bound: int = 10**4, seed: int = 0,
               tol: float = 1e-9) -> Certificate:
    timer = Timer()
    rng = random.Random(seed)
    failures = []
    worst = 0.0
    for _ in range(samples):
        theta, eta = rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)
        lam = math.exp(rng.uniform(math.log(1 / 8), math.log(8)))
        n, k = rng.randint(-20, 20), rng.randint(-20, 20)
        err = abs(trace_formula_AnBk(theta, eta, lam, n, k) - trace_direct_AnBk(theta, eta, lam, n, k))
        worst = max(worst, err)
        if err >= tol:
            failures.append({"clause": "trace formula", "theta": theta, "eta": eta,
                             "lambda": lam, "n": n, "k": k, "error": err})
    found = []
    for _ in range(pairs):
        theta, eta, lam = random_elliptic_pair(rng)
        res = find_free_element(theta, eta, lam, bound)
        if res.status != "witness":
            failures.append({"clause": "free element", "theta": theta, "eta": eta,
                             "lambda": lam, "result": res.to_json()})
        else:
            found.append(abs(res.n))
    control = find_free_element(1.0, 1.0, 1.0, bound)
    if control.status == "witness":
        failures.append({"clause": "commuting control", "result": control.to_json()})
    params = {"samples": samples, "pairs": pairs, "bound": bound, "seed": seed, "tolerance": tol}
    witnesses = [{"max_trace_error": worst, "max_witness_n": max(found, default=None),
                  "control": control.to_json()["status"]}]
    notes = ["witnesses are floating-point search results with margin 1e-6, not proofs",
             "rational and irrational rotation angles share one search path"]
    return certify("prop.sl2.free_element", params, failures, timer, witnesses, notes)


# --- GL(2,R) acting on RP^1 ---------------------------------------------------------


def rp1_discriminant(x: Mat2Q) -> Fraction:
    return x.trace ** 2 - 4 * x.det


def rp1_has_fixed_point(x: Mat2Q) -> tuple[bool, Fraction]:
    """Real eigenvector exists iff (a+d)^2 - 4(ad-bc) >= 0."""
    disc = rp1_discriminant(x)
    return disc >= 0, disc


def _power_sum_coefficients(x: Mat2Q, y: Mat2Q) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """trace(x^m y) = α p^m + β r^m for triangular x with distinct diagonal p, r."""
    if x.c == 0:
        p, r, off = x.a, x.d, x.b
        # x^m = [[p^m, off (r^m - p^m)/(r - p)], [0, r^m]]
        alpha = y.a - off * y.c / (r - p)
        beta = y.d + off * y.c / (r - p)
    elif x.b == 0:
        p, r, off = x.a, x.d, x.c
        # x^m = [[p^m, 0], [off (r^m - p^m)/(r - p), r^m]]
        alpha = y.a - off * y.b / (r - p)
        beta = y.d + off * y.b / (r - p)
    else:
        raise DomainError("power-sum decomposition needs a triangular matrix")
    if p == r:
        raise DomainError("diagonal entries must differ")
    return alpha, p, beta, r


def _sig(x: float, digits: int) -> float:
    if x == 0:
        return 0.0
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def default_gl2_pair() -> tuple[Mat2Q, Mat2Q]:
    return Mat2Q.of(GL2_DECIMALS_A), Mat2Q.of(GL2_DECIMALS_B)


def verify_gl2_counterexample(A: Mat2Q, B: Mat2Q, m_range: tuple[int, int] = (-30, 30),
                              pair_range: int = 10, decimals: bool | None = None) -> Certificate:
    """Exact check that first-step products fix a point of RP^1 but [B, A] does not.

    ``decimals`` adds the comparison with the printed decimal values; it
    defaults to on exactly when (A, B) is the printed pair.
    """
    timer = Timer()
    failures = []
    lo, hi = m_range
    Ai, Bi = mat_inv(A), mat_inv(B)
    min_disc = None
    for m in range(lo, hi + 1):
        Am, Bm = mat_pow(A, m), mat_pow(B, m)
        for label, x in (("A^m B", Am @ B), ("A^m B^-1", Am @ Bi),
                         ("B^m A", Bm @ A), ("B^m A^-1", Bm @ Ai)):
            ok, disc = rp1_has_fixed_point(x)
            if not ok:
                failures.append({"clause": "first-step", "family": label, "m": m, "discriminant": disc})
            if min_disc is None or disc < min_disc[0]:
                min_disc = (disc, label, m)
    for n in range(-pair_range, pair_range + 1):
        An = mat_pow(A, n)
        for m in range(-pair_range, pair_range + 1):
            Bm = mat_pow(B, m)
            for label, x in (("A^n B^m", An @ Bm), ("B^m A^n", Bm @ An)):
                ok, disc = rp1_has_fixed_point(x)
                if not ok:
                    failures.append({"clause": "two-parameter", "family": label, "n": n, "m": m,
                                     "discriminant": disc})
    comm = mat_product([Bi, Ai, B, A])
    ok, comm_disc = rp1_has_fixed_point(comm)
    if ok:
        failures.append({"clause": "commutator has a fixed direction", "discriminant": comm_disc})
    if comm.det != 1:
        failures.append({"clause": "commutator determinant", "det": comm.det})

    witnesses: list = [{
        "commutator": comm,
        "commutator_trace": comm.trace,
        "commutator_trace_decimal": float(comm.trace),
        "commutator_det": comm.det,
        "commutator_discriminant": comm_disc,
        "min_first_step_discriminant": {"value": min_disc[0], "family": min_disc[1], "m": min_disc[2]},
    }]
    notes = [
        "fixed-direction test uses (a+d)^2 - 4(ad-bc) >= 0; the variant |Trace| >= 2|Det| "
        "differs for det != 1 but gives the same verdicts on this pair",
        f"first-step family checked for m in [{lo}, {hi}] only; two-parameter family for |n|,|m| <= {pair_range}",
    ]
    if decimals is None:
        decimals = (A, B) == default_gl2_pair()
    if decimals:
        dec, dec_fail = _gl2_decimal_checks(A, B, comm)
        witnesses.append({"decimal_cross_checks": dec})
        failures.extend(dec_fail)
        notes.append(f"printed 2|Det([B,A])| = {PRINTED_2DET_COMMUTATOR} is rounding noise; exact value is {2 * abs(comm.det)}")
    params = {"A": A, "B": B, "m_range": [lo, hi], "pair_range": pair_range}
    return certify("prop.gl2.counterexample", params, failures, timer, witnesses, notes)


def _gl2_decimal_checks(A: Mat2Q, B: Mat2Q, comm: Mat2Q) -> tuple[dict, list]:
    failures = []
    out: dict = {}
    alpha, p, beta, r = _power_sum_coefficients(A, B)
    out["trace_AmB"] = {"exact": [alpha, beta], "printed": list(PRINTED_TRACE_AmB),
                        "abs_err": [abs(float(alpha) - float(PRINTED_TRACE_AmB[0])),
                                    abs(float(beta) - float(PRINTED_TRACE_AmB[1]))]}
    if max(out["trace_AmB"]["abs_err"]) > 1e-6:
        failures.append({"clause": "decimal", "quantity": "Trace(A^m B) coefficients", **out["trace_AmB"]})
    pa, pb = (Fraction(s) for s in PRINTED_TRACE_AmB)
    rel = []
    for m in range(1, 11):
        exact = (mat_pow(A, m) @ B).trace
        if exact != alpha * p ** m + beta * r ** m:
            failures.append({"clause": "decimal", "quantity": "Trace(A^m B) decomposition", "m": m})
        rel.append(float(abs(pa * p ** m + pb * r ** m - exact) / abs(exact)))
    out["trace_AmB"]["max_rel_err_m1_10"] = max(rel)
    if max(rel) > 1e-6:
        failures.append({"clause": "decimal", "quantity": "Trace(A^m B) printed formula", "rel_err": max(rel)})

    alpha2, p2, beta2, r2 = _power_sum_coefficients(B, A)
    out["trace_BmA"] = {"exact": [alpha2, beta2], "printed": list(PRINTED_TRACE_BmA),
                        "abs_err": [abs(float(alpha2) - float(PRINTED_TRACE_BmA[0])),
                                    abs(float(beta2) - float(PRINTED_TRACE_BmA[1]))]}
    if max(out["trace_BmA"]["abs_err"]) > 1e-6:
        failures.append({"clause": "decimal", "quantity": "Trace(B^m A) coefficients", **out["trace_BmA"]})

    # 2 Det(A^m B) = 2 det(B) det(A)^m and 2 Det(B^m A) = 2 det(A) det(B)^m
    out["2det_AmB"] = {"exact": 2 * B.det, "base": A.det, "printed": PRINTED_2DET_AmB,
                       "abs_err": abs(float(2 * B.det) - float(PRINTED_2DET_AmB))}
    out["2det_BmA"] = {"exact": 2 * A.det, "base": B.det, "printed": PRINTED_2DET_BmA,
                       "abs_err": abs(float(2 * A.det) - float(PRINTED_2DET_BmA))}
    for key in ("2det_AmB", "2det_BmA"):
        if out[key]["abs_err"] > 1e-5:
            failures.append({"clause": "decimal", "quantity": key, **out[key]})

    entries = []
    for (ex, pr) in zip([comm.a, comm.b, comm.c, comm.d],
                        [s for row in PRINTED_COMMUTATOR for s in row]):
        match = _sig(float(ex), 4) == _sig(float(pr), 4)
        entries.append({"exact": ex, "decimal": float(ex), "printed": pr, "match_4sf": match})
        if not match:
            failures.append({"clause": "decimal", "quantity": "commutator entry", "printed": pr,
                             "exact": ex})
    out["commutator_entries"] = entries
    terr = abs(float(comm.trace) - float(PRINTED_COMMUTATOR_TRACE))
    out["commutator_trace"] = {"exact": comm.trace, "printed": PRINTED_COMMUTATOR_TRACE, "abs_err": terr}
    if terr > 1e-4:
        failures.append({"clause": "decimal", "quantity": "commutator trace", "abs_err": terr})
    out["det_A"], out["trace_A"] = A.det, A.trace
    out["det_B"], out["trace_B"] = B.det, B.trace
    return out, failures


# --- Heisenberg group -------------------------------------------------------------

Mat3 = tuple[tuple[Fraction, ...], ...]


def mat3(rows) -> Mat3:
    return tuple(tuple(parse_rational(v) for v in row) for row in rows)


def mat3_mul(x: Mat3, y: Mat3) -> Mat3:
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def unitriangular(a, b, c) -> Mat3:
    return mat3([[1, a, c], [0, 1, b], [0, 0, 1]])


def mat3_inv_unitriangular(x: Mat3) -> Mat3:
    a, c, b = x[0][1], x[0][2], x[1][2]
    return unitriangular(-a, -b, a * b - c)


def mat3_pow(x: Mat3, m: int) -> Mat3:
    if m < 0:
        x, m = mat3_inv_unitriangular(x), -m
    out = unitriangular(0, 0, 0)
    for _ in range(m):
        out = mat3_mul(out, x)
    return out


def _is_unitriangular(x: Mat3) -> bool:
    return all(x[i][i] == 1 for i in range(3)) and x[1][0] == x[2][0] == x[2][1] == 0


def _fixes_e1(x: Mat3) -> bool:
    return tuple(x[i][0] for i in range(3)) == (1, 0, 0)


def heisenberg_fixed_vector_check(A: Mat3, B: Mat3, n_range: tuple[int, int] = (-10, 10),
                                  words: int = 200, max_len: int = 8, seed: int = 0) -> Certificate:
    timer = Timer()
    if not (_is_unitriangular(A) and _is_unitriangular(B)):
        raise DomainError("Heisenberg check needs upper unitriangular matrices")
    failures = []
    lo, hi = n_range
    for n in range(lo, hi + 1):
        if not _fixes_e1(mat3_mul(mat3_pow(A, n), B)):
            failures.append({"clause": "A^n B", "n": n})
    rng = random.Random(seed)
    gens = {1: A, -1: mat3_inv_unitriangular(A), 2: B, -2: mat3_inv_unitriangular(B)}
    for _ in range(words):
        letters = [rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, max_len))]
        x = unitriangular(0, 0, 0)
        for l in letters:
            x = mat3_mul(x, gens[l])
        if not _fixes_e1(x):
            failures.append({"clause": "sampled word", "letters": letters})
    params = {"A": [[str(v) for v in r] for r in A], "B": [[str(v) for v in r] for r in B],
              "n_range": [lo, hi], "words": words, "max_len": max_len, "seed": seed}
    return certify("remark.heisenberg.fixed_vector", params, failures, timer,
                   [{"vector": [1, 0, 0], "checked_powers": hi - lo + 1, "checked_words": words}])


def random_unitriangular(rng: random.Random, den: int = 12) -> Mat3:
    def q():
        return Fraction(rng.randint(-3 * den, 3 * den), rng.randint(1, den))
    return unitriangular(q(), q(), q())
