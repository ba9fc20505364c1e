"""Lexicographically ordered semidirect product Z^2 ⋉ Z[1/2].

(n, m) acts on the dyadic rationals by multiplication with 2^n, so

    ((n1, m1); x) · ((n2, m2); y) = ((n1 + n2, m1 + m2); x + 2^n1 y).

The Z^2 factor is ordered through its embedding n + m√2 in R and ties are
broken on the dyadic coordinate.  Both steps are preserved by left
multiplication, so the order is left-invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certificate import Certificate, Timer, certify
from .freegroup import GenTuple, Word, abelianize, format_word, orbit_bfs


class NotDyadicError(ValueError):
    pass


def _dyadic(x) -> Fraction:
    x = Fraction(x)
    den = x.denominator
    if den & (den - 1):
        raise NotDyadicError(f"{x} is not a dyadic rational")
    return x


def _two_pow(n: int) -> Fraction:
    return Fraction(2) ** n


@dataclass(frozen=True, slots=True)
class LexElement:
    n: int
    m: int
    tail: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "tail", _dyadic(self.tail))

    @classmethod
    def identity(cls) -> "LexElement":
        return cls(0, 0, Fraction(0))

    @property
    def z2(self) -> tuple[int, int]:
        return (self.n, self.m)

    def __mul__(self, other: "LexElement") -> "LexElement":
        return lex_mul(self, other)

    def inverse(self) -> "LexElement":
        return lex_inv(self)

    def __lt__(self, other: "LexElement") -> bool:
        return lex_compare(self, other) < 0

    def to_json(self) -> dict:
        t = self.tail
        k = t.denominator.bit_length() - 1
        return {"n": self.n, "m": self.m, "tail": f"{t.numerator}/2^{k}"}

    @classmethod
    def from_json(cls, data: dict) -> "LexElement":
        num, _, exp = str(data["tail"]).partition("/2^")
        tail = Fraction(int(num), 2 ** int(exp or 0))
        return cls(int(data["n"]), int(data["m"]), tail)

    def __repr__(self) -> str:
        return f"(({self.n},{self.m});{self.tail})"


def lex_mul(x: LexElement, y: LexElement) -> LexElement:
    return LexElement(x.n + y.n, x.m + y.m, x.tail + _two_pow(x.n) * y.tail)


def lex_inv(x: LexElement) -> LexElement:
    return LexElement(-x.n, -x.m, -_two_pow(-x.n) * x.tail)


def sign_p_plus_q_sqrt2(p: int, q: int) -> int:
    """Exact sign of p + q√2 for integers p, q."""
    if p >= 0 and q >= 0:
        return int(p > 0 or q > 0)
    if p <= 0 and q <= 0:
        return -1
    # opposite signs: compare p^2 with 2 q^2
    lhs, rhs = p * p, 2 * q * q
    if p > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def lex_compare(x: LexElement, y: LexElement) -> int:
    s = sign_p_plus_q_sqrt2(x.n - y.n, x.m - y.m)
    if s:
        return s
    return (x.tail > y.tail) - (x.tail < y.tail)


def lex_pow(x: LexElement, k: int) -> LexElement:
    base = x if k >= 0 else lex_inv(x)
    out = LexElement.identity()
    for _ in range(abs(k)):
        out = lex_mul(out, base)
    return out


@dataclass(frozen=True)
class OrderVerdict:
    sign: str  # "positive" | "identity" | "negative"
    dominant: bool


def is_dominant(x: LexElement) -> OrderVerdict:
    """Dominance up to inversion: holds exactly when the Z^2 part is nonzero.

    Then n + m√2 != 0 and the powers of x run past every element in both
    directions; with zero Z^2 part all powers stay in the convex subgroup
    0 ⋉ Z[1/2].
    """
    s = lex_compare(x, LexElement.identity())
    sign = "positive" if s > 0 else "negative" if s < 0 else "identity"
    return OrderVerdict(sign, x.z2 != (0, 0))


PHI = LexElement(1, 0, Fraction(1))
PSI = LexElement(0, 1, Fraction(1))


def evaluate(w: Word, images=(PHI, PSI)) -> LexElement:
    inv = [lex_inv(x) for x in images]
    out = LexElement.identity()
    for letter in w.letters:
        out = lex_mul(out, images[letter - 1] if letter > 0 else inv[-letter - 1])
    return out


def lex_commutator(x: LexElement, y: LexElement) -> LexElement:
    return lex_mul(lex_mul(x, y), lex_mul(lex_inv(x), lex_inv(y)))


def verify_primitive_dominance(depth: int = 8, moves: str = "schreier",
                               budget: int = 10**6) -> Certificate:
    """Every primitive element to ``depth`` is dominant; [φ, ψ] is not.

    The structural reason is checked too: each orbit tuple abelianizes to a
    basis of Z^2 (determinant ±1), so no entry has zero Z^2 part.
    """
    timer = Timer()
    if depth < 1:
        raise ValueError("depth must be >= 1")
    orbit = orbit_bfs(GenTuple.standard(2), moves, depth, budget=budget)
    final = orbit.levels[-1]
    failures = []
    for t in final.tuples:
        (p, q), (r, s) = abelianize(t.entries[0]), abelianize(t.entries[1])
        if abs(p * s - q * r) != 1:
            failures.append({"clause": "basis", "tuple": t.to_json(), "det": p * s - q * r})
    positive = 0
    for w in sorted(final.elements, key=lambda w: (len(w), w.letters)):
        x = evaluate(w)
        if x.z2 != abelianize(w):
            failures.append({"clause": "projection", "word": format_word(w)})
        v = is_dominant(x)
        if not v.dominant:
            failures.append({"clause": "primitive not dominant", "word": format_word(w), "element": x})
        positive += v.sign == "positive"
    comm = lex_commutator(PHI, PSI)
    cv = is_dominant(comm)
    if comm == LexElement.identity():
        failures.append({"clause": "commutator trivial", "element": comm})
    if cv.dominant:
        failures.append({"clause": "commutator dominant", "element": comm})
    params = {"depth": depth, "moves": moves, "G": "Z[1/2]", "action": "(n,m).x = 2^n x",
              "phi": PHI, "psi": PSI}
    witnesses = [{
        "primitive_elements": len(final.elements),
        "orbit_tuples": final.size,
        "positive_primitives": positive,
        "commutator": comm,
        "commutator_sign": cv.sign,
        "commutator_dominant": cv.dominant,
    }]
    notes = [
        "freeness on R is certified at the order level: dominant elements act freely in the "
        "dynamical realization (external mathematics, not constructed here)",
        "a nontrivial element with zero Z^2 part cannot act freely while the group is non-abelian (Hölder)",
    ]
    return certify("prop.ordered.primitive_dominance", params, failures, timer, witnesses, notes)


def dominance_sweep(x: LexElement, y: LexElement, limit: int = 10**4) -> int | None:
    """Smallest k <= limit with x^k > y and x^-k < y (x positive), else None."""
    if lex_compare(x, LexElement.identity()) <= 0:
        raise ValueError("x must be positive")
    up, down = LexElement.identity(), LexElement.identity()
    xi = lex_inv(x)
    for k in range(1, limit + 1):
        up, down = lex_mul(up, x), lex_mul(down, xi)
        if lex_compare(up, y) > 0 and lex_compare(down, y) < 0:
            return k
    return None


def sqrt2_value(x: LexElement) -> float:
    return x.n + x.m * math.sqrt(2)
