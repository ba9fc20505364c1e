"""Word-problem oracles and shortest-relation (girth) search.

``GammaOracle(n)`` decides the word problem in Γ_n = <a, b | [a,b]^n> by
Dehn-style replacement: a nontrivial relation of a one-relator group with
torsion relator s^n contains more than (n-1)/n of a cyclic conjugate of
s^{±n} (Newman's spelling theorem), and swapping that piece for the rest of
the relator strictly shortens the word.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .certificate import BUDGET_EXCEEDED, Certificate, Timer, certify
from .freegroup import (
    COMMUTATOR_AB,
    GenTuple,
    Word,
    abelianize,
    cyclic_reduce,
    format_word,
    is_free_basis,
    nielsen_moves,
    orbit_bfs,
    parse_word,
)

DEFAULT_GIRTH_BUDGET = 5 * 10**6


class UnsupportedGroupError(ValueError):
    pass


class ClaimCounterexample(AssertionError):
    def __init__(self, message, tuple_=None):
        super().__init__(message)
        self.tuple = tuple_


class GroupOracle:
    """Decides ``w == 1`` in a group presented on the free generators."""

    oracle_id = "abstract"

    def is_identity(self, w: Word) -> bool:
        raise NotImplementedError

    def generates(self, entries: Sequence[Word]) -> bool | None:
        """True/False when generation of the whole group is decidable, else None."""
        return None


class FreeOracle(GroupOracle):
    oracle_id = "free"

    def is_identity(self, w: Word) -> bool:
        return len(w) == 0

    def normal_form(self, w: Word) -> Word:
        return w

    def generates(self, entries):
        if len(entries) == 2 and entries[0].rank == 2:
            return is_free_basis(entries)
        return None


class AbelianOracle(GroupOracle):
    oracle_id = "z2"

    def is_identity(self, w: Word) -> bool:
        return not any(abelianize(w))

    def normal_form(self, w: Word) -> Word:
        letters: list[int] = []
        for k, e in enumerate(abelianize(w), start=1):
            letters += [k if e > 0 else -k] * abs(e)
        return Word(tuple(letters), w.rank)

    def generates(self, entries):
        if len(entries) == 2 and entries[0].rank == 2:
            (p, q), (r, s) = abelianize(entries[0]), abelianize(entries[1])
            return abs(p * s - q * r) == 1
        return None


def _relator_patterns(n: int) -> list[tuple[int, ...]]:
    """The 8 cyclic conjugates of ([a,b]^n)^{±1}, each of length 4n."""
    pats = []
    for base in (COMMUTATOR_AB.letters, COMMUTATOR_AB.inverse().letters):
        for shift in range(len(base)):
            rot = base[shift:] + base[:shift]
            pats.append(rot * n)
    return pats


_PATTERN_CACHE: dict[int, list[tuple[int, ...]]] = {}


def _dehn_step(letters: tuple[int, ...], n: int) -> tuple[int, ...] | None:
    pats = _PATTERN_CACHE.setdefault(n, _relator_patterns(n))
    full = 4 * n
    threshold = 4 * (n - 1)
    size = len(letters)
    for i in range(size):
        x = letters[i]
        for pat in pats:
            if pat[0] != x:
                continue
            m = 1
            limit = min(full, size - i)
            while m < limit and letters[i + m] == pat[m]:
                m += 1
            if m > threshold:
                # pat = u v with u matched; u = v⁻¹ in Γ_n
                rest = pat[m:]
                repl = tuple(-y for y in reversed(rest))
                return letters[:i] + repl + letters[i + m:]
    return None


def gamma_reduce(w: Word, n: int) -> Word:
    """Shorten ``w`` by relator replacements until none applies (cyclic word)."""
    if w.rank != 2:
        raise UnsupportedGroupError("Γ_n words must have rank 2")
    if n < 2:
        raise UnsupportedGroupError("Γ_n oracle needs n >= 2")
    cur = cyclic_reduce(w)
    while cur:
        nxt = _dehn_step(cur.letters, n)
        if nxt is None:
            break
        cur = cyclic_reduce(Word(nxt, 2))
    return cur


def gamma_is_identity(w: Word, n: int) -> bool:
    if n < 2:
        raise UnsupportedGroupError("Γ_n oracle needs n >= 2")
    if any(abelianize(w)):
        return False
    return not gamma_reduce(w, n)


class GammaOracle(GroupOracle):
    def __init__(self, n: int):
        if n < 2:
            raise UnsupportedGroupError("Γ_n oracle needs n >= 2")
        self.n = n
        self.oracle_id = f"gamma:{n}"

    def is_identity(self, w: Word) -> bool:
        return gamma_is_identity(w, self.n)


def oracle_from_spec(spec: str) -> GroupOracle:
    """``free``, ``z2`` or ``gamma:<n>``."""
    if spec == "free":
        return FreeOracle()
    if spec == "z2":
        return AbelianOracle()
    if spec.startswith("gamma:"):
        return GammaOracle(int(spec.split(":", 1)[1]))
    raise UnsupportedGroupError(f"unknown group {spec!r}")


# --- girth search ---------------------------------------------------------------


@dataclass
class GirthCertificate:
    generators: GenTuple
    bound: int
    oracle_id: str
    cycle: Word | None = None  # in generator letters
    cycle_image: Word | None = None  # evaluated in the group's letters
    complete: bool = True
    nodes: int = 0
    elapsed_ms: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def girth(self) -> int | None:
        return len(self.cycle) if self.cycle is not None else None

    def to_json(self) -> dict:
        if self.cycle is not None:
            result = {"cycle": format_word(self.cycle), "length": len(self.cycle),
                      "image": format_word(self.cycle_image)}
        else:
            result = {"verdict": f"no relation of length <= {self.bound}"
                      if self.complete else "incomplete"}
        return {
            "generators": self.generators.to_json(),
            "bound": self.bound,
            "oracle": self.oracle_id,
            "result": result,
            "complete": self.complete,
            "stats": {"nodes": self.nodes, "elapsed_ms": self.elapsed_ms},
            "notes": self.notes,
        }


def _letter_order(m: int) -> list[int]:
    out = []
    for k in range(1, m + 1):
        out += [k, -k]
    return out


def cyclically_reduced_words(length: int, m: int) -> Iterator[tuple[int, ...]]:
    """Cyclically reduced words of exactly ``length`` over m generators, lex order."""
    order = _letter_order(m)
    word: list[int] = []

    def rec():
        if len(word) == length:
            if length == 1 or word[-1] != -word[0]:
                yield tuple(word)
            return
        for x in order:
            if word and word[-1] == -x:
                continue
            word.append(x)
            yield from rec()
            word.pop()

    yield from rec()


def _is_class_minimal(letters: tuple[int, ...], rank_of) -> bool:
    # lex-minimal among all rotations of the word and of its inverse
    key = [rank_of[x] for x in letters]
    inv = [rank_of[-x] for x in reversed(letters)]
    n = len(key)
    for seq in (key, inv):
        for s in range(n):
            rot = seq[s:] + seq[:s]
            if rot < key:
                return False
    return True


def girth_search(gens: GenTuple, oracle: GroupOracle, max_len: int,
                 budget: int = DEFAULT_GIRTH_BUDGET) -> GirthCertificate:
    """Shortest nonempty cyclically reduced relation among the generators.

    Words are tried by length, lexicographically within a length (letter
    order x1 < X1 < x2 < ...), so the returned cycle is the first such
    relation.  Only words minimal among their rotations and inverse
    rotations are evaluated; relations are closed under both, so the first
    relation found is unchanged.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    start = time.perf_counter()
    m = len(gens)
    rank_of = {x: i for i, x in enumerate(_letter_order(m))}
    images = list(gens.entries)
    cert = GirthCertificate(gens, max_len, oracle.oracle_id)
    nodes = 0
    for length in range(1, max_len + 1):
        for letters in cyclically_reduced_words(length, m):
            nodes += 1
            if nodes > budget:
                cert.complete = False
                cert.nodes = nodes
                cert.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
                cert.notes.append(f"budget of {budget} words exhausted at length {length}")
                return cert
            if not _is_class_minimal(letters, rank_of):
                continue
            w = Word(letters, m)
            img = w.substitute(images)
            if oracle.is_identity(img):
                cert.cycle, cert.cycle_image = w, img
                cert.nodes = nodes
                cert.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
                return cert
    cert.nodes = nodes
    cert.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
    return cert


# --- Nielsen girth upper bound -------------------------------------------------


def random_nielsen_tuple(steps: int, rng: random.Random) -> GenTuple:
    moves = nielsen_moves(2)
    t = GenTuple.standard(2)
    for _ in range(steps):
        t = t.apply(rng.choice(moves))
    return t


def nielsen_girth_bound_check(n: int, depth: int, samples: int = 0, seed: int = 0,
                              budget: int = 10**6) -> Certificate:
    """Certify ([a_r, b_r])^n = 1 in Γ_n along the Nielsen orbit of (a, b).

    Every tuple within ``depth`` moves is checked, plus ``samples`` random
    walks of between depth+1 and 3*depth+3 moves.  Each pass shows that the
    Cayley graph for that generating pair has a cycle of length 4n.
    """
    timer = Timer()
    if n < 2:
        raise UnsupportedGroupError("Γ_n oracle needs n >= 2")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rng = random.Random(seed)
    orbit = orbit_bfs(GenTuple.standard(2), "nielsen", depth, budget=budget)
    tuples = list(orbit.levels[-1].tuples)
    for _ in range(samples):
        tuples.append(random_nielsen_tuple(rng.randint(depth + 1, 3 * depth + 3), rng))
    checked = 0
    max_len = 0
    for t in tuples:
        a_r, b_r = t.entries
        rel = (a_r * b_r * a_r.inverse() * b_r.inverse()) ** n
        max_len = max(max_len, len(a_r) + len(b_r))
        if not gamma_is_identity(rel, n):
            raise ClaimCounterexample(
                f"([a_r,b_r])^{n} != 1 in Γ_{n} for {t}", t)
        checked += 1
    params = {"n": n, "depth": depth, "samples": samples, "seed": seed}
    notes = [
        f"checked {checked} generating pairs; longest pair total length {max_len}",
        f"every checked pair carries a relation of length {4 * n}, so its Cayley girth is <= {4 * n}",
        "infinite girth of Γ_n is external mathematics (girth alternative for one-relator groups); not machine-checked",
    ]
    witnesses = [{"orbit_tuples": orbit.levels[-1].size, "random_samples": samples,
                  "relation_length": 4 * n}]
    return certify("prop.gamma.nielsen_girth_bound", params, [], timer, witnesses, notes)


def girth_certificate(cert: GirthCertificate, claim_id: str = "girth.search",
                      expect: int | None = None) -> Certificate:
    """Wrap a girth search result as a generic certificate."""
    timer = Timer()
    params = {"generators": cert.generators.to_json()["entries"], "max_len": cert.bound,
              "group": cert.oracle_id}
    if not cert.complete:
        return Certificate(claim_id, params, BUDGET_EXCEEDED, [cert.to_json()],
                           cert.notes, elapsed_ms=cert.elapsed_ms)
    failures = []
    if expect is not None and cert.girth != expect:
        failures.append({"expected": expect, "found": cert.girth})
    c = certify(claim_id, params, failures, timer, [cert.to_json()], cert.notes)
    c.elapsed_ms = cert.elapsed_ms
    return c


def parse_generators(text: str) -> GenTuple:
    words = [parse_word(s) for s in text.split(",")]
    rank = max(w.rank for w in words)
    return GenTuple(tuple(Word(w.letters, rank) for w in words))
