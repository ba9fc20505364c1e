"""Words in free groups, Schreier/Nielsen move systems and primitivity.

A letter is a nonzero int: ``k`` is the k-th generator, ``-k`` its inverse.
Words print over ``a, b, c, ...`` with capitals for inverses, so ``abAB``
is the commutator ``[a, b] = a b a^-1 b^-1``.
"""

from __future__ import annotations

import math
import random
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_BUDGET = 10**6


class MalformedWordError(ValueError):
    pass


class UnsupportedRankError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """Raised when an orbit search outgrows its node budget.

    ``partial`` holds the levels completed before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or []


class InvariantViolation(AssertionError):
    pass


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    letters: tuple[int, ...]
    rank: int = 2

    def __post_init__(self):
        if self.rank < 1:
            raise MalformedWordError(f"rank must be positive, got {self.rank}")
        for x in self.letters:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise MalformedWordError(f"letter {x!r} out of range for rank {self.rank}")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def _raw(cls, letters: tuple[int, ...], rank: int) -> "Word":
        # letters already validated and freely reduced
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "rank", rank)
        return w

    @classmethod
    def identity(cls, rank: int = 2) -> "Word":
        return cls._raw((), rank)

    @classmethod
    def gen(cls, k: int, rank: int = 2) -> "Word":
        return cls((k,), rank)

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> "Word":
        return parse_word(text, rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise MalformedWordError("cannot multiply words of different rank")
        left, right = self.letters, other.letters
        i = 0
        n = min(len(left), len(right))
        while i < n and left[-1 - i] == -right[i]:
            i += 1
        return Word._raw(left[: len(left) - i] + right[i:], self.rank)

    def inverse(self) -> "Word":
        return Word._raw(tuple(-x for x in reversed(self.letters)), self.rank)

    def __pow__(self, m: int) -> "Word":
        base = self if m >= 0 else self.inverse()
        out = Word.identity(self.rank)
        for _ in range(abs(m)):
            out = out * base
        return out

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Image under the homomorphism sending generator k to ``images[k-1]``."""
        inv = [w.inverse() for w in images]
        out = Word.identity(images[0].rank)
        for x in self.letters:
            out = out * (images[x - 1] if x > 0 else inv[-x - 1])
        return out

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self) or '1'!r})"


def _alphabet(rank: int) -> str:
    if rank > 26:
        raise MalformedWordError("string form supports rank <= 26")
    return string.ascii_lowercase[:rank]


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``"abAB"`` style strings; ``""`` and ``"1"`` give the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return Word.identity(rank or 2)
    letters = []
    for ch in text:
        if not ch.isalpha() or not ch.isascii():
            raise MalformedWordError(f"bad letter {ch!r} in {text!r}")
        k = ord(ch.lower()) - ord("a") + 1
        letters.append(k if ch.islower() else -k)
    if rank is None:
        rank = max(2, max(abs(x) for x in letters))
    return Word(tuple(letters), rank)


def format_word(w: Word) -> str:
    alpha = _alphabet(w.rank)
    return "".join(alpha[x - 1] if x > 0 else alpha[-x - 1].upper() for x in w.letters)


def reduce(w, rank: int | None = None) -> Word:
    """Freely reduce a word given as a Word, a string or a letter sequence."""
    if isinstance(w, Word):
        return Word(w.letters, w.rank)
    if isinstance(w, str):
        return parse_word(w, rank)
    letters = tuple(w)
    if rank is None:
        rank = max([2] + [abs(x) for x in letters if isinstance(x, int)])
    return Word(letters, rank)


def cyclic_reduce(w: Word) -> Word:
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return Word._raw(letters[i : j + 1], w.rank)


def cyclic_conjugator(w: Word) -> tuple[Word, Word]:
    """Split ``w = c · core · c⁻¹`` with ``core`` cyclically reduced."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return Word._raw(letters[:i], w.rank), Word._raw(letters[i : j + 1], w.rank)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u⁻¹ v⁻¹``."""
    return u * v * u.inverse() * v.inverse()


def abelianize(w: Word) -> tuple[int, ...]:
    vec = [0] * w.rank
    for x in w.letters:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def random_word(length: int, rank: int = 2, rng: random.Random | None = None) -> Word:
    """Uniform freely reduced word of exactly ``length`` letters."""
    rng = rng or random.Random()
    letters: list[int] = []
    choices = [k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)]
    while len(letters) < length:
        x = rng.choice(choices)
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word._raw(tuple(letters), rank)


def all_reduced_words(max_len: int, rank: int = 2) -> Iterator[Word]:
    """Every freely reduced word of length ≤ ``max_len``, shortlex order."""
    choices = [k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)]
    level: list[tuple[int, ...]] = [()]
    yield Word.identity(rank)
    for _ in range(max_len):
        nxt = []
        for letters in level:
            for x in choices:
                if letters and letters[-1] == -x:
                    continue
                nxt.append(letters + (x,))
        for letters in nxt:
            yield Word._raw(letters, rank)
        level = nxt


# --- moves and tuples ---------------------------------------------------------

SWAP, INVERT, RIGHT, LEFT = "swap", "invert", "right", "left"
_KIND_ORDER = {SWAP: 0, INVERT: 1, RIGHT: 2, LEFT: 3}


@dataclass(frozen=True, slots=True)
class Move:
    """One elementary move on a tuple (indices are 0-based).

    swap(i, j)          exchange entries i and j
    invert(i)           s_i <- s_i^-1
    right(i, j, sign)   s_i <- s_i s_j^sign   (Schreier product when sign = +1)
    left(i, j, sign)    s_i <- s_j^sign s_i
    """

    kind: str
    i: int
    j: int = -1
    sign: int = 1

    def inverse(self) -> "Move":
        if self.kind in (RIGHT, LEFT):
            return Move(self.kind, self.i, self.j, -self.sign)
        return self

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.i, self.j, -self.sign)

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j, "sign": self.sign}

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        return cls(data["kind"], int(data["i"]), int(data.get("j", -1)), int(data.get("sign", 1)))

    def __str__(self) -> str:
        if self.kind == SWAP:
            return f"swap({self.i},{self.j})"
        if self.kind == INVERT:
            return f"invert({self.i})"
        e = "" if self.sign > 0 else "^-1"
        if self.kind == RIGHT:
            return f"s{self.i}<-s{self.i}s{self.j}{e}"
        return f"s{self.i}<-s{self.j}{e}s{self.i}"


def apply_move(entries: tuple[Word, ...], move: Move) -> tuple[Word, ...]:
    out = list(entries)
    i, j = move.i, move.j
    if move.kind == SWAP:
        out[i], out[j] = out[j], out[i]
    elif move.kind == INVERT:
        out[i] = out[i].inverse()
    else:
        other = entries[j] if move.sign > 0 else entries[j].inverse()
        out[i] = entries[i] * other if move.kind == RIGHT else other * entries[i]
    return tuple(out)


@dataclass(frozen=True)
class GenTuple:
    entries: tuple[Word, ...]
    history: tuple[Move, ...] = ()

    def __post_init__(self):
        ranks = {w.rank for w in self.entries}
        if len(ranks) > 1:
            raise MalformedWordError("tuple entries must share one rank")

    @classmethod
    def of(cls, *words) -> "GenTuple":
        parsed = [parse_word(w) if isinstance(w, str) else w for w in words]
        rank = max(w.rank for w in parsed)
        return cls(tuple(Word(w.letters, rank) for w in parsed))

    @classmethod
    def standard(cls, rank: int = 2) -> "GenTuple":
        return cls(tuple(Word.gen(k, rank) for k in range(1, rank + 1)))

    @property
    def rank(self) -> int:
        return self.entries[0].rank

    def __len__(self) -> int:
        return len(self.entries)

    def apply(self, move: Move) -> "GenTuple":
        return GenTuple(apply_move(self.entries, move), self.history + (move,))

    def replay_from(self, seed: "GenTuple") -> tuple[Word, ...]:
        entries = seed.entries
        for mv in self.history:
            entries = apply_move(entries, mv)
        return entries

    def undo_history(self) -> tuple[Word, ...]:
        entries = self.entries
        for mv in reversed(self.history):
            entries = apply_move(entries, mv.inverse())
        return entries

    def to_json(self) -> dict:
        return {
            "entries": [format_word(w) for w in self.entries],
            "history": [mv.to_json() for mv in self.history],
        }

    @classmethod
    def from_json(cls, data: dict, rank: int | None = None) -> "GenTuple":
        words = [parse_word(s, rank) for s in data["entries"]]
        r = max(w.rank for w in words)
        return cls(tuple(Word(w.letters, r) for w in words),
                   tuple(Move.from_json(m) for m in data.get("history", [])))

    def __str__(self) -> str:
        return "(" + ", ".join(format_word(w) or "1" for w in self.entries) + ")"


def schreier_moves(m: int) -> list[Move]:
    moves = [Move(SWAP, i, j) for i in range(m) for j in range(i + 1, m)]
    moves += [Move(INVERT, i) for i in range(m)]
    moves += [Move(RIGHT, i, j, 1) for i in range(m) for j in range(m) if i != j]
    return sorted(moves, key=Move.sort_key)


def nielsen_moves(m: int) -> list[Move]:
    moves = [Move(kind, k, j, s)
             for kind in (RIGHT, LEFT)
             for k in range(m) for j in range(m) if k != j
             for s in (1, -1)]
    return sorted(moves, key=Move.sort_key)


def _neighbors(t: GenTuple, moves: list[Move]) -> list[GenTuple]:
    if len(t) < 2:
        raise ValueError("move systems need at least two entries")
    return [t.apply(mv) for mv in moves]


def schreier_neighbors(t: GenTuple) -> list[GenTuple]:
    return _neighbors(t, schreier_moves(len(t)))


def nielsen_neighbors(t: GenTuple) -> list[GenTuple]:
    return _neighbors(t, nielsen_moves(len(t)))


MOVE_SYSTEMS = {"schreier": schreier_moves, "nielsen": nielsen_moves}


@dataclass
class OrbitLevel:
    depth: int
    tuples: list[GenTuple]
    elements: set[Word]

    @property
    def size(self) -> int:
        return len(self.tuples)


@dataclass
class OrbitResult:
    levels: list[OrbitLevel]
    generation_checked: bool
    rejected: int = 0
    saturated: bool = False


def orbit_bfs(
    seed: GenTuple,
    moves: str = "schreier",
    depth: int = 1,
    oracle=None,
    budget: int = DEFAULT_BUDGET,
    max_total_length: int | None = None,
) -> OrbitResult:
    """Breadth-first orbit of ``seed`` under one move system.

    ``levels[k].tuples`` is R_k (every tuple reachable in at most k moves, in
    discovery order) and ``levels[k].elements`` is P_k.  Tuples are
    deduplicated on the oracle's normal form when it offers one, otherwise on
    free equality.  If the oracle can decide generation, tuples failing it are
    dropped.  ``max_total_length`` prunes tuples whose entries are longer in
    total; with it the search may saturate before ``depth``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    move_list = MOVE_SYSTEMS[moves](len(seed))
    normal = getattr(oracle, "normal_form", None)
    generates = getattr(oracle, "generates", None)
    checked = generates is not None and generates(seed.entries) is not None

    def key(entries):
        return tuple(normal(w) for w in entries) if normal else entries

    seen = {key(seed.entries)}
    visited = [seed]
    elements = set(seed.entries)
    levels = [OrbitLevel(0, list(visited), set(elements))]
    frontier = [seed]
    rejected = 0
    saturated = False
    for d in range(1, depth + 1):
        nxt = []
        for t in frontier:
            for mv in move_list:
                entries = apply_move(t.entries, mv)
                if max_total_length is not None and sum(map(len, entries)) > max_total_length:
                    continue
                k = key(entries)
                if k in seen:
                    continue
                seen.add(k)
                if checked and not generates(entries):
                    rejected += 1
                    continue
                nt = GenTuple(entries, t.history + (mv,))
                nxt.append(nt)
                elements.update(entries)
                if len(seen) > budget:
                    raise BudgetExceededError(
                        f"orbit exceeded budget of {budget} tuples at depth {d}", levels)
        visited.extend(nxt)
        levels.append(OrbitLevel(d, list(visited), set(elements)))
        frontier = nxt
        if not nxt:
            saturated = True
            break
    return OrbitResult(levels, checked, rejected, saturated)


# --- commutator identities for one-step Nielsen moves ---------------------------

A = Word.gen(1)
B = Word.gen(2)
COMMUTATOR_AB = commutator(A, B)


def conjugator_to_commutator(w: Word) -> tuple[Word, int] | None:
    """Find ``(c, ±1)`` with ``w == c [a,b]^±1 c⁻¹`` in F_2, or None."""
    outer, core = cyclic_conjugator(w)
    for sign, target in ((1, COMMUTATOR_AB), (-1, COMMUTATOR_AB.inverse())):
        t = target.letters
        for shift in range(len(t)):
            if core.letters == t[shift:] + t[:shift]:
                # with t = p q: core = p⁻¹ t p = q t q⁻¹; keep the shorter one
                p, q = Word._raw(t[:shift], 2), Word._raw(t[shift:], 2)
                c = p.inverse() if len(p) <= len(q) else q
                return outer * c, sign
    return None


def commutator_conjugacy_table() -> list[tuple[Move, Word, int]]:
    """Each one-step Nielsen move on (a, b) with its conjugator.

    Returns ``(move, w, sign)`` such that ``[a', b'] = w [a,b]^sign w⁻¹``
    holds as an identity of reduced words.
    """
    seed = GenTuple.standard(2)
    table = []
    for t in nielsen_neighbors(seed):
        c = commutator(*t.entries)
        found = conjugator_to_commutator(c)
        if found is None:
            raise InvariantViolation(f"{t}: [a',b'] = {c} is not conjugate to [a,b]^±1")
        w, sign = found
        if w * (COMMUTATOR_AB if sign > 0 else COMMUTATOR_AB.inverse()) * w.inverse() != c:
            raise InvariantViolation(f"conjugator check failed for {t}")
        table.append((t.history[-1], w, sign))
    return table


def is_free_basis(entries: Sequence[Word]) -> bool:
    """Rank 2 only: (u, v) is a basis of F_2 iff [u, v] is conjugate to [a,b]^±1."""
    if len(entries) != 2 or entries[0].rank != 2:
        raise UnsupportedRankError("basis test implemented for pairs in F_2 only")
    return conjugator_to_commutator(commutator(*entries)) is not None


# --- Whitehead reduction (rank 2) ----------------------------------------------


def _whitehead_automorphisms() -> list[tuple[str, tuple[Word, Word]]]:
    out = []
    for v in (1, -1, 2, -2):
        vw = Word.gen(abs(v)) if v > 0 else Word.gen(abs(v)).inverse()
        other = 3 - abs(v)
        x = Word.gen(other)
        vname = format_word(vw)
        xname = format_word(x)
        for label, img in (
            (f"{xname}->{xname}{vname}", x * vw),
            (f"{xname}->{format_word(vw.inverse())}{xname}", vw.inverse() * x),
            (f"{xname}->{format_word(vw.inverse())}{xname}{vname}", vw.inverse() * x * vw),
        ):
            images = [None, None]
            images[abs(v) - 1] = Word.gen(abs(v))
            images[other - 1] = img
            out.append((label, (images[0], images[1])))
    return out


_WH_AUTOS = _whitehead_automorphisms()


def whitehead_primitive(w: Word) -> tuple[bool, list[str]]:
    """Decide primitivity of ``w`` in F_2 by greedy Whitehead reduction.

    The cyclic length is lowered by single Whitehead automorphisms while one
    helps; ``w`` is primitive iff the minimum reached is a single letter.
    """
    if w.rank != 2:
        raise UnsupportedRankError("Whitehead test implemented for rank 2 only")
    trace: list[str] = []
    cur = cyclic_reduce(w)
    while len(cur) > 1:
        for label, images in _WH_AUTOS:
            img = cyclic_reduce(cur.substitute(images))
            if len(img) < len(cur):
                trace.append(label)
                cur = img
                break
        else:
            break
    return len(cur) == 1, trace


def is_primitive(w: Word) -> bool:
    return whitehead_primitive(w)[0]


def primitive_gcd_ok(w: Word) -> bool:
    return math.gcd(*abelianize(w)) == 1
