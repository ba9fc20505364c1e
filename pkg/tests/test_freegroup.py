import math

import pytest
from hypothesis import given, settings, strategies as st

from primdyn.freegroup import (
    A,
    B,
    COMMUTATOR_AB,
    BudgetExceededError,
    GenTuple,
    MalformedWordError,
    Move,
    UnsupportedRankError,
    Word,
    abelianize,
    all_reduced_words,
    apply_move,
    commutator,
    commutator_conjugacy_table,
    cyclic_reduce,
    format_word,
    is_free_basis,
    is_primitive,
    nielsen_moves,
    orbit_bfs,
    parse_word,
    primitive_gcd_ok,
    reduce,
    schreier_moves,
    whitehead_primitive,
)

letters2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=14)
letters64 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=64)


def naive_reduce(seq):
    # repeated scan, independent of the stack reduction
    seq = list(seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] == -seq[i + 1]:
                del seq[i:i + 2]
                changed = True
                break
    return tuple(seq)


def test_reduce_spec_examples():
    assert format_word(reduce("aAb")) == "b"
    assert format_word(reduce("abBA")) == ""
    assert reduce("aAb", 2) == Word((2,), 2)


def test_parse_format_roundtrip():
    for text in ("a", "AB", "abAB", "bbbaaB"):
        assert format_word(parse_word(text)) == text
    assert parse_word("") == Word.identity(2)
    assert parse_word("1") == Word.identity(2)


def test_parse_rejects_bad_letters():
    with pytest.raises(MalformedWordError):
        parse_word("ab1")
    with pytest.raises(MalformedWordError):
        parse_word("ax", 2)


@given(letters64)
def test_reduce_matches_naive(seq):
    assert Word(tuple(seq), 2).letters == naive_reduce(seq)


@given(letters64)
def test_reduce_idempotent_and_shortening(seq):
    once = Word(tuple(seq), 2)
    assert Word(once.letters, 2) == once
    assert len(once) <= len(seq)


@given(letters2, letters2)
def test_group_laws(x, y):
    u, v = Word(tuple(x), 2), Word(tuple(y), 2)
    e = Word.identity(2)
    assert u * u.inverse() == e
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert u * e == u == e * u


@given(letters2)
def test_cyclic_reduce_is_conjugate(seq):
    u = Word(tuple(seq), 2)
    c = cyclic_reduce(u)
    if c:
        assert c.letters[0] != -c.letters[-1]
    assert abelianize(c) == abelianize(u)
    assert len(c) % 2 == len(u) % 2


def test_commutator_convention():
    assert format_word(commutator(A, B)) == "abAB"
    assert COMMUTATOR_AB == parse_word("abAB")


def test_all_reduced_words_count():
    # 4 * 3^(k-1) reduced words of length k in F_2
    counts = [0] * 5
    for u in all_reduced_words(4):
        counts[len(u)] += 1
    assert counts == [1, 4, 12, 36, 108]


@pytest.mark.parametrize("mv", schreier_moves(2) + nielsen_moves(2))
@given(x=letters2, y=letters2)
@settings(max_examples=25)
def test_move_invertible(mv, x, y):
    t = (Word(tuple(x), 2), Word(tuple(y), 2))
    assert apply_move(apply_move(t, mv), mv.inverse()) == t


def test_move_counts():
    assert len(schreier_moves(2)) == 5
    assert len(nielsen_moves(2)) == 8
    assert all(m.kind in ("right", "left") for m in nielsen_moves(2))


def test_move_json_roundtrip():
    for mv in schreier_moves(2) + nielsen_moves(2):
        assert Move.from_json(mv.to_json()) == mv


def test_gentuple_history_replays():
    t = GenTuple.standard(2)
    for mv in nielsen_moves(2)[:3] + schreier_moves(2)[:2]:
        t = t.apply(mv)
    assert t.replay_from(GenTuple.standard(2)) == t.entries
    assert t.undo_history() == GenTuple.standard(2).entries
    assert GenTuple.from_json(t.to_json()) == t


def test_orbit_levels_monotone():
    res = orbit_bfs(GenTuple.standard(2), "schreier", 4)
    sizes = [lv.size for lv in res.levels]
    elems = [lv.elements for lv in res.levels]
    assert sizes == sorted(sizes)
    assert all(a <= b for a, b in zip(elems, elems[1:]))
    assert res.levels[0].elements == {A, B}


def test_orbit_level_one():
    # swap, two inversions, two products: five new tuples
    res = orbit_bfs(GenTuple.standard(2), "schreier", 1)
    assert res.levels[1].size == 6
    assert res.levels[1].elements == {A, B, A.inverse(), B.inverse(), A * B, B * A}


def test_orbit_budget_partial():
    with pytest.raises(BudgetExceededError) as exc:
        orbit_bfs(GenTuple.standard(2), "schreier", 10, budget=50)
    assert exc.value.partial


def test_commutator_table():
    # [a',b'] = w [a,b] w^-1 for each one-step Nielsen move
    expected = {
        "a<-ab": "", "a<-aB": "", "b<-ba": "", "b<-bA": "",
        "a<-ba": "b", "a<-Ba": "B", "b<-ab": "a", "b<-Ab": "A",
    }
    seen = {}
    for mv, conj, sign in commutator_conjugacy_table():
        t = apply_move((A, B), mv)
        key = ("a<-" if mv.i == 0 else "b<-") + format_word(t[mv.i])
        seen[key] = format_word(conj)
        assert sign == 1
        assert commutator(*t) == conj * COMMUTATOR_AB * conj.inverse()
    assert seen == expected


def test_free_basis_examples():
    assert is_free_basis((A, B))
    assert is_free_basis((A * B, B))
    assert not is_free_basis((A * A, B))
    assert not is_free_basis((A, B * A * B.inverse() * A))
    with pytest.raises(UnsupportedRankError):
        is_free_basis((Word.gen(1, 3), Word.gen(2, 3)))


@pytest.mark.parametrize("text, prim", [
    ("a", True), ("ab", True), ("aab", True), ("abab", False), ("aabb", False),
    ("abAB", False), ("aaa", False), ("abaab", True), ("bAbAA", True), ("aaabb", False),
])
def test_whitehead_examples(text, prim):
    assert is_primitive(parse_word(text)) is prim


def test_whitehead_rank_guard():
    with pytest.raises(UnsupportedRankError):
        whitehead_primitive(Word.gen(1, 3))


@given(letters2)
def test_primitive_implies_gcd_one(seq):
    u = Word(tuple(seq), 2)
    if is_primitive(u):
        x, y = abelianize(u)
        assert math.gcd(x, y) == 1
        assert primitive_gcd_ok(u)


def test_whitehead_agrees_with_orbit_up_to_length_4():
    # full brute force at smaller scale; the acceptance test covers length 6
    res = orbit_bfs(GenTuple.standard(2), "schreier", 30, max_total_length=10)
    orbit_prims = {u for u in res.levels[-1].elements if len(u) <= 4}
    for u in all_reduced_words(4):
        if u:
            assert is_primitive(u) == (cyclic_reduce(u) in {cyclic_reduce(p) for p in orbit_prims}
                                       or u in orbit_prims), format_word(u)


def test_nielsen_level_one_elements():
    res = orbit_bfs(GenTuple.standard(2), "nielsen", 1)
    expected = {parse_word(s) for s in ("a", "b", "ab", "ba", "aB", "Ba", "Ab", "bA")}
    assert expected <= res.levels[1].elements
    assert res.levels[1].size == 9


def test_orbit_membership_examples():
    res = orbit_bfs(GenTuple.standard(2), "schreier", 6)
    elems = res.levels[-1].elements
    assert parse_word("abA") in elems and is_primitive(parse_word("abA"))
    assert parse_word("aa") not in elems and parse_word("abAB") not in elems
