from fractions import Fraction as F

import pytest

from primdyn import plmap
from primdyn.plmap import (
    FixSet,
    PLError,
    PLMap,
    build_figure1_pair,
    compose,
    conjugate,
    evaluate,
    evaluate_inverse,
    fixed_points,
    invert,
    power,
    random_plmap,
    verify_claim1,
    verify_claim2,
)

HALF_QUARTER = PLMap([(0, 0), (F(1, 2), F(1, 4)), (1, 1)])

# pair listed as default in the build notes; see test_listed_pair_fails_claim2
LISTED_F = PLMap([(0, 0), (F(1, 4), F(1, 8)), (F(1, 2), F(1, 2)), (F(3, 4), F(7, 8)), (1, 1)])
LISTED_G = PLMap([(0, 0), (F(1, 16), F(1, 16)), (F(1, 4), F(1, 8)), (F(3, 4), F(3, 4)),
                  (F(7, 8), F(31, 32)), (1, 1)])


def probes(rng, *maps, count=30):
    pts = {F(0), F(1)}
    for m in maps:
        pts.update(m.xs)
    pts.update(F(rng.randint(0, 997), 997) for _ in range(count))
    return sorted(pts)


def test_spec_example_evaluation():
    assert evaluate(HALF_QUARTER, F(1, 2)) == F(1, 4)
    assert evaluate_inverse(HALF_QUARTER, F(1, 4)) == F(1, 2)
    assert fixed_points(HALF_QUARTER).components == ((0, 0), (1, 1))


def test_rejects_bad_breakpoints():
    with pytest.raises(PLError):
        PLMap([(0, 0), (F(1, 2), F(1, 2)), (F(1, 2), F(3, 4)), (1, 1)])
    with pytest.raises(PLError):
        PLMap([(0, 0), (F(1, 2), F(3, 4)), (F(3, 4), F(1, 2)), (1, 1)])
    with pytest.raises(PLError):
        PLMap([(0, F(1, 8)), (1, 1)])


def test_collinear_points_merge():
    f = PLMap([(0, 0), (F(1, 4), F(1, 4)), (F(1, 2), F(1, 2)), (1, 1)])
    assert f.is_identity()
    assert len(f.breakpoints) == 2


def test_three_segment_compose_breakpoints():
    f = PLMap([(0, 0), (F(1, 3), F(1, 6)), (F(2, 3), F(1, 2)), (1, 1)])
    g = PLMap([(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(3, 4)), (1, 1)])
    h = compose(f, g)
    # interior breakpoints of f∘g lie among g's and g⁻¹ of f's: 2 + 2, plus the ends
    assert len(h.breakpoints) <= 6
    bound = set(g.xs) | {evaluate_inverse(g, x) for x in f.xs}
    assert set(h.xs) <= bound


def test_compose_is_pointwise(rng):
    for _ in range(100):
        f, g = random_plmap(rng), random_plmap(rng)
        h = compose(f, g)
        for x in probes(rng, f, g):
            assert evaluate(h, x) == evaluate(f, evaluate(g, x))


def test_group_laws(rng):
    e = PLMap.identity()
    for _ in range(100):
        f, g, h = random_plmap(rng), random_plmap(rng), random_plmap(rng)
        assert compose(f, invert(f)) == e == compose(invert(f), f)
        assert compose(compose(f, g), h) == compose(f, compose(g, h))
        assert compose(f, e) == f
        assert power(f, 3) == compose(f, compose(f, f))
        assert power(f, -2) == invert(compose(f, f))
        m, k = rng.randint(-4, 4), rng.randint(-4, 4)
        assert power(f, m + k) == compose(power(f, m), power(f, k))
        assert all(x0 < x1 and y0 < y1 for (x0, y0), (x1, y1)
                   in zip(compose(f, g).breakpoints, compose(f, g).breakpoints[1:]))
        assert f @ g == compose(f, g) and ~f == invert(f) and f ** 2 == power(f, 2)


def test_json_roundtrip(rng):
    f = random_plmap(rng)
    assert PLMap.from_json(f.to_json()) == f


def test_fixed_set_sound_and_complete(rng):
    for _ in range(300):
        f = random_plmap(rng)
        fix = fixed_points(f)
        pts = probes(rng, f)
        for p, q in fix.components:
            pts += [p, q, (p + q) / 2]
        for x in pts:
            assert (x in fix) == (evaluate(f, x) == x)


def test_fixset_image_and_interior():
    s = FixSet(((F(0), F(0)), (F(1, 4), F(1, 2)), (F(1), F(1))))
    assert s.interior().components == ((F(1, 4), F(1, 2)),)
    assert s.interior_witness() == F(1, 4)
    assert s.image(HALF_QUARTER).components[1] == (F(1, 8), F(1, 4))


def test_fixed_set_identities_small():
    assert plmap.fix_identities_check(pairs=60, seed=3).verdict == "pass"


def test_figure_pair_constraints():
    pair = build_figure1_pair()
    assert pair.ok
    x = pair.points
    assert x["x0"] < x["x1"] < x["x2"] < x["p"] < x["x3"]
    assert x["x1"] == F(35, 128) and x["p"] == F(83, 112)


def test_construction_rejects_bad_substitute():
    with pytest.raises(plmap.ConstructionError):
        build_figure1_pair(HALF_QUARTER, HALF_QUARTER)


def test_listed_pair_arithmetic():
    # the values recorded alongside the listed pair are right
    assert evaluate(LISTED_F, F(17, 20)) == evaluate(LISTED_G, F(17, 20)) == F(37, 40)
    assert evaluate(LISTED_G, F(1, 2)) == F(7, 16)
    assert evaluate(LISTED_F, F(1, 4)) == evaluate(LISTED_G, F(1, 4)) == F(1, 8)


def test_listed_pair_fails_claim2():
    # (g1 g2)^k f keeps an interior fixed point for every k, so this pair is unusable
    cert = verify_claim2(LISTED_F, LISTED_G, 4, (1, 3))
    assert cert.verdict == "fail"
    for w in cert.witnesses:
        assert w["interior_fixed"]
        x = F(w["interior_fixed"][0][0])
        h = plmap.claim2_element(LISTED_F, LISTED_G, 4, w["k"])
        assert evaluate(h, x) == x


def test_claim1_small_range():
    pair = build_figure1_pair()
    cert = verify_claim1(pair.f, pair.g, 3)
    assert cert.verdict == "pass"
    for w in cert.witnesses:
        x = F(w["x"])
        assert evaluate(power(pair.f, w["n"]), x) == evaluate(power(pair.g, w["l"]), x)
        assert 0 < x < 1


def test_claim2_independent_recheck():
    pair = build_figure1_pair()
    f, g = pair.f, pair.g
    for k in (1, 2, 5):
        g1 = compose(compose(power(f, 4), g), power(f, -4))
        g2 = compose(compose(power(f, -4), g), power(f, 4))
        h = compose(power(compose(g1, g2), k), f)
        assert fixed_points(h).components == ((0, 0), (1, 1))
        assert all(evaluate(h, x) < x for x in h.xs if 0 < x < 1)
    assert conjugate(power(f, 4), g) == compose(compose(power(f, 4), g), power(f, -4))


def test_render_svg():
    pair = build_figure1_pair()
    svg = plmap.render_svg({"f": pair.f, "g": pair.g})
    assert svg.startswith("<svg") and svg.count("<polyline") >= 2
