"""Orientation-preserving piecewise-linear homeomorphisms of [0, 1].

Maps are stored as canonical breakpoint lists with exact ``Fraction``
coordinates, so equality of maps is equality of breakpoint tuples.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .certificate import Timer, certify

ZERO = Fraction(0)
ONE = Fraction(1)


class PLError(ValueError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _canonical(points: Iterable[tuple]) -> tuple[tuple[Fraction, Fraction], ...]:
    pts = [(_frac(x), _frac(y)) for x, y in points]
    if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
        raise PLError("breakpoints must start at (0,0) and end at (1,1)")
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if not (x1 > x0 and y1 > y0):
            raise PLError("breakpoints must be strictly increasing in x and y")
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (xa, ya), (xb, yb), (xc, yc) = out[-1], pts[i], pts[i + 1]
        # drop the middle point when both neighbouring segments share a slope
        if (yb - ya) * (xc - xb) != (yc - yb) * (xb - xa):
            out.append(pts[i])
    out.append(pts[-1])
    return tuple(out)


@dataclass(frozen=True)
class PLMap:
    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, breakpoints: Iterable[tuple]):
        object.__setattr__(self, "breakpoints", _canonical(breakpoints))

    @classmethod
    def identity(cls) -> "PLMap":
        return cls([(0, 0), (1, 1)])

    @property
    def xs(self) -> list[Fraction]:
        return [x for x, _ in self.breakpoints]

    @property
    def ys(self) -> list[Fraction]:
        return [y for _, y in self.breakpoints]

    def is_identity(self) -> bool:
        return len(self.breakpoints) == 2

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __matmul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def __invert__(self) -> "PLMap":
        return invert(self)

    def __pow__(self, m: int) -> "PLMap":
        return power(self, m)

    def slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0)
                for (x0, y0), (x1, y1) in zip(self.breakpoints, self.breakpoints[1:])]

    def to_json(self) -> list[list[str]]:
        return [[str(x), str(y)] for x, y in self.breakpoints]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> "PLMap":
        return cls([(Fraction(str(x)), Fraction(str(y))) for x, y in data])

    def __repr__(self) -> str:
        inner = ", ".join(f"({x},{y})" for x, y in self.breakpoints)
        return f"PLMap([{inner}])"


def _interp(pts, keys, x: Fraction) -> Fraction:
    # pts sorted by first coordinate, keys = first coordinates
    i = bisect.bisect_right(keys, x)
    if i == 0 or i > len(pts):
        raise PLError(f"{x} outside [0,1]")
    if i == len(pts):
        if x == keys[-1]:
            return pts[-1][1]
        raise PLError(f"{x} outside [0,1]")
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def evaluate(f: PLMap, x) -> Fraction:
    return _interp(f.breakpoints, f.xs, _frac(x))


def evaluate_inverse(f: PLMap, y) -> Fraction:
    swapped = [(b, a) for a, b in f.breakpoints]
    return _interp(swapped, f.ys, _frac(y))


def compose(f: PLMap, g: PLMap) -> PLMap:
    """Return ``f ∘ g`` (apply ``g`` first)."""
    xs = set(g.xs)
    xs.update(evaluate_inverse(g, y) for y in f.xs)
    gx, fx = g.xs, f.xs
    pts = []
    for x in sorted(xs):
        pts.append((x, _interp(f.breakpoints, fx, _interp(g.breakpoints, gx, x))))
    return PLMap(pts)


def invert(f: PLMap) -> PLMap:
    return PLMap([(y, x) for x, y in f.breakpoints])


def power(f: PLMap, m: int) -> PLMap:
    if m < 0:
        f, m = invert(f), -m
    result = PLMap.identity()
    base = f
    while m:
        if m & 1:
            result = compose(result, base)
        m >>= 1
        if m:
            base = compose(base, base)
    return result


def conjugate(f: PLMap, g: PLMap) -> PLMap:
    """Return ``f ∘ g ∘ f⁻¹``."""
    return compose(compose(f, g), invert(f))


def compose_all(maps: Sequence[PLMap]) -> PLMap:
    """Compose left to right as written: ``maps[0] ∘ maps[1] ∘ …``."""
    out = PLMap.identity()
    for h in maps:
        out = compose(out, h)
    return out


# --- fixed sets --------------------------------------------------------------


@dataclass(frozen=True)
class FixSet:
    """Sorted, pairwise disjoint closed intervals ``[p, q]`` (``p == q`` allowed)."""

    components: tuple[tuple[Fraction, Fraction], ...]

    def __contains__(self, x) -> bool:
        x = _frac(x)
        i = bisect.bisect_right([p for p, _ in self.components], x)
        return i > 0 and self.components[i - 1][1] >= x

    def points(self) -> list[Fraction]:
        return [p for p, q in self.components if p == q]

    def interior(self) -> "FixSet":
        """Part of the set lying in the open interval (0, 1)."""
        out = []
        for p, q in self.components:
            p, q = max(p, ZERO), min(q, ONE)
            if q == ZERO or p == ONE:
                continue
            out.append((p, q))
        return FixSet(tuple(out))

    def interior_witness(self) -> Fraction | None:
        for p, q in self.components:
            if q <= ZERO or p >= ONE:
                continue
            if ZERO < p < ONE:
                return p
            if ZERO < q < ONE:
                return q
            return Fraction(1, 2)  # component is all of [0,1]
        return None

    def image(self, f: PLMap) -> "FixSet":
        return FixSet(tuple((evaluate(f, p), evaluate(f, q)) for p, q in self.components))

    def to_json(self) -> list[list[str]]:
        return [[str(p), str(q)] for p, q in self.components]

    def __repr__(self) -> str:
        parts = [str(p) if p == q else f"[{p},{q}]" for p, q in self.components]
        return "{" + ", ".join(parts) + "}"


def _merge(components: list[tuple[Fraction, Fraction]]) -> tuple:
    components.sort()
    out: list[list[Fraction]] = []
    for p, q in components:
        if out and p <= out[-1][1]:
            out[-1][1] = max(out[-1][1], q)
        else:
            out.append([p, q])
    return tuple((p, q) for p, q in out)


def fixed_points(f: PLMap) -> FixSet:
    comps = []
    for (x0, y0), (x1, y1) in zip(f.breakpoints, f.breakpoints[1:]):
        d0, d1 = y0 - x0, y1 - x1
        if d0 == 0 and d1 == 0:
            comps.append((x0, x1))
        elif d0 == 0:
            comps.append((x0, x0))
        elif d1 == 0:
            comps.append((x1, x1))
        elif (d0 < 0) != (d1 < 0):
            # displacement is linear on the segment, so the root is exact
            x = x0 + (x1 - x0) * d0 / (d0 - d1)
            comps.append((x, x))
    return FixSet(_merge(comps))


def displacement_sign(f: PLMap, lo, hi) -> int:
    """+1 if f > id on the open interval (lo, hi), -1 if f < id, 0 otherwise."""
    lo, hi = _frac(lo), _frac(hi)
    probes = [x for x in f.xs if lo < x < hi]
    probes += [(lo + hi) / 2]
    for p in fixed_points(f).components:
        if p[1] > lo and p[0] < hi:
            return 0
    signs = {(evaluate(f, x) > x) - (evaluate(f, x) < x) for x in probes}
    return signs.pop() if len(signs) == 1 else 0


def fixed_set_equal(a: FixSet, b: FixSet) -> bool:
    return a.components == b.components


def random_plmap(rng: random.Random, max_breaks: int = 4, den: int = 16, diagonal_prob: float = 0.3) -> PLMap:
    """Random map with small-denominator breakpoints; some sit on the diagonal."""
    while True:
        k = rng.randint(0, max_breaks)
        grid = [Fraction(i, den) for i in range(1, den)]
        xs = sorted(rng.sample(grid, k))
        ys = sorted(rng.sample(grid, k))
        for i, x in enumerate(xs):
            if rng.random() < diagonal_prob:
                ys[i] = x
        pts = [(ZERO, ZERO)] + list(zip(xs, ys)) + [(ONE, ONE)]
        try:
            return PLMap(pts)
        except PLError:
            continue


# --- the two-generator example in PL+(I) ------------------------------------------


def _scaled(points, scale=8) -> PLMap:
    return PLMap([(Fraction(str(x)) / scale, Fraction(str(y)) / scale) for x, y in points])


# graph coordinates of the figure on an 8 x 8 grid
FIGURE_F = [(0, 0), (1.5, 0.2), (2, 0.8), (2.5, 4.5), (4, 5.8), (7, 6), (7.5, 6.5), (8, 8)]
FIGURE_G = [(0, 0), (1.7, 1.7), (2.5, 1.8), (2.7, 2.7), (5.7, 5.7), (6.6, 5.8), (6.7, 6.7), (8, 8)]


@dataclass
class FigurePair:
    f: PLMap
    g: PLMap
    points: dict  # x0, x1, x2, x3 and p, the second interior fixed point of f
    report: list  # (clause, passed)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.report)

    def failed(self) -> list[str]:
        return [clause for clause, passed in self.report if not passed]


class ConstructionError(ValueError):
    pass


def _crossings(f: PLMap, g: PLMap) -> list[Fraction]:
    return [p for p, q in fixed_points(compose(invert(g), f)).interior().components if p == q]


def figure_points(f: PLMap, g: PLMap) -> dict:
    """Locate x0 < x1 < x2 < x3 and p from the maps themselves."""
    cross = _crossings(f, g)
    fix_f = [p for p, _ in fixed_points(f).interior().components]
    pts: dict = {"x0": cross[0] if cross else None, "x3": cross[-1] if cross else None,
                 "x1": fix_f[0] if fix_f else None, "p": fix_f[1] if len(fix_f) > 1 else None}
    pts["x2"] = None
    if pts["x1"] is not None and pts["x3"] is not None:
        cands = [min(q, pts["x3"]) for lo, q in fixed_points(g).components
                 if pts["x1"] < q and lo < pts["x3"]]
        cands = [c for c in cands if pts["x1"] < c < pts["x3"] and evaluate(g, c) == c]
        pts["x2"] = max(cands) if cands else None
    return pts


def check_figure_constraints(f: PLMap, g: PLMap, points: dict) -> list[tuple[str, bool]]:
    x0, x1, x2, x3, p = (points.get(k) for k in ("x0", "x1", "x2", "x3", "p"))
    report = []

    def add(clause, test):
        try:
            report.append((clause, bool(test())))
        except (TypeError, PLError):
            report.append((clause, False))

    add("0 < x0 < x1 < x2 < x3 < 1", lambda: ZERO < x0 < x1 < x2 < x3 < ONE)
    add("f(x0) = g(x0)", lambda: evaluate(f, x0) == evaluate(g, x0))
    add("f(x1) = x1", lambda: evaluate(f, x1) == x1)
    add("g(x2) = x2", lambda: evaluate(g, x2) == x2)
    add("f(x3) = g(x3)", lambda: evaluate(f, x3) == evaluate(g, x3))
    add("f < id on (0, x1)", lambda: displacement_sign(f, ZERO, x1) < 0)
    add("x2 < p < x3", lambda: x2 < p < x3)
    add("f > id on (x1, p)", lambda: displacement_sign(f, x1, p) > 0)
    add("f < id on (p, 1)", lambda: displacement_sign(f, p, ONE) < 0)
    add("g <= id", lambda: all(y <= x for x, y in g.breakpoints))
    add("g = id on [0, d] for some d > 0", lambda: g.breakpoints[1][0] == g.breakpoints[1][1])
    add("g = id on [1 - d, 1] for some d > 0", lambda: g.breakpoints[-2][0] == g.breakpoints[-2][1])
    add("g(x1) < x1", lambda: evaluate(g, x1) < x1)
    add("g(p) < p", lambda: evaluate(g, p) < p)
    return report


def build_figure1_pair(f: PLMap | None = None, g: PLMap | None = None) -> FigurePair:
    """The default pair (or a substitute), validated against every constraint."""
    f = f or _scaled(FIGURE_F)
    g = g or _scaled(FIGURE_G)
    points = figure_points(f, g)
    report = check_figure_constraints(f, g, points)
    pair = FigurePair(f, g, points, report)
    if not pair.ok:
        raise ConstructionError("constraint violated: " + "; ".join(pair.failed()))
    return pair


def verify_claim1(f: PLMap, g: PLMap, n_range: int = 10, l_range: int | None = None):
    """f^n(x) = g^l(x) has a solution in (0, 1) for every nonzero |n|, |l| <= range."""
    timer = Timer()
    l_range = n_range if l_range is None else l_range
    failures, witnesses = [], []
    fpow = {n: power(f, n) for n in range(-n_range, n_range + 1) if n}
    for l in range(-l_range, l_range + 1):
        if not l:
            continue
        gl_inv = power(g, -l)
        for n, fn in fpow.items():
            fix = fixed_points(compose(gl_inv, fn))
            x = fix.interior_witness()
            if x is None:
                failures.append({"n": n, "l": l, "fixed_set": fix.to_json()})
            else:
                witnesses.append({"n": n, "l": l, "x": x, "f^n(x)": evaluate(fn, x)})
    params = {"f": f, "g": g, "n_range": [-n_range, n_range], "l_range": [-l_range, l_range]}
    notes = ["verified on this pair only; no statement about other pairs"]
    return certify("prop.pl.claim1", params, failures, timer, witnesses, notes)


def claim2_element(f: PLMap, g: PLMap, n: int, k: int) -> PLMap:
    g1 = conjugate(power(f, n), g)
    g2 = conjugate(power(f, -n), g)
    return compose(power(compose(g1, g2), k), f)


def verify_claim2(f: PLMap, g: PLMap, n: int = 4, k_range: tuple[int, int] = (1, 10)):
    """(g1 g2)^k f has no fixed point in (0, 1), with g1 = f^n g f^-n, g2 = f^-n g f^n."""
    timer = Timer()
    if n < 1:
        raise ValueError("n must be >= 1")
    g1 = conjugate(power(f, n), g)
    g2 = conjugate(power(f, -n), g)
    prod = compose(g1, g2)
    failures, witnesses = [], []
    for k in range(k_range[0], k_range[1] + 1):
        h = compose(power(prod, k), f)
        fix = fixed_points(h)
        interior = fix.interior()
        if interior.components:
            failures.append({"k": k, "interior_fixed": interior.to_json()})
        else:
            below = displacement_sign(h, ZERO, ONE)
            witnesses.append({"k": k, "fixed_set": fix.to_json(),
                              "displacement": "h < id" if below < 0 else "h > id",
                              "breakpoints": len(h.breakpoints)})
    # near 0: g1 is the identity on its first segment and g1 g2 f lies below the diagonal
    h1 = compose(prod, f)
    eps = min(g1.breakpoints[1][0], h1.breakpoints[1][0])
    near0 = {"epsilon": eps, "g1 = id on (0, eps)": g1.breakpoints[1][0] == g1.breakpoints[1][1],
             "g1 g2 f < id on (0, eps)": displacement_sign(h1, ZERO, eps) < 0}
    if not all(v for key, v in near0.items() if key != "epsilon"):
        failures.append({"clause": "near-0 inequality", **near0})
    params = {"f": f, "g": g, "n": n, "k_range": list(k_range)}
    notes = [f"n = {n} stands in for the asymptotic 'n >> 1'", {"near_zero": near0}]
    return certify("prop.pl.claim2", params, failures, timer, witnesses, notes)


def fix_identities_check(pairs: int = 1000, seed: int = 0, n_values=None):
    """Fix(f g f⁻¹) = f(Fix(g)) and Fix(g^n) = Fix(g) on random pairs."""
    timer = Timer()
    rng = random.Random(seed)
    n_values = list(n_values or [n for n in range(-5, 6) if n])
    failures = []
    nontrivial = 0
    for i in range(pairs):
        f, g = random_plmap(rng), random_plmap(rng)
        fix_g = fixed_points(g)
        nontrivial += bool(fix_g.interior().components)
        lhs = fixed_points(conjugate(f, g))
        if not fixed_set_equal(lhs, fix_g.image(f)):
            failures.append({"identity": "Fix(fgf^-1) = f(Fix(g))", "f": f, "g": g})
        for n in n_values:
            if not fixed_set_equal(fixed_points(power(g, n)), fix_g):
                failures.append({"identity": "Fix(g^n) = Fix(g)", "g": g, "n": n})
    params = {"pairs": pairs, "seed": seed, "n_values": n_values}
    witnesses = [{"pairs_with_interior_fixed_points": nontrivial}]
    return certify("prop.omega.fix_identities", params, failures, timer, witnesses)


def render_svg(maps: dict, size: int = 400) -> str:
    """Plain SVG of the graphs of the given maps, with the diagonal."""
    colors = ["#c0392b", "#2c6fbb", "#27ae60", "#8e44ad"]
    pad = 20

    def sx(v):
        return pad + float(v) * size

    def sy(v):
        return pad + (1 - float(v)) * size

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" height="{size + 2 * pad}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="none" stroke="black"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(1)}" y2="{sy(1)}" stroke="gray" stroke-dasharray="4"/>',
    ]
    for i, (name, f) in enumerate(maps.items()):
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in f.breakpoints)
        c = colors[i % len(colors)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{c}" stroke-width="2"/>')
        parts.append(f'<text x="{pad + 5}" y="{pad + 15 * (i + 1)}" fill="{c}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
