"""Command line for primdyn: girth searches, orbits, primitivity and verifiers."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .certificate import PASS, Certificate, Timer, certify
from .freegroup import (
    BudgetExceededError,
    GenTuple,
    MalformedWordError,
    UnsupportedRankError,
    commutator_conjugacy_table,
    format_word,
    orbit_bfs,
    parse_word,
    whitehead_primitive,
)
from .girth import (
    GammaOracle,
    UnsupportedGroupError,
    girth_certificate,
    girth_search,
    nielsen_girth_bound_check,
    oracle_from_spec,
    parse_generators,
)
from . import matact, ordered, plmap

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

VERIFY_TARGETS = ("aff", "sl2", "gl2", "heis", "pl", "ordered", "gamma", "all")


class UsageError(ValueError):
    pass


def _matrix_arg(text: str | None, default: matact.Mat2Q) -> matact.Mat2Q:
    if text is None:
        return default
    try:
        rows = json.loads(text)
        return matact.Mat2Q.of(rows)
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix {text!r}: {exc}") from exc


def verify_aff(args) -> list[Certificate]:
    n = args.range or 20
    f = _matrix_arg(args.f, matact.DEFAULT_AFF_F)
    g = _matrix_arg(args.g, matact.DEFAULT_AFF_G)
    return [matact.verify_aff_counterexample(f, g, (-n, n))]


def verify_sl2(args) -> list[Certificate]:
    return [matact.verify_sl2(seed=args.seed, bound=args.range or 10**4)]


def verify_gl2(args) -> list[Certificate]:
    A0, B0 = matact.default_gl2_pair()
    A = _matrix_arg(args.A, A0)
    B = _matrix_arg(args.B, B0)
    m = args.range or 30
    return [matact.verify_gl2_counterexample(A, B, (-m, m))]


def verify_heis(args) -> list[Certificate]:
    rng = random.Random(args.seed)
    A, B = matact.random_unitriangular(rng), matact.random_unitriangular(rng)
    n = args.range or 10
    return [matact.heisenberg_fixed_vector_check(A, B, (-n, n), seed=args.seed)]


def verify_pl(args) -> list[Certificate]:
    timer = Timer()
    try:
        pair = plmap.build_figure1_pair()
        construction = certify("prop.pl.construction", {"f": pair.f, "g": pair.g}, [], timer,
                               [{"points": pair.points, "constraints": pair.report}])
    except plmap.ConstructionError as exc:
        return [certify("prop.pl.construction", {}, [{"error": str(exc)}], timer)]
    if args.emit_svg:
        n = args.n
        g1 = plmap.conjugate(plmap.power(pair.f, n), pair.g)
        g2 = plmap.conjugate(plmap.power(pair.f, -n), pair.g)
        svg = plmap.render_svg({"f": pair.f, "g": pair.g, f"f^{n} g f^-{n}": g1, f"f^-{n} g f^{n}": g2})
        with open(args.emit_svg, "w") as fh:
            fh.write(svg)
    n_range = args.range or 10
    return [
        construction,
        plmap.verify_claim1(pair.f, pair.g, n_range),
        plmap.verify_claim2(pair.f, pair.g, args.n, (1, args.k_max)),
        plmap.fix_identities_check(pairs=args.pairs, seed=args.seed),
    ]


def verify_ordered(args) -> list[Certificate]:
    return [ordered.verify_primitive_dominance(args.depth or 8, budget=args.budget)]


def verify_gamma(args) -> list[Certificate]:
    certs = []
    for n in (2, 3):
        g = girth_search(GenTuple.standard(2), GammaOracle(n), 4 * n, budget=args.budget * 10)
        certs.append(girth_certificate(g, f"prop.gamma.seed_girth.n{n}", expect=4 * n))
        certs.append(nielsen_girth_bound_check(n, args.depth or 5, samples=500, seed=args.seed,
                                               budget=args.budget))
    return certs


def verify_table(args) -> list[Certificate]:
    timer = Timer()
    rows = [{"move": str(mv), "conjugator": format_word(w) or "1", "sign": s}
            for mv, w, s in commutator_conjugacy_table()]
    return [certify("prop.gamma.commutator_table", {}, [], timer, rows)]


VERIFIERS = {
    "aff": verify_aff,
    "sl2": verify_sl2,
    "gl2": verify_gl2,
    "heis": verify_heis,
    "pl": verify_pl,
    "ordered": verify_ordered,
    "gamma": lambda a: verify_table(a) + verify_gamma(a),
}


def cmd_verify(args) -> list[Certificate]:
    if args.target == "all":
        certs = []
        for name in ("gamma", "aff", "sl2", "gl2", "pl", "ordered", "heis"):
            certs.extend(VERIFIERS[name](args))
        return certs
    return VERIFIERS[args.target](args)


def cmd_girth(args) -> list[Certificate]:
    gens = parse_generators(args.gens)
    oracle = oracle_from_spec(args.group)
    if isinstance(oracle, GammaOracle) and gens.rank != 2:
        raise UsageError("gamma groups need generators written in a, b")
    result = girth_search(gens, oracle, args.max_len, budget=args.budget)
    return [girth_certificate(result)]


def cmd_orbit(args) -> list[Certificate]:
    timer = Timer()
    seed = parse_generators(args.seed_tuple)
    oracle = oracle_from_spec(args.group) if args.group else None
    params = {"seed_tuple": seed.to_json()["entries"], "moves": args.moves, "depth": args.depth,
              "group": args.group or "free (no generation check)"}
    try:
        res = orbit_bfs(seed, args.moves, args.depth, oracle=oracle, budget=args.budget)
    except BudgetExceededError as exc:
        levels = [{"depth": lv.depth, "tuples": lv.size} for lv in exc.partial]
        return [Certificate("freegroup.orbit", params, "budget-exceeded", [{"levels": levels}],
                            [str(exc)], elapsed_ms=timer.ms)]
    levels = []
    for lv in res.levels:
        levels.append({
            "depth": lv.depth,
            "tuples": lv.size,
            "elements": len(lv.elements),
        })
    last = res.levels[-1]
    elements = sorted((format_word(w) or "1" for w in last.elements), key=lambda s: (len(s), s))
    notes = [] if res.generation_checked else ["generation unchecked"]
    notes.append("primitivity is relative to the seed tuple")
    return [certify("freegroup.orbit", params, [], timer,
                    [{"levels": levels, "elements": elements}], notes)]


def cmd_whitehead(args) -> list[Certificate]:
    timer = Timer()
    w = parse_word(args.word, 2)
    if w.rank != 2:
        raise UsageError("Whitehead test supports rank 2 words (letters a, b)")
    prim, trace = whitehead_primitive(w)
    label = "primitive" if prim else "not primitive"
    print(f"{args.word}: {label}", file=sys.stderr)
    return [certify("freegroup.whitehead", {"word": args.word}, [], timer,
                    [{"primitive": prim, "result": label, "trace": trace}])]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write certificates here (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--budget", type=int, default=10**6, help="node budget for searches")

    p = argparse.ArgumentParser(prog="primdyn", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("girth", parents=[common], help="shortest relation among generators")
    g.add_argument("--group", default="free", help="free | z2 | gamma:<n>")
    g.add_argument("--gens", default="a,b", help="comma separated words, e.g. a,b or ab,b")
    g.add_argument("--max-len", type=int, default=8)

    o = sub.add_parser("orbit", parents=[common], help="Schreier/Nielsen orbit of a tuple")
    o.add_argument("--moves", choices=("schreier", "nielsen"), default="schreier")
    o.add_argument("--depth", type=int, default=2)
    o.add_argument("--seed-tuple", default="a,b")
    o.add_argument("--group", default=None, help="oracle for dedup/generation: free | z2 | gamma:<n>")

    w = sub.add_parser("whitehead", parents=[common], help="primitivity of a word in F_2")
    w.add_argument("--word", required=True)

    v = sub.add_parser("verify", parents=[common], help="run proposition verifiers")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--range", type=int, default=None)
    v.add_argument("--depth", type=int, default=None)
    v.add_argument("--n", type=int, default=4, help="conjugation exponent for the PL claim 2")
    v.add_argument("--k-max", type=int, default=10)
    v.add_argument("--pairs", type=int, default=1000, help="random pairs for the Fix identities")
    v.add_argument("--emit-svg", metavar="PATH", default=None)
    v.add_argument("--f", default=None, help="affine f as JSON rows, e.g. '[[\"2\",\"3\"],[\"0\",\"1\"]]'")
    v.add_argument("--g", default=None)
    v.add_argument("--A", default=None, help="GL(2) matrix A as JSON rows")
    v.add_argument("--B", default=None)
    return p


COMMANDS = {"girth": cmd_girth, "orbit": cmd_orbit, "whitehead": cmd_whitehead, "verify": cmd_verify}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        certs = COMMANDS[args.command](args)
    except (UsageError, MalformedWordError, UnsupportedRankError, UnsupportedGroupError,
            matact.MatrixError, ValueError) as exc:
        print(f"primdyn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = [c.to_dict() for c in certs]
    text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, sort_keys=True)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for c in certs:
        print(f"{c.claim_id}: {c.verdict}", file=sys.stderr)
    return EXIT_OK if all(c.verdict == PASS for c in certs) else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
