"""Command-line tables of exact values, oracle runs and the regression selftest.

Exit codes: 0 ok, 2 usage error, 3 computation error, 4 regression mismatch."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import LatticeError
from .exact import parse, ring_to_float, to_json, to_text

EXIT_USAGE, EXIT_COMPUTE, EXIT_MISMATCH = 2, 3, 4


class UsageError(Exception):
    pass


# fixtures

def fixture_path(name: str) -> Path:
    return Path(str(resources.files("lattice_zipper") / "data" / name))


def load_fixture(path) -> list[dict]:
    p = Path(path)
    if not p.exists():
        p = fixture_path(str(path))
    with open(p) as fh:
        return json.load(fh)


def _eval_potential(e):
    from .green_plane import potential
    return potential(tuple(e["point"]))


def _eval_gh(e):
    from .slit_square import gh
    return gh(tuple(e["point"]))


def _eval_gsa10(e):
    from .branched_square import figure_to_cover, g_sigma_a
    v, br = figure_to_cover(complex(*e["figure"]))
    return g_sigma_a((1, 0), v, (1, br))


def _eval_g11face(e):
    from .branched_square import figure_to_cover, g_xi_a
    v, br = figure_to_cover(complex(*e["figure"]), half=True)
    return g_xi_a((Fraction(1, 2), Fraction(1, 2)), v, (1, br))


def _eval_trunk(e):
    from .trunk import TreeEdge, trunk_directed_edge_probability
    return trunk_directed_edge_probability(TreeEdge(tuple(e["tail"]), e["dir"]))


def _eval_tri_edge(e):
    from .triangular import tri_slit_green
    return tri_slit_green(tuple(e["point"]))


def _eval_tri_face(e):
    from .triangular import tri_face_branched
    return tri_face_branched(tuple(e["point"]))


FIXTURES = {
    "fig_potential.json": _eval_potential,
    "fig_gh.json": _eval_gh,
    "fig_gsa10.json": _eval_gsa10,
    "fig_g11face.json": _eval_g11face,
    "fig1_trunk.json": _eval_trunk,
    "fig_tri_edge.json": _eval_tri_edge,
    "fig_tri_face.json": _eval_tri_face,
}


def _entry_key(e) -> str:
    if "tail" in e:
        return f"{_pt(e['tail'])} {e['dir']}"
    if "point" in e:
        return _pt(e["point"])
    return "figure " + ",".join(str(c) for c in e["figure"])


def check_fixture(path, evaluator=None) -> tuple[int, list[str]]:
    """(entries checked, mismatch lines) for one fixture file."""
    name = Path(path).name
    evaluator = evaluator or FIXTURES.get(name)
    if evaluator is None:
        raise UsageError(f"no evaluator for fixture {name}")
    entries = load_fixture(path)
    bad = []
    for e in entries:
        want = parse(e["value"])
        got = evaluator(e)
        if got != want:
            bad.append(f"{name}: {_entry_key(e)}: expected {to_text(want)}, got {to_text(got)}")
    return len(entries), bad


def reference_values() -> list[tuple[str, object, str]]:
    """(label, computed, expected text) for the scalar values quoted in the text."""
    from .kasteleyn import k_inverse_trunk
    from .triangular import tri_delta_plus, tri_runs_constant, tri_slit_voltage
    from .tripod import k_inverse_ne, tripod_statistics
    from .trunk import STRAIGHT, TreeEdge, straight_run_probability, trunk_cylinder_probability
    from .trunk import trunk_degree_distribution, trunk_directed_edge_probability
    out = []
    z = k_inverse_trunk((1, 1), (1, 0))
    out += [("K^-1((1,1),(1,0)) re", z.re, "0"), ("K^-1((1,1),(1,0)) im", z.im, "1/2*sqrt(2) - 1")]
    z = k_inverse_trunk((2, 0), (1, -2))
    out += [("K^-1((2,0),(1,-2)) re", z.re, "3/2*sqrt(2) - 2"), ("K^-1((2,0),(1,-2)) im", z.im, "0")]
    deg = trunk_degree_distribution()
    out += [(f"trunk degree {k}", deg[k], t) for k, t in ((2, "1/2"), (3, "sqrt(2) - 1"), (4, "3/2 - sqrt(2)"))]
    out.append(("trunk straight", trunk_directed_edge_probability(TreeEdge((0, 0), "E")), to_text(STRAIGHT)))
    out.append(("trunk run 12", straight_run_probability(12), to_text(STRAIGHT ** 12)))
    pair = [TreeEdge((0, 0), "E"), TreeEdge((1, 0), "E")]
    out.append(("trunk two straight", trunk_cylinder_probability(pair), "3 - 2*sqrt(2)"))
    st = tripod_statistics()
    out += [("tripod edge", st["edge_probability"], "1/pi - 1/4"),
            ("tripod degree 4", st["degree4_probability"], "4/pi - 1"),
            ("tripod degree 3", st["degree3_probability"], "2 - 4/pi"),
            ("tripod expected degree", st["expected_degree"], "2 + 4/pi")]
    ne = k_inverse_ne((-2, 0), (-1, 0))
    out.append(("K_NE^-1((-2,0),(-1,0))", ne.re, "2/pi - 1/2"))
    d = tri_delta_plus(6)
    out += [("delta+ u", d[1], "1/6"), ("delta+ u^3", d[3], "7/6 - 2*sqrt(3)/pi"),
            ("delta+ u^5", d[5], "73/6 - 22*sqrt(3)/pi")]
    v = tri_slit_voltage(5)
    out += [("V u^0", v[0], "2 - sqrt(3)"), ("V u^2", v[2], "14 - 8*sqrt(3)"),
            ("V u^4", v[4], "143 - 165/2*sqrt(3)")]
    out.append(("triangular runs", tri_runs_constant(1), "2 - sqrt(3)"))
    return out


def selftest(stream=sys.stdout) -> int:
    total, bad = 0, []
    for name in FIXTURES:
        n, b = check_fixture(fixture_path(name))
        total += n
        bad += b
        print(f"{name}: {n - len(b)}/{n} match", file=stream)
    for label, got, want in reference_values():
        total += 1
        if got != parse(want):
            bad.append(f"{label}: expected {want}, got {to_text(got)}")
    print(f"reference values: {len(reference_values())} checked", file=stream)
    if bad:
        print(f"selftest FAILED: {len(bad)} of {total} mismatched", file=stream)
        for line in bad:
            print("  " + line, file=stream)
        return EXIT_MISMATCH
    print(f"selftest passed: {total} exact values", file=stream)
    return 0


# rendering

def _pt(p) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


def _value_fields(x, digits):
    text = to_text(x, compact=True)
    if digits is None:
        return text, None
    return text, ring_to_float(x, digits)


def render(rows, fmt: str, digits, stream=sys.stdout) -> None:
    """rows are (key fields, exact value)."""
    if fmt == "json":
        out = []
        for key, x in rows:
            item = {"key": list(key), "value": to_text(x), "exact": to_json(x)}
            if digits is not None:
                item["decimal"] = ring_to_float(x, digits)
            out.append(item)
        json.dump(out, stream, indent=1)
        stream.write("\n")
        return
    lines = []
    for key, x in rows:
        text, dec = _value_fields(x, digits)
        lines.append((list(key), text, dec))
    if fmt == "csv":
        for key, text, dec in lines:
            stream.write(",".join(key + [text] + ([dec] if dec is not None else [])) + "\n")
        return
    kw = max((len(" ".join(k)) for k, _, _ in lines), default=0)
    tw = max((len(t) for _, t, _ in lines), default=0)
    for key, text, dec in lines:
        line = f"{' '.join(key):<{kw}}  {text:<{tw}}"
        if dec is not None:
            line += f"  {dec}"
        stream.write(line.rstrip() + "\n")


# windows

def parse_window(text: str) -> tuple[int, int, int, int]:
    try:
        xs, ys = text.split(",")
        x0, x1 = (int(t) for t in xs.split(":"))
        y0, y1 = (int(t) for t in ys.split(":"))
    except ValueError:
        raise UsageError(f"window must look like X0:X1,Y0:Y1, not {text!r}") from None
    if x0 > x1 or y0 > y1:
        raise UsageError(f"empty window {text!r}")
    return x0, x1, y0, y1


def _window(args, default):
    if args.window and args.radius is not None:
        raise UsageError("give --window or --radius, not both")
    if args.window:
        return parse_window(args.window)
    if args.radius is not None:
        if args.radius < 0:
            raise UsageError("radius must be non-negative")
        r = args.radius
        return -r, r, -r, r
    return default


def _points(win):
    x0, x1, y0, y1 = win
    return [(x, y) for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)]


# subcommands

def cmd_potential(args):
    from .green_plane import potential
    return [((_pt(p),), potential(p)) for p in _points(_window(args, (-3, 3, -3, 3)))]


def cmd_slit(args):
    from .slit_square import gh
    win = _window(args, (-4, 4, 0, 4))
    return [((_pt(p),), gh(p)) for p in _points(win) if p[1] >= 0 and (p[0] + p[1]) % 2 == 0]


def cmd_branched(args):
    from .branched_square import g_sigma_a, g_xi_a, gz
    win = _window(args, (-2, 2, -2, 2))
    rows = []
    for p in _points(win):
        if args.kind == "zipper":
            rows.append(((_pt(p),), gz((0, 0), p)))
        elif args.kind == "sigma":
            rows.append(((_pt(p),), g_sigma_a((1, 0), p)))
        else:
            h = Fraction(1, 2)
            q = (p[0] + h, p[1] + h)
            rows.append(((f"({q[0]},{q[1]})",), g_xi_a((h, h), q)))
    return rows


def cmd_trunk(args):
    from .trunk import DIRECTIONS, STRAIGHT, TreeEdge, is_trunk_edge, trunk_degree_distribution
    from .trunk import trunk_directed_edge_probability
    if args.stats:
        deg = trunk_degree_distribution()
        return [(("straight",), STRAIGHT)] + [((f"degree{k}",), v) for k, v in deg.items()]
    rows = []
    for p in _points(_window(args, (-1, 3, 0, 3))):
        for d in DIRECTIONS:
            e = TreeEdge(p, d)
            if not is_trunk_edge(e):
                rows.append(((_pt(p), d), trunk_directed_edge_probability(e)))
    return rows


def cmd_monomer(args):
    from .kasteleyn import is_black
    from .trunk import monomer_dimer_probability
    rows = []
    for w in _points(_window(args, (-2, 2, -2, 2))):
        if is_black(w):
            continue
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            b = (w[0] + dx, w[1] + dy)
            if b != (0, 0):
                rows.append(((_pt(w), _pt(b)), monomer_dimer_probability(b, w)))
    return rows


def cmd_tripod(args):
    from .trunk import DIRECTIONS
    from .tripod import tripod_edge_probability, tripod_statistics
    if args.stats:
        return [((k,), v) for k, v in tripod_statistics().items()]
    rows = []
    for p in _points(_window(args, (-2, 2, -2, 2))):
        if p == (0, 0):
            continue
        for d in DIRECTIONS:
            rows.append(((_pt(p), d), tripod_edge_probability(p, d)))
    return rows


def cmd_triangular(args):
    from .triangular import tri_delta_plus, tri_face_branched, tri_slit_green, tri_slit_voltage
    if args.kind == "delta":
        n = args.terms
        s = tri_delta_plus(2 * n)
        return [((f"u^{2 * k + 1}",), s[2 * k + 1]) for k in range(n)]
    if args.kind == "voltage":
        n = args.terms
        s = tri_slit_voltage(2 * n)
        return [((f"u^{2 * k}",), s[2 * k]) for k in range(n)]
    fn = tri_slit_green if args.kind == "edge" else tri_face_branched
    return [((_pt(p),), fn(p)) for p in _points(_window(args, (-3, 3, 0, 3)))]


def cmd_oracle(args, stream):
    from . import oracle
    if args.run == "calibrate":
        radii = [args.radius] if args.radius else [16, 32, 48, 64]
        json.dump(oracle.calibrate(radii), stream, indent=1)
        stream.write("\n")
    elif args.run == "montecarlo":
        r = oracle.trunk_monte_carlo(seed=args.seed, n=args.samples)
        stream.write(f"accepted {r.accepted} of {r.trials} (seed {r.seed})\n")
        for k in r.counts:
            stream.write(f"{k},{r.frequency(k):.6f},{r.stderr(k):.6f}\n")
    elif args.run == "lemma":
        n = args.radius or 9
        d = oracle.tripod_lemma_check(n)
        stream.write(f"grid {n}x{n}: ratio {d['ratio']} direct {d['direct']}\n")
        stream.write(f"denominator {d['denominator']} |det K_NE|^2/|det K|^2 {d['prob_sq']}\n")
        if d["ratio"] != d["direct"]:
            return EXIT_MISMATCH
    elif args.run == "quadrature":
        r = args.radius or 2
        for p in _points((-r, r, -r, r)):
            stream.write(f"{_pt(p)},{oracle.quadrature_green('square', p):.12f}\n")
    return 0


TABLES = {
    "potential": cmd_potential,
    "slit": cmd_slit,
    "branched": cmd_branched,
    "trunk": cmd_trunk,
    "monomer": cmd_monomer,
    "tripod": cmd_tripod,
    "triangular": cmd_triangular,
}

FIXTURE_FOR = {
    "potential": lambda a: _eval_potential,
    "slit": lambda a: _eval_gh,
    "branched": lambda a: {"sigma": _eval_gsa10, "xi": _eval_g11face}.get(a.kind),
    "trunk": lambda a: _eval_trunk,
    "triangular": lambda a: {"edge": _eval_tri_edge, "face": _eval_tri_face}.get(a.kind),
}


def _digits(text: str):
    if text == "exact":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("digits must be a positive integer or 'exact'") from None
    if n < 1:
        raise argparse.ArgumentTypeError("digits must be a positive integer or 'exact'")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lattice-zipper", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", help="X0:X1,Y0:Y1")
    common.add_argument("--radius", type=int)
    common.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    common.add_argument("--digits", type=_digits, default=6, help="decimal places or 'exact'")
    common.add_argument("--fixture", help="compare against a fixture file instead of printing")
    for name in TABLES:
        p = sub.add_parser(name, parents=[common])
        if name in ("trunk", "tripod"):
            p.add_argument("--stats", action="store_true")
        if name == "branched":
            p.add_argument("--kind", choices=("zipper", "sigma", "xi"), default="zipper")
        if name == "triangular":
            p.add_argument("--kind", choices=("edge", "face", "delta", "voltage"), default="edge")
            p.add_argument("--terms", type=int, default=3)
    p = sub.add_parser("oracle")
    p.add_argument("run", choices=("calibrate", "montecarlo", "lemma", "quadrature"))
    p.add_argument("--radius", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples", type=int, default=10_000)
    sub.add_parser("selftest")
    return ap


def _stats_text(rows, stream):
    for key, x in rows:
        stream.write(f"{key[0]} = {to_text(x)}\n")


def _join_window(argv: list[str]) -> list[str]:
    # windows start with '-' often; keep argparse from reading them as options
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--window" and i + 1 < len(argv):
            out.append("--window=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    ap = build_parser()
    argv = _join_window(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "selftest":
            return selftest(stream)
        if args.command == "oracle":
            if args.samples < 1:
                raise UsageError("samples must be positive")
            return cmd_oracle(args, stream)
        if args.fixture:
            ev = FIXTURE_FOR.get(args.command, lambda a: None)(args)
            if ev is None:
                raise UsageError(f"{args.command} has no fixture comparison for these options")
            n, bad = check_fixture(args.fixture, ev)
            if bad:
                stream.write(f"{len(bad)} of {n} mismatched\n")
                for line in bad:
                    stream.write(line + "\n")
                return EXIT_MISMATCH
            stream.write(f"{n} of {n} match\n")
            return 0
        rows = TABLES[args.command](args)
        if getattr(args, "stats", False) and args.format == "pretty":
            _stats_text(rows, stream)
        else:
            render(rows, args.format, args.digits, stream)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
