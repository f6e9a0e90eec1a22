"""Command-line interface: ``birkhoffkit <subcommand> ...``.

Exit status 0 on success, 1 on usage errors, 2 on domain errors; errors are
reported on stderr as a single ``error: CODE: message`` line.
"""
from __future__ import annotations

import argparse
import functools
import json
import sys
from pathlib import Path

from . import birkhoff, graphs, sl2z, torus
from .errors import BirkhoffError
from .figures import emit_parallelogram_svg
from .points import fixed_point_lattice

__all__ = ["run", "main", "build_parser"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}: {text!r}")
        return v
    return parse


_positive = _int_at_least(1)
_nonnegative = _int_at_least(0)


def _orders(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k1,k2,...: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the options appear before or after the subcommand
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", type=Path, default=argparse.SUPPRESS,
                        help="ball cache directory (default $GHYS_CACHE_DIR or ./.ghys-cache)")
    common.add_argument("--trace-cap", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--node-budget", type=_positive, default=argparse.SUPPRESS)
    common.add_argument("--audit-cap", type=_positive, default=argparse.SUPPRESS)

    parser = _Parser(prog="birkhoffkit", parents=[common],
                     description="Genus-one Birkhoff sections of torus suspensions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("factor", "RL factorization and conjugator of a hyperbolic matrix")
    p.add_argument("matrix")
    p = add("word", "matrix of a word in R, L")
    p.add_argument("word")
    p = add("conj", "conjugacy of two words")
    p.add_argument("w1")
    p.add_argument("w2")
    p.add_argument("--gl2", action="store_true", help="also allow exchanging R and L")
    p = add("fixed", "fixed points of a power of a matrix on the torus")
    p.add_argument("matrix")
    p.add_argument("--power", type=_positive, default=1)
    p = add("pants", "parallelogram and pair of pants of a word")
    p.add_argument("word")
    p.add_argument("--svg", type=Path, help="write the parallelogram figure here")
    p = add("section", "genus-one Birkhoff section of a word")
    p.add_argument("word")
    p = add("descend", "trace descent to RL")
    p.add_argument("target", metavar="word|matrix")
    p = add("orbifold", "section census for a geodesic flow")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--orders", type=_orders, required=True)
    p = add("ghys", "upper bound on the Ghys distance")
    p.add_argument("w1")
    p.add_argument("w2")
    p.add_argument("--max-radius", type=_nonnegative, default=12)
    p = add("graph", "export a ball of the word or conjugacy graph")
    p.add_argument("--kind", choices=("word", "conj"), default="word")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=_nonnegative, required=True)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--gl2", action="store_true", help="word graph up to exchanging R and L")
    p = add("delta", "four-point hyperbolicity estimate on a ball")
    p.add_argument("--kind", choices=("word", "conj"), default="word")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=_nonnegative, required=True)
    p.add_argument("--margin", type=_nonnegative, default=0)
    p.add_argument("--gl2", action="store_true")
    p = add("audit", "fixed-point audit of the first-return map")
    p.add_argument("word")
    p.add_argument("--max-period", type=_positive, required=True)
    p.add_argument("--csv", action="store_true", help="text output as CSV")
    return parser


@functools.lru_cache(maxsize=1)
def _parser() -> argparse.ArgumentParser:
    # parse_args leaves the parser untouched, so one instance serves every call
    return build_parser()


_DEFAULTS = {
    "output": "text",
    "cache_dir": None,
    "trace_cap": graphs.DEFAULT_TRACE_CAP,
    "node_budget": graphs.DEFAULT_NODE_BUDGET,
    "audit_cap": birkhoff.AUDIT_PERIOD_CAP,
}


# -- subcommands: each returns (text, json-able object) ---------------------

def _factor(a):
    fact = sl2z.rl_factorize(sl2z.parse_matrix(a.matrix))
    return (f"word: {fact.word}\nconjugator: {fact.conjugator}\n",
            {"word": fact.word, "conjugator": str(fact.conjugator)})


def _word(a):
    w = sl2z.parse_word(a.word)
    m = sl2z.word_to_matrix(w)
    return f"{m}\n", {"word": w, "matrix": str(m), "trace": m.trace}


def _conj(a):
    group = "GL2" if a.gl2 else "SL2"
    w1, w2 = sl2z.parse_word(a.w1), sl2z.parse_word(a.w2)
    canon = sl2z.gl2_normal_form if a.gl2 else sl2z.cyclic_normal_form
    ok = sl2z.conjugacy_equal(w1, w2, group)
    return (f"{'conjugate' if ok else 'not conjugate'} in {group}: {canon(w1)} {canon(w2)}\n",
            {"group": group, "conjugate": ok, "normal_forms": [canon(w1), canon(w2)]})


def _fixed(a):
    pts = sorted(fixed_point_lattice(sl2z.parse_matrix(a.matrix), a.power))
    return ("".join(f"{p}\n" for p in pts),
            {"count": len(pts), "points": [str(p) for p in pts]})


def _pants(a):
    w = sl2z.require_mixed(sl2z.parse_word(a.word))
    par = torus.build_parallelogram(w)
    pants = birkhoff.pair_of_pants_data(w)
    pts = torus.formula_fixed_points(par.rw)
    if a.svg is not None:
        a.svg.write_text(emit_parallelogram_svg(par, pts))
    lines = [f"word: {w}", f"RW: {par.rw}", f"embedding: {par.embedding}"]
    lines += [f"{k}: {v}" for k, v in par.vertex_orbits().items()]
    lines.append(f"euler characteristic: {pants.euler_blowup}")
    lines += [_entry_line(e) for e in pants.boundary]
    return "\n".join(lines) + "\n", {"parallelogram": par.to_dict(), "surface": pants.to_dict(),
                                     "fixed_points": [str(p) for p in pts]}


def _entry_line(e) -> str:
    return (f"boundary {e.orbit}: multiplicity {e.multiplicity}, {e.circles} circle(s) "
            f"of class {e.circle_class}")


def _section(a):
    w = sl2z.require_mixed(sl2z.parse_word(a.word))
    s = birkhoff.genus_one_section(w)
    fr = birkhoff.first_return_matrix(w)
    lines = [f"euler characteristic: {s.euler_blowup}", f"genus: {s.genus}",
             f"boundary: {s.boundary_circle_count} circles over {s.boundary_orbit_count} orbits"]
    lines += [_entry_line(e) for e in s.boundary]
    lines.append(f"first return: {fr.matrix}")
    return "\n".join(lines) + "\n", {**s.to_dict(), "first_return": fr.to_dict()}


def _descend(a):
    text = a.target
    w = (sl2z.rl_factorize(sl2z.parse_matrix(text)).word if ";" in text
         else sl2z.parse_word(text))
    chain = birkhoff.descent_chain(w)
    lines = [f"{s.before} -{s.generator}-> {s.after}  (trace {s.trace_before} -> {s.trace_after})"
             for s in chain.steps]
    lines.append(f"steps: {len(chain.steps)}; Ghys bound: {chain.ghys_bound}")
    return "\n".join(lines) + "\n", {"start": chain.start, "steps": chain.to_json_list(),
                                     "ghys_bound": chain.ghys_bound}


def _orbifold(a):
    c = birkhoff.orbifold_section_census(a.genus, a.orders)
    s = c.surface
    text = (f"curves: {c.curve_count}\n"
            f"pieces: handles {c.pieces['handles']}, cones {c.pieces['cones']}, "
            f"sigma {c.pieces['sigma']}\n"
            f"euler characteristic: {s.euler_blowup}\n"
            f"boundary circles: {s.boundary_circle_count}\ngenus: {s.genus}\n")
    return text, c.to_dict()


def _ghys(a):
    b = graphs.ghys_distance_upper_bound(a.w1, a.w2, a.max_radius, a.node_budget)
    return f"bound: {'unknown' if b is None else b}\n", {"bound": b}


def _ball(a):
    cache = graphs.BallCache() if a.cache_dir is None else graphs.BallCache(a.cache_dir)
    return cache.explore(a.center, a.radius, a.kind, "GL2" if a.gl2 else "SL2",
                         a.trace_cap, a.node_budget)


def _graph(a):
    text = graphs.export_graph(_ball(a), a.format)
    return text, None


def _delta(a):
    ball = _ball(a)
    est = graphs.delta_hyperbolicity(ball, a.margin)
    return (f"delta: {est.delta} (core of {est.core_size} nodes; within-ball estimate)\n",
            {"delta": str(est.delta), "core_size": est.core_size, "within_ball": True,
             "pruned": ball.pruned})


def _audit(a):
    res = birkhoff.lefschetz_audit(sl2z.parse_word(a.word), a.max_period, a.audit_cap)
    return (res.to_csv() if a.csv else res.to_text()), res.to_dict()


_COMMANDS = {
    "factor": _factor, "word": _word, "conj": _conj, "fixed": _fixed, "pants": _pants,
    "section": _section, "descend": _descend, "orbifold": _orbifold, "ghys": _ghys,
    "graph": _graph, "delta": _delta, "audit": _audit,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        stderr.write(parser.format_usage())
        stderr.write(f"error: USAGE: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    for key, value in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        text, obj = _COMMANDS[args.command](args)
    except BirkhoffError as exc:
        stderr.write(f"error: {exc.code}: {exc}\n")
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        stderr.write(f"error: INVALID_ARGUMENT: {exc}\n")
        return 2
    if args.output == "json" and obj is not None:
        stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
