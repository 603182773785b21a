"""Command-line front end.

Usage: freeprob <command> [options]
       python -m freeprob.cli numbers poker
       python -m freeprob.cli weingarten --group O --k 4 --N 5

Exit codes: 0 success, 1 computation error, 2 usage error.
"""
import argparse
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from . import __version__, exactcount
from .config import get_settings
from .cumulants import CumulantSequence, MomentSequence, bercovici_pata, cumulants_from_moments, moments_from_cumulants
from .errors import FreeProbError, UsageError
from .graphs import (
    RootedBipartiteGraph,
    ade_circular_measure,
    ade_graph,
    circular_even_moments,
    circular_measure_moments,
    poincare,
    theta_from_poincare,
)
from .laws import (
    DiscreteMeasure,
    FAMILIES,
    LawSpec,
    law_atoms,
    law_cumulants,
    law_moment,
    law_moments,
)
from .log import configure_logging
from .partitions import Category, as_word, count, enumerate_partitions
from .randmat import (
    BLOCK_MAPS,
    KINDS,
    NORMALIZATIONS,
    EnsembleSpec,
    empirical_moments,
    empirical_spectrum,
    empirical_word_moment,
    seed_plan,
)
from .schema import validate_payload
from .transforms import (
    cauchy_evaluate,
    cauchy_from_moments,
    classical_convolution,
    free_additive_convolution,
    free_multiplicative_convolution,
    hankel_check,
    k_from_r,
    marchenko_pastur_cauchy,
    point_mass_cauchy,
    r_from_moments,
    s_from_moments,
    semicircle_cauchy,
    stieltjes_invert,
)
from .verify import SUITES, run_suite
from .weingarten import (
    EasyGroup,
    SERIES,
    gram_determinant,
    integrate_monomial,
    integrate_word,
    on_two_generic_coordinates,
    sphere_integrate,
    truncated_character_moments,
    weingarten,
)

logger = structlog.get_logger(__name__)

Payload = Dict[str, object]
Result = Tuple[Payload, Optional[str]]


# value formatting: exact rationals as "p/q", floats as shortest round-trip decimals

def _num(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, Fraction)):
        return exactcount.fraction_str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, float)):
        return float(v)
    return v


def _nums(values) -> List:
    return [_num(v) for v in values]


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def _rational_list(text: str) -> List[Fraction]:
    if not text.strip():
        return []
    return [_rational(x) for x in text.split(",")]


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"not an integer: {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}")


def _grid(text: str) -> np.ndarray:
    """'a:b:n' -> n evenly spaced points from a to b."""
    try:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError:
        raise UsageError(f"grid must look like 'a:b:n', got {text!r}")


def _rho(text: str) -> DiscreteMeasure:
    """'x1:m1,x2:m2' -> atoms."""
    atoms = []
    for item in text.split(","):
        loc, sep, mass = item.partition(":")
        if not sep:
            raise UsageError(f"rho atoms look like 'location:mass', got {item!r}")
        atoms.append((_rational(loc), _rational(mass)))
    return DiscreteMeasure(atoms)


def _law_from_args(args, family: Optional[str] = None) -> LawSpec:
    family = family or args.family
    if not family:
        raise UsageError("a law family is required")
    t = _rational(args.t) if args.t is not None else Fraction(1)
    s = args.s if args.s is not None else 1
    if family == "FreeBessel" and args.reading == "multiplicative":
        s = _rational(str(s))
    rho = _rho(args.rho) if getattr(args, "rho", None) else None
    c = _rational(args.c) if getattr(args, "c", None) is not None else 0
    return LawSpec(family, t=t, s=s, c=c, N=args.N, rho=rho, reading=args.reading)


def _law_from_text(text: str, order: int) -> MomentSequence:
    """'Semicircle:t=1/2', 'FreeBessel:s=2,t=1' or a plain moment list '0,1,0,2'."""
    head, _, tail = text.partition(":")
    if head not in FAMILIES:
        return MomentSequence(_rational_list(text))
    opts = {}
    for item in filter(None, tail.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"law options look like key=value, got {item!r}")
        opts[key.strip()] = value.strip()
    kwargs = {}
    if "t" in opts:
        kwargs["t"] = _rational(opts["t"])
    if "c" in opts:
        kwargs["c"] = _rational(opts["c"])
    if "N" in opts:
        kwargs["N"] = _int(opts["N"])
    if "reading" in opts:
        kwargs["reading"] = opts["reading"]
    if "s" in opts:
        kwargs["s"] = _rational(opts["s"]) if kwargs.get("reading") == "multiplicative" else opts["s"]
    return law_moments(LawSpec(head, **kwargs), order)


def _order(args) -> int:
    return args.order if args.order is not None else get_settings().series_order


def _group(args) -> EasyGroup:
    return EasyGroup.parse(args.group, free=args.free, s=args.s)


def _word(args):
    if args.colors:
        return as_word(args.colors)
    if args.k is None:
        raise UsageError("give --k or --colors")
    return args.k


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(x) for x in row) + "\n")
    return buf.getvalue()


# commands

def cmd_partitions(args) -> Result:
    cat = Category.parse(args.cat, s=args.s)
    word = _word(args)
    if args.count:
        return {"category": str(cat), "word": str(as_word(word)), "count": count(cat, word)}, None
    parts = enumerate_partitions(cat, word)
    rows = [{"labels": p.to_json(), "blocks": str(p), "block_count": p.block_count} for p in parts]
    csv = _csv(["labels", "blocks", "block_count"],
               [(" ".join(str(x) for x in r["labels"]), r["blocks"], r["block_count"]) for r in rows])
    return {"category": str(cat), "word": str(as_word(word)), "count": len(parts), "partitions": rows}, csv


NUMBER_NAMES = ("catalan", "bell", "stirling2", "narayana", "fuss_catalan", "fuss_narayana",
                "derangement", "poker", "sphere")


def cmd_numbers(args) -> Result:
    name = args.name
    k = args.k if args.k is not None else 8
    if k < 0:
        raise UsageError(f"--k must be nonnegative, got {k}")
    if name in ("catalan", "bell"):
        fn = exactcount.catalan if name == "catalan" else exactcount.bell
        values = [fn(j) for j in range(k + 1)]
        return {"name": name, "values": _nums(values)}, _csv(["k", name], enumerate(values))
    if name == "stirling2":
        values = [exactcount.stirling2(k, b) for b in range(k + 1)]
        return {"name": name, "values": _nums(values)}, _csv(["b", name], enumerate(values))
    if name == "narayana":
        values = [exactcount.narayana(k, b) for b in range(1, k + 1)]
        return {"name": name, "values": _nums(values)}, _csv(["b", name], enumerate(values, 1))
    if name == "fuss_catalan":
        s = _rational(args.s or "1")
        return {"name": name, "value": _num(exactcount.fuss_catalan(s, k))}, None
    if name == "fuss_narayana":
        s = _rational(args.s or "1")
        t = _rational(args.t or "1")
        return {"name": name, "value": _num(exactcount.fuss_narayana(s, k, t))}, None
    if name == "derangement":
        N = args.N if args.N is not None else k
        values = [exactcount.derangement_profile(N, r) for r in range(N + 1)]
        return {"name": name, "values": _nums(values)}, _csv(["r", "probability"], enumerate(_nums(values)))
    if name == "poker":
        probs = exactcount.poker_probabilities()
        return ({"name": name, "probabilities": {h: _num(p) for h, p in probs.items()}},
                _csv(["hand", "probability"], ((h, _num(p)) for h, p in probs.items())))
    if name == "sphere":
        if args.N is None:
            raise UsageError("sphere needs --N")
        c, e = exactcount.sphere_volume_ratio(args.N)
        return {"name": name, "coefficient": _num(c), "pi_half_exponent": e,
                "volume": exactcount.sphere_volume(args.N)}, None
    raise UsageError(f"unknown number family {name!r}")


def cmd_cumulants(args) -> Result:
    if args.bercovici_pata:
        if not args.moments:
            raise UsageError("--bercovici-pata needs --moments")
        out = bercovici_pata(MomentSequence(_rational_list(args.moments)), args.bercovici_pata)
        return {"direction": args.bercovici_pata, "moments": _nums(out.values)}, None
    if args.moments:
        c = cumulants_from_moments(MomentSequence(_rational_list(args.moments)), args.flavor)
        return {"flavor": c.flavor, "cumulants": _nums(c.values)}, None
    if args.cumulants:
        m = moments_from_cumulants(CumulantSequence(_rational_list(args.cumulants), args.flavor))
        return {"flavor": args.flavor, "moments": _nums(m.values)}, None
    raise UsageError("give --moments or --cumulants")


CONVOLUTIONS: Dict[str, Callable[[MomentSequence, MomentSequence], MomentSequence]] = {
    "free_additive": free_additive_convolution,
    "classical": classical_convolution,
    "free_multiplicative": free_multiplicative_convolution,
}


def cmd_convolve(args) -> Result:
    order = _order(args)
    a = _law_from_text(args.a, order)
    b = _law_from_text(args.b, order)
    out = CONVOLUTIONS[args.op](a, b)
    return {"op": args.op, "moments": _nums(out.values)}, None


def _closed_cauchy(law: LawSpec):
    if law.family == "Semicircle":
        return semicircle_cauchy(float(law.t))
    if law.family == "MarchenkoPastur":
        return marchenko_pastur_cauchy(float(law.t))
    if law.family == "PointMass":
        return point_mass_cauchy(float(law.c))
    return None


def cmd_transform(args) -> Result:
    order = _order(args)
    if args.moments:
        law, m = None, MomentSequence(_rational_list(args.moments))
    else:
        law = _law_from_args(args)
        m = law_moments(law, order)
    kind = args.kind
    if kind == "cauchy":
        return {"kind": kind, "variable": "1/xi", "coefficients": _nums(cauchy_from_moments(m).coefficients)}, None
    if kind == "R":
        return {"kind": kind, "variable": "z", "coefficients": _nums(r_from_moments(m).coefficients)}, None
    if kind == "K":
        zk = k_from_r(r_from_moments(m))
        return {"kind": kind, "variable": "z", "note": "coefficients of z K(z)",
                "coefficients": _nums(zk.coefficients)}, None
    if kind == "S":
        return {"kind": kind, "variable": "z", "coefficients": _nums(s_from_moments(m).coefficients)}, None
    if kind == "hankel":
        ok, failing = hankel_check(m)
        return {"kind": kind, "positive": ok, "first_failing_order": failing}, None
    G = (_closed_cauchy(law) if law is not None else None) or cauchy_evaluate(m)
    grid = stieltjes_invert(G, _grid(args.grid), args.eps)
    return {"kind": kind, "eps": args.eps, "total_mass": grid.total_mass(), "atoms": grid.atoms_json(),
            "points": _nums(grid.points), "densities": _nums(grid.densities)}, grid.to_csv()


def cmd_law(args) -> Result:
    law = _law_from_args(args)
    order = _order(args)
    payload: Payload = {"law": law.describe()}
    if args.colors:
        payload["word"] = args.colors
        payload["moment"] = _num(law_moment(law, as_word(args.colors), args.method))
        return payload, None
    if law.is_colored:
        raise UsageError(f"{law.family} is a planar law: give a colored word with --colors")
    payload["moments"] = _nums(law_moment(law, k, args.method) for k in range(1, order + 1))
    try:
        c = law_cumulants(law, order)
        payload["cumulants"] = {"flavor": c.flavor, "values": _nums(c.values)}
    except FreeProbError:
        logger.debug("law_cumulants_unavailable", family=law.family)
    if args.atoms:
        atoms = law_atoms(law)
        payload["atoms"] = atoms.to_json()
        payload["tail_mass"] = atoms.tail_mass
    return payload, None


def cmd_weingarten(args) -> Result:
    if args.N is None:
        raise UsageError("weingarten needs --N")
    group = _group(args)
    if args.determinant:
        if group.series != "S" or group.free:
            raise UsageError("--determinant is computed over the full lattice P(k): use --group S")
        if args.k is None:
            raise UsageError("--determinant needs --k")
        return {"k": args.k, "N": args.N, "determinant": _num(gram_determinant(args.k, args.N))}, None
    table = weingarten(group, _word(args), args.N)
    rows = [(str(p), str(q), _num(table.gram[a, b]), _num(table.wg[a, b]))
            for a, p in enumerate(table.partitions) for b, q in enumerate(table.partitions)]
    payload = table.to_json()
    payload["blocks"] = [str(p) for p in table.partitions]
    return payload, _csv(["pi", "nu", "gram", "wg"], rows)


def cmd_integrate(args) -> Result:
    if args.sphere:
        if args.N is None or not args.exponents:
            raise UsageError("sphere integrals need --N and --exponents")
        exps = _int_list(args.exponents)
        value = sphere_integrate(args.sphere, args.N, exps)
        return {"sphere": args.sphere, "N": args.N, "exponents": exps, "value": _num(value)}, None
    if args.generic:
        if args.N is None:
            raise UsageError("the two-coordinate integral needs --N")
        exponents = _int_list(args.generic)
        if len(exponents) != 2:
            raise UsageError(f"--generic takes two exponents alpha,beta, got {args.generic!r}")
        alpha, beta = exponents
        return {"N": args.N, "alpha": alpha, "beta": beta,
                "value": _num(on_two_generic_coordinates(args.N, alpha, beta))}, None
    if args.N is None:
        raise UsageError("integrate needs --N")
    group = _group(args)
    if args.character:
        t = _rational(args.t or "1")
        value = truncated_character_moments(group, args.N, t, _word(args))
        return {"group": str(group), "N": args.N, "t": _num(t), "value": _num(value)}, None
    if args.pattern:
        value = integrate_word(group, args.N, args.pattern)
        return {"group": str(group), "N": args.N, "pattern": args.pattern, "value": _num(value)}, None
    if args.rows and args.cols:
        value = integrate_monomial(group, args.N, _int_list(args.rows), _int_list(args.cols), args.colors)
        return {"group": str(group), "N": args.N, "value": _num(value)}, None
    raise UsageError("give --pattern, --rows/--cols, --character, --sphere or --generic")


def cmd_simulate(args) -> Result:
    spec = EnsembleSpec(args.ensemble, N=args.N or 0, t=float(_rational(args.t or "1")), M=args.M or 0,
                        d=args.d or 0, n=args.n or 0, m=args.m or 0, block_map=args.block_map,
                        normalization=args.normalization)
    seeds = seed_plan(args.seed, args.trials)
    payload: Payload = {"ensemble": spec.describe(), "seed": args.seed, "trials": args.trials}
    if args.spectrum:
        grid = empirical_spectrum(spec, seeds, args.bin_width)
        payload.update(bin_width=args.bin_width, points=_nums(grid.points), densities=_nums(grid.densities))
        return payload, grid.to_csv()
    if args.colors:
        payload["word"] = args.colors
        payload["moment"] = empirical_word_moment(spec, seeds, args.colors).to_json()
        return payload, None
    estimates = empirical_moments(spec, seeds, _order(args))
    payload["moments"] = [e.to_json() for e in estimates]
    csv = _csv(["p", "mean", "stderr"], ((p, e.mean, e.stderr) for p, e in enumerate(estimates, 1)))
    return payload, csv


def cmd_graph(args) -> Result:
    order = _order(args)
    if args.json:
        try:
            with open(args.json, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read graph file {args.json}: {e}")
        g = RootedBipartiteGraph.from_json(data)
    elif args.name:
        depth = args.depth if args.depth is not None else 2 * order
        g = ade_graph(args.name, depth=depth)
    else:
        raise UsageError("give --name or --json")
    c = poincare(g, order)
    payload: Payload = {
        "graph": g.to_json(),
        "poincare": c,
        "theta": theta_from_poincare(c, order),
        "circular_moments": _nums(circular_even_moments(g, order)),
    }
    if args.name:
        try:
            payload["closed_circular_moments"] = _nums(circular_measure_moments(ade_circular_measure(args.name), order))
        except UsageError:
            logger.debug("no_closed_circular_measure", name=args.name)
    return payload, None


def cmd_verify(args) -> Result:
    results = run_suite(args.suite, seed=args.seed, only=args.check or None)
    payload = {"suite": args.suite, "passed": all(r.passed for r in results),
               "checks": [r.to_json() for r in results]}
    return payload, None


COMMANDS: Dict[str, Callable] = {
    "partitions": cmd_partitions,
    "numbers": cmd_numbers,
    "cumulants": cmd_cumulants,
    "convolve": cmd_convolve,
    "transform": cmd_transform,
    "law": cmd_law,
    "weingarten": cmd_weingarten,
    "integrate": cmd_integrate,
    "simulate": cmd_simulate,
    "graph": cmd_graph,
    "verify": cmd_verify,
}

CSV_COMMANDS = ("partitions", "numbers", "transform", "weingarten", "simulate")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--log-level", default=None)
    common.add_argument("--order", type=int, default=None)

    p = argparse.ArgumentParser(prog="freeprob", description="Exact and Monte Carlo free probability toolkit")
    p.add_argument("--version", action="version", version=f"freeprob {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def group_flags(sp):
        sp.add_argument("--group", choices=SERIES, default="O")
        sp.add_argument("--free", action="store_true")
        sp.add_argument("--s", default=None)
        sp.add_argument("--k", type=int, default=None)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--colors", default=None, help="colored word in o/b letters, e.g. oobb")

    def law_flags(sp):
        sp.add_argument("--family", choices=FAMILIES, default=None)
        sp.add_argument("--t", default=None)
        sp.add_argument("--s", default=None)
        sp.add_argument("--c", default=None)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--rho", default=None, help="atoms 'x1:m1,x2:m2' for compound laws")
        sp.add_argument("--reading", choices=("compound", "multiplicative"), default="compound")

    sp = sub.add_parser("partitions", parents=[common])
    sp.add_argument("--cat", required=True, help="NC2, P, Ps:3, MatchNC2, ...")
    sp.add_argument("--s", default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--colors", default=None)
    sp.add_argument("--count", action="store_true")

    sp = sub.add_parser("numbers", parents=[common])
    sp.add_argument("name", choices=NUMBER_NAMES)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--s", default=None)
    sp.add_argument("--t", default=None)
    sp.add_argument("--N", type=int, default=None)

    sp = sub.add_parser("cumulants", parents=[common])
    sp.add_argument("--moments", default=None)
    sp.add_argument("--cumulants", default=None)
    sp.add_argument("--flavor", choices=("classical", "free"), default="classical")
    sp.add_argument("--bercovici-pata", choices=("classical_to_free", "free_to_classical"), default=None)

    sp = sub.add_parser("convolve", parents=[common])
    sp.add_argument("--a", required=True, help="moment list or law, e.g. 'Semicircle:t=1'")
    sp.add_argument("--b", required=True)
    sp.add_argument("--op", choices=tuple(CONVOLUTIONS), default="free_additive")

    sp = sub.add_parser("transform", parents=[common])
    sp.add_argument("--kind", choices=("cauchy", "R", "K", "S", "hankel", "density"), default="R")
    sp.add_argument("--moments", default=None)
    law_flags(sp)
    sp.add_argument("--grid", default="-3:3:601")
    sp.add_argument("--eps", type=float, default=1e-4)

    sp = sub.add_parser("law", parents=[common])
    law_flags(sp)
    sp.add_argument("--colors", default=None)
    sp.add_argument("--method", choices=("auto", "closed", "partitions"), default="auto")
    sp.add_argument("--atoms", action="store_true")

    sp = sub.add_parser("weingarten", parents=[common])
    group_flags(sp)
    sp.add_argument("--determinant", action="store_true")

    sp = sub.add_parser("integrate", parents=[common])
    group_flags(sp)
    sp.add_argument("--pattern", default=None, help="e.g. 'u[1,1]u[1,2]*'")
    sp.add_argument("--rows", default=None)
    sp.add_argument("--cols", default=None)
    sp.add_argument("--t", default=None)
    sp.add_argument("--character", action="store_true")
    sp.add_argument("--sphere", choices=("real", "complex"), default=None)
    sp.add_argument("--exponents", default=None)
    sp.add_argument("--generic", default=None, help="alpha,beta for the O_N two-coordinate integral")

    sp = sub.add_parser("simulate", parents=[common])
    sp.add_argument("--ensemble", choices=KINDS, default="wigner")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--t", default=None)
    sp.add_argument("--block-map", choices=BLOCK_MAPS, default="identity")
    sp.add_argument("--normalization", choices=NORMALIZATIONS, default="compound")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--colors", default=None)
    sp.add_argument("--spectrum", action="store_true")
    sp.add_argument("--bin-width", type=float, default=0.1)

    sp = sub.add_parser("graph", parents=[common])
    sp.add_argument("--name", default=None, help="A5, D4, At6, Dt5, E6, Et7, Ainf, Dinf")
    sp.add_argument("--json", default=None, help="graph file {parts, edges, root}")
    sp.add_argument("--depth", type=int, default=None)

    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--suite", choices=SUITES, default="exact")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--check", action="append", default=None)

    return p


def _header(args) -> dict:
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "log_level")}
    return {"command": args.command, "version": __version__, "format": args.format, "options": options}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = get_settings()
    configure_logging(args.log_level or settings.log_level, settings.log_json)

    try:
        if args.format == "csv" and args.command not in CSV_COMMANDS:
            raise UsageError(f"{args.command} has no CSV output")
        body, csv = COMMANDS[args.command](args)
        if args.format == "csv":
            if csv is None:
                raise UsageError(f"this {args.command} request has no CSV output; use --format json")
            out.write(csv)
        else:
            payload = {"header": _header(args), **body}
            validate_payload(payload, args.command)
            out.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    except FreeProbError as e:
        logger.debug("command_failed", command=args.command, error=type(e).__name__)
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return e.exit_code

    if args.command == "verify" and not body["passed"]:
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
