"""Command-line front end.

Every subcommand reads a field (``--field spec.json`` or ``--poly c0,c1,...``,
lowest degree first), prints one JSON document to stdout and nothing else.
Integers are serialized as decimal strings.  Exit codes: 0 success, 2 bad
input, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from sympy import isprime

from .arith import AlgElem, ArithError, FactorizationError, NumberField
from .crt import ResidueTarget, crt_solve, reduce
from .ffield import FieldError
from .ideal import FracIdeal, all_generators, factor_ideal, two_element
from .montes import PrimeIdeal, montes_factorize, okutsu_frame
from .omtype import TypeError_, VerificationError
from .pbasis import index_from_basis, local_index, p_integral_basis
from .polygon import PolygonError, lower_envelope, render_ascii
from .valuation import valuation, vp

SCHEMA_DIR = Path(__file__).with_name("schemas")
SCHEMAS = {
    "factor-prime": "decomposition.schema.json",
    "factor-ideal": "ideal.schema.json",
    "two-element": "ideal.schema.json",
    "valuation": "valuation.schema.json",
    "generator": "generator.schema.json",
    "reduce": "residue.schema.json",
    "crt": "crt.schema.json",
    "p-basis": "basis.schema.json",
    "index": "index.schema.json",
}
EXIT_INPUT = 2
EXIT_VERIFY = 3
_ASCII_LIMIT = 160


class InputError(ValueError):
    pass


# -- parsing -------------------------------------------------------------


def _int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise InputError(f"{what}: expected an integer, got {text!r}") from None


def _int_list(text: str, what: str) -> list[int]:
    text = text.strip().strip("[]")
    if not text:
        return []
    return [_int(c, what) for c in text.split(",")]


def _fields(text: str) -> dict[str, str]:
    out = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise InputError(f"expected key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def parse_elem(text: str, K: NumberField) -> AlgElem:
    """``num=c0,c1,...;den=d`` -> (c0 + c1 theta + ...)/d."""
    kv = _fields(text)
    unknown = set(kv) - {"num", "den"}
    if unknown or "num" not in kv:
        raise InputError(f"element must look like 'num=c0,c1,...;den=d', got {text!r}")
    den = _int(kv.get("den", "1"), "den")
    if den == 0:
        raise InputError("den must be nonzero")
    return K.elem(_int_list(kv["num"], "num"), den)


def load_field(args) -> NumberField:
    if args.poly is not None:
        coeffs = _int_list(args.poly, "poly")
        label = None
    else:
        try:
            spec = json.loads(Path(args.field).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read field spec: {exc}") from None
        if not isinstance(spec, dict) or not isinstance(spec.get("coeffs"), list):
            raise InputError("field spec needs a 'coeffs' list")
        if not all(isinstance(c, str) for c in spec["coeffs"]):
            raise InputError("field coefficients must be decimal strings")
        coeffs = [_int(c, "coeffs") for c in spec["coeffs"]]
        label = spec.get("label")
        if label is not None and not isinstance(label, str):
            raise InputError("field label must be a string")
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise InputError("defining polynomial must be monic of degree >= 1 (coefficients lowest first)")
    return NumberField(coeffs, label=label)


def _prime(text: str) -> int:
    p = _int(text, "p")
    if p < 2 or not isprime(p):
        raise InputError(f"{p} is not prime")
    return p


def _primes(text: str) -> list[int]:
    ps = sorted({_prime(t) for t in text.split(",") if t.strip()})
    if not ps:
        raise InputError("no prime given")
    return ps


def _select(K: NumberField, p: int, label: str | None) -> list[PrimeIdeal]:
    D = montes_factorize(K, p)
    if label is None:
        return list(D)
    try:
        return [D.by_label(label)]
    except KeyError:
        raise InputError(f"no prime labelled {label!r} over {p}") from None


# -- serialization -------------------------------------------------------


def elem_json(a: AlgElem) -> dict:
    num, den = a.integer_form()
    return {"num": [str(c) for c in num], "den": str(den)}


def _rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _prime_json(P: PrimeIdeal) -> dict:
    return {"p": str(P.p), "label": P.label, "e": P.e, "f": P.f}


def _field_json(K: NumberField) -> dict:
    return {"label": K.label, "degree": K.n}


def _strs(x):
    if isinstance(x, (list, tuple)):
        return [_strs(y) for y in x]
    return str(x)


def _residue_field_json(F) -> dict:
    """Prime, absolute degree, and the moduli psi of the successive extensions."""
    tower = [[_strs(E.base.to_json(c)) for c in E.modulus] for E in F.chain()[1:]]
    return {"p": str(F.p), "degree": F.degree, "tower": tower}


def ideal_json(a: FracIdeal) -> dict:
    norm = Fraction(1)
    factors = []
    for P, x in a.items:
        norm *= Fraction(P.p) ** (P.f * x)
        factors.append({**_prime_json(P), "exponent": x})
    return {"factors": factors, "integral": a.is_integral, "norm": _rat(norm)}


# -- per-prime work (picklable, for --parallel) --------------------------


def _decomposition_entry(K: NumberField, p: int) -> dict:
    primes = []
    for P in montes_factorize(K, p):
        frame, depth = okutsu_frame(P)
        levels = []
        for i in range(1, P.r + 1):
            L = P.om.level(i)
            levels.append({"phi_degree": len(L.phi) - 1, "slope": f"-{L.h}/{L.e}", "e": L.e, "f": L.f})
        primes.append({
            **_prime_json(P),
            "depth": depth,
            "frame_degrees": [len(phi) - 1 for phi in frame],
            "levels": levels,
            "terminal_slope": str(-P.h),
            "phi_p": [str(c) for c in P.phi_p],
        })
    return {"p": str(p), "primes": primes}


def _index_entry(K: NumberField, p: int, from_basis: bool) -> dict:
    idx = local_index(K, p)
    if from_basis:
        other = index_from_basis(K, p)
        if other != idx:
            raise VerificationError(f"index over {p}: {idx} from Okutsu data, {other} from the basis")
    return {"p": str(p), "index": str(idx)}


def _basis_entry(K: NumberField, p: int, from_basis: bool) -> dict:
    entry = _index_entry(K, p, from_basis)
    entry["basis"] = [elem_json(b) for b in p_integral_basis(K, p)]
    return entry


def _generator_entry(K: NumberField, p: int, label: str | None, check: bool) -> dict:
    D = montes_factorize(K, p)
    wanted = _select(K, p, label)
    gens = all_generators(D, K, check)
    out = []
    for P in wanted:
        g = gens[P]
        if check and factor_ideal(K, [K.from_int(p), g]) != FracIdeal.from_map(K, {P: 1}):
            raise VerificationError(f"(p, generator) is not {P.label}")
        out.append({**_prime_json(P), "generator": elem_json(g)})
    return {"p": str(p), "primes": out}


_PER_PRIME = {
    "factor-prime": lambda K, p, a: _decomposition_entry(K, p),
    "index": lambda K, p, a: _index_entry(K, p, a.from_basis),
    "p-basis": lambda K, p, a: _basis_entry(K, p, a.from_basis),
    "generator": lambda K, p, a: _generator_entry(K, p, a.label, not a.no_check),
}


def _worker(job):
    cmd, coeffs, label, p, opts = job
    K = NumberField(coeffs, label=label, check=False)
    return _PER_PRIME[cmd](K, p, argparse.Namespace(**opts))


def _per_prime(args, K: NumberField, key: str) -> dict:
    ps = _primes(args.p)
    if args.parallel > 1 and len(ps) > 1:
        opts = {k: getattr(args, k) for k in ("from_basis", "label", "no_check") if hasattr(args, k)}
        jobs = [(args.command, K.f, K.label, p, opts) for p in ps]
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            entries = list(pool.map(_worker, jobs))
    else:
        entries = [_PER_PRIME[args.command](K, p, args) for p in ps]
    return {key: entries}


# -- commands ------------------------------------------------------------


def cmd_factor_prime(args, K):
    out = _per_prime(args, K, "decompositions")
    if args.dump_polygons:
        for p in _primes(args.p):
            _dump_polygons(K, p)
    return out


def cmd_index(args, K):
    return _per_prime(args, K, "indices")


def cmd_p_basis(args, K):
    return _per_prime(args, K, "bases")


def cmd_generator(args, K):
    return _per_prime(args, K, "generators")


def _ideal_from_args(args, K: NumberField) -> FracIdeal:
    if args.elem and args.factor:
        raise InputError("give either --elem generators or --factor exponents, not both")
    if args.elem:
        return factor_ideal(K, [parse_elem(t, K) for t in args.elem])
    if not args.factor:
        raise InputError("no ideal given (use --elem or --factor)")
    exps: dict = {}
    for text in args.factor:
        kv = _fields(text)
        if set(kv) != {"p", "label", "exp"}:
            raise InputError(f"factor must look like 'p=..;label=..;exp=..', got {text!r}")
        (P,) = _select(K, _prime(kv["p"]), kv["label"])
        exps[P] = exps.get(P, 0) + _int(kv["exp"], "exp")
    return FracIdeal.from_map(K, exps)


def cmd_factor_ideal(args, K):
    return {"ideal": ideal_json(_ideal_from_args(args, K))}


def cmd_two_element(args, K):
    a = _ideal_from_args(args, K)
    rep = two_element(a)
    if not args.no_check:
        back = factor_ideal(K, [K.from_int(rep.ell), rep.alpha])
        if back != a:
            raise VerificationError("two-element representation does not regenerate the ideal")
    return {"ideal": ideal_json(a), "two_element": {"ell": _rat(rep.ell), "alpha": elem_json(rep.alpha)}}


def cmd_valuation(args, K):
    p = _prime(args.p)
    alpha = parse_elem(args.elem, K)
    rows = []
    for P in _select(K, p, args.label):
        res = valuation(P, alpha)
        rows.append({**_prime_json(P), "value": str(res.value), "levels_used": res.levels_used,
                     "improvements": res.improvements_performed})
    return {"element": elem_json(alpha), "valuations": rows}


def cmd_reduce(args, K):
    p = _prime(args.p)
    alpha = parse_elem(args.elem, K)
    rows = []
    for P in _select(K, p, args.label):
        F = P.residue_field
        rows.append({**_prime_json(P), "residue_field": _residue_field_json(F),
                     "value": _strs(F.to_json(reduce(P, alpha)))})
    return {"element": elem_json(alpha), "residues": rows}


def cmd_crt(args, K):
    targets = []
    for text in args.target:
        kv = _fields(text)
        need = {"p", "label", "exp", "num"}
        if not need <= set(kv) or set(kv) - need - {"den"}:
            raise InputError(f"target must look like 'p=..;label=..;exp=..;num=..;den=..', got {text!r}")
        (P,) = _select(K, _prime(kv["p"]), kv["label"])
        elem = parse_elem(f"num={kv['num']};den={kv.get('den', '1')}", K)
        targets.append(ResidueTarget(P, _int(kv["exp"], "exp"), elem))
    alpha = crt_solve(targets, K, check=not args.no_check)
    checks = []
    for t in targets:
        d = K.sub(alpha, t.target)
        checks.append({**_prime_json(t.prime), "exponent": t.exponent,
                       "valuation": None if d.is_zero else str(vp(t.prime, d))})
    return {"solution": elem_json(alpha), "checks": checks}


def _dump_polygons(K: NumberField, p: int) -> None:
    for P in montes_factorize(K, p):
        for i in range(1, P.r + 2):
            pts = [(s, u) for s, u, _ in P.om.cloud(i, K.f)]
            N = lower_envelope(pts)
            head = f"# p={p} {P.label} level {i}: vertices {N.vertices}"
            smax = max(s for s, _ in pts)
            span = max(u for _, u in pts) - min(u for _, u in pts)
            body = render_ascii(N, pts) if smax <= _ASCII_LIMIT and span <= _ASCII_LIMIT else "(too large to draw)"
            print(head, body, sep="\n", file=sys.stderr)


# -- entry point ---------------------------------------------------------


class Timings:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.rows: list[tuple[str, float]] = []

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.rows.append((name, time.perf_counter() - t0))

    def report(self) -> None:
        if self.enabled:
            for name, dt in self.rows:
                print(f"timing {name} {dt:.4f}s", file=sys.stderr)


COMMANDS = {
    "factor-prime": cmd_factor_prime,
    "factor-ideal": cmd_factor_ideal,
    "valuation": cmd_valuation,
    "generator": cmd_generator,
    "two-element": cmd_two_element,
    "reduce": cmd_reduce,
    "crt": cmd_crt,
    "p-basis": cmd_p_basis,
    "index": cmd_index,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--field", help="field spec JSON file")
    src.add_argument("--poly", help="defining polynomial, comma-separated, lowest degree first")
    common.add_argument("--timings", action="store_true", help="per-phase wall-clock on stderr")
    common.add_argument("--dump-polygons", action="store_true", help="ASCII Newton polygons on stderr")
    common.add_argument("--parallel", type=int, default=1, metavar="N", help="worker processes over primes")
    common.add_argument("--no-check", action="store_true", help="skip self-verification of results")

    parser = argparse.ArgumentParser(prog="omideals", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    sp = add("factor-prime", "prime ideal decomposition of p")
    sp.add_argument("--p", required=True, help="prime or comma-separated primes")

    sp = add("index", "v_p of the index (Z_K : Z[theta])")
    sp.add_argument("--p", required=True, help="prime or comma-separated primes")
    sp.add_argument("--from-basis", action="store_true", help="cross-check with the determinant of the basis")

    sp = add("p-basis", "p-integral basis")
    sp.add_argument("--p", required=True, help="prime or comma-separated primes")
    sp.add_argument("--from-basis", action="store_true", help="cross-check the index with the basis determinant")

    sp = add("generator", "generators alpha with P = (p, alpha)")
    sp.add_argument("--p", required=True, help="prime or comma-separated primes")
    sp.add_argument("--label", help="restrict to one prime label")

    for name, help_ in (("factor-ideal", "factor the ideal generated by elements"),
                        ("two-element", "two-element representation of an ideal")):
        sp = add(name, help_)
        sp.add_argument("--elem", action="append", default=[], help="generator 'num=c0,c1,...;den=d'")
        sp.add_argument("--factor", action="append", default=[], help="prime power 'p=..;label=..;exp=..'")

    for name, help_ in (("valuation", "v_P of an element"), ("reduce", "residue class of an element")):
        sp = add(name, help_)
        sp.add_argument("--p", required=True)
        sp.add_argument("--label", help="restrict to one prime label")
        sp.add_argument("--elem", required=True, help="element 'num=c0,c1,...;den=d'")

    sp = add("crt", "element with prescribed residues modulo prime powers")
    sp.add_argument("--target", action="append", required=True,
                    help="'p=..;label=..;exp=..;num=c0,c1,...;den=d'")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.parallel < 1:
        parser.error("--parallel must be >= 1")
    timings = Timings(args.timings)
    try:
        with timings.phase("load"):
            K = load_field(args)
        with timings.phase(args.command):
            doc = COMMANDS[args.command](args, K)
        with timings.phase("serialize"):
            doc = {"command": args.command, "field": _field_json(K), **doc}
            text = json.dumps(doc, indent=2, sort_keys=True)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, ArithError, FieldError, PolygonError, TypeError_, FactorizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        timings.report()
    sys.stdout.write(text + "\n")
    return 0
