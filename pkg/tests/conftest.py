import json
import random
import sys
from pathlib import Path

import pytest
import sympy

from omideals.arith import NumberField, ONE, is_squarefree_over_q, padd, pmul, ppow, trim

ROOT = Path(__file__).resolve().parents[1]
FIELDS = ROOT / "data" / "fields"
sys.path.insert(0, str(Path(__file__).parent))

_X = sympy.Symbol("x")


def load_field(name: str, check: bool = False) -> NumberField:
    spec = json.loads((FIELDS / f"{name}.json").read_text())
    return NumberField([int(c) for c in spec["coeffs"]], label=spec.get("label"), check=check)


@pytest.fixture(scope="session")
def K6():
    return load_field("deg6_modular")


@pytest.fixture(scope="session")
def K20():
    return load_field("deg20_two_primes")


@pytest.fixture(scope="session")
def K1000():
    return load_field("deg1000_trinomial")


def irreducible(g) -> bool:
    return sympy.Poly(list(reversed(g)), _X).is_irreducible


def ramified_poly(rng: random.Random, p: int, extra_factor: bool = True):
    """A monic polynomial built as a perturbed product of Eisenstein-like pieces
    sharing a residual factor, so that p ramifies and types of order >= 2 appear."""
    a = trim([rng.randint(0, p - 1) for _ in range(2)] + [1])
    b = padd(ppow(a, rng.randint(1, 3)), (p ** rng.randint(1, 3),))
    c = padd(ppow(a, rng.randint(1, 2)), (p * rng.randint(1, 3),))
    g = pmul(b, c)
    if extra_factor:
        d = trim([rng.randint(0, p - 1), 1])
        g = pmul(g, rng.choice([ONE, d, pmul(d, d)]))
    return padd(g, (p ** rng.randint(3, 9),))


def random_ramified_fields(seed: int, count: int, primes=(2, 3, 5), max_degree: int | None = None,
                           require_irreducible: bool = False):
    """[(NumberField, p)] with squarefree defining polynomials; deterministic in seed."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.choice(primes)
        g = ramified_poly(rng, p)
        if max_degree is not None and len(g) - 1 > max_degree:
            continue
        if not is_squarefree_over_q(g) or (require_irreducible and not irreducible(g)):
            continue
        out.append((NumberField(g), p))
    return out


def random_small_fields(seed: int, count: int, max_degree: int = 6, bound: int = 30):
    """[NumberField] of random monic irreducible polynomials of degree 2..max_degree."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_degree)
        g = [rng.randint(-bound, bound) for _ in range(n)] + [1]
        if g[0] == 0 or not irreducible(g):
            continue
        out.append(NumberField(g))
    return out


# -- acceptance reporting ------------------------------------------------

_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    rep = outcome.get_result()
    if rep.when == "call" or rep.failed:
        n, title = mark.args
        entry = _CRITERIA.setdefault(n, [title, True, []])
        if rep.failed:
            entry[1] = False
            entry[2].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, failed = _CRITERIA[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += "  (failed: " + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
