import random

import pytest

from bottrig.ring import BottTower, ClassDeg2


def sympy_normal_form(tower: BottTower, expr: dict) -> dict:
    """Independent normal-form oracle via sympy multivariate division.

    The relation list {x_j^2 - alpha_j x_j} has pairwise coprime leading
    monomials under lex with x_n > ... > x_1, so the division remainder is
    canonical.  Returns a mask -> coefficient dict matching RingElement.terms.
    """
    import sympy

    n = tower.n
    if n == 0:
        total = sum(expr.values())
        return {0: total} if total else {}
    xs = sympy.symbols([f"x{i}" for i in range(1, n + 1)])
    f = sympy.Integer(0)
    for e, c in expr.items():
        term = sympy.Integer(c)
        for x, k in zip(xs, e):
            term *= x**k
        f += term
    rels = []
    for j in range(1, n + 1):
        alpha = sum(
            tower.rows[j - 1][l] * xs[l] for l in range(j - 1)
        )
        rels.append(xs[j - 1] ** 2 - alpha * xs[j - 1])
    _, r = sympy.reduced(f, rels, *reversed(xs), order="lex")
    out = {}
    if r != 0:
        for monom, coeff in sympy.Poly(r, *xs).terms():
            mask = 0
            for i, k in enumerate(monom):
                assert k <= 1, "oracle remainder is not square-free"
                if k:
                    mask |= 1 << i
            out[mask] = int(coeff)
    return out


def random_tower(rng: random.Random, max_n: int = 5, bound: int = 3) -> BottTower:
    n = rng.randint(0, max_n)
    entries = {
        (j, l): rng.randint(-bound, bound)
        for j in range(2, n + 1)
        for l in range(1, j)
    }
    return BottTower.from_entries(n, entries)


def random_expr(rng: random.Random, n: int, terms: int = 4, max_exp: int = 3) -> dict:
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(0, max_exp) for _ in range(n))
        out[e] = out.get(e, 0) + rng.randint(-5, 5)
    return out


def random_class(rng: random.Random, n: int, bound: int = 3) -> ClassDeg2:
    return ClassDeg2(tuple(rng.randint(-bound, bound) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(20240811)
