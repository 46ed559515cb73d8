"""
Bound functions N -> N and the combinators built from them.

A `BoundFn` is evaluated only at the finitely many valencies in play, so it
may be a table, a closed form, or a table with a closed-form fallback.
"""

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from .bound_expr import BoundError, BoundExpr, fact, lit, minimum, mul, power, sub


@dataclass(frozen=True)
class BoundFn:
    """
    A named function from valencies to bound expressions.

    Attributes:
        name (str):
            Display name, e.g. "d!" or "f_hat(g)".

        table (Mapping[int, int]):
            Tabled values, consulted first.

        formula (Callable[[int], BoundExpr] | None):
            Closed form used where the table has no entry.
    """

    name: str
    table: Mapping[int, int] = field(default_factory=dict)
    formula: Callable[[int], BoundExpr] | None = field(default=None, compare=False)

    def __call__(self, d: int) -> BoundExpr:
        if d in self.table:
            return lit(self.table[d])
        if self.formula is None:
            raise BoundError(f"{self.name} is not defined at d = {d}")
        return self.formula(d)

    def __hash__(self) -> int:
        return hash((self.name, tuple(sorted(self.table.items()))))


def constant(c: int) -> BoundFn:
    return BoundFn(str(c), formula=lambda d: lit(c))


def tabled(name: str, values: Mapping[int, int]) -> BoundFn:
    return BoundFn(name, dict(values))


def closed_form(name: str, formula: Callable[[int], BoundExpr]) -> BoundFn:
    return BoundFn(name, formula=formula)


def dprime(d: int) -> int:
    """The unique d' >= 2 with (d'-1)(d'-2) < d <= d'(d'-1)."""
    if d < 1:
        raise BoundError("dprime needs d >= 1")
    k = 2
    while k * (k - 1) < d:
        k += 1
    return k


def f3(f1: BoundFn, f2: BoundFn, d: int) -> BoundExpr:
    """d^(f1(d) - 1) · (d · f1(d)^2 · f2(d))!"""
    a, b = f1(d), f2(d)
    return mul(power(d, sub(a, 1)), fact(mul(d, power(a, 2), b)))


def f_hat(g: BoundFn, d: int) -> BoundExpr:
    """(d · g(d)^(d^d · g(d)^(2d)))!"""
    value = g(d)
    return fact(mul(d, power(value, mul(power(d, d), power(value, 2 * d)))))


def f_tilde(f: BoundFn, d: int) -> BoundExpr:
    return f(dprime(d))


def f_prime(f: BoundFn, d: int) -> BoundExpr:
    """f(d(d-1)), the bound carried from the distance-2 graph back to the graph."""
    return f(d * (d - 1))


def g_star(g1: BoundFn, g2: BoundFn, d: int) -> BoundExpr:
    """(d0 · (g1(d0) g2(d0))^(d0^d0 · min(g1(d0), g2(d0))^(2 d0)))! with d0 = d(d-1)."""
    d0 = d * (d - 1)
    a, b = g1(d0), g2(d0)
    tower = mul(power(d0, d0), power(minimum(a, b), 2 * d0))
    return fact(mul(d0, power(mul(a, b), tower)))


# ==================================================================================
# Combinators on functions
# ==================================================================================


def compose_f3(f1: BoundFn, f2: BoundFn) -> BoundFn:
    return closed_form(f"f3({f1.name}, {f2.name})", lambda d: f3(f1, f2, d))


def hat(g: BoundFn) -> BoundFn:
    return closed_form(f"f_hat({g.name})", lambda d: f_hat(g, d))


def tilde(f: BoundFn) -> BoundFn:
    return closed_form(f"f_tilde({f.name})", lambda d: f_tilde(f, d))


def lift(f: BoundFn) -> BoundFn:
    return closed_form(f"{f.name}(d(d-1))", lambda d: f_prime(f, d))


def star(g1: BoundFn, g2: BoundFn) -> BoundFn:
    return closed_form(f"g_star({g1.name}, {g2.name})", lambda d: g_star(g1, g2, d))


# ==================================================================================
# Named bounds of the reduction theorems
# ==================================================================================


def _delta_factorial(d: int) -> BoundExpr:
    return fact(d * (d - 1))


NAMED_BOUNDS: dict[str, BoundFn] = {
    "factorial": closed_form("d!", lambda d: fact(d)),
    "socle_cofactor": closed_form("(d·d!)!", lambda d: fact(mul(d, fact(d)))),
    "biqp_general": closed_form(
        "(d^2·((d(d-1))!)^2)!",
        lambda d: fact(mul(power(d, 2), power(_delta_factorial(d), 2))),
    ),
    "biqp_cross": closed_form("d!·(d-1)!", lambda d: mul(fact(d), fact(d - 1))),
    "delta_factorial": closed_form("(d(d-1))!", _delta_factorial),
}


def named_bound(name: str, d: int) -> BoundExpr:
    try:
        return NAMED_BOUNDS[name](d)
    except KeyError:
        raise BoundError(f"unknown bound {name!r}") from None
