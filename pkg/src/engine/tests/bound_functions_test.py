import math

import pytest

from src.engine.bound_expr import BoundError, cmp_bound, exact_value, fact, lit
from src.engine.bound_functions import (
    NAMED_BOUNDS,
    BoundFn,
    closed_form,
    compose_f3,
    constant,
    dprime,
    f3,
    f_hat,
    f_prime,
    f_tilde,
    g_star,
    hat,
    lift,
    named_bound,
    star,
    tabled,
    tilde,
)

FACTORIAL = closed_form("d!", lambda d: fact(d))


@pytest.mark.parametrize(
    "d, expected",
    [(1, 2), (2, 2), (3, 3), (6, 3), (7, 4), (12, 4), (13, 5), (20, 5), (21, 6)],
)
def test_dprime(d: int, expected: int) -> None:
    assert dprime(d) == expected
    assert (expected - 1) * (expected - 2) < d <= expected * (expected - 1)


def test_dprime_needs_a_positive_valency() -> None:
    with pytest.raises(BoundError):
        dprime(0)


@pytest.mark.parametrize("d", range(2, 13))
def test_tilde_undoes_the_distance_two_valency(d: int) -> None:
    assert f_tilde(FACTORIAL, d * (d - 1)) == FACTORIAL(d)
    assert exact_value(tilde(FACTORIAL)(d * (d - 1))) == math.factorial(d)


@pytest.mark.parametrize("d", range(1, 8))
def test_hat_of_the_constant_one_is_factorial(d: int) -> None:
    assert exact_value(f_hat(constant(1), d)) == math.factorial(d)
    assert hat(constant(1))(d) == f_hat(constant(1), d)


def test_hat_of_a_larger_constant_is_a_tower() -> None:
    # (2 * 2^(2^2 * 2^4))! = (2^65)!
    tower = f_hat(constant(2), 2)
    assert exact_value(tower) is None
    assert cmp_bound(tower, 10**100).holds


def test_f3() -> None:
    # d^(f1 - 1) * (d * f1^2 * f2)! with d = 2, f1 = 3, f2 = 1
    value = exact_value(f3(constant(3), constant(1), 2))
    assert value == 2**2 * math.factorial(18)
    assert compose_f3(constant(3), constant(1))(2) == f3(constant(3), constant(1), 2)


def test_lift_evaluates_at_the_distance_two_valency() -> None:
    assert f_prime(FACTORIAL, 3) == fact(6)
    assert lift(FACTORIAL).name == "d!(d(d-1))"
    assert exact_value(lift(FACTORIAL)(4)) == math.factorial(12)


def test_g_star_uses_the_distance_two_valency() -> None:
    # d = 2, d0 = 2, g1 = g2 = 1: (2 * 1^(...))! = 2
    assert exact_value(g_star(constant(1), constant(1), 2)) == 2
    combined = star(constant(1), constant(2))
    assert combined.name == "g_star(1, 2)"
    # d0 = 2, tower exponent 2^2 * 1^4 = 4, so (2 * 2^4)!
    assert exact_value(combined(2)) == math.factorial(32)


def test_tabled_functions_are_partial() -> None:
    table = tabled("small", {2: 5, 3: 9})
    assert table(3) == lit(9)
    with pytest.raises(BoundError):
        table(4)


def test_table_entries_take_precedence_over_the_formula() -> None:
    mixed = BoundFn("mixed", {3: 1}, lambda d: fact(d))
    assert mixed(3) == lit(1)
    assert mixed(4) == fact(4)


@pytest.mark.parametrize(
    "name, d, expected",
    [
        ("factorial", 4, 24),
        ("socle_cofactor", 3, 6402373705728000),
        ("biqp_cross", 3, 12),
        ("delta_factorial", 3, 720),
        ("biqp_general", 2, math.factorial(16)),
    ],
)
def test_named_bounds(name: str, d: int, expected: int) -> None:
    assert exact_value(named_bound(name, d)) == expected


def test_named_bounds_are_listed() -> None:
    assert set(NAMED_BOUNDS) >= {"factorial", "socle_cofactor", "biqp_general", "biqp_cross"}
    with pytest.raises(BoundError):
        named_bound("nonsense", 3)
