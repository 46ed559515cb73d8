"""
Symbolic bound expressions with rigorous comparison against integers.

Expressions are trees over integer literals, sums, products, powers,
factorials and minima. Values that fit in `exact_bits` bits are evaluated
exactly; anything larger is compared through natural-log intervals computed
with mpmath's outward-rounded interval arithmetic. Factorials of huge
arguments use Stirling's bounds

    n ln n - n + ln(2 pi n) / 2  <=  ln n!  <=  the same + 1 / (12 n),

valid for every n >= 1. Power towers whose logarithms overflow any
reasonable precision saturate their upper bound at +inf and keep a valid
lower bound.
"""

import logging
import math
import re
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from mpmath.ctx_iv import MPIntervalContext

logger = logging.getLogger(__name__)

BoundOp = Literal["lit", "add", "mul", "pow", "fact", "min"]
Verdict = Literal["within", "exceeds", "undecided"]

DEFAULT_EXACT_BITS = 20_000
DEFAULT_MAX_PRECISION = 4096
EXACT_LOGGAMMA_LIMIT = 10**6

# exp() arguments beyond this are not evaluated; upper bounds become +inf.
_EXP_CAP = 2**40


class BoundError(Exception):
    pass


class _Unavailable(Exception):
    pass


class BoundExpressionError(BoundError):
    """
    Malformed bound expression text.

    Attributes:
        line (int): 1-based line of the offending token.
        column (int): 1-based column of the offending token.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f" at line {line}, column {column}" if line else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class BoundExpr:
    """
    Node of a bound expression tree.

    Nodes other than a bare literal always have value at least 1; zero and
    one are folded away by the constructors below, which should be used
    instead of building nodes directly.

    Attributes:
        op (BoundOp):
            Node kind.

        args (tuple[BoundExpr, ...]):
            Children: terms, factors, (base, exponent), the factorial argument,
            or the options of a minimum.

        value (int):
            The literal value of a "lit" node.
    """

    op: BoundOp
    args: tuple["BoundExpr", ...] = ()
    value: int = 0

    def __str__(self) -> str:
        return format_bound(self)


@dataclass(frozen=True)
class BoundComparison:
    """
    Outcome of comparing a concrete value against a bound.

    Attributes:
        verdict (Verdict):
            "within" when value <= bound is certain, "exceeds" when
            value > bound is certain, "undecided" otherwise.

        value (int):
            The concrete value compared.

        exact_bound (int | None):
            The bound's exact value when it was small enough to compute.

        precision (int):
            Interval precision in bits that settled the comparison, or 0 for an
            exact comparison.
    """

    verdict: Verdict
    value: int
    exact_bound: int | None
    precision: int

    @property
    def holds(self) -> bool:
        return self.verdict == "within"


# ==================================================================================
# Constructors
# ==================================================================================


def lit(n: int) -> BoundExpr:
    if n < 0:
        raise BoundError("bound literals must be non-negative")
    return BoundExpr("lit", value=n)


def _as_expr(x: "BoundExpr | int") -> BoundExpr:
    return lit(x) if isinstance(x, int) else x


def _is_lit(e: BoundExpr, n: int) -> bool:
    return e.op == "lit" and e.value == n


def add(*terms: "BoundExpr | int") -> BoundExpr:
    kept = tuple(t for t in map(_as_expr, terms) if not _is_lit(t, 0))
    if not kept:
        return lit(0)
    return kept[0] if len(kept) == 1 else BoundExpr("add", kept)


def mul(*factors: "BoundExpr | int") -> BoundExpr:
    items = tuple(map(_as_expr, factors))
    if any(_is_lit(f, 0) for f in items):
        return lit(0)
    kept = tuple(f for f in items if not _is_lit(f, 1))
    if not kept:
        return lit(1)
    return kept[0] if len(kept) == 1 else BoundExpr("mul", kept)


def power(base: "BoundExpr | int", exponent: "BoundExpr | int") -> BoundExpr:
    b, e = _as_expr(base), _as_expr(exponent)
    if _is_lit(e, 0) or _is_lit(b, 1):
        return lit(1)
    if _is_lit(b, 0):
        return lit(0)
    if _is_lit(e, 1):
        return b
    return BoundExpr("pow", (b, e))


def fact(arg: "BoundExpr | int") -> BoundExpr:
    a = _as_expr(arg)
    if _is_lit(a, 0) or _is_lit(a, 1):
        return lit(1)
    return BoundExpr("fact", (a,))


def minimum(*options: "BoundExpr | int") -> BoundExpr:
    items = tuple(dict.fromkeys(map(_as_expr, options)))
    if not items:
        raise BoundError("min needs at least one option")
    if any(_is_lit(o, 0) for o in items):
        return lit(0)
    return items[0] if len(items) == 1 else BoundExpr("min", items)


def sub(a: "BoundExpr | int", b: "BoundExpr | int") -> BoundExpr:
    """
    Difference of two exactly computable values, as a literal.

    Raises:
        BoundError: If either side is too large to evaluate or the result is negative.
    """
    x, y = exact_value(_as_expr(a)), exact_value(_as_expr(b))
    if x is None or y is None:
        raise BoundError("subtraction needs exactly computable operands")
    if x < y:
        raise BoundError(f"negative difference {x} - {y}")
    return lit(x - y)


# ==================================================================================
# Evaluation
# ==================================================================================


@lru_cache(maxsize=None)
def _context(precision: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = precision
    return ctx


def log_interval(expr: BoundExpr, precision: int = 53):
    """
    Interval containing the natural logarithm of a positive expression.

    Raises:
        BoundError: If the expression is the literal 0.
    """
    if _is_lit(expr, 0):
        raise BoundError("the logarithm of 0 is undefined")
    return _log_bounds(expr, precision)


@lru_cache(maxsize=4096)
def _log_bounds(expr: BoundExpr, precision: int):
    ctx = _context(precision)
    op = expr.op
    if op == "lit":
        return ctx.ln(ctx.mpf(expr.value))
    parts = [_log_bounds(a, precision) for a in expr.args] if op != "pow" else []

    if op == "mul":
        total = ctx.mpf(0)
        for p in parts:
            total = total + p
        return total
    if op == "add":
        spread = ctx.ln(ctx.mpf(len(parts)))
        return _hull(ctx, _max_point(p.a for p in parts), (_max_point(p.b for p in parts) + spread).b)
    if op == "min":
        return _hull(ctx, _min_point(p.a for p in parts), _min_point(p.b for p in parts))
    if op == "pow":
        base, exponent = expr.args
        return _mul_nonnegative(ctx, _value_bounds(exponent, precision), _log_bounds(base, precision))
    return _log_factorial(ctx, expr.args[0], precision)


def _value_bounds(expr: BoundExpr, precision: int):
    ctx = _context(precision)
    exact = _small_exact(expr)
    if exact is not None:
        return ctx.mpf(exact)
    return _exp_bounds(ctx, _log_bounds(expr, precision))


def _log_factorial(ctx: MPIntervalContext, arg: BoundExpr, precision: int):
    exact = _small_exact(arg)
    if exact is not None and exact <= EXACT_LOGGAMMA_LIMIT:
        return _clamp(ctx, ctx.loggamma(ctx.mpf(exact) + 1))
    n = _value_bounds(arg, precision)
    low, high = n.a, n.b

    def stirling(x):
        return x * ctx.ln(x) - x + ctx.ln(2 * ctx.pi * x) / 2

    lower = stirling(low).a
    if high == ctx.inf:
        return _hull(ctx, lower, ctx.inf)
    upper = (stirling(high) + 1 / (12 * high)).b
    return _hull(ctx, lower, upper)


def _small_exact(expr: BoundExpr) -> int | None:
    """Exact value of an expression whose log is below the cheap threshold."""
    return exact_value(expr, max_bits=256)


def exact_value(expr: BoundExpr, max_bits: int = DEFAULT_EXACT_BITS) -> int | None:
    """
    The exact integer value, or `None` when it may need more than `max_bits` bits.
    """
    if expr.op == "lit":
        return expr.value
    bounds = _log_bounds(expr, 53)
    if not bounds.b <= max_bits * math.log(2):
        return None
    try:
        return _exact(expr, max_bits)
    except _Unavailable:
        return None


def _exact(expr: BoundExpr, max_bits: int) -> int:
    op = expr.op
    if op == "lit":
        return expr.value
    if op == "min":
        values = [exact_value(o, max_bits) for o in expr.args]
        known = [v for v in values if v is not None]
        if not known:
            raise _Unavailable
        best = min(known)
        ctx = _context(53)
        floor = ctx.ln(ctx.mpf(best)).b if best > 0 else ctx.mpf(0)
        for option, v in zip(expr.args, values):
            if v is None and not _log_bounds(option, 53).a > floor:
                raise _Unavailable
        return best
    if op == "pow":
        base = _exact(expr.args[0], max_bits)
        if base <= 1:
            return base
        return base ** _exact(expr.args[1], max_bits)
    values = [_exact(a, max_bits) for a in expr.args]
    if op == "add":
        return sum(values)
    if op == "mul":
        return math.prod(values)
    return math.factorial(values[0])


def cmp_bound(
    bound: BoundExpr,
    value: int,
    *,
    exact_bits: int = DEFAULT_EXACT_BITS,
    max_precision: int = DEFAULT_MAX_PRECISION,
) -> BoundComparison:
    """
    Decide value <= bound with certainty, refining interval precision as needed.

    Exact evaluation is used whenever the bound fits in `exact_bits` bits.
    Otherwise log intervals are compared at 53 bits, doubling the precision
    up to `max_precision` before answering "undecided".
    """
    if value <= 0:
        return BoundComparison("within", value, exact_value(bound, exact_bits), 0)
    exact = exact_value(bound, exact_bits)
    if exact is not None:
        verdict: Verdict = "within" if value <= exact else "exceeds"
        return BoundComparison(verdict, value, exact, 0)

    precision = 53
    while precision <= max_precision:
        ctx = _context(precision)
        bounds = _log_bounds(bound, precision)
        logged = ctx.ln(ctx.mpf(value))
        if logged.b <= bounds.a:
            return BoundComparison("within", value, None, precision)
        if logged.a > bounds.b:
            return BoundComparison("exceeds", value, None, precision)
        logger.debug("comparison undecided at %d bits, refining", precision)
        precision *= 2
    return BoundComparison("undecided", value, None, max_precision)


def log2_bounds(expr: BoundExpr, precision: int = 53) -> tuple[str, str]:
    """Printable lower and upper bounds on log2 of the expression."""
    ctx = _context(precision)
    if _is_lit(expr, 0):
        return ("-inf", "-inf")
    scaled = _log_bounds(expr, precision) / ctx.ln(ctx.mpf(2))
    return f"{float(scaled.a):.8g}", f"{float(scaled.b):.8g}"


def _hull(ctx: MPIntervalContext, lower, upper):
    return ctx.mpf((lower, upper))


def _clamp(ctx: MPIntervalContext, interval):
    """Logs of values >= 1 are non-negative."""
    if interval.a < 0:
        return _hull(ctx, 0, interval.b)
    return interval


def _max_point(points):
    best = None
    for p in points:
        if best is None or p > best:
            best = p
    return best


def _min_point(points):
    best = None
    for p in points:
        if best is None or p < best:
            best = p
    return best


def _exp_bounds(ctx: MPIntervalContext, logs):
    """exp() of a log interval, saturating arguments past the cap."""
    low = logs.a if logs.a <= _EXP_CAP else ctx.mpf(_EXP_CAP)
    lower = ctx.exp(low).a
    if logs.b > _EXP_CAP:
        return _hull(ctx, lower, ctx.inf)
    return _hull(ctx, lower, ctx.exp(logs.b).b)


def _mul_nonnegative(ctx: MPIntervalContext, x, y):
    """Product of two non-negative intervals without forming 0 * inf."""
    lower = (x.a * y.a).a
    if x.b == ctx.inf or y.b == ctx.inf:
        return _hull(ctx, lower, ctx.inf)
    return _hull(ctx, lower, (x.b * y.b).b)


# ==================================================================================
# Text forms
# ==================================================================================

_OPERATORS = {"add": add, "mul": mul, "pow": power, "fact": fact, "min": minimum, "sub": sub}
_ARITY = {"pow": 2, "fact": 1, "sub": 2}
_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def parse_bound(text: str, variables: Mapping[str, int] | None = None) -> BoundExpr:
    """
    Parse prefix s-expression text such as `(fact (mul 2 (pow 2 16)))`.

    Operators: add, mul, pow, fact, min, sub. Names in `variables` (for
    example `d`) stand for their integer values. Text after `#` on a line is
    ignored.

    Raises:
        BoundExpressionError: On any syntax error, with its position.
    """
    env = dict(variables or {})
    tokens = list(_tokenize(text))
    if not tokens:
        raise BoundExpressionError("empty expression")
    expr, pos = _parse(tokens, 0, env)
    if pos != len(tokens):
        _, line, col = tokens[pos]
        raise BoundExpressionError("unexpected trailing input", line, col)
    return expr


def _tokenize(text: str):
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for match in _TOKEN.finditer(line):
            if match.group(5):
                raise BoundExpressionError(
                    f"unexpected character {match.group(5)!r}", line_no, match.start(5) + 1
                )
            token = next(g for g in match.groups()[:4] if g is not None)
            yield token, line_no, match.start() + len(match.group()) - len(token) + 1


def _parse(tokens, pos: int, env: dict[str, int]) -> tuple[BoundExpr, int]:
    if pos >= len(tokens):
        line, col = tokens[-1][1:] if tokens else (0, 0)
        raise BoundExpressionError("unexpected end of expression", line, col)
    token, line, col = tokens[pos]
    if token.isdigit():
        return lit(int(token)), pos + 1
    if token == ")":
        raise BoundExpressionError("unexpected ')'", line, col)
    if token != "(":
        if token not in env:
            raise BoundExpressionError(f"unknown name {token!r}", line, col)
        return lit(env[token]), pos + 1

    if pos + 1 >= len(tokens):
        raise BoundExpressionError("unexpected end of expression", line, col)
    name, op_line, op_col = tokens[pos + 1]
    if name not in _OPERATORS:
        raise BoundExpressionError(f"unknown operator {name!r}", op_line, op_col)
    pos += 2
    args = []
    while pos < len(tokens) and tokens[pos][0] != ")":
        arg, pos = _parse(tokens, pos, env)
        args.append(arg)
    if pos >= len(tokens):
        raise BoundExpressionError("missing ')'", line, col)
    expected = _ARITY.get(name)
    if (expected is not None and len(args) != expected) or not args:
        raise BoundExpressionError(f"wrong number of arguments to {name}", op_line, op_col)
    try:
        return _OPERATORS[name](*args), pos + 1
    except BoundError as exc:
        raise BoundExpressionError(str(exc), op_line, op_col) from exc


def render_bound(expr: BoundExpr) -> str:
    """Prefix s-expression text accepted by `parse_bound`."""
    if expr.op == "lit":
        return str(expr.value)
    return "(" + " ".join([expr.op, *(render_bound(a) for a in expr.args)]) + ")"


def format_bound(expr: BoundExpr) -> str:
    """Conventional infix rendering, e.g. `(3·3!)!`."""
    op = expr.op
    if op == "lit":
        return str(expr.value)
    if op == "add":
        return " + ".join(format_bound(a) for a in expr.args)
    if op == "mul":
        return "·".join(_wrapped(a, ("add",)) for a in expr.args)
    if op == "pow":
        base, exponent = expr.args
        base_text = _wrapped(base, ("add", "mul", "pow", "fact"))
        return f"{base_text}^{_wrapped(exponent, ('add', 'mul', 'pow', 'fact', 'min'))}"
    if op == "fact":
        return f"{_wrapped(expr.args[0], ('add', 'mul', 'pow', 'fact'))}!"
    return "min(" + ", ".join(format_bound(a) for a in expr.args) + ")"


def _wrapped(expr: BoundExpr, ops: tuple[str, ...]) -> str:
    text = format_bound(expr)
    return f"({text})" if expr.op in ops else text
