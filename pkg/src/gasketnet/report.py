"""Decimal rendering and CSV helpers shared by the engines and the CLI."""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Context
from fractions import Fraction

SIG_DIGITS = 12


def render_decimal(x, digits: int = SIG_DIGITS) -> str:
    """Round an exact rational to ``digits`` significant digits, half-even."""
    x = Fraction(x)
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    d = ctx.divide(ctx.create_decimal(x.numerator), ctx.create_decimal(x.denominator))
    s = format(d, "f")
    return s if "." in s else s + ".0"


def truncate_decimal(x, places: int = 4) -> str:
    """Truncate (toward zero) to ``places`` decimals: 0.22079... -> '0.2207'."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    q = abs(x.numerator) * 10 ** places // x.denominator
    whole, frac = divmod(q, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


def exact_row(t: int, value) -> str:
    """``t,value_num,value_den,value_decimal``."""
    v = Fraction(value)
    return f"{t},{v.numerator},{v.denominator},{render_decimal(v)}"


EXACT_HEADER = "t,value_num,value_den,value_decimal"
MC_HEADER = "t,estimate,std_err,samples,seed"
