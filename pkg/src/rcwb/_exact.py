from fractions import Fraction


def fmt_q(x):
    """Serialize a rational as ``"p/q"``, always with an explicit denominator."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text):
    """Parse ``"p/q"`` or a plain integer string into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def approx(x, digits=15):
    """Decimal rendering for human eyes; marked approximate by the caller."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole, rem = divmod(x.numerator, x.denominator)
    frac = (rem * 10**digits) // x.denominator
    return f"~{sign}{whole}.{frac:0{digits}d}"
