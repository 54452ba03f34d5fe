"""
Polynomial text ("x^2 - 2", "y^2 + 2*t") parsed with sympy into the exact
polynomial types the applications iterate with.
"""
from fractions import Fraction
from tokenize import TokenError

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import PolynomialError

from src.spaces.padic import IntPolynomial
from src.spaces.series import BivariatePolynomial
from src.state.errors import ParseError

TRANSFORMATIONS = standard_transformations + (convert_xor,)


def _parse(text: str, variables: tuple) -> Poly:
    local = {name: Symbol(name) for name in variables}
    try:
        expr = parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS)
    except SyntaxError as e:
        raise ParseError(f"cannot parse {text!r}: {e.msg}", line=1, column=e.offset) from e
    except (TokenError, TypeError, ValueError) as e:
        raise ParseError(f"cannot parse {text!r}: {e}") from e
    extra = sorted(str(s) for s in expr.free_symbols if str(s) not in variables)
    if extra:
        raise ParseError(f"{text!r} uses unknown symbol(s) {', '.join(extra)}; expected {', '.join(variables)}")
    try:
        return Poly(expr, *[local[name] for name in variables])
    except PolynomialError as e:
        raise ParseError(f"{text!r} is not a polynomial in {', '.join(variables)}") from e


def parse_int_polynomial(text: str, variable: str = "x") -> IntPolynomial:
    """Integer polynomial in one variable, coefficients lowest degree first."""
    poly = _parse(text, (variable,))
    coefficients = [0] * (poly.degree() + 1 if not poly.is_zero else 1)
    for (k,), c in poly.terms():
        if not c.is_integer:
            raise ParseError(f"{text!r} has non-integer coefficient {c}")
        coefficients[k] = int(c)
    return IntPolynomial(coefficients=tuple(coefficients))


def parse_rhs(text: str) -> BivariatePolynomial:
    """f(t, y) with rational coefficients."""
    poly = _parse(text, ("t", "y"))
    terms = []
    for (i, j), c in poly.terms():
        if not c.is_rational:
            raise ParseError(f"{text!r} has non-rational coefficient {c}")
        terms.append((i, j, Fraction(int(c.p), int(c.q))))
    return BivariatePolynomial(terms=terms)
