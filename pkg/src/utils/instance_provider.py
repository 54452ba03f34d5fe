"""
Space and map factories keyed by descriptor "kind".
"""
from typing import Any, Mapping

from src.spaces.finite import FiniteSpace
from src.spaces.lex_series import LexSeriesSpace
from src.spaces.maps import (
    AffineLexMap,
    AffineSeriesMap,
    ConstantMap,
    ContractingMap,
    IdentityMap,
    NewtonMap,
    PicardOperator,
    TableMap,
)
from src.spaces.padic import IntPolynomial, PadicDisc, PadicSpace
from src.spaces.radius import FinitePoset, order_from_descriptor
from src.spaces.series import BivariatePolynomial, SeriesSpace, fraction_from_str
from src.spaces.space import UltrametricSpace
from src.state.errors import ParseError

SPACE_KINDS = ("finite", "padic", "padic_disc", "series", "lex_series")
MAP_KINDS = ("table", "constant", "identity", "newton", "picard", "affine_series", "affine_lex")


def _field(data: Mapping[str, Any], key: str) -> Any:
    try:
        return data[key]
    except KeyError as e:
        raise ParseError(f"{data.get('kind', 'descriptor')!r} descriptor is missing {key!r}") from e


def get_space(descriptor: Mapping[str, Any], validate: bool = True) -> UltrametricSpace:
    """
    Build a space from its descriptor.

    Args:
        descriptor: dict with a "kind" in SPACE_KINDS and that kind's parameters
        validate: for finite spaces, insist on the axiom checks at load time

    Returns:
        An UltrametricSpace instance
    """
    kind = descriptor.get("kind")

    if kind == "finite":
        order = order_from_descriptor(_field(descriptor, "order"))
        if not isinstance(order, FinitePoset):
            raise ParseError("a finite space needs a poset radius order")
        table = _field(descriptor, "distances")
        names = descriptor.get("points")
        if validate:
            return FiniteSpace.load(order, table, names)
        return FiniteSpace(order, table, names)

    elif kind == "padic":
        return PadicSpace(int(_field(descriptor, "p")), int(_field(descriptor, "n")))

    elif kind == "padic_disc":
        return PadicDisc(int(_field(descriptor, "p")), int(_field(descriptor, "n")),
                         int(_field(descriptor, "center")))

    elif kind == "series":
        return SeriesSpace(int(_field(descriptor, "cap")))

    elif kind == "lex_series":
        return LexSeriesSpace(int(_field(descriptor, "cap_m")), int(_field(descriptor, "cap_n")))

    else:
        raise ParseError(f"unsupported space kind {kind!r}; use one of {', '.join(SPACE_KINDS)}")


def get_map(descriptor: Mapping[str, Any], space: UltrametricSpace) -> ContractingMap:
    """Build a self-map of `space` from its descriptor."""
    kind = descriptor.get("kind")

    if kind == "table":
        images = [space.decode_point(i) for i in _field(descriptor, "images")]
        if len(images) != len(space.points()):
            raise ParseError(f"table map lists {len(images)} images for {len(space.points())} points")
        return TableMap(images)

    elif kind == "constant":
        return ConstantMap(space.decode_point(_field(descriptor, "point")))

    elif kind == "identity":
        return IdentityMap()

    elif kind == "newton":
        return NewtonMap(IntPolynomial(coefficients=tuple(int(c) for c in _field(descriptor, "coefficients"))))

    elif kind == "picard":
        return PicardOperator(BivariatePolynomial.decode(_field(descriptor, "rhs")),
                              fraction_from_str(str(_field(descriptor, "y0"))))

    elif kind == "affine_series":
        return AffineSeriesMap(space.decode_point(_field(descriptor, "offset")),
                               space.decode_point(_field(descriptor, "multiplier")))

    elif kind == "affine_lex":
        return AffineLexMap(space.decode_point(_field(descriptor, "offset")),
                            space.decode_point(_field(descriptor, "multiplier")))

    else:
        raise ParseError(f"unsupported map kind {kind!r}; use one of {', '.join(MAP_KINDS)}")
