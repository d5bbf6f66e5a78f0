"""Greene sums of partially ordered sets and the interpolation identities around them."""
from .errors import GreeneError
from .greene import (
    CheckReport,
    GreeneResult,
    greene_brute,
    greene_enumerate,
    greene_product,
    greene_recursive,
    greene_value,
    nd_structure,
)
from .poset import Poset, build_poset, catalog, linear_extensions, mobius, parse_poset_text

__version__ = "0.1.0"

__all__ = [
    "GreeneError", "CheckReport", "GreeneResult", "greene_brute", "greene_enumerate",
    "greene_product", "greene_recursive", "greene_value", "nd_structure", "Poset",
    "build_poset", "catalog", "linear_extensions", "mobius", "parse_poset_text",
]
