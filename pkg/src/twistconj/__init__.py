"""Exact twisted-conjugacy computations in triangular matrix groups over
small arithmetic rings: finite fields, their (Laurent) polynomial rings,
the integers and their localisations."""

from .poly import parse_ring
from .rings import ZZ, field, localized

__all__ = ["parse_ring", "field", "localized", "ZZ"]
__version__ = "0.1.0"
