"""How far apart two limit networks are."""
from __future__ import annotations

import enum

from ..graph import Network


class DifferenceClass(str, enum.Enum):
    MINIMAL = "Minimal"
    MAXIMAL = "Maximal"
    NEITHER = "Neither"


def difference_class(g_c: Network, g_ic: Network) -> DifferenceClass:
    if g_c.links == g_ic.links:
        return DifferenceClass.MINIMAL
    if (g_c.links or g_ic.links) and not (g_c.links & g_ic.links):
        return DifferenceClass.MAXIMAL
    return DifferenceClass.NEITHER
