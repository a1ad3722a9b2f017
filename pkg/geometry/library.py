"""
Named distributions used by the tests, the bundled problems and the CLI.

All live on QQ^N with coordinates y1..yN and base point 0 unless stated.
"""

import logging
from typing import Callable, Dict, List, Sequence

from exactalg import PreconditionError, ambient_ring, parse_polynomial

from .distribution import Distribution
from .fields import OneForm, VectorField

logger = logging.getLogger(__name__)


def from_strings(
    rows: Sequence[Sequence[str]],
    dimension: int,
    base_point: Sequence = None,
    generators: Sequence[Sequence[str]] = None,
    name: str = "",
) -> Distribution:
    """Build a distribution from coefficient strings over y1..yN"""
    ring = ambient_ring(dimension)
    forms = tuple(OneForm(ring, tuple(parse_polynomial(c, ring) for c in row)) for row in rows)
    fields = None
    if generators is not None:
        fields = tuple(VectorField(ring, tuple(parse_polynomial(c, ring) for c in row)) for row in generators)
    point = tuple(base_point) if base_point is not None else (0,) * dimension
    return Distribution(ring, forms, point, fields, name)


def contact() -> Distribution:
    """dz - y dx on (x, y, z) = (y1, y2, y3)"""
    return from_strings([["-y2", "0", "1"]], 3, name="contact")


def engel() -> Distribution:
    """dz - y dx, dy - w dx on (x, y, z, w) = (y1, y2, y3, y4)"""
    return from_strings([["-y2", "0", "1", "0"], ["-y4", "1", "0", "0"]], 4, name="engel")


def goursat(k: int) -> Distribution:
    """
    Goursat chain dy_i - y_{i+1} dx (i = 1..k) on (x, y_1, ..., y_{k+1}).

    Coordinates: x = y1 and y_i = y{i+1}; the type at 0 is (0, 2, 3, ..., k+2).
    """
    if k < 1:
        raise PreconditionError(f"Goursat chain needs k >= 1, got {k}")
    N = k + 2
    rows = []
    for i in range(1, k + 1):
        row = ["0"] * N
        row[0] = f"-y{i + 2}"
        row[i] = "1"
        rows.append(row)
    return from_strings(rows, N, name=f"goursat-{k}")


def integrable() -> Distribution:
    """span{d_x, d_y} in R^3, defined by dz"""
    return from_strings([["0", "0", "1"]], 3, name="integrable")


def flat() -> Distribution:
    """ker dy3 on R^3 with explicit coordinate generators"""
    return from_strings([["0", "0", "1"]], 3, generators=[["1", "0", "0"], ["0", "1", "0"]], name="flat")


def martinet() -> Distribution:
    """dz - y^2 dx; type (0, 2, 2, 3) at the origin"""
    return from_strings([["-y2^2", "0", "1"]], 3, name="martinet")


def toy() -> Distribution:
    """Engel x Engel x R^6 on y1..y14; type (0, 10, 12, 14) at 0"""
    N = 14

    def row(entries: Dict[int, str]) -> List[str]:
        out = ["0"] * N
        for index, value in entries.items():
            out[index] = value
        return out

    rows = [
        row({0: "-y2", 2: "1"}),
        row({0: "-y4", 1: "1"}),
        row({4: "-y6", 6: "1"}),
        row({4: "-y8", 5: "1"}),
    ]
    return from_strings(rows, N, name="toy")


LIBRARY: Dict[str, Callable[[], Distribution]] = {
    "contact": contact,
    "engel": engel,
    "integrable": integrable,
    "flat": flat,
    "martinet": martinet,
    "toy": toy,
}


def named(name: str) -> Distribution:
    if name.startswith("goursat-"):
        return goursat(int(name.split("-", 1)[1]))
    try:
        return LIBRARY[name]()
    except KeyError:
        raise PreconditionError(f"unknown distribution {name!r}; known: {sorted(LIBRARY)}") from None
