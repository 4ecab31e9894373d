"""CNTFET device model: chirality index -> diameter and threshold voltage.

A zigzag nanotube's diameter is linear in its chirality index, and the
transistor threshold magnitude is inversely proportional to the diameter.
Both constants below are one-parameter fits pinned by the calibration rows
shipped with the package; keeping them in one place means the solver, the
area metric and the tests all agree on the same numbers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "Polarity",
    "CntfetSpec",
    "CALIBRATION_ROWS",
    "NM_PER_CHIRALITY_INDEX",
    "VTH_NUMERATOR_V_NM",
    "diameter_nm",
    "threshold_voltage_v",
]


class Polarity(enum.Enum):
    """Device polarity; N conducts on a high gate, P on a low gate."""

    N = "N"
    P = "P"

    def __str__(self) -> str:
        return self.value


# d = NM_PER_CHIRALITY_INDEX * n   (nm)
# Vth = VTH_NUMERATOR_V_NM / d     (V)
NM_PER_CHIRALITY_INDEX = 0.0783
VTH_NUMERATOR_V_NM = 0.436

# Reference (n, diameter nm, |Vth| V) rows the two laws are calibrated to.
# Max residuals: < 0.3 % on diameter, < 1 % on threshold.
CALIBRATION_ROWS: tuple[tuple[int, float, float], ...] = (
    (8, 0.626, 0.696),
    (10, 0.783, 0.557),
    (13, 1.018, 0.428),
    (19, 1.487, 0.293),
    (29, 2.270, 0.192),
    (37, 2.896, 0.150),
)


def _check_index(chirality_n: int) -> None:
    if isinstance(chirality_n, bool) or not isinstance(chirality_n, int):
        raise TypeError(f"chirality index must be an int, got {chirality_n!r}")
    if chirality_n < 1:
        raise ValueError(f"chirality index must be >= 1, got {chirality_n}")


def diameter_nm(chirality_n: int) -> float:
    """Nanotube diameter in nm for a zigzag chirality index."""
    _check_index(chirality_n)
    return NM_PER_CHIRALITY_INDEX * chirality_n


def threshold_voltage_v(chirality_n: int) -> float:
    """Threshold voltage magnitude in volts; strictly decreasing in n."""
    _check_index(chirality_n)
    return VTH_NUMERATOR_V_NM / diameter_nm(chirality_n)


@dataclass(frozen=True)
class CntfetSpec:
    """One transistor's electrical identity: polarity plus chirality index.

    N and P devices of equal chirality share the same |Vth|.  Area and
    on-resistance assume a single tube per transistor.
    """

    polarity: Polarity
    chirality_n: int

    def __post_init__(self) -> None:
        _check_index(self.chirality_n)

    @property
    def diameter_nm(self) -> float:
        return diameter_nm(self.chirality_n)

    @property
    def threshold_v(self) -> float:
        return threshold_voltage_v(self.chirality_n)

    def __str__(self) -> str:
        return f"{self.polarity.value}{self.chirality_n}"
