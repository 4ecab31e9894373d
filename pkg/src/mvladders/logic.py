"""Radix-r digit algebra, voltage maps, and the arithmetic oracles.

Everything the simulator produces is eventually checked against these pure
functions, so they stay deliberately free of any circuit knowledge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "SUPPORTED_RADICES",
    "FULL_SWING_BAND",
    "LogicLevel",
    "VoltageMap",
    "CarrySwing",
    "full_adder_oracle",
    "succ",
    "ni",
    "pi",
    "digits_to_value",
    "value_to_digits",
]

SUPPORTED_RADICES = (2, 3, 4)

# A measured node voltage decodes to the nearest canonical level only if it
# lies within this fraction of vdd of that level (full-swing check).
FULL_SWING_BAND = 0.05


def check_radix(radix: int) -> None:
    if radix not in SUPPORTED_RADICES:
        raise ValueError(f"unsupported radix {radix!r}; supported: {SUPPORTED_RADICES}")


def check_digit(radix: int, digit: int) -> None:
    check_radix(radix)
    if isinstance(digit, bool) or not isinstance(digit, int):
        raise TypeError(f"digit must be an int, got {digit!r}")
    if not 0 <= digit < radix:
        raise ValueError(f"digit {digit} out of range for radix {radix}")


@dataclass(frozen=True)
class LogicLevel:
    """A digit together with the radix it belongs to."""

    radix: int
    digit: int

    def __post_init__(self) -> None:
        check_digit(self.radix, self.digit)

    def voltage(self, vdd: float) -> float:
        return VoltageMap(vdd, self.radix).volts(self.digit)


@dataclass(frozen=True)
class VoltageMap:
    """Canonical digit <-> voltage map: level k sits at k*vdd/(radix-1)."""

    vdd: float
    radix: int

    def __post_init__(self) -> None:
        check_radix(self.radix)
        if self.vdd <= 0:
            raise ValueError(f"vdd must be positive, got {self.vdd}")

    @property
    def levels(self) -> tuple[float, ...]:
        step = self.vdd / (self.radix - 1)
        return tuple(k * step for k in range(self.radix))

    def volts(self, digit: int) -> float:
        check_digit(self.radix, digit)
        return digit * self.vdd / (self.radix - 1)

    def nearest(self, volts: float) -> int:
        levels = self.levels
        return min(range(self.radix), key=lambda k: abs(levels[k] - volts))

    def decode(self, volts: float, band_v: float | None = None) -> int | None:
        """Nearest-level decode; None when outside the full-swing band."""
        if band_v is None:
            band_v = FULL_SWING_BAND * self.vdd
        digit = self.nearest(volts)
        if abs(self.levels[digit] - volts) <= band_v:
            return digit
        return None


class CarrySwing(enum.Enum):
    """Voltage pair representing the binary carry: 0 and either vdd/(r-1) or vdd."""

    REDUCED = "reduced"
    FULL = "full"

    def carry_high_v(self, radix: int, vdd: float) -> float:
        check_radix(radix)
        if self is CarrySwing.REDUCED:
            return vdd / (radix - 1)
        return vdd

    def carry_map(self, radix: int, vdd: float) -> VoltageMap:
        """Binary voltage map whose high level is the carry-1 voltage."""
        return VoltageMap(self.carry_high_v(radix, vdd), 2)


def full_adder_oracle(radix: int, a: int, b: int, cin: int) -> tuple[int, int]:
    """One digit position of addition; the carry out is always 0 or 1."""
    check_digit(radix, a)
    check_digit(radix, b)
    if cin not in (0, 1):
        raise ValueError(f"carry-in must be 0 or 1, got {cin!r}")
    total = a + b + cin
    return total % radix, total // radix


def succ(radix: int, a: int, k: int = 1) -> int:
    """Cyclic successor (a+k) mod radix; the unary operator behind the sum MUX."""
    check_digit(radix, a)
    if not 1 <= k <= radix - 1:
        raise ValueError(f"shift k must be in [1, {radix - 1}], got {k}")
    return (a + k) % radix


_NI_TABLE = {0: 2, 1: 0, 2: 0}
_PI_TABLE = {0: 2, 1: 2, 2: 0}


def ni(a: int) -> int:
    """Negative ternary inverter: high only for input 0."""
    check_digit(3, a)
    return _NI_TABLE[a]


def pi(a: int) -> int:
    """Positive ternary inverter: high for inputs 0 and 1."""
    check_digit(3, a)
    return _PI_TABLE[a]


def digits_to_value(radix: int, digits: Sequence[int]) -> int:
    """Positional evaluation of a little-endian digit vector."""
    check_radix(radix)
    value = 0
    for i, d in enumerate(digits):
        check_digit(radix, d)
        value += d * radix**i
    return value


def value_to_digits(radix: int, value: int, width: int) -> tuple[int, ...]:
    """Little-endian digit vector of a non-negative value; inverse of digits_to_value."""
    check_radix(radix)
    if value < 0:
        raise ValueError(f"value must be non-negative, got {value}")
    if width < 0:
        raise ValueError(f"width must be non-negative, got {width}")
    if value >= radix**width:
        raise ValueError(f"value {value} does not fit in {width} radix-{radix} digits")
    digits = []
    for _ in range(width):
        digits.append(value % radix)
        value //= radix
    return tuple(digits)
