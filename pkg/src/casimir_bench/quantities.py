"""Dimensioned scalars and the physical constants used by every formula.

A :class:`Quantity` pairs a value (float or numpy array, always SI) with a
:class:`Dimension`, the integer exponents of the seven SI base units.
Arithmetic composes dimensions; addition, subtraction and comparison
require equal dimensions. This is the guard against transcription errors
in the physics formulas, so every public operation in the package builds
its result out of Quantities and audits the output dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Dimension",
    "Quantity",
    "DimensionError",
    "QuantityArithmeticError",
    "Constants",
    "CONSTANTS",
    "assert_dim",
    "quantity_mul",
    "as_quantity",
    "DIMENSIONLESS",
    "LENGTH",
    "MASS",
    "TIME",
    "CURRENT",
    "TEMPERATURE",
    "AREA",
    "VOLUME",
    "VELOCITY",
    "FREQUENCY",
    "DENSITY",
    "ENERGY",
    "POWER",
    "ACTION",
    "MAGNETIC_MOMENT",
    "PERMITTIVITY",
    "HEAT_CAPACITY",
    "RATE",
    "unit_label",
    "dimensionless_fn",
]

_BASE_SYMBOLS = ("m", "kg", "s", "A", "K", "mol", "cd")


class DimensionError(TypeError):
    """Raised when quantities of incompatible dimension are combined."""

    def __init__(self, message: str, got: "Dimension | None" = None, expected: "Dimension | None" = None):
        super().__init__(message)
        self.got = got
        self.expected = expected


class QuantityArithmeticError(ArithmeticError):
    """Raised when an operation produces a non-finite value."""


@dataclass(frozen=True)
class Dimension:
    m: int = 0
    kg: int = 0
    s: int = 0
    A: int = 0
    K: int = 0
    mol: int = 0
    cd: int = 0

    @property
    def exponents(self) -> tuple[int, ...]:
        return (self.m, self.kg, self.s, self.A, self.K, self.mol, self.cd)

    @classmethod
    def from_exponents(cls, exps) -> "Dimension":
        return cls(*(int(e) for e in exps))

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension.from_exponents(a + b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension.from_exponents(a - b for a, b in zip(self.exponents, other.exponents))

    def __pow__(self, n: int) -> "Dimension":
        if int(n) != n:
            raise DimensionError(f"fractional power {n} of a dimension is not supported")
        return Dimension.from_exponents(a * int(n) for a in self.exponents)

    @property
    def is_dimensionless(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(_BASE_SYMBOLS, self.exponents):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{e}")
        return "·".join(parts) if parts else "1"


DIMENSIONLESS = Dimension()
LENGTH = Dimension(m=1)
MASS = Dimension(kg=1)
TIME = Dimension(s=1)
CURRENT = Dimension(A=1)
TEMPERATURE = Dimension(K=1)
AREA = LENGTH**2
VOLUME = LENGTH**3
VELOCITY = LENGTH / TIME
FREQUENCY = TIME**-1  # Hz and rad/s alike
RATE = FREQUENCY
DENSITY = MASS / VOLUME
ENERGY = MASS * AREA / TIME**2
POWER = ENERGY / TIME
ACTION = ENERGY * TIME
MAGNETIC_MOMENT = CURRENT * AREA  # J/T
PERMITTIVITY = CURRENT**2 * TIME**4 / (MASS * VOLUME)  # F/m
HEAT_CAPACITY = ENERGY / TEMPERATURE  # J/K

Number = Union[float, int, np.ndarray]


def _check_finite(value) -> None:
    if not np.all(np.isfinite(value)):
        raise QuantityArithmeticError(f"non-finite result {value!r}")


class Quantity:
    """A value in SI base units together with its dimension.

    ``value`` may be a Python float or a numpy array; arrays let a whole
    parameter sweep flow through one formula with a single dimension check.
    """

    __slots__ = ("value", "dim")

    def __init__(self, value: Number, dim: Dimension = DIMENSIONLESS):
        if isinstance(value, np.ndarray):
            value = value.astype(float, copy=False)
        else:
            value = float(value)
        _check_finite(value)
        self.value = value
        self.dim = dim

    def __setattr__(self, name, val):
        if hasattr(self, "dim"):
            raise AttributeError("Quantity is immutable")
        object.__setattr__(self, name, val)

    # arithmetic -----------------------------------------------------------
    def _other(self, other) -> "Quantity":
        return other if isinstance(other, Quantity) else Quantity(other, DIMENSIONLESS)

    def _same_dim(self, other: "Quantity", op: str) -> None:
        if self.dim != other.dim:
            raise DimensionError(f"cannot {op} {self.dim} and {other.dim}", other.dim, self.dim)

    def __add__(self, other):
        other = self._other(other)
        self._same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        self._same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        other = self._other(other)
        with np.errstate(over="ignore", invalid="ignore"):
            return Quantity(self.value * other.value, self.dim * other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return Quantity(self.value / other.value, self.dim / other.dim)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, n: int):
        try:
            with np.errstate(over="ignore"):
                value = self.value**n
        except OverflowError:
            raise QuantityArithmeticError(f"overflow raising {self.value!r} to the power {n}") from None
        return Quantity(value, self.dim**n)

    # comparisons ----------------------------------------------------------
    def _cmp(self, other, fn):
        other = self._other(other)
        self._same_dim(other, "compare")
        return fn(self.value, other.value)

    def __lt__(self, other):
        return self._cmp(other, np.less)

    def __le__(self, other):
        return self._cmp(other, np.less_equal)

    def __gt__(self, other):
        return self._cmp(other, np.greater)

    def __ge__(self, other):
        return self._cmp(other, np.greater_equal)

    def __eq__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.value, other.value))

    def __hash__(self):
        if isinstance(self.value, np.ndarray):
            raise TypeError("array-valued Quantity is unhashable")
        return hash((self.value, self.dim))

    # conversions ----------------------------------------------------------
    def __float__(self) -> float:
        return float(self.value)

    def magnitude(self) -> Number:
        """Value of a dimensionless quantity; raises otherwise."""
        if not self.dim.is_dimensionless:
            raise DimensionError(f"expected a dimensionless quantity, got {self.dim}", self.dim, DIMENSIONLESS)
        return self.value

    def to(self, dim: Dimension) -> Number:
        """Return the SI value after checking the dimension."""
        assert_dim(self, dim)
        return self.value

    def __repr__(self) -> str:
        return f"Quantity({self.value!r}, {self.dim})"

    def __str__(self) -> str:
        if isinstance(self.value, np.ndarray):
            return f"{self.value} {self.dim}"
        return f"{self.value:.6g} {self.dim}"


def quantity_mul(a: Quantity, b: Quantity) -> Quantity:
    return a * b


def assert_dim(q: Quantity, expected: Dimension) -> None:
    """Raise :class:`DimensionError` unless ``q`` has dimension ``expected``."""
    if q.dim != expected:
        raise DimensionError(f"dimension mismatch: got {q.dim}, expected {expected}", q.dim, expected)


def as_quantity(x, dim: Dimension) -> Quantity:
    """Wrap a bare SI number, or check that a Quantity already has ``dim``."""
    if isinstance(x, Quantity):
        assert_dim(x, dim)
        return x
    return Quantity(x, dim)


def dimensionless_fn(fn, q: Quantity) -> Quantity:
    """Apply a transcendental function to a dimensionless Quantity."""
    with np.errstate(over="ignore"):
        return Quantity(fn(q.magnitude()), DIMENSIONLESS)


@dataclass(frozen=True)
class Constants:
    """CODATA 2018 values (exact where the SI defines them)."""

    hbar: Quantity = Quantity(1.054571817e-34, ACTION)
    h: Quantity = Quantity(6.62607015e-34, ACTION)
    c: Quantity = Quantity(2.99792458e8, VELOCITY)
    mu_B: Quantity = Quantity(9.2740100783e-24, MAGNETIC_MOMENT)
    eps0: Quantity = Quantity(8.8541878128e-12, PERMITTIVITY)
    k_B: Quantity = Quantity(1.380649e-23, HEAT_CAPACITY)
    euler_gamma: Quantity = Quantity(0.5772156649015329, DIMENSIONLESS)


CONSTANTS = Constants()

PI = math.pi


_UNIT_NAMES = {
    DIMENSIONLESS: "1",
    LENGTH: "m",
    TIME: "s",
    AREA: "m^2",
    FREQUENCY: "1/s",
    POWER: "W",
    ENERGY: "J",
    TEMPERATURE: "K",
    VELOCITY: "m/s",
    DENSITY: "kg/m^3",
}


def unit_label(dim: Dimension) -> str:
    """Short SI unit name for common dimensions, base-unit form otherwise."""
    return _UNIT_NAMES.get(dim, str(dim))
