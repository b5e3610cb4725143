"""Dense polynomial arithmetic in one and two variables, plus the special
integrals (Gaussian moments, polynomial-times-trigonometric) that the
boundary-matching machinery is built on.

Coefficients are double-precision floats. Combinatorial factors (binomials,
double-factorial ratios) are computed in exact rational arithmetic and
converted to float at the last possible moment so that small triangular
systems stay bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "Poly1",
    "Poly2",
    "poly_eval",
    "half_factorial_coeff",
    "gaussian_moment",
    "trig_poly_integral",
]


def _trim1(coeffs) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


def _trim2(rows) -> tuple[tuple[float, ...], ...]:
    a = np.atleast_2d(np.asarray(rows, dtype=float))
    if a.size == 0 or not a.any():
        return ()
    nz = np.nonzero(a)
    a = a[: nz[0].max() + 1, : nz[1].max() + 1]
    return tuple(tuple(float(v) for v in row) for row in a)


@dataclass(frozen=True)
class Poly1:
    """Dense univariate polynomial: coeffs[i] multiplies variable**i.

    The empty coefficient tuple is the zero polynomial. Trailing zero
    coefficients are trimmed on construction.
    """

    coeffs: tuple[float, ...] = ()
    variable: str = "x"

    def __post_init__(self):
        if self.variable not in ("x", "t"):
            raise ValueError(f"variable must be 'x' or 't', got {self.variable!r}")
        object.__setattr__(self, "coeffs", _trim1(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, v):
        if not self.coeffs:
            return np.zeros(np.shape(v)) if np.ndim(v) else 0.0
        return npoly.polyval(v, self.coeffs)

    def _coerce(self, other) -> "Poly1":
        if isinstance(other, Poly1):
            return other
        return Poly1((float(other),), self.variable)

    def _join_variable(self, other: "Poly1") -> str:
        # constants are variable-agnostic; anything else must agree
        if len(self.coeffs) > 1 and len(other.coeffs) > 1 and self.variable != other.variable:
            raise ValueError(
                f"cannot combine polynomial in {self.variable!r} with one in {other.variable!r}"
            )
        return self.variable if len(self.coeffs) > 1 else other.variable

    def __add__(self, other):
        other = self._coerce(other)
        var = self._join_variable(other)
        return Poly1(tuple(npoly.polyadd(self.coeffs or (0.0,), other.coeffs or (0.0,))), var)

    __radd__ = __add__

    def __neg__(self):
        return Poly1(tuple(-c for c in self.coeffs), self.variable)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            return Poly1(tuple(float(other) * c for c in self.coeffs), self.variable)
        var = self._join_variable(other)
        if self.is_zero() or other.is_zero():
            return Poly1((), var)
        return Poly1(tuple(npoly.polymul(self.coeffs, other.coeffs)), var)

    __rmul__ = __mul__

    def deriv(self) -> "Poly1":
        if len(self.coeffs) <= 1:
            return Poly1((), self.variable)
        return Poly1(tuple(npoly.polyder(self.coeffs)), self.variable)

    def antideriv(self) -> "Poly1":
        if not self.coeffs:
            return Poly1((), self.variable)
        return Poly1(tuple(npoly.polyint(self.coeffs)), self.variable)

    def integral(self, a: float, b: float) -> float:
        p = self.antideriv()
        return float(p(b) - p(a))

    def coeff(self, i: int) -> float:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0.0


@dataclass(frozen=True)
class Poly2:
    """Dense bivariate polynomial: coeffs[i][m] multiplies x**i * t**m."""

    coeffs: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim2(self.coeffs))

    @classmethod
    def zero(cls) -> "Poly2":
        return cls(())

    @classmethod
    def monomial(cls, i: int, m: int, coef: float = 1.0) -> "Poly2":
        a = np.zeros((i + 1, m + 1))
        a[i, m] = coef
        return cls(tuple(map(tuple, a)))

    @classmethod
    def from_x_poly(cls, p: Poly1) -> "Poly2":
        return cls(tuple((c,) for c in p.coeffs))

    @classmethod
    def from_t_poly(cls, p: Poly1) -> "Poly2":
        return cls((tuple(p.coeffs),) if p.coeffs else ())

    @property
    def array(self) -> np.ndarray:
        if not self.coeffs:
            return np.zeros((1, 1))
        return np.asarray(self.coeffs, dtype=float)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x, t):
        return npoly.polyval2d(x, t, self.array)

    def grid(self, xs, ts) -> np.ndarray:
        """Evaluate on the tensor grid, returned with shape (len(ts), len(xs))."""
        return npoly.polygrid2d(np.asarray(xs, float), np.asarray(ts, float), self.array).T

    def _binary(self, other, sign: float) -> "Poly2":
        a, b = self.array, other.array
        out = np.zeros((max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])))
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += sign * b
        return Poly2(tuple(map(tuple, out)))

    def __add__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2(((float(other),),))
        return self._binary(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2(((float(other),),))
        return self._binary(other, -1.0)

    def __neg__(self):
        return Poly2(tuple(tuple(-v for v in row) for row in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            return Poly2(tuple(tuple(float(other) * v for v in row) for row in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly2.zero()
        a, b = self.array, other.array
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
        for i in range(a.shape[0]):
            for m in range(a.shape[1]):
                if a[i, m] != 0.0:
                    out[i : i + b.shape[0], m : m + b.shape[1]] += a[i, m] * b
        return Poly2(tuple(map(tuple, out)))

    __rmul__ = __mul__

    def dx(self) -> "Poly2":
        if self.array.shape[0] <= 1:
            return Poly2.zero()
        return Poly2(tuple(map(tuple, npoly.polyder(self.array, axis=0))))

    def dt(self) -> "Poly2":
        if self.array.shape[1] <= 1:
            return Poly2.zero()
        return Poly2(tuple(map(tuple, npoly.polyder(self.array, axis=1))))

    def at_x(self, v: float) -> Poly1:
        """Restriction x = v, as a polynomial in t."""
        return Poly1(tuple(np.atleast_1d(npoly.polyval(v, self.array))), "t")

    def at_t(self, v: float) -> Poly1:
        """Restriction t = v, as a polynomial in x."""
        return Poly1(tuple(np.atleast_1d(npoly.polyval(v, self.array.T))), "x")

    def x_parity(self) -> str:
        """'zero', 'even', 'odd', or 'mixed' according to which x powers occur."""
        powers = {i for i, row in enumerate(self.coeffs) if any(v != 0.0 for v in row)}
        if not powers:
            return "zero"
        if all(i % 2 == 0 for i in powers):
            return "even"
        if all(i % 2 == 1 for i in powers):
            return "odd"
        return "mixed"


def poly_eval(p: Poly2, x: float, t: float) -> float:
    """Evaluate a bivariate polynomial at a point."""
    return float(p(x, t))


def half_factorial_coeff(j: int) -> Fraction:
    """The exact ratio (2j-1)!!/2**j, i.e. the normalized even Gaussian moment.

    Satisfies c_0 = 1 and c_j = ((2j-1)/2) * c_{j-1}.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    return Fraction(math.factorial(2 * j), 4**j * math.factorial(j))


def gaussian_moment(j: int, s: float) -> float:
    """Normalized even moment: integral of y**(2j) * (pi*s)**-0.5 * exp(-y**2/s) over the line.

    Equals half_factorial_coeff(j) * s**j. Odd moments vanish by symmetry and
    are not exposed.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    return float(half_factorial_coeff(j)) * s**j


def trig_poly_integral(
    m: int,
    sigma: float,
    l: float,
    kind: str = "cos",
    *,
    sin_l: float | None = None,
    cos_l: float | None = None,
) -> float:
    """Integral of x**m * trig(sigma*x) over [0, l], by the integration-by-parts
    recurrence in m (exact up to floating rounding; no quadrature).

    sin_l/cos_l may be supplied when the caller has more accurate values of
    sin(sigma*l), cos(sigma*l) than direct evaluation gives.
    """
    if kind not in ("cos", "sin"):
        raise ValueError(f"kind must be 'cos' or 'sin', got {kind!r}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if sigma <= 0 or l <= 0:
        raise ValueError("sigma and l must be positive")
    if sin_l is None:
        sin_l = math.sin(sigma * l)
    if cos_l is None:
        cos_l = math.cos(sigma * l)
    ic = sin_l / sigma
    isn = (1.0 - cos_l) / sigma
    lp = 1.0
    for mm in range(1, m + 1):
        lp *= l
        ic, isn = (
            lp * sin_l / sigma - (mm / sigma) * isn,
            -lp * cos_l / sigma + (mm / sigma) * ic,
        )
    return ic if kind == "cos" else isn
