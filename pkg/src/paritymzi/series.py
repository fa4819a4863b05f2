"""Special functions and formal-series primitives.

Three small building blocks used throughout the package:

* Legendre polynomials by three-term recurrence, including a realified
  variant for purely imaginary arguments.
* :class:`BivariateJet`, a truncated power series in two formal variables
  ``h`` and ``g``. Mixed partial derivatives at the origin are read off the
  coefficient grid.
* :class:`DualScalar`, a forward-mode dual number. Its components may be
  plain numbers, jets, or other dual numbers, so nesting two levels gives
  exact second derivatives.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Any

import numpy as np


def _check_finite(*values: Any) -> None:
    for v in values:
        if isinstance(v, DualScalar):
            _check_finite(v.value, v.deriv)
        elif not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite input: {v!r}")


# ---------------------------------------------------------------------------
# Legendre polynomials
# ---------------------------------------------------------------------------


def legendre_p(n: int, x: float) -> float:
    """P_n(x) from the recurrence (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    _check_finite(x)
    p_prev, p = 1.0, float(x)
    if n == 0:
        return 1.0
    for m in range(1, n):
        p_prev, p = p, ((2 * m + 1) * x * p - m * p_prev) / (m + 1)
    return p


def legendre_imag_realified(l: int, s: float) -> float:
    """Return (-i)^l P_l(i s), which is real for every l.

    Substituting x = i s into the Legendre recurrence and dividing out the
    powers of i gives the real recurrence

        (l+1) Q_{l+1} = (2l+1) s Q_l + l Q_{l-1},

    so no complex arithmetic is needed.
    """
    if l < 0:
        raise ValueError("degree must be non-negative")
    _check_finite(s)
    q_prev, q = 1.0, float(s)
    if l == 0:
        return 1.0
    for m in range(1, l):
        q_prev, q = q, ((2 * m + 1) * s * q + m * q_prev) / (m + 1)
    return q


# ---------------------------------------------------------------------------
# Dual numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualScalar:
    """Value plus first derivative with respect to a single seed variable.

    ``value`` and ``deriv`` may be floats, complex numbers, jets, or
    ``DualScalar`` instances themselves (nested duals carry second
    derivatives).
    """

    value: Any
    deriv: Any = 0.0

    @classmethod
    def variable(cls, x: Any) -> "DualScalar":
        return cls(x, 1.0)

    def __add__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.value + other.value, self.deriv + other.deriv)
        if isinstance(other, np.ndarray):
            return NotImplemented
        return DualScalar(self.value + other, self.deriv)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.value, -self.deriv)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(
                self.value * other.value,
                self.value * other.deriv + self.deriv * other.value,
            )
        if isinstance(other, np.ndarray):
            return NotImplemented
        return DualScalar(self.value * other, self.deriv * other)

    def __rmul__(self, other):
        # scalar * dual; keep the scalar on the left for non-commutative
        # component types
        return DualScalar(other * self.value, other * self.deriv)

    def __truediv__(self, other):
        if isinstance(other, DualScalar):
            inv = 1.0 / other.value
            return DualScalar(
                self.value * inv,
                (self.deriv * other.value - self.value * other.deriv) * inv * inv,
            )
        return DualScalar(self.value / other, self.deriv / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.value
        return DualScalar(other * inv, -other * self.deriv * inv * inv)

    def __pow__(self, p):
        if isinstance(p, DualScalar):
            raise TypeError("dual exponents are not supported")
        if isinstance(p, int) and p >= 0:
            out: Any = 1.0
            for _ in range(p):
                out = self * out
            return out
        return DualScalar(self.value**p, p * self.value ** (p - 1) * self.deriv)

    def conjugate(self):
        return DualScalar(conj(self.value), conj(self.deriv))

    @property
    def real(self):
        return DualScalar(real(self.value), real(self.deriv))


def value_of(x: Any) -> Any:
    """Strip every dual layer and return the innermost value."""
    while isinstance(x, DualScalar):
        x = x.value
    return x


def _primal(x):
    return x.value if isinstance(x, DualScalar) else x


def _tangent(x):
    return x.deriv if isinstance(x, DualScalar) else 0.0


def conj(x):
    if isinstance(x, DualScalar):
        return x.conjugate()
    return np.conj(x) if isinstance(x, complex) else x


def real(x):
    if isinstance(x, DualScalar):
        return x.real
    return x.real if isinstance(x, complex) else x


def exp(x):
    if isinstance(x, DualScalar):
        e = exp(x.value)
        return DualScalar(e, e * x.deriv)
    return np.exp(x)


def sin(x):
    if isinstance(x, DualScalar):
        return DualScalar(sin(x.value), cos(x.value) * x.deriv)
    return np.sin(x)


def cos(x):
    if isinstance(x, DualScalar):
        return DualScalar(cos(x.value), -sin(x.value) * x.deriv)
    return np.cos(x)


def sqrt(x):
    if isinstance(x, DualScalar):
        s = sqrt(x.value)
        return DualScalar(s, x.deriv / (2.0 * s))
    return np.sqrt(x)


# ---------------------------------------------------------------------------
# Bivariate jets
# ---------------------------------------------------------------------------


class BivariateJet:
    """Truncated power series sum_{i,j} c[i, j] h^i g^j.

    Coefficients beyond ``order_h`` / ``order_g`` are discarded by every
    operation. Instances are treated as immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, copy=True)
        if c.ndim != 2:
            raise ValueError("coefficient grid must be two-dimensional")
        if not np.issubdtype(c.dtype, np.number):
            raise TypeError("jet coefficients must be numeric")
        if c.dtype.kind in "iub":
            c = c.astype(float)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def constant(cls, value, order_h: int, order_g: int) -> "BivariateJet":
        dtype = complex if isinstance(value, complex) else float
        c = np.zeros((order_h + 1, order_g + 1), dtype=dtype)
        c[0, 0] = value
        return cls(c)

    @property
    def order_h(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def order_g(self) -> int:
        return self.coeffs.shape[1] - 1

    def __repr__(self) -> str:
        return f"BivariateJet(order=({self.order_h}, {self.order_g}), coeffs={self.coeffs!r})"

    def _same_shape(self, other: "BivariateJet") -> None:
        if self.coeffs.shape != other.coeffs.shape:
            raise ValueError("jets have different truncation orders")

    def __add__(self, other):
        if isinstance(other, BivariateJet):
            self._same_shape(other)
            return BivariateJet(self.coeffs + other.coeffs)
        if isinstance(other, numbers.Number):
            c = self.coeffs.astype(np.result_type(self.coeffs, other))
            c[0, 0] += other
            return BivariateJet(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return BivariateJet(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (BivariateJet, numbers.Number)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, numbers.Number):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, BivariateJet):
            self._same_shape(other)
            return BivariateJet(_truncated_product(self.coeffs, other.coeffs))
        if isinstance(other, numbers.Number):
            return BivariateJet(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return BivariateJet(self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, BivariateJet):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    __hash__ = None  # type: ignore[assignment]


def _truncated_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    nh, ng = a.shape
    out = np.zeros((nh, ng), dtype=np.result_type(a, b))
    for i in range(nh):
        for j in range(ng):
            aij = a[i, j]
            if aij != 0:
                out[i:, j:] += aij * b[: nh - i, : ng - j]
    return out


@dataclass(frozen=True)
class QuadraticForm:
    """q(h, g) = lin_h h + lin_g g + cross h g + sq_h h^2 + sq_g g^2.

    Coefficients may be numbers or :class:`DualScalar`.
    """

    lin_h: Any = 0.0
    lin_g: Any = 0.0
    cross: Any = 0.0
    sq_h: Any = 0.0
    sq_g: Any = 0.0

    def coefficients(self) -> tuple:
        return (self.lin_h, self.lin_g, self.cross, self.sq_h, self.sq_g)

    def to_jet(self, order_h: int, order_g: int):
        """Polynomial jet of q; a dual of jets if any coefficient is dual."""
        cs = self.coefficients()
        if any(isinstance(c, DualScalar) for c in cs):
            primal = QuadraticForm(*(_primal(c) for c in cs))
            tangent = QuadraticForm(*(_tangent(c) for c in cs))
            return DualScalar(
                primal.to_jet(order_h, order_g), tangent.to_jet(order_h, order_g)
            )
        dtype = complex if any(isinstance(c, complex) for c in cs) else float
        c = np.zeros((order_h + 1, order_g + 1), dtype=dtype)
        for (i, j), v in zip(((1, 0), (0, 1), (1, 1), (2, 0), (0, 2)), cs):
            if i <= order_h and j <= order_g:
                c[i, j] = v
        return BivariateJet(c)


def jet_exp_quadratic(q: QuadraticForm, order_h: int, order_g: int):
    """Truncated expansion of exp(q(h, g)).

    q has no constant term, so q^m only feeds total degree >= m and the
    series sum_m q^m / m! terminates exactly at m = order_h + order_g.
    Returns a :class:`BivariateJet`, or a ``DualScalar`` of jets when q has
    dual coefficients.
    """
    if order_h < 0 or order_g < 0:
        raise ValueError("orders must be non-negative")
    _check_finite(*q.coefficients())
    poly = q.to_jet(order_h, order_g)
    result = 1.0 + poly
    term = poly
    for m in range(2, order_h + order_g + 1):
        term = (term * poly) / m
        result = result + term
    return result


def jet_mixed_derivative(j, k: int, l: int):
    """k! l! c[k, l]: the mixed partial d^{k+l} / dh^k dg^l at the origin."""
    if isinstance(j, DualScalar):
        return DualScalar(
            jet_mixed_derivative(j.value, k, l), jet_mixed_derivative(j.deriv, k, l)
        )
    if isinstance(j, numbers.Number):
        # a dual tangent that never touched a jet
        return j if k == l == 0 else 0.0
    if not (0 <= k <= j.order_h and 0 <= l <= j.order_g):
        raise IndexError(
            f"derivative order ({k}, {l}) exceeds jet order ({j.order_h}, {j.order_g})"
        )
    c = j.coeffs[k, l] * math.factorial(k) * math.factorial(l)
    return c.item() if hasattr(c, "item") else c
