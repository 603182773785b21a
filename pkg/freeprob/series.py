"""Truncated formal power series with exact (Fraction) or float coefficients.

A FormalSeries of order n holds c_0..c_n; the coefficients beyond n are unknown,
not zero, so every operation returns a series whose order is at most the order
of its operands.
"""
from fractions import Fraction
from typing import Iterable, List, Optional, Union

from .errors import TransformUndefinedError, UsageError

Number = Union[int, Fraction, float, complex]


def _coerce(x):
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    return x


class FormalSeries:
    def __init__(self, coefficients: Iterable[Number], order: Optional[int] = None, variable: str = "z"):
        c = [_coerce(x) for x in coefficients]
        if order is None:
            order = max(len(c) - 1, 0)
        if order < 0:
            raise UsageError("series order must be nonnegative")
        c = c[:order + 1] + [Fraction(0)] * (order + 1 - len(c))
        self._c: List[Number] = c
        self.variable = variable

    @classmethod
    def identity(cls, order: int, variable: str = "z") -> "FormalSeries":
        return cls([0, 1], order=order, variable=variable)

    @classmethod
    def constant(cls, value: Number, order: int, variable: str = "z") -> "FormalSeries":
        return cls([value], order=order, variable=variable)

    @classmethod
    def geometric(cls, ratio: Number, order: int, variable: str = "z") -> "FormalSeries":
        """1/(1 - ratio*z)."""
        r = _coerce(ratio)
        return cls([r ** n for n in range(order + 1)], order=order, variable=variable)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coefficients(self) -> tuple:
        return tuple(self._c)

    def __getitem__(self, n):
        return self._c[n]

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self._c == other._c

    def __repr__(self) -> str:
        return f"FormalSeries({[str(x) for x in self._c]}, variable={self.variable!r})"

    def _like(self, coefficients, order: int) -> "FormalSeries":
        return FormalSeries(coefficients, order=order, variable=self.variable)

    def truncate(self, order: int) -> "FormalSeries":
        return self._like(self._c, min(order, self.order))

    def extend(self, order: int) -> "FormalSeries":
        """Pad with zeros up to `order`. Only sound when the padded terms cannot reach the result."""
        return self._like(self._c, max(order, self.order))

    def __add__(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            n = min(self.order, other.order)
            return self._like([self._c[i] + other._c[i] for i in range(n + 1)], n)
        out = list(self._c)
        out[0] = out[0] + _coerce(other)
        return self._like(out, self.order)

    __radd__ = __add__

    def __neg__(self) -> "FormalSeries":
        return self._like([-x for x in self._c], self.order)

    def __sub__(self, other) -> "FormalSeries":
        return self + (-other)

    def __rsub__(self, other) -> "FormalSeries":
        return (-self) + other

    def __mul__(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            n = min(self.order, other.order)
            a, b = self._c, other._c
            out = [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)]
            return self._like(out, n)
        s = _coerce(other)
        return self._like([x * s for x in self._c], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FormalSeries":
        if isinstance(other, FormalSeries):
            return self * other.reciprocal()
        s = _coerce(other)
        return self._like([x / s for x in self._c], self.order)

    def __pow__(self, k: int) -> "FormalSeries":
        if k < 0:
            return self.reciprocal() ** (-k)
        out = FormalSeries.constant(1, self.order, self.variable)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        if isinstance(x, FormalSeries):
            return self.compose(x)
        return self.evaluate(x)

    def evaluate(self, x: Number) -> Number:
        acc: Number = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def compose(self, inner: "FormalSeries") -> "FormalSeries":
        """self(inner(z)); inner must have no constant term."""
        if inner[0] != 0:
            raise UsageError("composition needs an inner series without constant term")
        n = min(self.order, inner.order)
        acc = FormalSeries.constant(self._c[n], n, inner.variable)
        for c in reversed(self._c[:n]):
            acc = acc * inner.truncate(n) + c
        return acc

    def reciprocal(self) -> "FormalSeries":
        a = self._c
        if a[0] == 0:
            raise TransformUndefinedError("series with zero constant term has no reciprocal")
        inv0 = Fraction(1) / a[0] if isinstance(a[0], Fraction) else 1 / a[0]
        b = [inv0]
        for k in range(1, self.order + 1):
            b.append(-inv0 * sum((a[j] * b[k - j] for j in range(1, k + 1)), Fraction(0)))
        return self._like(b, self.order)

    def derivative(self) -> "FormalSeries":
        if self.order == 0:
            return self._like([0], 0)
        return self._like([k * self._c[k] for k in range(1, self.order + 1)], self.order - 1)

    def divide_z(self) -> "FormalSeries":
        """(f(z) - f(0))/z, exact when f(0) = 0; drops one order."""
        if self.order == 0:
            raise UsageError("cannot divide an order-0 series by z")
        return self._like(self._c[1:], self.order - 1)

    def multiply_z(self) -> "FormalSeries":
        return self._like([Fraction(0)] + self._c, self.order + 1)

    def reverse(self) -> "FormalSeries":
        """Compositional inverse g with self(g(z)) = z, by Newton iteration with doubling precision."""
        if self.order < 1 or self._c[0] != 0 or self._c[1] == 0:
            raise TransformUndefinedError("series is not invertible under composition at this truncation")
        n = self.order
        one = Fraction(1) if isinstance(self._c[1], Fraction) else 1.0
        g = self._like([0, one / self._c[1]], 1)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            g = g.extend(prec)
            f = self.truncate(prec)
            residual = f.compose(g) - FormalSeries.identity(prec, self.variable)
            slope = f.derivative().extend(prec).compose(g)
            g = g - residual * slope.reciprocal()
        return g
