"""Truncated Taylor series ("jets") for forward-mode derivatives of any order.

A ``Jet`` holds c[j] = f^(j)(r0) / j! for j = 0..order.  Arithmetic
truncates at the smaller order of the operands.
"""

from __future__ import annotations

import numpy as np


class Jet:
    __array_priority__ = 1000

    def __init__(self, coef):
        self.c = np.asarray(coef)
        if self.c.dtype.kind not in "fc":
            self.c = self.c.astype(float)

    @classmethod
    def variable(cls, x0: float, order: int) -> Jet:
        c = np.zeros(order + 1)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order: int) -> Jet:
        c = np.zeros(order + 1, dtype=np.result_type(value, float))
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def derivative_value(self, n: int):
        """n-th derivative at the expansion point."""
        return self.c[n] * float(np.prod(np.arange(1, n + 1)))

    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(len(self.c), len(other.c))
            return self.c[:n], other.c[:n]
        return self.c, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            c = a.astype(np.result_type(a, other), copy=True)
            c[0] += other
            return Jet(c)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return Jet(a * other)
        n = len(a)
        return Jet(np.convolve(a, b)[:n])

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        a = self.c
        n = len(a)
        out = np.zeros(n, dtype=np.result_type(a, float))
        out[0] = 1.0 / a[0]
        for k in range(1, n):
            out[k] = -np.dot(a[1:k + 1], out[k - 1::-1][:k]) / a[0]
        return Jet(out)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError("Jet powers are limited to non-negative integers; use sqrt")
        out = Jet.constant(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out

    def sqrt(self) -> Jet:
        a = self.c
        n = len(a)
        s = np.zeros(n, dtype=np.result_type(a, float))
        s[0] = np.sqrt(a[0])
        for k in range(1, n):
            s[k] = (a[k] - np.dot(s[1:k], s[k - 1:0:-1])) / (2.0 * s[0])
        return Jet(s)

    def exp(self) -> Jet:
        a = self.c
        n = len(a)
        e = np.zeros(n, dtype=np.result_type(a, float))
        e[0] = np.exp(a[0])
        j = np.arange(1, n)
        for k in range(1, n):
            e[k] = np.dot(j[:k] * a[1:k + 1], e[k - 1::-1][:k]) / k
        return Jet(e)

    def d(self) -> Jet:
        """Derivative, one order shorter."""
        j = np.arange(1, len(self.c))
        return Jet(self.c[1:] * j)

    def integrate(self, c0=0.0) -> Jet:
        j = np.arange(1, len(self.c) + 1)
        return Jet(np.concatenate(([c0], self.c / j)))


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)


def exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def ode_jet(rhs, y0: float, order: int) -> Jet:
    """Taylor series of the solution of y' = rhs(y), y(r0) = y0, by Picard iteration."""
    y = Jet.constant(y0, order)
    for _ in range(order + 1):
        y = rhs(y).integrate(y0)
        y = Jet(y.c[: order + 1])
    return y
