"""Linear homogeneous recurrences over F_p with a single repeated root.

A relation of order t is defined by its characteristic polynomial
(x - alpha)^t and t initial terms. Terms are generated by iterating the
recurrence; the closed form u_i = g(i) * alpha^i (deg g < t) is derived
by interpolation and used to cross-check iteration and to drive
reconstruction from scattered terms.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

from .field import FieldCtx, FieldElement, Polynomial, lagrange_interpolate


class LhrRelation:
    """Order-t recurrence with characteristic polynomial (x - alpha)^t."""

    __slots__ = ("alpha", "order", "initial", "coeffs")

    def __init__(self, alpha: FieldElement, order: int, initial: Sequence[FieldElement]):
        if alpha.value == 0:
            raise ValueError("root alpha must be nonzero")
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        p = alpha.ctx.p
        if order >= p:
            raise ValueError(f"order {order} must be below the modulus {p}")
        initial = tuple(initial)
        if len(initial) != order:
            raise ValueError(
                f"need exactly {order} initial terms, got {len(initial)}"
            )
        for v in initial:
            if v.ctx.p != p:
                raise ValueError(f"modulus mismatch: {p} vs {v.ctx.p}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "initial", initial)
        # u_{i+t} + a_1 u_{i+t-1} + ... + a_t u_i = 0 with
        # a_k = C(t,k) * (-alpha)^k, from expanding (x - alpha)^t
        neg = (-alpha.value) % p
        coeffs = tuple(
            FieldElement(comb(order, k) * pow(neg, k, p), alpha.ctx)
            for k in range(1, order + 1)
        )
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("LhrRelation is immutable")

    @property
    def ctx(self) -> FieldCtx:
        return self.alpha.ctx

    def terms(self, count: int) -> list[FieldElement]:
        """First `count` terms u_0 .. u_{count-1}, by iteration."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        p = self.ctx.p
        t = self.order
        a = [c.value for c in self.coeffs]
        seq = [v.value for v in self.initial[:count]]
        while len(seq) < count:
            i = len(seq)
            acc = 0
            for k in range(1, t + 1):
                acc += a[k - 1] * seq[i - k]
            seq.append(-acc % p)
        return [FieldElement(v, self.ctx) for v in seq]

    def term(self, i: int) -> FieldElement:
        """u_i, exact, O(i*t) field operations."""
        if i < 0:
            raise ValueError("term index must be nonnegative")
        if i < self.order:
            return self.initial[i]
        return self.terms(i + 1)[i]

    def closed_form(self) -> "ClosedForm":
        """g with u_i = g(i) * alpha^i, by interpolating normalized terms."""
        p = self.ctx.p
        alpha_inv = pow(self.alpha.value, p - 2, p)
        pts = [
            (FieldElement(i, self.ctx), FieldElement(u.value * pow(alpha_inv, i, p), self.ctx))
            for i, u in enumerate(self.initial)
        ]
        return ClosedForm(lagrange_interpolate(pts), self.alpha)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LhrRelation):
            return NotImplemented
        return (
            self.alpha == other.alpha
            and self.order == other.order
            and self.initial == other.initial
        )

    def __repr__(self) -> str:
        return (
            f"LhrRelation(alpha={self.alpha.value}, order={self.order}, "
            f"initial={[v.value for v in self.initial]})"
        )


class ClosedForm:
    """Term formula u_i = g(i) * alpha^i with deg g < order."""

    __slots__ = ("g", "alpha")

    def __init__(self, g: Polynomial, alpha: FieldElement):
        if alpha.value == 0:
            raise ValueError("root alpha must be nonzero")
        if g.ctx.p != alpha.ctx.p:
            raise ValueError(f"modulus mismatch: {g.ctx.p} vs {alpha.ctx.p}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "alpha", alpha)

    def __setattr__(self, name, value):
        raise AttributeError("ClosedForm is immutable")

    @property
    def ctx(self) -> FieldCtx:
        return self.alpha.ctx

    def term(self, i: int) -> FieldElement:
        if i < 0:
            raise ValueError("term index must be nonnegative")
        p = self.ctx.p
        gi = self.g.evaluate(FieldElement(i, self.ctx))
        return FieldElement(gi.value * pow(self.alpha.value, i, p), self.ctx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedForm):
            return NotImplemented
        return self.g == other.g and self.alpha == other.alpha

    def __repr__(self) -> str:
        return f"ClosedForm(g={self.g!r}, alpha={self.alpha.value})"
