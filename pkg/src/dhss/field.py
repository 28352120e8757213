"""Exact arithmetic over a prime field F_p.

Everything in this package computes over F_p with arbitrary-precision
integers: field elements, polynomials, Lagrange interpolation, and a
parametric linear-system solver (Gaussian elimination over F_p where the
right-hand side is linear in symbolic parameters).

All values are immutable after construction and all operations are pure,
so they may be shared freely across threads.
"""

from __future__ import annotations

import re
import secrets
from typing import Iterable, Sequence

_HEX_RE = re.compile(r"\A(0|[1-9a-f][0-9a-f]*)\Z")

# Deterministic Miller-Rabin witness set: correct for all n < 3.3e24,
# which covers every 64-bit modulus; larger n additionally get random rounds.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_RANDOM_ROUNDS = 16


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality test (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    for a in _MR_BASES:
        if witness(a):
            return False
    if n >= _MR_DETERMINISTIC_BOUND:
        for _ in range(_MR_RANDOM_ROUNDS):
            a = 2 + secrets.randbelow(n - 3)
            if witness(a):
                return False
    return True


class FieldCtx:
    """The prime field F_p. Instances act as element factories."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p <= 2:
            raise ValueError(f"field modulus must be an odd prime > 2, got {p!r}")
        if not is_probable_prime(p):
            raise ValueError(f"field modulus {p} is composite")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldCtx is immutable")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def random(self, rng) -> "FieldElement":
        """Uniform element drawn from rng (anything with randrange)."""
        return FieldElement(rng.randrange(self.p), self)

    def from_hex(self, text: str) -> "FieldElement":
        """Parse the canonical lowercase big-endian hex form."""
        if not _HEX_RE.match(text):
            raise ValueError(f"not canonical field-element hex: {text!r}")
        v = int(text, 16)
        if v >= self.p:
            raise ValueError(f"value {text!r} out of range for modulus {self.p}")
        return FieldElement(v, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.p))

    def __repr__(self) -> str:
        return f"FieldCtx({self.p})"


class FieldElement:
    """An integer residue in [0, p-1] bound to its FieldCtx."""

    __slots__ = ("value", "ctx")

    def __init__(self, value: int, ctx: FieldCtx):
        object.__setattr__(self, "value", value % ctx.p)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.ctx.p != self.ctx.p:
                raise ValueError(
                    f"modulus mismatch: {self.ctx.p} vs {other.ctx.p}"
                )
            return other
        if isinstance(other, int):
            return FieldElement(other, self.ctx)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.value + o.value, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.value - o.value, self.ctx)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(o.value - self.value, self.ctx)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.value * o.value, self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.ctx)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, self.ctx.p - 2, self.ctx.p), self.ctx)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __pow__(self, e: int):
        return FieldElement(pow(self.value, e, self.ctx.p), self.ctx)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.ctx.p == other.ctx.p
        if isinstance(other, int):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.ctx.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def to_hex(self) -> str:
        """Canonical serialization: lowercase big-endian hex, zero -> "0"."""
        return format(self.value, "x")

    def __repr__(self) -> str:
        return f"{self.value}"


def _same_ctx(elements: Iterable[FieldElement]) -> FieldCtx:
    ctx = None
    for e in elements:
        if ctx is None:
            ctx = e.ctx
        elif e.ctx.p != ctx.p:
            raise ValueError(f"modulus mismatch: {ctx.p} vs {e.ctx.p}")
    if ctx is None:
        raise ValueError("empty element collection")
    return ctx


class Polynomial:
    """Polynomial over F_p, coefficient k belongs to x^k.

    The zero polynomial has no degree (degree is None).
    """

    __slots__ = ("coeffs", "ctx")

    def __init__(self, coeffs: Sequence[FieldElement], ctx: FieldCtx | None = None):
        coeffs = tuple(coeffs)
        if coeffs:
            ctx = _same_ctx(coeffs)
        elif ctx is None:
            raise ValueError("empty coefficient list needs an explicit ctx")
        # trim trailing zeros so equality and degree are canonical
        last = len(coeffs)
        while last > 0 and coeffs[last - 1].value == 0:
            last -= 1
        object.__setattr__(self, "coeffs", coeffs[:last])
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c: FieldElement) -> "Polynomial":
        return cls((c,), c.ctx)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Polynomial":
        return cls((), ctx)

    @property
    def degree(self) -> int | None:
        """Highest exponent with a nonzero coefficient; None for zero."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def coefficient(self, k: int) -> FieldElement:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.ctx.zero()

    def evaluate(self, x: FieldElement) -> FieldElement:
        if x.ctx.p != self.ctx.p:
            raise ValueError(f"modulus mismatch: {self.ctx.p} vs {x.ctx.p}")
        p = self.ctx.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x.value + c.value) % p
        return FieldElement(acc, self.ctx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx.p == other.ctx.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Polynomial(0)"
        terms = " + ".join(
            f"{c.value}*x^{k}" if k else f"{c.value}"
            for k, c in enumerate(self.coeffs)
            if c.value
        )
        return f"Polynomial({terms})"


def lagrange_interpolate(points: Sequence[tuple[FieldElement, FieldElement]]) -> Polynomial:
    """Unique polynomial of degree < len(points) through the given points.

    Raises on an empty point list, duplicate abscissae, or mixed moduli.
    """
    if not points:
        raise ValueError("interpolation needs at least one point")
    ctx = _same_ctx([e for pt in points for e in pt])
    p = ctx.p
    xs = [pt[0].value for pt in points]
    ys = [pt[1].value for pt in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa in interpolation points")
    k = len(xs)

    # master = prod (x - x_j); each basis polynomial is master / (x - x_i),
    # recovered by synthetic division, then scaled by y_i / prod(x_i - x_j).
    master = [1] + [0] * k
    for xj in xs:
        for d in range(k, 0, -1):
            master[d] = (master[d - 1] - xj * master[d]) % p
        master[0] = -xj * master[0] % p
    result = [0] * k
    for i in range(k):
        xi = xs[i]
        # synthetic division of master by (x - xi)
        basis = [0] * k
        carry = master[k]
        for d in range(k - 1, -1, -1):
            basis[d] = carry
            carry = (master[d] + carry * xi) % p
        denom = 1
        for j in range(k):
            if j != i:
                denom = denom * (xi - xs[j]) % p
        scale = ys[i] * pow(denom, p - 2, p) % p
        if scale:
            for d in range(k):
                result[d] = (result[d] + basis[d] * scale) % p
    return Polynomial(tuple(FieldElement(c, ctx) for c in result), ctx)


def lagrange_eval_at(
    points: Sequence[tuple[FieldElement, FieldElement]], x: FieldElement
) -> FieldElement:
    """Evaluate the interpolating polynomial at x without building it."""
    if not points:
        raise ValueError("interpolation needs at least one point")
    ctx = _same_ctx([e for pt in points for e in pt] + [x])
    p = ctx.p
    xs = [pt[0].value for pt in points]
    ys = [pt[1].value for pt in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa in interpolation points")
    x0 = x.value
    for xi, yi in zip(xs, ys):
        if xi == x0:
            return FieldElement(yi, ctx)
    total = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = 1
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * (x0 - xj) % p
                den = den * (xi - xj) % p
        total = (total + yi * num * pow(den, p - 2, p)) % p
    return FieldElement(total, ctx)


class ParametricSolution:
    """Reduced solution of A*x = B*y with symbolic parameter vector y.

    Each unknown is either free or determined by a coefficient vector over
    the parameters followed by the free unknowns (in declaration order).
    `consistency_relations` are linear relations the parameters must satisfy
    for the system to be solvable at all; each is a coefficient vector c
    over the parameters meaning sum(c_k * y_k) = 0, normalized so the last
    nonzero coefficient is 1.
    """

    __slots__ = (
        "ctx",
        "unknown_names",
        "param_names",
        "free_names",
        "rows",
        "consistency_relations",
    )

    def __init__(self, ctx, unknown_names, param_names, free_names, rows, relations):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "unknown_names", tuple(unknown_names))
        object.__setattr__(self, "param_names", tuple(param_names))
        object.__setattr__(self, "free_names", tuple(free_names))
        object.__setattr__(self, "rows", dict(rows))
        object.__setattr__(self, "consistency_relations", tuple(relations))

    def __setattr__(self, name, value):
        raise AttributeError("ParametricSolution is immutable")

    def is_free(self, name: str) -> bool:
        if name not in self.unknown_names:
            raise KeyError(name)
        return name in self.free_names

    def coefficients(self, name: str) -> tuple[FieldElement, ...]:
        """Determined unknown's vector over params ++ free unknowns."""
        return self.rows[name]

    def parameters_consistent(self, param_values: Sequence[FieldElement]) -> bool:
        if len(param_values) != len(self.param_names):
            raise ValueError("wrong parameter count")
        p = self.ctx.p
        for rel in self.consistency_relations:
            acc = 0
            for c, v in zip(rel, param_values):
                acc = (acc + c.value * v.value) % p
            if acc:
                return False
        return True

    def substitute(
        self,
        param_values: Sequence[FieldElement],
        free_values: Sequence[FieldElement],
    ) -> dict[str, FieldElement]:
        """Full assignment for every unknown given parameter and free values."""
        if len(param_values) != len(self.param_names):
            raise ValueError("wrong parameter count")
        if len(free_values) != len(self.free_names):
            raise ValueError("wrong free-unknown count")
        p = self.ctx.p
        column = [v.value for v in param_values] + [v.value for v in free_values]
        out: dict[str, FieldElement] = {}
        for name, fv in zip(self.free_names, free_values):
            out[name] = fv
        for name, row in self.rows.items():
            acc = 0
            for c, v in zip(row, column):
                acc = (acc + c.value * v) % p
            out[name] = FieldElement(acc, self.ctx)
        return out

    def expression(self, name: str) -> str:
        """Human-readable linear expression for a determined unknown."""
        row = self.rows[name]
        q = len(self.param_names)
        terms = []
        for c, fname in zip(row[q:], self.free_names):
            if c.value:
                terms.append(_term(c.value, fname))
        for c, pname in zip(row[:q], self.param_names):
            if c.value:
                terms.append(_term(c.value, pname))
        return " + ".join(terms) if terms else "0"

    def relation_equations(self) -> list[str]:
        """Each consistency relation solved for its last involved parameter."""
        p = self.ctx.p
        out = []
        for rel in self.consistency_relations:
            nz = [k for k, c in enumerate(rel) if c.value]
            lead = nz[-1]
            terms = [
                _term((-rel[k].value) % p, self.param_names[k]) for k in nz[:-1]
            ]
            rhs = " + ".join(terms) if terms else "0"
            out.append(f"{self.param_names[lead]} = {rhs}")
        return out


def _term(coeff: int, name: str) -> str:
    return name if coeff == 1 else f"{coeff}*{name}"


def solve_parametric(
    A: Sequence[Sequence[FieldElement]],
    B: Sequence[Sequence[FieldElement]],
    unknown_names: Sequence[str] | None = None,
    param_names: Sequence[str] | None = None,
    scan_order: Sequence[int] | None = None,
) -> ParametricSolution:
    """Solve A*x = B*y over F_p with y a vector of symbolic parameters.

    Reduced row-echelon elimination carrying the parameter columns along.
    Pivots are chosen per column in `scan_order` (default: left to right),
    taking the first nonzero entry from the top; the result is fully
    deterministic. Unknowns whose column gets no pivot are free; all-zero
    A-rows with a nonzero parameter combination become consistency
    relations among the parameters.
    """
    if not A:
        raise ValueError("empty system")
    rows = len(A)
    u = len(A[0])
    if any(len(r) != u for r in A):
        raise ValueError("ragged coefficient matrix")
    if len(B) != rows:
        raise ValueError(f"row count mismatch: A has {rows}, B has {len(B)}")
    q = len(B[0]) if B else 0
    if any(len(r) != q for r in B):
        raise ValueError("ragged parameter matrix")
    ctx = _same_ctx([e for r in A for e in r] + [e for r in B for e in r])
    p = ctx.p

    if unknown_names is None:
        unknown_names = [f"x{j}" for j in range(u)]
    if param_names is None:
        param_names = [f"y{k}" for k in range(q)]
    if len(unknown_names) != u or len(set(unknown_names)) != u:
        raise ValueError("unknown_names must be distinct and match column count")
    if len(param_names) != q or len(set(param_names)) != q:
        raise ValueError("param_names must be distinct and match column count")
    if scan_order is None:
        scan_order = range(u)
    else:
        if sorted(scan_order) != list(range(u)):
            raise ValueError("scan_order must be a permutation of the columns")

    a = [[e.value for e in r] for r in A]
    b = [[e.value for e in r] for r in B]

    pivot_of_col: dict[int, int] = {}
    piv_row = 0
    for col in scan_order:
        sel = None
        for i in range(piv_row, rows):
            if a[i][col]:
                sel = i
                break
        if sel is None:
            continue
        a[piv_row], a[sel] = a[sel], a[piv_row]
        b[piv_row], b[sel] = b[sel], b[piv_row]
        f = pow(a[piv_row][col], p - 2, p)
        if f != 1:
            a[piv_row] = [x * f % p for x in a[piv_row]]
            b[piv_row] = [x * f % p for x in b[piv_row]]
        for i in range(rows):
            if i == piv_row:
                continue
            g = a[i][col]
            if g:
                arow, apiv = a[i], a[piv_row]
                brow, bpiv = b[i], b[piv_row]
                a[i] = [(x - g * y) % p for x, y in zip(arow, apiv)]
                b[i] = [(x - g * y) % p for x, y in zip(brow, bpiv)]
        pivot_of_col[col] = piv_row
        piv_row += 1
        if piv_row == rows:
            break

    free_cols = [c for c in range(u) if c not in pivot_of_col]
    free_names = [unknown_names[c] for c in free_cols]

    solution_rows: dict[str, tuple[FieldElement, ...]] = {}
    for col, r in pivot_of_col.items():
        vec = [FieldElement(v, ctx) for v in b[r]]
        vec += [FieldElement(-a[r][fc], ctx) for fc in free_cols]
        solution_rows[unknown_names[col]] = tuple(vec)

    raw_relations = [
        b[i][:] for i in range(rows)
        if not any(a[i]) and any(b[i])
    ]
    relations = [
        tuple(FieldElement(v, ctx) for v in rel)
        for rel in _canonicalize_relations(raw_relations, p)
    ]

    return ParametricSolution(
        ctx, unknown_names, param_names, free_names, solution_rows, relations
    )


def _canonicalize_relations(rel_rows: list[list[int]], p: int) -> list[list[int]]:
    """Reduce parameter relations to a unique basis.

    Pivot on the last nonzero coordinate (scanning right to left) and
    normalize it to 1; relations come out sorted by that position. This
    makes each relation read "latest parameter = combination of earlier
    ones", matching how induced share relations are reported.
    """
    basis: dict[int, list[int]] = {}  # lead position -> row
    for row in rel_rows:
        row = row[:]
        while True:
            nz = [k for k, v in enumerate(row) if v]
            if not nz:
                break
            lead = nz[-1]
            if lead not in basis:
                f = pow(row[lead], p - 2, p)
                basis[lead] = [v * f % p for v in row]
                break
            g = row[lead]
            row = [(x - g * y) % p for x, y in zip(row, basis[lead])]
    # back-eliminate so each lead appears in exactly one relation
    leads = sorted(basis)
    for li, lead in enumerate(leads):
        for other in leads[li + 1 :]:
            g = basis[lead][other]
            if g:
                basis[lead] = [
                    (x - g * y) % p for x, y in zip(basis[lead], basis[other])
                ]
    return [basis[lead] for lead in leads]
