"""Disjunctive hierarchical secret sharing: dealer, bulletin, reconstruction.

Participants 1..n are split into m levels (level 1 is the most trusted),
with a strictly increasing threshold sequence t_1 < ... < t_m. A set is
authorized when, for some level l, it holds at least t_l members among
the first l levels. Every participant's share is one element of F_p, so
the share space equals the secret space. Reconstruction combines the
shares with the public bulletin: per-level roots alpha_l, offsets
r_l = s - u_n, and correction tables that translate shares into recurrence
terms (levels below m) or polynomial values (level m).
"""

from __future__ import annotations

import secrets
from typing import Iterable, Mapping, Sequence

from .field import (
    FieldCtx,
    FieldElement,
    Polynomial,
    is_probable_prime,
    lagrange_eval_at,
)
from .lhr import LhrRelation
from .oneway import FAMILY_ID, OneWayFamily


class UnauthorizedError(ValueError):
    """The participant set does not meet any cumulative threshold."""


class AccessStructure:
    """Level sizes and thresholds; validates its own invariants."""

    __slots__ = ("level_sizes", "thresholds", "cumulative")

    def __init__(self, level_sizes: Sequence[int], thresholds: Sequence[int]):
        sizes = tuple(int(v) for v in level_sizes)
        ts = tuple(int(v) for v in thresholds)
        if not sizes:
            raise ValueError("need at least one level")
        if len(sizes) != len(ts):
            raise ValueError(
                f"{len(sizes)} level sizes but {len(ts)} thresholds"
            )
        if any(v < 1 for v in sizes):
            raise ValueError("every level size must be >= 1")
        if ts[0] < 1:
            raise ValueError("thresholds must be >= 1")
        for a, b in zip(ts, ts[1:]):
            if b <= a:
                raise ValueError(
                    f"thresholds must be strictly increasing, got {a} then {b}"
                )
        cum = []
        total = 0
        for nl in sizes:
            total += nl
            cum.append(total)
        # each threshold is compared against the cumulative count through
        # its level, so that is the bound it must respect
        for l, (t, upto) in enumerate(zip(ts, cum), start=1):
            if t > upto:
                raise ValueError(
                    f"threshold {t} exceeds the {upto} participants "
                    f"within levels 1..{l}"
                )
        object.__setattr__(self, "level_sizes", sizes)
        object.__setattr__(self, "thresholds", ts)
        object.__setattr__(self, "cumulative", tuple(cum))

    def __setattr__(self, name, value):
        raise AttributeError("AccessStructure is immutable")

    @property
    def level_count(self) -> int:
        return len(self.level_sizes)

    @property
    def participant_count(self) -> int:
        return self.cumulative[-1]

    def level_of(self, index: int) -> int:
        """Level (1-based) containing participant `index`."""
        self.check_index(index)
        for l, bound in enumerate(self.cumulative, start=1):
            if index <= bound:
                return l
        raise AssertionError("unreachable")

    def check_index(self, index: int) -> None:
        if not 1 <= index <= self.participant_count:
            raise ValueError(
                f"participant index {index} out of range [1, {self.participant_count}]"
            )

    def cumulative_counts(self, indices: Iterable[int]) -> list[int]:
        """For each level l, how many of `indices` lie in [1, N_l]."""
        per_level = [0] * self.level_count
        for i in indices:
            per_level[self.level_of(i) - 1] += 1
        counts = []
        acc = 0
        for c in per_level:
            acc += c
            counts.append(acc)
        return counts

    def qualifying_levels(self, indices: Iterable[int]) -> list[int]:
        counts = self.cumulative_counts(indices)
        return [
            l
            for l, (c, t) in enumerate(zip(counts, self.thresholds), start=1)
            if c >= t
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AccessStructure):
            return NotImplemented
        return (
            self.level_sizes == other.level_sizes
            and self.thresholds == other.thresholds
        )

    def __hash__(self) -> int:
        return hash((self.level_sizes, self.thresholds))

    def __repr__(self) -> str:
        return f"AccessStructure(levels={self.level_sizes}, thresholds={self.thresholds})"


def validate(structure: AccessStructure, p: int) -> None:
    """Check the modulus against the structure (p prime and p > n)."""
    if not is_probable_prime(p):
        raise ValueError(f"modulus {p} is composite")
    n = structure.participant_count
    if p <= n:
        raise ValueError(f"modulus {p} must exceed the participant count {n}")


def is_authorized(structure: AccessStructure, indices: Iterable[int]) -> bool:
    """True iff some cumulative level count meets its threshold."""
    return bool(structure.qualifying_levels(indices))


class ShareSet:
    """Private per-participant shares, index 1..n -> field element."""

    __slots__ = ("shares",)

    def __init__(self, shares: Mapping[int, FieldElement]):
        object.__setattr__(self, "shares", dict(shares))

    def __setattr__(self, name, value):
        raise AttributeError("ShareSet is immutable")

    def __getitem__(self, index: int) -> FieldElement:
        return self.shares[index]

    def __len__(self) -> int:
        return len(self.shares)

    def subset(self, indices: Iterable[int]) -> "Quorum":
        return Quorum((i, self.shares[i]) for i in indices)


class Quorum:
    """A set of participants pooling their shares for reconstruction."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[tuple[int, FieldElement]]):
        out: dict[int, FieldElement] = {}
        for index, share in members:
            index = int(index)
            if index < 1:
                raise ValueError(f"participant index {index} must be >= 1")
            if index in out:
                raise ValueError(f"duplicate index {index} in quorum")
            out[index] = share
        object.__setattr__(self, "members", out)

    def __setattr__(self, name, value):
        raise AttributeError("Quorum is immutable")

    @property
    def indices(self) -> list[int]:
        return sorted(self.members)

    def __len__(self) -> int:
        return len(self.members)


class Bulletin:
    """Publicly posted values enabling reconstruction.

    i_tables maps level -> {participant index -> correction value}:
    levels 1..m-1 translate a share into a recurrence term, level m into
    a value of the dealer's polynomial.
    """

    __slots__ = ("structure", "ctx", "family_id", "alphas", "r_values", "i_tables")

    def __init__(
        self,
        structure: AccessStructure,
        ctx: FieldCtx,
        family_id: str,
        alphas: Sequence[FieldElement],
        r_values: Sequence[FieldElement],
        i_tables: Mapping[int, Mapping[int, FieldElement]],
    ):
        m = structure.level_count
        alphas = tuple(alphas)
        r_values = tuple(r_values)
        if len(alphas) != m - 1:
            raise ValueError(f"expected {m - 1} alphas, got {len(alphas)}")
        if len(r_values) != m - 1:
            raise ValueError(f"expected {m - 1} offsets, got {len(r_values)}")
        if any(a.value == 0 for a in alphas):
            raise ValueError("alphas must be nonzero")
        if len({a.value for a in alphas}) != len(alphas):
            raise ValueError("alphas must be pairwise distinct")
        tables: dict[int, dict[int, FieldElement]] = {
            l: dict(i_tables.get(l, {})) for l in range(1, m + 1)
        }
        cum = structure.cumulative
        n_prev = cum[m - 2] if m > 1 else 0
        for l in range(1, m):
            t = structure.thresholds[l - 1]
            expect = set(range(t + 1, cum[l - 1] + 1))
            if set(tables[l]) != expect:
                raise ValueError(
                    f"level {l} table must cover indices {sorted(expect)}"
                )
        if set(tables[m]) != set(range(1, n_prev + 1)):
            raise ValueError(
                f"level {m} table must cover indices 1..{n_prev}"
            )
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "family_id", family_id)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "r_values", r_values)
        object.__setattr__(self, "i_tables", tables)

    def __setattr__(self, name, value):
        raise AttributeError("Bulletin is immutable")

    def family(self) -> OneWayFamily:
        return OneWayFamily(self.ctx, self.structure.level_count, self.family_id)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bulletin):
            return NotImplemented
        return (
            self.structure == other.structure
            and self.ctx == other.ctx
            and self.family_id == other.family_id
            and self.alphas == other.alphas
            and self.r_values == other.r_values
            and self.i_tables == other.i_tables
        )

    def __repr__(self) -> str:
        return (
            f"Bulletin(structure={self.structure!r}, p={self.ctx.p}, "
            f"alphas={[a.value for a in self.alphas]})"
        )


def deal(
    structure: AccessStructure,
    secret: FieldElement,
    rng=None,
    *,
    randomize_alphas: bool = False,
) -> tuple[ShareSet, Bulletin]:
    """Split `secret` into one share per participant plus a public bulletin.

    Draw order is fixed (level-random shares first, then polynomial
    coefficients, then alphas if randomized), so a seeded rng reproduces
    the instance byte for byte. Pass rng=None for a system CSPRNG.
    """
    ctx = secret.ctx
    validate(structure, ctx.p)
    if rng is None:
        rng = secrets.SystemRandom()
    p = ctx.p
    m = structure.level_count
    n = structure.participant_count
    cum = structure.cumulative
    thresholds = structure.thresholds
    n_prev = cum[m - 2] if m > 1 else 0
    family = OneWayFamily(ctx, m)

    shares: dict[int, FieldElement] = {}
    for i in range(1, n_prev + 1):
        shares[i] = ctx.random(rng)

    # f has degree < t_m and f(0) = secret; the tail levels' shares are
    # its values at their indices
    f = Polynomial(
        (secret,) + tuple(ctx.random(rng) for _ in range(thresholds[-1] - 1)),
        ctx,
    )
    for i in range(n_prev + 1, n + 1):
        shares[i] = f.evaluate(ctx(i))

    if randomize_alphas:
        alphas = tuple(ctx(v) for v in rng.sample(range(1, p), m - 1))
    else:
        alphas = tuple(ctx(l) for l in range(1, m))

    r_values: list[FieldElement] = []
    i_tables: dict[int, dict[int, FieldElement]] = {l: {} for l in range(1, m + 1)}
    for l in range(1, m):
        t = thresholds[l - 1]
        rel = LhrRelation(
            alphas[l - 1],
            t,
            [family.evaluate(l, shares[i]) for i in range(1, t + 1)],
        )
        u = rel.terms(n + 1)
        r_values.append(secret - u[n])
        table = i_tables[l]
        for i in range(t + 1, cum[l - 1] + 1):
            table[i] = u[i - 1] - family.evaluate(l, shares[i])
    for i in range(1, n_prev + 1):
        i_tables[m][i] = f.evaluate(ctx(i)) - family.evaluate(m, shares[i])

    bulletin = Bulletin(structure, ctx, FAMILY_ID, alphas, r_values, i_tables)
    return ShareSet(shares), bulletin


def _recurrence_points(
    bulletin: Bulletin, level: int, members: Sequence[tuple[int, FieldElement]]
) -> list[tuple[FieldElement, FieldElement]]:
    """Points (i-1, u_{i-1} / alpha^(i-1)) for members within level reach."""
    structure = bulletin.structure
    ctx = bulletin.ctx
    p = ctx.p
    t = structure.thresholds[level - 1]
    family = bulletin.family()
    alpha_inv = pow(bulletin.alphas[level - 1].value, p - 2, p)
    table = bulletin.i_tables[level]
    pts = []
    for i, share in members:
        hv = family.evaluate(level, share)
        if i <= t:
            u = hv.value
        else:
            if i not in table:
                raise ValueError(
                    f"bulletin is missing the level-{level} entry for index {i}"
                )
            u = (table[i].value + hv.value) % p
        pts.append((ctx(i - 1), ctx(u * pow(alpha_inv, i - 1, p))))
    return pts


def _polynomial_points(
    bulletin: Bulletin, members: Sequence[tuple[int, FieldElement]]
) -> list[tuple[FieldElement, FieldElement]]:
    """Points (i, f(i)) recovered from shares and the level-m table."""
    structure = bulletin.structure
    ctx = bulletin.ctx
    m = structure.level_count
    n_prev = structure.cumulative[m - 2] if m > 1 else 0
    family = bulletin.family()
    table = bulletin.i_tables[m]
    pts = []
    for i, share in members:
        if i <= n_prev:
            if i not in table:
                raise ValueError(
                    f"bulletin is missing the level-{m} entry for index {i}"
                )
            fi = table[i] + family.evaluate(m, share)
        else:
            fi = share
        pts.append((ctx(i), fi))
    return pts


def reconstruct(
    structure: AccessStructure,
    bulletin: Bulletin,
    quorum: Quorum,
    *,
    level: int | None = None,
    use_all: bool = False,
) -> FieldElement:
    """Recover the secret from an authorized quorum and the bulletin.

    By default the lowest qualifying level is used with the t_l
    lowest-index members inside its reach; `level` forces another
    qualifying level and `use_all=True` uses every in-reach member
    (the result is identical either way).
    """
    if structure != bulletin.structure:
        raise ValueError("bulletin was published for a different structure")
    ctx = bulletin.ctx
    for i, share in quorum.members.items():
        structure.check_index(i)
        if share.ctx.p != ctx.p:
            raise ValueError(f"modulus mismatch: {ctx.p} vs {share.ctx.p}")
    qualifying = structure.qualifying_levels(quorum.members)
    if not qualifying:
        counts = structure.cumulative_counts(quorum.members)
        raise UnauthorizedError(
            f"unauthorized quorum: cumulative counts {counts} "
            f"never reach thresholds {list(structure.thresholds)}"
        )
    if level is None:
        level = qualifying[0]
    elif level not in qualifying:
        raise UnauthorizedError(
            f"quorum does not qualify at level {level} (qualifying: {qualifying})"
        )

    m = structure.level_count
    reach = structure.cumulative[level - 1]
    in_reach = sorted(i for i in quorum.members if i <= reach)
    if not use_all:
        in_reach = in_reach[: structure.thresholds[level - 1]]
    members = [(i, quorum.members[i]) for i in in_reach]

    if level < m:
        pts = _recurrence_points(bulletin, level, members)
        n = structure.participant_count
        gn = lagrange_eval_at(pts, ctx(n))
        alpha_n = pow(bulletin.alphas[level - 1].value, n, ctx.p)
        return bulletin.r_values[level - 1] + gn * ctx(alpha_n)
    pts = _polynomial_points(bulletin, members)
    return lagrange_eval_at(pts, ctx.zero())
