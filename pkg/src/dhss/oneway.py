"""Public family of distinct one-way functions F_p -> F_p.

The m levels share one construction, separated by a level tag inside the
hashed message. The byte contract is fixed so independent implementations
produce identical values:

    message = "DHSS-OWF-v1"
              || level as 2-byte big-endian
              || len(P) as 2-byte big-endian || P
              || len(X) as 2-byte big-endian || X

where P and X are the minimal big-endian encodings of p and x (no leading
zero bytes; zero encodes as the empty string). The output stream is
SHA-256(message || counter) for counter = 0, 1, ... (counter as 4-byte
big-endian), and the first ceil(2*bitlen(p)/8) bytes, read as a
big-endian integer, are reduced modulo p. The double-width read keeps the
modular bias at or below 2^-bitlen(p).
"""

from __future__ import annotations

import hashlib

from .field import FieldCtx, FieldElement

FAMILY_ID = "DHSS-OWF-v1"


def _minimal_be(v: int) -> bytes:
    if v == 0:
        return b""
    return v.to_bytes((v.bit_length() + 7) // 8, "big")


class OneWayFamily:
    """m domain-separated hash-to-field maps over one FieldCtx."""

    __slots__ = ("family_id", "ctx", "level_count")

    def __init__(self, ctx: FieldCtx, level_count: int, family_id: str = FAMILY_ID):
        if family_id != FAMILY_ID:
            raise ValueError(f"unknown one-way family id {family_id!r}")
        if level_count < 1:
            raise ValueError("level_count must be >= 1")
        object.__setattr__(self, "family_id", family_id)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "level_count", level_count)

    def __setattr__(self, name, value):
        raise AttributeError("OneWayFamily is immutable")

    @property
    def output_width(self) -> int:
        """Bytes drawn from the stream before reduction."""
        return (self.ctx.p.bit_length() * 2 + 7) // 8

    def encode_message(self, level: int, x: FieldElement) -> bytes:
        """The domain-separated message bytes for (level, x)."""
        self._check(level, x)
        pb = _minimal_be(self.ctx.p)
        xb = _minimal_be(x.value)
        return (
            self.family_id.encode("ascii")
            + level.to_bytes(2, "big")
            + len(pb).to_bytes(2, "big")
            + pb
            + len(xb).to_bytes(2, "big")
            + xb
        )

    def evaluate(self, level: int, x: FieldElement) -> FieldElement:
        msg = self.encode_message(level, x)
        width = self.output_width
        stream = b""
        counter = 0
        while len(stream) < width:
            stream += hashlib.sha256(msg + counter.to_bytes(4, "big")).digest()
            counter += 1
        return FieldElement(int.from_bytes(stream[:width], "big"), self.ctx)

    def _check(self, level: int, x: FieldElement) -> None:
        if not 1 <= level <= self.level_count:
            raise ValueError(
                f"level {level} out of range [1, {self.level_count}]"
            )
        if x.ctx.p != self.ctx.p:
            raise ValueError(f"modulus mismatch: {self.ctx.p} vs {x.ctx.p}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, OneWayFamily):
            return NotImplemented
        return (
            self.family_id == other.family_id
            and self.ctx == other.ctx
            and self.level_count == other.level_count
        )

    def __repr__(self) -> str:
        return (
            f"OneWayFamily({self.family_id!r}, p={self.ctx.p}, "
            f"levels={self.level_count})"
        )
