"""Canonical byte packing for wire messages and persisted state.

Everything on the wire is a flat sequence of length-prefixed byte fields
(4-byte big-endian lengths).  Deterministic by construction: equal
structures always encode to equal bytes, which is what the cross-escrow
state-hash comparisons rely on.
"""

from __future__ import annotations


def pack(*fields: bytes) -> bytes:
    out = bytearray()
    for f in fields:
        out += len(f).to_bytes(4, "big")
        out += f
    return bytes(out)


def unpack(data: bytes) -> list[bytes]:
    fields = []
    off = 0
    n = len(data)
    while off < n:
        if off + 4 > n:
            raise ValueError("truncated field length")
        ln = int.from_bytes(data[off:off + 4], "big")
        off += 4
        if off + ln > n:
            raise ValueError("truncated field body")
        fields.append(data[off:off + ln])
        off += ln
    return fields


def pack_int(v: int) -> bytes:
    return v.to_bytes(8, "big", signed=True)


def unpack_int(b: bytes) -> int:
    return int.from_bytes(b, "big", signed=True)


def pack_str(s: str) -> bytes:
    return s.encode("utf-8")


def unpack_str(b: bytes) -> str:
    return b.decode("utf-8")
