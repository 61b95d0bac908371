"""Authenticated symmetric encryption of allegation texts.

The filing key is a Z_q scalar (so the VSS machinery shares it
unchanged); the actual AES-256-GCM key is derived from its canonical
bytes.  Note the scheme is committing, not non-committing; the latter
matters only for simulation-based proofs and is out of scope here.
"""

from __future__ import annotations

import hashlib

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from sae.algebra import Scalar
from sae.errors import DecryptFailure

_NONCE_LEN = 12


def derive_key(k: Scalar) -> bytes:
    return hashlib.sha256(b"sae/filing-key" + k.to_bytes()).digest()


def seal(k: Scalar, plaintext: bytes, rng) -> bytes:
    nonce = bytes(rng.randrange(256) for _ in range(_NONCE_LEN))
    return nonce + AESGCM(derive_key(k)).encrypt(nonce, plaintext, b"")


def unseal(k: Scalar, blob: bytes) -> bytes:
    if len(blob) < _NONCE_LEN + 16:
        raise DecryptFailure("ciphertext too short")
    try:
        return AESGCM(derive_key(k)).decrypt(blob[:_NONCE_LEN], blob[_NONCE_LEN:], b"")
    except InvalidTag as exc:
        raise DecryptFailure("authenticated decryption failed") from exc


def pk_seal(ctx, pk, plaintext: bytes, rng) -> bytes:
    """Encrypt to the holder of pk's discrete log (hashed-DH + AES-GCM);
    used to carry VSS shares to individual escrows over the anonymous
    broadcast channel, where no private pairwise link exists."""
    eph = ctx.rand_nonzero_scalar(rng)
    shared = pk.exp(eph)
    key = hashlib.sha256(b"sae/pk-seal" + shared.to_bytes()).digest()
    nonce = bytes(rng.randrange(256) for _ in range(_NONCE_LEN))
    eph_pub = ctx.g.exp(eph).to_bytes()
    ct = AESGCM(key).encrypt(nonce, plaintext, b"")
    return len(eph_pub).to_bytes(2, "big") + eph_pub + nonce + ct


def pk_unseal(ctx, sk: Scalar, blob: bytes) -> bytes:
    try:
        ln = int.from_bytes(blob[:2], "big")
        eph_pub = ctx.elem_from_bytes(blob[2:2 + ln])
        rest = blob[2 + ln:]
        shared = eph_pub.exp(sk)
        key = hashlib.sha256(b"sae/pk-seal" + shared.to_bytes()).digest()
        return AESGCM(key).decrypt(rest[:_NONCE_LEN], rest[_NONCE_LEN:], b"")
    except (InvalidTag, ValueError, IndexError) as exc:
        raise DecryptFailure("public-key unseal failed") from exc
