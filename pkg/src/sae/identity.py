"""Signatures and the certificate-authority stub.

Schnorr signatures over the context's commitment group serve three
roles: escrow transport identity, client real-world identity (certified
by the CA stub), and the one-time filing keys.  The one-time public key
doubles as the allegation identifier.

The CA is a local issuer binding an identity string to a verification
key; real PKI is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from sae import wire
from sae.algebra import GroupElem, Scalar
from sae.errors import BadCertificate


@dataclass(frozen=True)
class SigningKey:
    sk: Scalar
    pk: GroupElem

    def pk_bytes(self) -> bytes:
        return self.pk.to_bytes()


def gen_key(ctx, rng) -> SigningKey:
    sk = ctx.rand_nonzero_scalar(rng)
    return SigningKey(sk, ctx.g.exp(sk))


def sign(ctx, key: SigningKey, msg: bytes) -> bytes:
    # deterministic nonce: no RNG misuse can leak the key
    k = ctx.hash_to_scalar(b"sae/sig/nonce", key.sk.to_bytes() + msg)
    big_r = ctx.g.exp(k)
    e = ctx.hash_to_scalar(b"sae/sig/chal", big_r.to_bytes() + key.pk.to_bytes() + msg)
    s = k + e * key.sk
    return wire.pack(big_r.to_bytes(), s.to_bytes())


def verify(ctx, pk: GroupElem, msg: bytes, sig: bytes) -> bool:
    try:
        r_bytes, s_bytes = wire.unpack(sig)
        big_r = ctx.elem_from_bytes(r_bytes)
        s = ctx.scalar_from_bytes(s_bytes)
    except (ValueError, IndexError):
        return False
    e = ctx.hash_to_scalar(b"sae/sig/chal", r_bytes + pk.to_bytes() + msg)
    return ctx.g.exp(s) == big_r.op(pk.exp(e))


@dataclass(frozen=True)
class IdentityCert:
    identity: str
    pk_bytes: bytes
    signature: bytes

    def signed_body(self) -> bytes:
        return wire.pack(b"sae/cert", wire.pack_str(self.identity), self.pk_bytes)

    def to_bytes(self) -> bytes:
        return wire.pack(wire.pack_str(self.identity), self.pk_bytes, self.signature)

    @classmethod
    def from_bytes(cls, data: bytes) -> "IdentityCert":
        ident, pk, sig = wire.unpack(data)
        return cls(wire.unpack_str(ident), pk, sig)


class CertAuthority:
    """Local issuer signing (identity string -> verification key) bindings."""

    def __init__(self, ctx, rng):
        self.ctx = ctx
        self.key = gen_key(ctx, rng)

    def issue(self, identity: str, pk: GroupElem) -> IdentityCert:
        cert = IdentityCert(identity, pk.to_bytes(), b"")
        return IdentityCert(identity, pk.to_bytes(), sign(self.ctx, self.key, cert.signed_body()))

    def verifier(self) -> GroupElem:
        return self.key.pk


def check_cert(ctx, ca_pk: GroupElem, cert: IdentityCert) -> GroupElem:
    """Validate a certificate and return the certified verification key."""
    if not verify(ctx, ca_pk, cert.signed_body(), cert.signature):
        raise BadCertificate(f"certificate for {cert.identity!r} does not verify")
    return ctx.elem_from_bytes(cert.pk_bytes)
