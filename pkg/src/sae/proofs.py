"""Fiat-Shamir sigma protocols used for identifiable abort.

Two statements are proved in the MPC layer:

* ``ExponentProof`` -- the exponent inside a public contribution
  ``base^x`` equals the value committed in a Pedersen commitment
  ``g^x h^r`` (Chaum-Pedersen across the two bases).  This is what lets a
  receiver of a PublicExponentiate contribution blame a cheating party.

* ``ProductProof`` -- a commitment C opens to a*b where A = g^a h^ra and
  B = g^b h^rb are public.  Internally this is the classic trick of
  proving C = B^a h^s for the same a that sits in A.  It is what catches
  a party resharing a wrong value during share multiplication.

Challenges are derived from the full statement transcript, so proofs are
bound to (session, statement) and cannot be replayed elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from sae.algebra import GroupElem, Scalar


def _challenge(ctx, tag: bytes, parts) -> Scalar:
    blob = b"".join(len(p).to_bytes(4, "big") + p for p in parts)
    return ctx.hash_to_scalar(b"sae/fs/" + tag, blob)


@dataclass(frozen=True)
class ExponentProof:
    t_base: GroupElem   # base^w
    t_comm: GroupElem   # g^w h^s
    z_x: Scalar
    z_r: Scalar

    def to_parts(self):
        return [self.t_base.to_bytes(), self.t_comm.to_bytes(),
                self.z_x.to_bytes(), self.z_r.to_bytes()]


def prove_exponent(ctx, base: GroupElem, power: GroupElem, commitment: GroupElem,
                   x: Scalar, r: Scalar, rng, context_tag: bytes) -> ExponentProof:
    """Prove power = base^x and commitment = g^x h^r for the same x."""
    w = ctx.rand_scalar(rng)
    s = ctx.rand_scalar(rng)
    t_base = base.exp(w)
    t_comm = ctx.g.exp(w).op(ctx.h.exp(s))
    e = _challenge(ctx, b"dleq", [
        context_tag, base.to_bytes(), power.to_bytes(), commitment.to_bytes(),
        t_base.to_bytes(), t_comm.to_bytes(),
    ])
    return ExponentProof(t_base, t_comm, w + e * x, s + e * r)


def verify_exponent(ctx, base: GroupElem, power: GroupElem, commitment: GroupElem,
                    proof: ExponentProof, context_tag: bytes) -> bool:
    e = _challenge(ctx, b"dleq", [
        context_tag, base.to_bytes(), power.to_bytes(), commitment.to_bytes(),
        proof.t_base.to_bytes(), proof.t_comm.to_bytes(),
    ])
    if base.exp(proof.z_x) != proof.t_base.op(power.exp(e)):
        return False
    lhs = ctx.g.exp(proof.z_x).op(ctx.h.exp(proof.z_r))
    return lhs == proof.t_comm.op(commitment.exp(e))


@dataclass(frozen=True)
class ProductProof:
    t_a: GroupElem      # g^w h^s1
    t_c: GroupElem      # B^w h^s2
    z_a: Scalar
    z_ra: Scalar
    z_s: Scalar

    def to_parts(self):
        return [self.t_a.to_bytes(), self.t_c.to_bytes(),
                self.z_a.to_bytes(), self.z_ra.to_bytes(), self.z_s.to_bytes()]


def prove_product(ctx, comm_a: GroupElem, comm_b: GroupElem, comm_c: GroupElem,
                  a: Scalar, ra: Scalar, b: Scalar, rb: Scalar, rc: Scalar,
                  rng, context_tag: bytes) -> ProductProof:
    """Prove comm_c = g^(a*b) h^rc given comm_a = g^a h^ra, comm_b = g^b h^rb.

    Uses comm_c = comm_b^a * h^(rc - a*rb): knowledge of (a, ra, rc - a*rb)
    with the same `a` in both equations pins the product.
    """
    s = rc - a * rb
    w = ctx.rand_scalar(rng)
    s1 = ctx.rand_scalar(rng)
    s2 = ctx.rand_scalar(rng)
    t_a = ctx.g.exp(w).op(ctx.h.exp(s1))
    t_c = comm_b.exp(w).op(ctx.h.exp(s2))
    e = _challenge(ctx, b"product", [
        context_tag, comm_a.to_bytes(), comm_b.to_bytes(), comm_c.to_bytes(),
        t_a.to_bytes(), t_c.to_bytes(),
    ])
    return ProductProof(t_a, t_c, w + e * a, s1 + e * ra, s2 + e * s)


def verify_product(ctx, comm_a: GroupElem, comm_b: GroupElem, comm_c: GroupElem,
                   proof: ProductProof, context_tag: bytes) -> bool:
    e = _challenge(ctx, b"product", [
        context_tag, comm_a.to_bytes(), comm_b.to_bytes(), comm_c.to_bytes(),
        proof.t_a.to_bytes(), proof.t_c.to_bytes(),
    ])
    if ctx.g.exp(proof.z_a).op(ctx.h.exp(proof.z_ra)) != proof.t_a.op(comm_a.exp(e)):
        return False
    return comm_b.exp(proof.z_a).op(ctx.h.exp(proof.z_s)) == proof.t_c.op(comm_c.exp(e))
