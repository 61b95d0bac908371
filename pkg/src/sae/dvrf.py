"""Distributed verifiable random function over shared key and input.

The function family is F_sk(x) = gt^(1/(x+sk)) with proof
pi_sk(x) = g^(1/(x+sk)) and public key pk = g2^sk.  The joint protocol
never reconstructs sk or x: the parties blind the sum x+sk with a joint
random factor, open only the (uniform, input-independent) blinded
product, and exponentiate the shared inverse.  One invocation spends one
coin toss, one multiplication, one opening and one public
exponentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from sae import vss
from sae.algebra import GroupElem, ProtocolConfig, Scalar
from sae.errors import DegenerateInput, ToyModeError

ALL_ESCROWS = vss.ALL_ESCROWS
CLIENT = vss.CLIENT

# coin toss (3) + multiply (3) + opening (1) + exponentiation (1); clients
# idling through an escrow-side DVRF must advance exactly this many times
ROUNDS = 8


@dataclass(frozen=True)
class VrfOutput:
    value: Optional[GroupElem]  # GT element
    proof: Optional[GroupElem]  # G element, when requested


@dataclass(frozen=True)
class VrfPublicKey:
    pk: GroupElem  # g2^sk

    def to_bytes(self) -> bytes:
        return self.pk.to_bytes()


def reference_vrf(ctx, sk: Scalar, x: Scalar) -> VrfOutput:
    """Single-party oracle for the same function family."""
    t = x + sk
    if t.is_zero():
        raise DegenerateInput("x = -sk has no VRF value")
    e = t.inverse()
    return VrfOutput(ctx.gt.exp(e), ctx.g.exp(e))


def verify_vrf(ctx, pk: VrfPublicKey, proof: GroupElem, x: Scalar) -> bool:
    """Local check e(proof, g2^x * pk) == e(g, g2).  No interaction."""
    if ctx.kind != "real":
        raise ToyModeError("VRF verification needs the pairing")
    if proof.gid != "G" or proof.is_identity():
        return False
    try:
        return ctx.pairing(proof, ctx.g2.exp(x).op(pk.pk)) == ctx.gt
    except ValueError:
        return False


def value_from_proof(ctx, proof: GroupElem) -> GroupElem:
    """Recover F from pi: F = e(pi, g2)."""
    return ctx.pairing(proof, ctx.g2)


def dvrf(chan, ctx, cfg: ProtocolConfig, sk_share, sk_commits, x_share,
         x_commits, flag_proof: bool, recipients, session_tag: bytes, rng,
         signer, verify_keys, misbehave=None, counter=None, phase="dvrf"):
    """Jointly compute F_sk(x) (or its proof) for secret-shared sk and x,
    delivering the result to `recipients` only.

    Returns (VrfOutput or None when the caller is not a recipient,
    abort reports collected from the sub-operations).
    """
    if counter is not None:
        counter(phase)
    reports = []

    t1_share = vss.add_local(sk_share, x_share)
    t1_commits = vss.add_commitments(ctx, sk_commits, x_commits)

    blind_share, blind_commits, rep = vss.random_coin_toss(
        chan, ctx, cfg, session_tag + b"/blind", rng, signer, verify_keys,
        misbehave, phase=phase + ":coin-toss")
    reports.extend(rep)

    t2_share, t2_commits, rep = vss.multiply(
        chan, ctx, cfg, t1_share, t1_commits, blind_share, blind_commits,
        session_tag + b"/blindmul", rng, signer, verify_keys, misbehave,
        phase=phase + ":multiply")
    reports.extend(rep)

    t2, rep = vss.open_shares(chan, ctx, cfg, t2_share, t2_commits,
                              session_tag + b"/open", phase=phase + ":open")
    reports.extend(rep)
    if t2.is_zero():
        # x == -sk (or a corrupted blind): abort without a culprit
        raise DegenerateInput("blinded sum opened to zero")

    # exp = t2^(-1) * blind reconstructs to 1/(x+sk)
    t2_inv = t2.inverse()
    exp_share = vss.scale_local(t2_inv, blind_share)
    exp_commits = vss.scale_commitments(blind_commits, t2_inv)

    base = ctx.g if flag_proof else ctx.gt
    result, rep = vss.public_exponentiate(
        chan, ctx, cfg, base, exp_share, exp_commits, recipients,
        session_tag + b"/reveal", rng, misbehave, phase=phase + ":exponentiate")
    reports.extend(rep)
    if result is None:
        return None, reports
    if flag_proof:
        return VrfOutput(None, result), reports
    return VrfOutput(result, None), reports
