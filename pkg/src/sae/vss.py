"""Verifiable secret sharing and the honest-majority MPC toolbox.

Local layer: Shamir sharing with Pedersen (hiding) or Feldman
commitments, share verification, Lagrange reconstruction, and the
homomorphic share operations each party applies on its own.

Interactive layer (everything taking a session channel): dealing
distribution with a complaint/response flow, joint coin tossing,
share multiplication with verified resharing and degree reduction,
public opening, and public exponentiation of a shared secret.  All
detected misbehavior is attributed: an AbortReport names a party only
on public evidence (a failed commitment or proof check against signed
material, or a missing round message).

Sessions are single-threaded per party; shares, dealings and reports
are immutable values, so distinct sessions can run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from sae import identity, wire
from sae.algebra import GroupElem, ProtocolConfig, Scalar
from sae.errors import (
    IndexMismatch,
    InconsistentShares,
    InsufficientShares,
    ProtocolAbort,
)
from sae.proofs import (
    ExponentProof,
    ProductProof,
    prove_exponent,
    prove_product,
    verify_exponent,
    verify_product,
)

PEDERSEN = "pedersen"
FELDMAN = "feldman"


@dataclass(frozen=True)
class AbortReport:
    culprit: int
    phase: str


@dataclass(frozen=True)
class Share:
    index: int
    value: Scalar
    blinding: Optional[Scalar]  # None in Feldman mode

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("share indices start at 1")

    def to_bytes(self) -> bytes:
        blind = self.blinding.to_bytes() if self.blinding is not None else b""
        return wire.pack(wire.pack_int(self.index), self.value.to_bytes(), blind)

    @classmethod
    def from_bytes(cls, ctx, data: bytes) -> "Share":
        idx, val, blind = wire.unpack(data)
        return cls(
            wire.unpack_int(idx),
            ctx.scalar_from_bytes(val),
            ctx.scalar_from_bytes(blind) if blind else None,
        )


@dataclass(frozen=True)
class Dealing:
    mode: str
    degree: int
    commitments: tuple
    shares: tuple  # present only in transit at the dealer
    blind_c0: Optional[Scalar] = None  # dealer-side opening of commitments[0]


def commitments_to_bytes(mode: str, commitments) -> bytes:
    return wire.pack(wire.pack_str(mode), *[c.to_bytes() for c in commitments])


def commitments_from_bytes(ctx, data: bytes):
    fields = wire.unpack(data)
    mode = wire.unpack_str(fields[0])
    if mode not in (PEDERSEN, FELDMAN):
        raise ValueError("bad commitment mode")
    return mode, tuple(ctx.elem_from_bytes(f) for f in fields[1:])


def _poly_eval(coeffs, x: int) -> Scalar:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * Scalar(x, c.q) + c
    return acc


def deal_vss(ctx, secret: Scalar, cfg: ProtocolConfig, mode: str = PEDERSEN,
             rng=None) -> Dealing:
    """Share `secret` with a degree-f polynomial; commitments bind every
    coefficient (Pedersen hides them, Feldman exposes g^coeff)."""
    coeffs = [secret] + [ctx.rand_scalar(rng) for _ in range(cfg.f)]
    if mode == PEDERSEN:
        blinds = [ctx.rand_scalar(rng) for _ in range(cfg.f + 1)]
        commitments = tuple(
            ctx.g.exp(a).op(ctx.h.exp(b)) for a, b in zip(coeffs, blinds)
        )
    elif mode == FELDMAN:
        blinds = None
        commitments = tuple(ctx.g.exp(a) for a in coeffs)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    shares = tuple(
        Share(j, _poly_eval(coeffs, j),
              _poly_eval(blinds, j) if blinds is not None else None)
        for j in range(1, cfg.n + 1)
    )
    return Dealing(mode, cfg.f, commitments, shares,
                   blinds[0] if blinds is not None else None)


def constant_sharing(ctx, value: Scalar, cfg: ProtocolConfig) -> Dealing:
    """Degree-0 'sharing' of a public value: every share equals the value
    with zero blinding.  Lets public inputs enter share arithmetic."""
    zero = ctx.scalar(0)
    commitments = (ctx.g.exp(value),)
    shares = tuple(Share(j, value, zero) for j in range(1, cfg.n + 1))
    return Dealing(PEDERSEN, 0, commitments, shares, zero)


def share_commitment(ctx, commitments, index: int) -> GroupElem:
    """Public commitment to share `index`: prod C_k^(index^k)."""
    acc = commitments[0]
    power = 1
    for c in commitments[1:]:
        power *= index
        acc = acc.op(c.exp(power))
    return acc


def verify_share(ctx, commitments, share: Share, mode: str = PEDERSEN) -> bool:
    expect = share_commitment(ctx, commitments, share.index)
    if mode == PEDERSEN:
        if share.blinding is None:
            return False
        return ctx.g.exp(share.value).op(ctx.h.exp(share.blinding)) == expect
    return share.blinding is None and ctx.g.exp(share.value) == expect


def lagrange_at_zero(ctx, indices) -> dict:
    coeffs = {}
    for j in indices:
        num = ctx.scalar(1)
        den = ctx.scalar(1)
        for m in indices:
            if m != j:
                num = num * ctx.scalar(m)
                den = den * ctx.scalar(m - j)
        coeffs[j] = num * den.inverse()
    return coeffs


def combine_shares(ctx, shares, cfg: ProtocolConfig, commitments=None,
                   mode: str = PEDERSEN) -> Scalar:
    """Reconstruct the secret from >= f+1 distinct-index shares,
    optionally verifying each against the dealing commitments first."""
    by_index = {}
    for s in shares:
        by_index.setdefault(s.index, s)
    if len(by_index) < cfg.threshold:
        raise InsufficientShares(
            f"need {cfg.threshold} distinct shares, got {len(by_index)}")
    if commitments is not None:
        for s in by_index.values():
            if not verify_share(ctx, commitments, s, mode):
                raise InconsistentShares(s.index)
    chosen = [by_index[j] for j in sorted(by_index)[:cfg.threshold]]
    lam = lagrange_at_zero(ctx, [s.index for s in chosen])
    acc = ctx.scalar(0)
    for s in chosen:
        acc = acc + lam[s.index] * s.value
    return acc


def add_local(a: Share, b: Share) -> Share:
    if a.index != b.index:
        raise IndexMismatch("shares belong to different parties")
    if (a.blinding is None) != (b.blinding is None):
        raise IndexMismatch("mixed commitment modes")
    blind = a.blinding + b.blinding if a.blinding is not None else None
    return Share(a.index, a.value + b.value, blind)


def scale_local(c: Scalar, a: Share) -> Share:
    blind = c * a.blinding if a.blinding is not None else None
    return Share(a.index, c * a.value, blind)


def add_commitments(ctx, cv1, cv2):
    if len(cv1) < len(cv2):
        cv1, cv2 = cv2, cv1
    out = list(cv1)
    for k, c in enumerate(cv2):
        out[k] = out[k].op(c)
    return tuple(out)


def scale_commitments(cv, c: Scalar):
    return tuple(elem.exp(c) for elem in cv)


# ---------------------------------------------------------------------------
# Interactive operations
# ---------------------------------------------------------------------------

def _share_sig_body(session_tag: bytes, label: bytes, dealer: int,
                    recipient: int, share_bytes: bytes) -> bytes:
    return wire.pack(b"sae/vss-share", session_tag, label,
                     wire.pack_int(dealer), wire.pack_int(recipient), share_bytes)


def _try_share(ctx, body: bytes) -> Optional[Share]:
    try:
        return Share.from_bytes(ctx, body)
    except (ValueError, IndexError):
        return None


def _parse_tagged(post: Optional[bytes], tag: bytes, label: bytes):
    if post is None:
        return None
    try:
        fields = wire.unpack(post)
    except ValueError:
        return None
    if len(fields) < 2 or fields[0] != tag or fields[1] != label:
        return None
    return fields[2:]


def _parse_complaint(item: bytes, label: bytes):
    try:
        fields = wire.unpack(item)
    except ValueError:
        return None, None
    if len(fields) == 3 and fields[0] == b"missing" and fields[1] == label:
        return "missing", [wire.unpack_int(fields[2])]
    if len(fields) == 5 and fields[0] == b"invalid" and fields[1] == label:
        return "invalid", [wire.unpack_int(fields[2]), fields[3], fields[4]]
    return None, None


def run_dealing_exchange(chan, ctx, cfg: ProtocolConfig, session_tag: bytes,
                         label: bytes, my_dealing: Optional[Dealing],
                         dealers, signer, verify_keys, phase: str,
                         misbehave=None, attachment: bytes = b""):
    """Distribute one dealing per party in `dealers`, resolving complaints
    with public evidence.  Three rounds: signed shares + commitments,
    complaints, dealer responses to missing-share claims.

    Returns ({dealer: (commitment_vector, own_share, attachment)}, reports);
    dealers with attributed misbehavior are absent from the dict.  The
    dealer's `attachment` rides along with its commitment post (multiply
    attaches its product proof there).
    """
    dealers = sorted(dealers)
    me = chan.me
    my_own = None
    if my_dealing is not None and misbehave != "silent-drop":
        victim = min(j for j in chan.escrow_indices() if j != me) \
            if misbehave == "bad-dealing" else None
        for share in my_dealing.shares:
            s = share
            if victim is not None and share.index == victim:
                s = Share(share.index, share.value + ctx.scalar(1), share.blinding)
            body = s.to_bytes()
            sig = identity.sign(ctx, signer,
                                _share_sig_body(session_tag, label, me, s.index, body))
            if s.index == me:
                my_own = (body, sig)
            else:
                chan.send(s.index, wire.pack(b"share", label, body, sig))
        chan.post(wire.pack(b"commits", label,
                            commitments_to_bytes(my_dealing.mode, my_dealing.commitments),
                            attachment))
    rnd = chan.advance()

    commits = {}
    attachments = {}
    my_shares = {}
    reports = []
    complaints = []
    for d in dealers:
        parsed = _parse_tagged(rnd.posts.get(d), b"commits", label)
        if parsed is None or len(parsed) != 2:
            reports.append(AbortReport(d, f"{phase}:missing-dealing"))
            continue
        try:
            mode, cv = commitments_from_bytes(ctx, parsed[0])
        except (ValueError, IndexError):
            reports.append(AbortReport(d, f"{phase}:malformed-dealing"))
            continue
        commits[d] = (mode, cv)
        attachments[d] = parsed[1]
        if d == me:
            if my_own is not None:
                my_shares[d] = Share.from_bytes(ctx, my_own[0])
            continue
        msg = _parse_tagged(rnd.p2p.get(d), b"share", label)
        if msg is None or len(msg) != 2:
            complaints.append(wire.pack(b"missing", label, wire.pack_int(d)))
            continue
        body, sig = msg
        share = _try_share(ctx, body)
        if (share is None or share.index != me
                or not identity.verify(ctx, verify_keys[d],
                                       _share_sig_body(session_tag, label, d, me, body), sig)
                or not verify_share(ctx, cv, share, mode)):
            complaints.append(wire.pack(b"invalid", label, wire.pack_int(d), body, sig))
            continue
        my_shares[d] = share

    # complaint round (everyone posts, possibly empty, to keep rounds fixed)
    chan.post(wire.pack(b"complaints", label, *complaints))
    rnd = chan.advance()
    all_complaints = {}
    for sender in chan.escrow_indices():
        post = _parse_tagged(rnd.posts.get(sender), b"complaints", label)
        all_complaints[sender] = list(post) if post is not None else []

    # response round: dealers publish shares claimed missing
    responses = []
    if my_dealing is not None and misbehave != "silent-drop":
        for sender, items in all_complaints.items():
            for item in items:
                kind, fields = _parse_complaint(item, label)
                if kind == "missing" and fields[0] == me:
                    share = my_dealing.shares[sender - 1]
                    body = share.to_bytes()
                    sig = identity.sign(ctx, signer,
                                        _share_sig_body(session_tag, label, me, sender, body))
                    responses.append(wire.pack(wire.pack_int(sender), body, sig))
    chan.post(wire.pack(b"responses", label, *responses))
    rnd = chan.advance()
    published = {}
    for d in dealers:
        post = _parse_tagged(rnd.posts.get(d), b"responses", label)
        if post:
            resp = {}
            for item in post:
                try:
                    to_b, body, sig = wire.unpack(item)
                    resp[wire.unpack_int(to_b)] = (body, sig)
                except ValueError:
                    continue
            published[d] = resp

    # complaint resolution happens on public data, identically everywhere
    blamed = {r.culprit for r in reports}
    for sender, items in sorted(all_complaints.items()):
        for item in items:
            kind, fields = _parse_complaint(item, label)
            if kind is None:
                continue
            d = fields[0]
            if d not in commits or d in blamed:
                continue
            mode, cv = commits[d]
            if kind == "invalid":
                body, sig = fields[1], fields[2]
                if not identity.verify(ctx, verify_keys[d],
                                       _share_sig_body(session_tag, label, d, sender, body), sig):
                    continue  # evidence does not carry the dealer's signature
                share = _try_share(ctx, body)
                if share is None or share.index != sender or not verify_share(ctx, cv, share, mode):
                    blamed.add(d)
                    reports.append(AbortReport(d, f"{phase}:bad-share"))
            else:  # missing
                resp = published.get(d, {}).get(sender)
                ok = False
                if resp is not None:
                    body, sig = resp
                    share = _try_share(ctx, body)
                    ok = (share is not None and share.index == sender
                          and identity.verify(ctx, verify_keys[d],
                                              _share_sig_body(session_tag, label, d, sender, body), sig)
                          and verify_share(ctx, cv, share, mode))
                    if ok and sender == me and d not in my_shares:
                        my_shares[d] = share
                if not ok:
                    blamed.add(d)
                    reports.append(AbortReport(d, f"{phase}:unanswered-complaint"))

    result = {}
    for d in dealers:
        if d not in commits or d in blamed:
            continue
        if d in my_shares:
            result[d] = (commits[d][1], my_shares[d], attachments[d])
        else:
            blamed.add(d)
            reports.append(AbortReport(d, f"{phase}:unresolved-share"))
    return result, reports


def random_coin_toss(chan, ctx, cfg: ProtocolConfig, session_tag: bytes,
                     rng, signer, verify_keys, misbehave=None, phase="coin-toss"):
    """Jointly sample a uniform shared scalar: every escrow deals a random
    value and qualified dealings are summed.  Proceeds when >= f+1
    dealings qualify (the sum stays uniform while one dealer is honest);
    disqualified dealers are reported."""
    my_dealing = deal_vss(ctx, ctx.rand_scalar(rng), cfg, PEDERSEN, rng)
    accepted, reports = run_dealing_exchange(
        chan, ctx, cfg, session_tag, b"toss", my_dealing,
        chan.escrow_indices(), signer, verify_keys, phase, misbehave)
    if len(accepted) < cfg.threshold:
        raise ProtocolAbort(reports, "too few qualified coin-toss dealings")
    share = None
    commits = None
    for d in sorted(accepted):
        cv, s, _ = accepted[d]
        share = s if share is None else add_local(share, s)
        commits = cv if commits is None else add_commitments(ctx, commits, cv)
    return share, commits, reports


def multiply(chan, ctx, cfg: ProtocolConfig, x_share: Share, x_commits,
             y_share: Share, y_commits, session_tag: bytes, rng, signer,
             verify_keys, misbehave=None, phase="multiply"):
    """Shares of x*y from shares of x and y: each party reshares its local
    product alongside a proof that the reshared constant term is really
    the product of its two input shares, then the degree-2f product is
    reduced with Lagrange coefficients.  Needs all 2f+1 parties; a
    cheater is named and the session aborts."""
    me = chan.me
    z = x_share.value * y_share.value
    if misbehave == "wrong-multiply-share":
        z = z + ctx.scalar(1)
    dealing = deal_vss(ctx, z, cfg, PEDERSEN, rng)
    proof = prove_product(
        ctx,
        share_commitment(ctx, x_commits, me),
        share_commitment(ctx, y_commits, me),
        dealing.commitments[0],
        x_share.value, x_share.blinding, y_share.value, y_share.blinding,
        dealing.blind_c0, rng, session_tag + b"/mul/" + wire.pack_int(me))

    accepted, reports = run_dealing_exchange(
        chan, ctx, cfg, session_tag, b"mulshare", dealing,
        chan.escrow_indices(), signer, verify_keys, phase, misbehave,
        attachment=wire.pack(*proof.to_parts()))

    for d in sorted(accepted):
        cv, _share, attachment = accepted[d]
        prf = _try_product_proof(ctx, attachment)
        if prf is None or not verify_product(
                ctx,
                share_commitment(ctx, x_commits, d),
                share_commitment(ctx, y_commits, d),
                cv[0], prf, session_tag + b"/mul/" + wire.pack_int(d)):
            del accepted[d]
            reports.append(AbortReport(d, f"{phase}:bad-product-proof"))

    if len(accepted) < cfg.n:
        known = {r.culprit for r in reports}
        for d in chan.escrow_indices():
            if d not in accepted and d not in known:
                reports.append(AbortReport(d, f"{phase}:no-resharing"))
        raise ProtocolAbort(reports, "share multiplication needs all parties")

    lam = lagrange_at_zero(ctx, sorted(accepted))
    new_value = ctx.scalar(0)
    new_blind = ctx.scalar(0)
    new_commits = None
    for d in sorted(accepted):
        cv, s, _ = accepted[d]
        new_value = new_value + lam[d] * s.value
        new_blind = new_blind + lam[d] * s.blinding
        scaled = scale_commitments(cv, lam[d])
        new_commits = scaled if new_commits is None else add_commitments(ctx, new_commits, scaled)
    return Share(me, new_value, new_blind), new_commits, reports


def _try_product_proof(ctx, data: bytes) -> Optional[ProductProof]:
    try:
        t_a, t_c, z_a, z_ra, z_s = wire.unpack(data)
        return ProductProof(
            ctx.elem_from_bytes(t_a), ctx.elem_from_bytes(t_c),
            ctx.scalar_from_bytes(z_a), ctx.scalar_from_bytes(z_ra),
            ctx.scalar_from_bytes(z_s))
    except (ValueError, IndexError):
        return None


def open_shares(chan, ctx, cfg: ProtocolConfig, share: Share, commitments,
                session_tag: bytes, phase="open"):
    """Publicly reconstruct a shared value; posted openings are checked
    against the commitment vector, so a wrong one is attributed."""
    chan.post(wire.pack(b"open", share.to_bytes()))
    rnd = chan.advance()
    good = {}
    reports = []
    for d in chan.escrow_indices():
        parsed = _parse_one(rnd.posts.get(d), b"open")
        share_d = _try_share(ctx, parsed) if parsed is not None else None
        if (share_d is None or share_d.index != d
                or not verify_share(ctx, commitments, share_d, PEDERSEN)):
            reports.append(AbortReport(d, f"{phase}:bad-opening"))
            continue
        good[d] = share_d
    if reports:
        raise ProtocolAbort(reports, "opening failed")
    return combine_shares(ctx, good.values(), cfg), reports


def _parse_one(post: Optional[bytes], tag: bytes) -> Optional[bytes]:
    if post is None:
        return None
    try:
        fields = wire.unpack(post)
    except ValueError:
        return None
    if len(fields) != 2 or fields[0] != tag:
        return None
    return fields[1]


ALL_ESCROWS = "all-escrows"
CLIENT = "client"


def public_exponentiate(chan, ctx, cfg: ProtocolConfig, base: GroupElem,
                        share: Share, commitments, recipients,
                        session_tag: bytes, rng, misbehave=None,
                        phase="public-exponentiate"):
    """Deliver base^x to the recipients, x being shared.  Each party's
    contribution base^(x_j) carries a proof tying its exponent to the
    public Pedersen share commitment; the result is interpolated in the
    exponent over any f+1 verified contributions, so one tampered
    contribution is reported without losing the result."""
    me = chan.me
    value = share.value
    if misbehave == "bad-exponent-contribution":
        value = value + ctx.scalar(1)
    contribution = base.exp(value)
    proof = prove_exponent(
        ctx, base, contribution, share_commitment(ctx, commitments, me),
        share.value, share.blinding, rng,
        session_tag + b"/pubexp/" + wire.pack_int(me))
    body = wire.pack(b"pubexp",
                     commitments_to_bytes(PEDERSEN, commitments),
                     contribution.to_bytes(),
                     wire.pack(*proof.to_parts()))
    if recipients == ALL_ESCROWS:
        chan.post(body)
        rnd = chan.advance()
        posted = {d: rnd.posts.get(d) for d in chan.escrow_indices()}
        return collect_exponentiation(ctx, cfg, base, commitments, posted,
                                      session_tag, phase)
    chan.send(0, body)
    chan.advance()
    return None, []


def exponent_proof_from_bytes(ctx, data: bytes) -> ExponentProof:
    t_base, t_comm, z_x, z_r = wire.unpack(data)
    return ExponentProof(
        ctx.elem_from_bytes(t_base), ctx.elem_from_bytes(t_comm),
        ctx.scalar_from_bytes(z_x), ctx.scalar_from_bytes(z_r))


def collect_exponentiation(ctx, cfg: ProtocolConfig, base: GroupElem,
                           commitments, bodies: dict, session_tag: bytes,
                           phase="public-exponentiate"):
    """Verify contributions {party: wire body} and interpolate in the
    exponent.  Shared by the escrow-recipient path and the client
    receiver (which first agrees on `commitments` by majority)."""
    good = {}
    reports = []
    for d, body in sorted(bodies.items()):
        fields = None
        if body is not None:
            try:
                fields = wire.unpack(body)
            except ValueError:
                fields = None
        if not fields or fields[0] != b"pubexp" or len(fields) != 4:
            reports.append(AbortReport(d, f"{phase}:missing-contribution"))
            continue
        try:
            contribution = ctx.elem_from_bytes(fields[2])
            proof = exponent_proof_from_bytes(ctx, fields[3])
        except (ValueError, IndexError):
            reports.append(AbortReport(d, f"{phase}:malformed-contribution"))
            continue
        if contribution.gid != base.gid or not verify_exponent(
                ctx, base, contribution, share_commitment(ctx, commitments, d),
                proof, session_tag + b"/pubexp/" + wire.pack_int(d)):
            reports.append(AbortReport(d, f"{phase}:bad-contribution"))
            continue
        good[d] = contribution
    if len(good) < cfg.threshold:
        raise ProtocolAbort(reports, "too few exponentiation contributions")
    chosen = sorted(good)[:cfg.threshold]
    lam = lagrange_at_zero(ctx, chosen)
    acc = ctx.identity(base.gid)
    for d in chosen:
        acc = acc.op(good[d].exp(lam[d]))
    return acc, reports
