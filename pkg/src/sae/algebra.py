"""Field and group layer.

Every other module does its math through one of two interchangeable
contexts:

* ``real_context()`` -- the BN254 pairing stack.  The commitment group G
  is G1, verification keys live in G2, DVRF values in GT, and
  ``ctx.pairing`` is the optimal ate pairing.
* ``toy_context(q)`` -- the additive group Z_q posing as a multiplicative
  group (``g^x`` is ``x*g mod q``).  All homomorphic identities used by
  the protocols hold, nothing is cryptographically hard, and pairings are
  unavailable.  q=23 keeps unit tests hand-checkable.

Group elements and scalars are immutable values; contexts are stateless
after construction, so everything here is safe to share across threads.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from sae._kernels import pairing as _k
from sae.errors import ToyModeError, ZeroInverse

try:
    from gmpy2 import invert as _gmp_invert
    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    _HAVE_GMPY2 = False

G = "G"      # commitment/proof group (G1 in real mode)
G2 = "G2"    # verification-key group
GT = "GT"    # pairing target group

_GROUP_TAGS = {G: b"\x01", G2: b"\x02", GT: b"\x03"}


@dataclass(frozen=True)
class ProtocolConfig:
    """Escrow-network parameters: n parties, f corruptions, l one-time
    keys per registration period, security parameter in bits."""

    n: int
    f: int
    l: int
    lambda_bits: int = 128

    def __post_init__(self):
        if self.n != 2 * self.f + 1:
            raise ValueError(f"need n = 2f+1, got n={self.n}, f={self.f}")
        if self.l < 1:
            raise ValueError("at least one key per registration period")
        if self.n < 3:
            raise ValueError("need at least three escrows")

    @property
    def threshold(self) -> int:
        """Recombination threshold f+1."""
        return self.f + 1


class Scalar:
    """Element of Z_q for the context's q."""

    __slots__ = ("v", "q")

    def __init__(self, v: int, q: int):
        self.v = v % q
        self.q = q

    def _like(self, v: int) -> "Scalar":
        return Scalar(v, self.q)

    def __add__(self, other):
        return self._like(self.v + other.v)

    def __sub__(self, other):
        return self._like(self.v - other.v)

    def __mul__(self, other):
        return self._like(self.v * other.v)

    def __neg__(self):
        return self._like(-self.v)

    def inverse(self) -> "Scalar":
        if self.v == 0:
            raise ZeroInverse("0 has no inverse")
        if _HAVE_GMPY2:
            return self._like(int(_gmp_invert(self.v, self.q)))
        return self._like(pow(self.v, self.q - 2, self.q))

    def is_zero(self) -> bool:
        return self.v == 0

    def __eq__(self, other):
        return isinstance(other, Scalar) and self.v == other.v and self.q == other.q

    def __hash__(self):
        return hash((self.v, self.q))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Scalar({self.v} mod {self.q})"

    def to_bytes(self) -> bytes:
        width = (self.q.bit_length() + 7) // 8
        return self.v.to_bytes(width, "big")


class GroupElem:
    """Element of one of the context's groups, written multiplicatively."""

    __slots__ = ("ctx", "gid", "val", "_table")

    def __init__(self, ctx, gid, val, table=None):
        self.ctx = ctx
        self.gid = gid
        self.val = val
        self._table = table

    def op(self, other: "GroupElem") -> "GroupElem":
        if other.gid != self.gid:
            raise ValueError("group mismatch")
        return GroupElem(self.ctx, self.gid, self.ctx._op(self.gid, self.val, other.val))

    def exp(self, k) -> "GroupElem":
        e = int(k) % self.ctx.q
        if self._table is not None:
            return GroupElem(self.ctx, self.gid, self._table(e))
        return GroupElem(self.ctx, self.gid, self.ctx._exp(self.gid, self.val, e))

    def inv(self) -> "GroupElem":
        return GroupElem(self.ctx, self.gid, self.ctx._inv(self.gid, self.val))

    def is_identity(self) -> bool:
        return self.ctx._is_identity(self.gid, self.val)

    def to_bytes(self) -> bytes:
        return _GROUP_TAGS[self.gid] + self.ctx._elem_bytes(self.gid, self.val)

    def __eq__(self, other):
        return (isinstance(other, GroupElem) and self.gid == other.gid
                and self.val == other.val)

    def __hash__(self):
        return hash((self.gid, self.to_bytes()))

    def __repr__(self):
        return f"GroupElem({self.gid}, {self.to_bytes().hex()[:16]}...)"


def product(elems, identity: GroupElem) -> GroupElem:
    acc = identity
    for e in elems:
        acc = acc.op(e)
    return acc


class _BaseContext:
    kind = ""
    q = 0

    def scalar(self, v: int) -> Scalar:
        return Scalar(v, self.q)

    def rand_scalar(self, rng) -> Scalar:
        return Scalar(rng.randrange(self.q), self.q)

    def rand_nonzero_scalar(self, rng) -> Scalar:
        return Scalar(rng.randrange(1, self.q), self.q)

    def scalar_from_bytes(self, data: bytes) -> Scalar:
        width = (self.q.bit_length() + 7) // 8
        if len(data) != width:
            raise ValueError("bad scalar width")
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise ValueError("scalar out of range")
        return Scalar(v, self.q)

    def elem_from_bytes(self, data: bytes) -> GroupElem:
        for gid, tag in _GROUP_TAGS.items():
            if data[:1] == tag:
                return GroupElem(self, gid, self._elem_val_from_bytes(gid, data[1:]))
        raise ValueError("unknown group tag")

    def identity(self, gid) -> GroupElem:
        return GroupElem(self, gid, self._identity_val(gid))

    def hash_to_scalar(self, domain_tag: bytes, data: bytes) -> Scalar:
        """Wide-output hash reduced mod q; tag is length-prefixed so
        distinct tags can never collide by concatenation."""
        h = hashlib.sha512(len(domain_tag).to_bytes(2, "big") + domain_tag + data)
        return Scalar(int.from_bytes(h.digest(), "big"), self.q)


def scalar_inverse(x: Scalar) -> Scalar:
    return x.inverse()


def hash_to_scalar(ctx, domain_tag: bytes, data: bytes) -> Scalar:
    return ctx.hash_to_scalar(domain_tag, data)


H1_TAG = b"sae/H1/allegation-meta"
H2_TAG = b"sae/H2/one-time-key"


def h1(ctx, data: bytes) -> Scalar:
    return ctx.hash_to_scalar(H1_TAG, data)


def h2(ctx, data: bytes) -> Scalar:
    return ctx.hash_to_scalar(H2_TAG, data)


class RealContext(_BaseContext):
    """BN254 pairing context: q, generators g (G1), h (G1, unknown dlog),
    g2 (G2) and the cached gt = e(g, g2)."""

    kind = "real"

    def __init__(self):
        self.q = _k.R
        self._g1_table = _k.FixedBaseTable(_k.G1_GEN)
        h_point = _k.hash_to_g1(lambda b: hashlib.sha512(b).digest(), b"sae/pedersen-h")
        self._h_table = _k.FixedBaseTable(h_point)
        gt_val = _k.pairing(_k.G1_GEN, _k.G2_GEN)
        self._gt_table = _k.GtFixedBaseTable(gt_val)
        self.g = GroupElem(self, G, _k.G1_GEN, table=self._g1_table.mul)
        self.h = GroupElem(self, G, h_point, table=self._h_table.mul)
        self.g2 = GroupElem(self, G2, _k.G2_GEN)
        self.gt = GroupElem(self, GT, gt_val, table=self._gt_table.pow)

    def check_config(self, cfg: ProtocolConfig):
        if cfg.lambda_bits != 128:
            raise ValueError("real mode runs at the 128-bit level only")

    def pairing(self, u: GroupElem, v: GroupElem) -> GroupElem:
        if u.gid != G or v.gid != G2:
            raise ValueError("pairing expects (G, G2) arguments")
        return GroupElem(self, GT, _k.pairing(u.val, v.val))

    # --- raw ops ---

    def _op(self, gid, a, b):
        if gid == G:
            return _k.g1_add(a, b)
        if gid == G2:
            return _k.g2_add(a, b)
        return _k.fp12_mul(a, b)

    def _exp(self, gid, a, e):
        if gid == G:
            return _k.g1_mul(a, e)
        if gid == G2:
            return _k.g2_mul(a, e)
        return _k.gt_pow(a, e)

    def _inv(self, gid, a):
        if gid == G:
            return _k.g1_neg(a)
        if gid == G2:
            return _k.g2_neg(a)
        return _k.fp12_conj(a)  # order-r elements are cyclotomic

    def _identity_val(self, gid):
        return _k.FP12_ONE if gid == GT else None

    def _is_identity(self, gid, a):
        return a == self._identity_val(gid)

    def _elem_bytes(self, gid, a):
        if gid == G:
            return _k.g1_to_bytes(a)
        if gid == G2:
            return _k.g2_to_bytes(a)
        return _k.gt_to_bytes(a)

    def _elem_val_from_bytes(self, gid, data):
        if gid == G:
            return _k.g1_from_bytes(data)
        if gid == G2:
            return _k.g2_from_bytes(data)
        return _k.gt_from_bytes(data)

    def multi_exp(self, pairs):
        """Product of base^k over (GroupElem, exponent) pairs, G only."""
        raw = [(p.val, int(k)) for p, k in pairs]
        return GroupElem(self, G, _k.g1_multi_mul(raw))


class ToyContext(_BaseContext):
    """Additive Z_q standing in for all three groups; pairings raise."""

    kind = "toy"

    def __init__(self, q: int = 23):
        self.q = q
        self.g = GroupElem(self, G, 1)
        self.h = GroupElem(self, G, int(self.hash_to_scalar(b"sae/pedersen-h", b"")) or 1)
        self.g2 = GroupElem(self, G2, 1)
        self.gt = GroupElem(self, GT, 1)

    def check_config(self, cfg: ProtocolConfig):
        pass

    def pairing(self, u, v):
        raise ToyModeError("pairings are only available in real mode")

    def _op(self, gid, a, b):
        return (a + b) % self.q

    def _exp(self, gid, a, e):
        return a * e % self.q

    def _inv(self, gid, a):
        return -a % self.q

    def _identity_val(self, gid):
        return 0

    def _is_identity(self, gid, a):
        return a == 0

    def _elem_bytes(self, gid, a):
        width = (self.q.bit_length() + 7) // 8
        return a.to_bytes(width, "big")

    def _elem_val_from_bytes(self, gid, data):
        v = int.from_bytes(data, "big")
        if v >= self.q:
            raise ValueError("element out of range")
        return v

    def multi_exp(self, pairs):
        acc = 0
        for p, k in pairs:
            acc += p.val * int(k)
        return GroupElem(self, G, acc % self.q)


_REAL_CTX = None

# 2^61 - 1 is prime; big enough that random toy-mode DVRF tags never collide
FUZZ_TOY_Q = 2305843009213693951


def real_context() -> RealContext:
    global _REAL_CTX
    if _REAL_CTX is None:
        _REAL_CTX = RealContext()
    return _REAL_CTX


def toy_context(q: int = 23) -> ToyContext:
    return ToyContext(q)
