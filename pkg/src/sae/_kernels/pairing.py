# cython: language_level=3
"""BN254 pairing kernels.

Self-contained arithmetic for the alt_bn128 / BN254 curve family:

    E  : y^2 = x^3 + 3           over Fp        (group G1, prime order r)
    E' : y^2 = x^3 + 3/xi        over Fp2       (group G2, order r after
                                                 subgroup check)
    GT : order-r subgroup of Fp12*

with the tower

    Fp2  = Fp[i]  / (i^2 + 1)
    Fp6  = Fp2[v] / (v^3 - xi),   xi = 9 + i
    Fp12 = Fp6[w] / (w^2 - v)

The optimal ate pairing is computed with a generic affine Miller loop over
E(Fp12) (G2 points are untwisted via (x, y) -> (x*v, y*w^3), so no twisted
line-coefficient bookkeeping is needed), followed by the standard easy/hard
final exponentiation split.  The hard part uses the u-power addition chain;
tests cross-check it against the naive (p^12-1)/r exponentiation.

Representation conventions (what every function below expects):

    Fp    int in [0, p)
    Fp2   (c0, c1)
    Fp6   (c0, c1, c2)            of Fp2
    Fp12  (c0, c1)                of Fp6
    G1    (x, y) ints, None for the point at infinity
    G2    ((x0,x1), (y0,y1)), None for infinity
    GT    Fp12

This module is deliberately free of project imports so that setup.py can
compile a copy of it as the `_pairing_c` extension; keep it that way.
"""

try:
    from gmpy2 import invert as _gmp_invert, powmod as _gmp_powmod
    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    _HAVE_GMPY2 = False

# BN parameter u and the derived field/group orders (EIP-196/197 constants).
U = 4965661367192848881
P = 21888242871839275222246405745257275088696311157297823662689037894645226208583
R = 21888242871839275222246405745257275088548364400416034343698204186575808495617
ATE_LOOP = 6 * U + 2

B1 = 3  # G1 curve constant

G1_GEN = (1, 2)
G2_GEN = (
    (10857046999023057135944570762232829481370756359578518086990519993285655852781,
     11559732032986387107991004021392285783925812861821192530917403151452391805634),
    (8495653923123431417604973247489272438418190587263600148770280649306958101930,
     4082367875863433681332203403145435568316851327593401208105741076214120093531),
)

XI = (9, 1)  # the Fp6 non-residue; also fixes the twist b' = 3/xi


def fp_inv(a):
    if _HAVE_GMPY2:
        return int(_gmp_invert(a, P))
    return pow(a, P - 2, P)


def fp_sqrt(a):
    """Square root mod p (p = 3 mod 4); None when a is a non-residue."""
    y = pow(a, (P + 1) // 4, P)
    if y * y % P != a % P:
        return None
    return y


# ---------------------------------------------------------------------------
# Fp2
# ---------------------------------------------------------------------------

FP2_ZERO = (0, 0)
FP2_ONE = (1, 0)


def fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a):
    return (-a[0] % P, -a[1] % P)


def fp2_conj(a):
    return (a[0], -a[1] % P)


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    t2 = (a0 + a1) * (b0 + b1)
    return ((t0 - t1) % P, (t2 - t0 - t1) % P)


def fp2_sqr(a):
    a0, a1 = a
    t0 = (a0 + a1) * (a0 - a1)
    t1 = 2 * a0 * a1
    return (t0 % P, t1 % P)


def fp2_scalar(a, k):
    return (a[0] * k % P, a[1] * k % P)


def fp2_inv(a):
    a0, a1 = a
    norm = (a0 * a0 + a1 * a1) % P
    ninv = fp_inv(norm)
    return (a0 * ninv % P, -a1 * ninv % P)


def fp2_mul_xi(a):
    # a * (9 + i)
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def fp2_pow(a, e):
    result = FP2_ONE
    base = a
    while e > 0:
        if e & 1:
            result = fp2_mul(result, base)
        base = fp2_sqr(base)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Fp6
# ---------------------------------------------------------------------------

FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a, b):
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a, b):
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a):
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    m0 = fp2_mul(a0, b0)
    m1 = fp2_mul(a1, b1)
    m2 = fp2_mul(a2, b2)
    # Karatsuba-style interpolation with v^3 = xi
    c0 = fp2_add(m0, fp2_mul_xi(fp2_sub(fp2_mul(fp2_add(a1, a2), fp2_add(b1, b2)), fp2_add(m1, m2))))
    c1 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), fp2_add(m0, m1)), fp2_mul_xi(m2))
    c2 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a2), fp2_add(b0, b2)), fp2_add(m0, m2)), m1)
    return (c0, c1, c2)


def fp6_sqr(a):
    return fp6_mul(a, a)


def fp6_mul_v(a):
    # a * v with v^3 = xi
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_inv(a):
    a0, a1, a2 = a
    c0 = fp2_sub(fp2_sqr(a0), fp2_mul_xi(fp2_mul(a1, a2)))
    c1 = fp2_sub(fp2_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    c2 = fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    t = fp2_add(fp2_mul_xi(fp2_add(fp2_mul(a2, c1), fp2_mul(a1, c2))), fp2_mul(a0, c0))
    tinv = fp2_inv(t)
    return (fp2_mul(c0, tinv), fp2_mul(c1, tinv), fp2_mul(c2, tinv))


# ---------------------------------------------------------------------------
# Fp12
# ---------------------------------------------------------------------------

FP12_ZERO = (FP6_ZERO, FP6_ZERO)
FP12_ONE = (FP6_ONE, FP6_ZERO)


def fp12_add(a, b):
    return (fp6_add(a[0], b[0]), fp6_add(a[1], b[1]))


def fp12_sub(a, b):
    return (fp6_sub(a[0], b[0]), fp6_sub(a[1], b[1]))


def fp12_neg(a):
    return (fp6_neg(a[0]), fp6_neg(a[1]))


def fp12_conj(a):
    """Conjugation over Fp6; equals inversion on the cyclotomic subgroup."""
    return (a[0], fp6_neg(a[1]))


def fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    m0 = fp6_mul(a0, b0)
    m1 = fp6_mul(a1, b1)
    c0 = fp6_add(m0, fp6_mul_v(m1))
    c1 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(b0, b1)), fp6_add(m0, m1))
    return (c0, c1)


def fp12_sqr(a):
    a0, a1 = a
    m = fp6_mul(a0, a1)
    c0 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(a0, fp6_mul_v(a1))), fp6_add(m, fp6_mul_v(m)))
    c1 = fp6_add(m, m)
    return (c0, c1)


def fp12_inv(a):
    a0, a1 = a
    t = fp6_sub(fp6_sqr(a0), fp6_mul_v(fp6_sqr(a1)))
    tinv = fp6_inv(t)
    return (fp6_mul(a0, tinv), fp6_neg(fp6_mul(a1, tinv)))


def fp12_from_fp(x):
    return (((x % P, 0), FP2_ZERO, FP2_ZERO), FP6_ZERO)


def fp12_pow(a, e):
    if e < 0:
        return fp12_pow(fp12_inv(a), -e)
    result = FP12_ONE
    base = a
    while e > 0:
        if e & 1:
            result = fp12_mul(result, base)
        base = fp12_sqr(base)
        e >>= 1
    return result


def _naf(e):
    digits = []
    while e > 0:
        if e & 1:
            d = 2 - (e % 4)
            e -= d
        else:
            d = 0
        digits.append(d)
        e >>= 1
    return digits


def gt_pow(a, e):
    """Exponentiation for order-r elements: NAF with conjugation as inverse."""
    e %= R
    if e == 0:
        return FP12_ONE
    ainv = fp12_conj(a)
    result = FP12_ONE
    for d in reversed(_naf(e)):
        result = fp12_sqr(result)
        if d == 1:
            result = fp12_mul(result, a)
        elif d == -1:
            result = fp12_mul(result, ainv)
    return result


# Frobenius: gamma[k] = xi^(k*(p-1)/6) for the w- and v-coefficient twists.
_GAMMA = [FP2_ONE] + [fp2_pow(XI, k * (P - 1) // 6) for k in range(1, 6)]


def fp12_frobenius(a):
    (a0, a1, a2), (b0, b1, b2) = a
    return (
        (fp2_conj(a0),
         fp2_mul(fp2_conj(a1), _GAMMA[2]),
         fp2_mul(fp2_conj(a2), _GAMMA[4])),
        (fp2_mul(fp2_conj(b0), _GAMMA[1]),
         fp2_mul(fp2_conj(b1), _GAMMA[3]),
         fp2_mul(fp2_conj(b2), _GAMMA[5])),
    )


def fp12_frobenius_k(a, k):
    for _ in range(k):
        a = fp12_frobenius(a)
    return a


# ---------------------------------------------------------------------------
# G1: y^2 = x^3 + 3 over Fp, Jacobian coordinates internally
# ---------------------------------------------------------------------------

def g1_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return (y * y - x * x * x - B1) % P == 0


def g1_neg(pt):
    if pt is None:
        return None
    return (pt[0], -pt[1] % P)


def g1_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    return _jac_to_affine(_jac_add(_affine_to_jac(p1), _affine_to_jac(p2)))


def _affine_to_jac(pt):
    return (pt[0], pt[1], 1)


def _jac_is_inf(pt):
    return pt[2] == 0


def _jac_to_affine(pt):
    x, y, z = pt
    if z == 0:
        return None
    zi = fp_inv(z)
    zi2 = zi * zi % P
    return (x * zi2 % P, y * zi2 * zi % P)


def _jac_dbl(pt):
    x, y, z = pt
    if z == 0 or y == 0:
        return (0, 1, 0)
    a = x * x % P
    b = y * y % P
    c = b * b % P
    t = x + b
    d = 2 * (t * t - a - c) % P
    e = 3 * a % P
    f = e * e % P
    x3 = (f - 2 * d) % P
    y3 = (e * (d - x3) - 8 * c) % P
    z3 = 2 * y * z % P
    return (x3, y3, z3)


def _jac_add(p1, p2):
    if p1[2] == 0:
        return p2
    if p2[2] == 0:
        return p1
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    z1z1 = z1 * z1 % P
    z2z2 = z2 * z2 % P
    u1 = x1 * z2z2 % P
    u2 = x2 * z1z1 % P
    s1 = y1 * z2 * z2z2 % P
    s2 = y2 * z1 * z1z1 % P
    h = (u2 - u1) % P
    if h == 0:
        if (s2 - s1) % P == 0:
            return _jac_dbl(p1)
        return (0, 1, 0)
    i = 4 * h * h % P
    j = h * i % P
    rr = 2 * (s2 - s1) % P
    v = u1 * i % P
    x3 = (rr * rr - j - 2 * v) % P
    y3 = (rr * (v - x3) - 2 * s1 * j) % P
    z3 = ((z1 + z2) ** 2 - z1z1 - z2z2) * h % P
    return (x3, y3, z3)


def _jac_mul(pt, k):
    if pt[2] == 0 or k == 0:
        return (0, 1, 0)
    if k < 0:
        return _jac_mul((pt[0], -pt[1] % P, pt[2]), -k)
    # 4-bit window
    table = [None] * 16
    table[1] = pt
    dbl = _jac_dbl(pt)
    table[2] = dbl
    for idx in range(3, 16):
        table[idx] = _jac_add(table[idx - 1], pt)
    result = (0, 1, 0)
    for shift in range((k.bit_length() + 3) // 4 * 4 - 4, -1, -4):
        result = _jac_dbl(_jac_dbl(_jac_dbl(_jac_dbl(result))))
        d = (k >> shift) & 15
        if d:
            result = _jac_add(result, table[d])
    return result


def g1_mul(pt, k):
    if pt is None:
        return None
    return _jac_to_affine(_jac_mul(_affine_to_jac(pt), k % R))


class FixedBaseTable:
    """Per-base precomputation: 4-bit digits of the scalar select from
    affine multiples of 2^(4k)*B, so a fixed-base multiply is ~63 mixed adds."""

    __slots__ = ("rows",)

    def __init__(self, base):
        rows = []
        cur = _affine_to_jac(base)
        for _ in range(64):
            row_jac = [None] * 16
            row_jac[1] = cur
            for d in range(2, 16):
                row_jac[d] = _jac_add(row_jac[d - 1], cur)
            rows.append([None] + [_jac_to_affine(q) for q in row_jac[1:]])
            cur = _jac_dbl(row_jac[8])  # 16 * previous window base
        self.rows = rows

    def mul(self, k):
        k %= R
        acc = (0, 1, 0)
        idx = 0
        while k > 0:
            d = k & 15
            if d:
                q = self.rows[idx][d]
                acc = _jac_add(acc, (q[0], q[1], 1))
            k >>= 4
            idx += 1
        return _jac_to_affine(acc)


def g1_multi_mul(pairs):
    """Sum of k_i * P_i (interleaved double-and-add, Shamir's trick)."""
    pts = [(_affine_to_jac(p), k % R) for p, k in pairs if p is not None and k % R]
    if not pts:
        return None
    acc = (0, 1, 0)
    top = max(k.bit_length() for _, k in pts)
    for bit in range(top - 1, -1, -1):
        acc = _jac_dbl(acc)
        for pj, k in pts:
            if (k >> bit) & 1:
                acc = _jac_add(acc, pj)
    return _jac_to_affine(acc)


# ---------------------------------------------------------------------------
# G2: y^2 = x^3 + 3/xi over Fp2
# ---------------------------------------------------------------------------

B2 = fp2_mul((3, 0), fp2_inv(XI))


def g2_is_on_curve(pt):
    if pt is None:
        return True
    x, y = pt
    return fp2_sub(fp2_sqr(y), fp2_add(fp2_mul(fp2_sqr(x), x), B2)) == FP2_ZERO


def g2_neg(pt):
    if pt is None:
        return None
    return (pt[0], fp2_neg(pt[1]))


def _jac2_dbl(pt):
    x, y, z = pt
    if z == FP2_ZERO or y == FP2_ZERO:
        return (FP2_ZERO, FP2_ONE, FP2_ZERO)
    a = fp2_sqr(x)
    b = fp2_sqr(y)
    c = fp2_sqr(b)
    t = fp2_sqr(fp2_add(x, b))
    d = fp2_scalar(fp2_sub(fp2_sub(t, a), c), 2)
    e = fp2_scalar(a, 3)
    f = fp2_sqr(e)
    x3 = fp2_sub(f, fp2_scalar(d, 2))
    y3 = fp2_sub(fp2_mul(e, fp2_sub(d, x3)), fp2_scalar(c, 8))
    z3 = fp2_scalar(fp2_mul(y, z), 2)
    return (x3, y3, z3)


def _jac2_add(p1, p2):
    if p1[2] == FP2_ZERO:
        return p2
    if p2[2] == FP2_ZERO:
        return p1
    x1, y1, z1 = p1
    x2, y2, z2 = p2
    z1z1 = fp2_sqr(z1)
    z2z2 = fp2_sqr(z2)
    u1 = fp2_mul(x1, z2z2)
    u2 = fp2_mul(x2, z1z1)
    s1 = fp2_mul(fp2_mul(y1, z2), z2z2)
    s2 = fp2_mul(fp2_mul(y2, z1), z1z1)
    h = fp2_sub(u2, u1)
    if h == FP2_ZERO:
        if fp2_sub(s2, s1) == FP2_ZERO:
            return _jac2_dbl(p1)
        return (FP2_ZERO, FP2_ONE, FP2_ZERO)
    i = fp2_scalar(fp2_sqr(h), 4)
    j = fp2_mul(h, i)
    rr = fp2_scalar(fp2_sub(s2, s1), 2)
    v = fp2_mul(u1, i)
    x3 = fp2_sub(fp2_sub(fp2_sqr(rr), j), fp2_scalar(v, 2))
    y3 = fp2_sub(fp2_mul(rr, fp2_sub(v, x3)), fp2_scalar(fp2_mul(s1, j), 2))
    z3 = fp2_mul(fp2_sub(fp2_sub(fp2_sqr(fp2_add(z1, z2)), z1z1), z2z2), h)
    return (x3, y3, z3)


def _jac2_to_affine(pt):
    x, y, z = pt
    if z == FP2_ZERO:
        return None
    zi = fp2_inv(z)
    zi2 = fp2_sqr(zi)
    return (fp2_mul(x, zi2), fp2_mul(fp2_mul(y, zi2), zi))


def g2_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    return _jac2_to_affine(_jac2_add((p1[0], p1[1], FP2_ONE), (p2[0], p2[1], FP2_ONE)))


def _g2_mul_raw(pt, k):
    if pt is None or k == 0:
        return None
    if k < 0:
        pt, k = g2_neg(pt), -k
    acc = (FP2_ZERO, FP2_ONE, FP2_ZERO)
    base = (pt[0], pt[1], FP2_ONE)
    for bit in range(k.bit_length() - 1, -1, -1):
        acc = _jac2_dbl(acc)
        if (k >> bit) & 1:
            acc = _jac2_add(acc, base)
    return _jac2_to_affine(acc)


def g2_mul(pt, k):
    """Scalar multiple for subgroup points (exponent taken mod r)."""
    return _g2_mul_raw(pt, k % R)


def g2_in_subgroup(pt):
    return g2_is_on_curve(pt) and _g2_mul_raw(pt, R) is None


# ---------------------------------------------------------------------------
# Pairing
# ---------------------------------------------------------------------------

def _untwist(pt):
    """E'(Fp2) -> E(Fp12): (x, y) -> (x*v, y*w^3); w^6 = xi makes this a
    curve isomorphism onto the trace-zero subgroup."""
    x, y = pt
    xe = ((FP2_ZERO, x, FP2_ZERO), FP6_ZERO)
    ye = (FP6_ZERO, (FP2_ZERO, y, FP2_ZERO))
    return (xe, ye)


def fp12_small_scalar(a, k):
    (a0, a1, a2), (b0, b1, b2) = a
    return (
        (fp2_scalar(a0, k), fp2_scalar(a1, k), fp2_scalar(a2, k)),
        (fp2_scalar(b0, k), fp2_scalar(b1, k), fp2_scalar(b2, k)),
    )


def _line(t, q, px12, py12):
    """Evaluate at (px, py) the line through points t, q of E(Fp12);
    returns (line_value, t+q). Vertical-line factors lie in a proper
    subfield and are erased by the final exponentiation, so they are
    skipped entirely."""
    if t is None:
        return FP12_ONE, q
    if q is None:
        return FP12_ONE, t
    tx, ty = t
    qx, qy = q
    if tx == qx:
        if ty == qy:
            lam = fp12_mul(
                fp12_small_scalar(fp12_sqr(tx), 3),
                fp12_inv(fp12_small_scalar(ty, 2)),
            )
        else:
            # vertical line: contributes only subfield factors
            return FP12_ONE, None
    else:
        lam = fp12_mul(fp12_sub(qy, ty), fp12_inv(fp12_sub(qx, tx)))
    # l(P) = lam * (px - tx) - (py - ty)
    val = fp12_sub(fp12_mul(lam, fp12_sub(px12, tx)), fp12_sub(py12, ty))
    x3 = fp12_sub(fp12_sqr(lam), fp12_add(tx, qx))
    y3 = fp12_sub(fp12_mul(lam, fp12_sub(tx, x3)), ty)
    return val, (x3, y3)


def _miller_loop(q12, px, py):
    px12 = fp12_from_fp(px)
    py12 = fp12_from_fp(py)
    f = FP12_ONE
    t = q12
    for bit in range(ATE_LOOP.bit_length() - 2, -1, -1):
        val, t = _line(t, t, px12, py12)
        f = fp12_mul(fp12_sqr(f), val)
        if (ATE_LOOP >> bit) & 1:
            val, t = _line(t, q12, px12, py12)
            f = fp12_mul(f, val)
    # Frobenius correction steps of the optimal ate pairing
    q1 = (fp12_frobenius(q12[0]), fp12_frobenius(q12[1]))
    q2 = (fp12_frobenius_k(q12[0], 2), fp12_frobenius_k(q12[1], 2))
    nq2 = (q2[0], fp12_neg(q2[1]))
    val, t = _line(t, q1, px12, py12)
    f = fp12_mul(f, val)
    val, t = _line(t, nq2, px12, py12)
    f = fp12_mul(f, val)
    return f


def _final_exp_hard(m):
    """m^((p^4 - p^2 + 1)/r) via the BN u-power chain."""
    fu = fp12_pow(m, U)
    fu2 = fp12_pow(fu, U)
    fu3 = fp12_pow(fu2, U)
    y0 = fp12_mul(fp12_mul(fp12_frobenius(m), fp12_frobenius_k(m, 2)), fp12_frobenius_k(m, 3))
    y1 = fp12_conj(m)
    y2 = fp12_frobenius_k(fu2, 2)
    y3 = fp12_conj(fp12_frobenius(fu))
    y4 = fp12_conj(fp12_mul(fu, fp12_frobenius(fu2)))
    y5 = fp12_conj(fu2)
    y6 = fp12_conj(fp12_mul(fu3, fp12_frobenius(fu3)))
    t0 = fp12_mul(fp12_mul(fp12_sqr(y6), y4), y5)
    t1 = fp12_mul(fp12_mul(y3, y5), t0)
    t0 = fp12_mul(t0, y2)
    t1 = fp12_sqr(fp12_mul(fp12_sqr(t1), t0))
    t0 = fp12_mul(t1, y1)
    t1 = fp12_mul(t1, y0)
    t0 = fp12_sqr(t0)
    return fp12_mul(t1, t0)


def final_exponentiation(f):
    # easy part: f^((p^6-1)(p^2+1))
    m = fp12_mul(fp12_conj(f), fp12_inv(f))
    m = fp12_mul(fp12_frobenius_k(m, 2), m)
    # hard part
    return _final_exp_hard(m)


def pairing(p1, p2):
    """Optimal ate pairing e(P, Q), P in G1, Q in G2; returns GT (Fp12)."""
    if p1 is None or p2 is None:
        return FP12_ONE
    q12 = _untwist(p2)
    f = _miller_loop(q12, p1[0], p1[1])
    return final_exponentiation(f)


# ---------------------------------------------------------------------------
# GT fixed-base table (same digit scheme as FixedBaseTable)
# ---------------------------------------------------------------------------

class GtFixedBaseTable:
    __slots__ = ("rows",)

    def __init__(self, base):
        rows = []
        cur = base
        for _ in range(64):
            row = [None, cur]
            for _d in range(2, 16):
                row.append(fp12_mul(row[-1], cur))
            rows.append(row)
            cur = fp12_sqr(row[8])  # base^16
        self.rows = rows

    def pow(self, k):
        k %= R
        acc = FP12_ONE
        idx = 0
        while k > 0:
            d = k & 15
            if d:
                acc = fp12_mul(acc, self.rows[idx][d])
            k >>= 4
            idx += 1
        return acc


# ---------------------------------------------------------------------------
# Hashing to G1 and serialization
# ---------------------------------------------------------------------------

def hash_to_g1(digest_fn, tag):
    """Try-and-increment from a 64-byte digest callable; cofactor is 1 so
    any curve point is already in the subgroup."""
    for ctr in range(256):
        d = digest_fn(tag + bytes([ctr]))
        x = int.from_bytes(d[:48], "big") % P
        rhs = (x * x * x + B1) % P
        y = fp_sqrt(rhs)
        if y is None:
            continue
        if (d[48] & 1) != (y & 1):
            y = P - y
        if y == 0:
            continue
        return (x, y)
    raise ValueError("hash_to_g1 failed after 256 counters")


def g1_to_bytes(pt):
    if pt is None:
        return b"\x00" * 33
    x, y = pt
    return bytes([2 | (y & 1)]) + x.to_bytes(32, "big")


def g1_from_bytes(data):
    if len(data) != 33:
        raise ValueError("bad G1 encoding length")
    if data == b"\x00" * 33:
        return None
    tag = data[0]
    if tag not in (2, 3):
        raise ValueError("bad G1 tag")
    x = int.from_bytes(data[1:], "big")
    if x >= P:
        raise ValueError("G1 x out of range")
    y = fp_sqrt((x * x * x + B1) % P)
    if y is None:
        raise ValueError("G1 x not on curve")
    if (y & 1) != (tag & 1):
        y = P - y
    return (x, y)


def g2_to_bytes(pt):
    if pt is None:
        return b"\x00" * 129
    (x0, x1), (y0, y1) = pt
    return (b"\x04" + x0.to_bytes(32, "big") + x1.to_bytes(32, "big")
            + y0.to_bytes(32, "big") + y1.to_bytes(32, "big"))


def g2_from_bytes(data):
    if len(data) != 129:
        raise ValueError("bad G2 encoding length")
    if data == b"\x00" * 129:
        return None
    if data[0] != 4:
        raise ValueError("bad G2 tag")
    vals = [int.from_bytes(data[1 + 32 * i: 33 + 32 * i], "big") for i in range(4)]
    if any(v >= P for v in vals):
        raise ValueError("G2 coordinate out of range")
    pt = ((vals[0], vals[1]), (vals[2], vals[3]))
    if not g2_in_subgroup(pt):
        raise ValueError("G2 point not in subgroup")
    return pt


def gt_to_bytes(a):
    out = []
    for c6 in a:
        for c2 in c6:
            for c in c2:
                out.append(c.to_bytes(32, "big"))
    return b"".join(out)


def gt_from_bytes(data):
    if len(data) != 384:
        raise ValueError("bad GT encoding length")
    vals = [int.from_bytes(data[32 * i: 32 * i + 32], "big") for i in range(12)]
    if any(v >= P for v in vals):
        raise ValueError("GT coefficient out of range")
    return (
        ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])),
        ((vals[6], vals[7]), (vals[8], vals[9]), (vals[10], vals[11])),
    )


# import-time sanity: BN parameterization and generator membership
assert P == 36 * U**4 + 36 * U**3 + 24 * U**2 + 6 * U + 1
assert R == 36 * U**4 + 36 * U**3 + 18 * U**2 + 6 * U + 1
assert P % 4 == 3 and P % 6 == 1
assert g1_is_on_curve(G1_GEN)
assert g2_is_on_curve(G2_GEN)
