"""Exact arithmetic in the field K = Q(zeta_m)(q), plus q-combinatorics.

A scalar is a rational function num/den in a formal variable (printed as
``q``, or ``s`` for square-root-rebased contexts) whose coefficients live in
the cyclotomic field Q(zeta_m) = Q[x]/Phi_m(x).  Scalars are kept in a
canonical reduced form -- gcd(num, den) = 1 over Q(zeta_m)[q] and a monic
denominator -- so two scalars are equal exactly when their representations
coincide.  All values are immutable; every operation is pure.

Numeric mode needs no separate machinery: a constant is simply a rational
function of degree zero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Scalar",
    "ScalarField",
    "scalar_field",
    "cyclotomic_root",
    "q_integer",
    "q_factorial",
    "q_binomial",
    "ScalarError",
    "ConductorError",
]

_F0 = Fraction(0)
_F1 = Fraction(1)


class ScalarError(ArithmeticError):
    """Scalar domain error: division by zero, degenerate q-integer base."""


class ConductorError(ScalarError):
    """Two scalars live in coefficient fields with no common embedding."""


# ---------------------------------------------------------------------------
# rational polynomials over Q (used for cyclotomic polynomials and inverses)
# ---------------------------------------------------------------------------

def _qp_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _qp_divmod(a, b):
    """Exact division with remainder in Q[x]; b must be nonzero."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    quot = [_F0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        quot[len(a) - 1 - db] = f
        for i in range(db + 1):
            a[len(a) - db - 1 + i] -= f * b[i]
        a = _qp_trim(a)
    return quot, a


def _qp_xgcd(a, b):
    """Extended gcd in Q[x]: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [_F1], []
    t0, t1 = [], [_F1]
    while r1:
        q, r = _qp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qp_sub(s0, _qp_mul(q, s1))
        t0, t1 = t1, _qp_sub(t0, _qp_mul(q, t1))
    return r0, s0, t0


def _qp_mul(a, b):
    if not a or not b:
        return []
    out = [_F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qp_trim(out)


def _qp_sub(a, b):
    out = list(a) + [_F0] * max(0, len(b) - len(a))
    for j, y in enumerate(b):
        out[j] -= y
    return _qp_trim(out)


def _divisors(m):
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def _cyclotomic_qpoly(m):
    """Coefficients of Phi_m over Q, ascending, monic."""
    num = [_F0] * (m + 1)
    num[0], num[m] = Fraction(-1), _F1
    for d in _divisors(m):
        if d < m:
            num, rem = _qp_divmod(num, list(_cyclotomic_qpoly(d)))
            assert not rem
    return tuple(num)


# ---------------------------------------------------------------------------
# the coefficient field Q(zeta_m) and polynomials over it
# ---------------------------------------------------------------------------
#
# A coefficient is a tuple of Fractions of length deg(Phi_m), coordinates on
# 1, x, ..., x^(deg-1) with x = zeta_m.  A polynomial in q over the field is
# a tuple of coefficients, ascending degree, with no trailing zeros.

_FIELD_CACHE = {}


def scalar_field(m=2, var="q"):
    """The field Q(zeta_m)(var); instances are cached per (m, var)."""
    key = (int(m), var)
    field = _FIELD_CACHE.get(key)
    if field is None:
        field = ScalarField(*key)
        _FIELD_CACHE[key] = field
    return field


class ScalarField:
    """Q(zeta_m)(var) with exact coefficient arithmetic mod Phi_m."""

    def __init__(self, m, var="q"):
        if m < 1:
            raise ConductorError("conductor must be a positive integer")
        self.m = m
        self.var = var
        phi = _cyclotomic_qpoly(m)
        self.deg = len(phi) - 1
        self._phi = phi
        self.czero = tuple([_F0] * self.deg)
        self.cone = tuple([_F1] + [_F0] * (self.deg - 1))
        # reduction rows: x^(deg+i) mod Phi_m for products of two reduced values
        rows = []
        cur = [-phi[j] for j in range(self.deg)]  # x^deg
        rows.append(tuple(cur))
        for _ in range(self.deg - 2):
            nxt = [_F0] + cur[:-1]
            top = cur[-1]
            if top:
                for j in range(self.deg):
                    nxt[j] -= top * phi[j]
            cur = nxt
            rows.append(tuple(cur))
        self._xrows = rows
        self.pzero = ()
        self.pone = (self.cone,)
        self._zeta_cache = {}
        self.zero = Scalar(self, (), self.pone)
        self.one = Scalar(self, self.pone, self.pone)
        self.q = Scalar(self, (self.czero, self.cone), self.pone)

    def __repr__(self):
        return f"ScalarField(m={self.m}, var={self.var!r})"

    # -- coefficient arithmetic --------------------------------------------

    def cadd(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def csub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def cneg(self, a):
        return tuple(-x for x in a)

    def cmul(self, a, b):
        d = self.deg
        if d == 1:
            return (a[0] * b[0],)
        conv = [_F0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:d]
        for i in range(d, 2 * d - 1):
            c = conv[i]
            if c:
                row = self._xrows[i - d]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return tuple(out)

    def cinv(self, a):
        if not any(a):
            raise ScalarError("division by zero in Q(zeta_m)")
        if self.deg == 1:
            return (1 / a[0],)
        g, u, _ = _qp_xgcd(_qp_trim(a), list(self._phi))
        assert len(g) == 1, "Phi_m is irreducible over Q"
        inv = [x / g[0] for x in u] + [_F0] * self.deg
        return tuple(inv[: self.deg])

    def cfrac(self, r):
        return tuple([Fraction(r)] + [_F0] * (self.deg - 1))

    def cis_zero(self, a):
        return not any(a)

    def ctext(self, a):
        """Canonical text of a coefficient, descending powers of z = zeta_m."""
        parts = []
        for j in range(self.deg - 1, -1, -1):
            r = a[j]
            if not r:
                continue
            if j == 0:
                body = str(abs(r))
            else:
                zp = "z" if j == 1 else f"z^{j}"
                body = zp if abs(r) == 1 else f"{abs(r)}*{zp}"
            if not parts:
                parts.append(body if r > 0 else "-" + body)
            else:
                parts.append((" + " if r > 0 else " - ") + body)
        return "".join(parts) if parts else "0"

    def csingle(self, a):
        """(power, rational) if the coefficient has one nonzero coordinate."""
        found = None
        for j, r in enumerate(a):
            if r:
                if found is not None:
                    return None
                found = (j, r)
        return found

    # -- polynomial arithmetic over the coefficient field -------------------

    def ptrim(self, c):
        c = list(c)
        while c and self.cis_zero(c[-1]):
            c.pop()
        return tuple(c)

    def padd(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, y in enumerate(b):
            out[j] = self.cadd(out[j], y)
        return self.ptrim(out)

    def pneg(self, a):
        return tuple(self.cneg(c) for c in a)

    def pmul(self, a, b):
        if not a or not b:
            return ()
        out = [self.czero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not self.cis_zero(x):
                for j, y in enumerate(b):
                    if not self.cis_zero(y):
                        out[i + j] = self.cadd(out[i + j], self.cmul(x, y))
        return self.ptrim(out)

    def pmulc(self, a, c):
        return self.ptrim([self.cmul(x, c) for x in a])

    def pdivmod(self, a, b):
        if not b:
            raise ScalarError("polynomial division by zero")
        a = list(a)
        db = len(b) - 1
        ilb = self.cinv(b[-1])
        quot = [self.czero] * max(len(a) - db, 0)
        while a and len(a) - 1 >= db:
            while a and self.cis_zero(a[-1]):
                a.pop()
            if not a or len(a) - 1 < db:
                break
            f = self.cmul(a[-1], ilb)
            quot[len(a) - 1 - db] = f
            off = len(a) - db - 1
            for i in range(db + 1):
                a[off + i] = self.csub(a[off + i], self.cmul(f, b[i]))
            a.pop()
        return self.ptrim(quot), self.ptrim(a)

    def pgcd(self, a, b):
        a, b = self.ptrim(a), self.ptrim(b)
        while b:
            a, b = b, self.pdivmod(a, b)[1]
        if a:
            a = self.pmulc(a, self.cinv(a[-1]))
        return a

    def peval(self, a, q0):
        """Evaluate at a rational point, returning a coefficient."""
        acc = self.czero
        for c in reversed(a):
            acc = self.cadd(tuple(x * q0 for x in acc), c)
        return acc

    # -- scalar constructors -------------------------------------------------

    def constant(self, coef):
        return _make(self, (coef,), self.pone)

    def from_fraction(self, r):
        r = Fraction(r)
        if r == 0:
            return self.zero
        return Scalar(self, (self.cfrac(r),), self.pone)

    def zeta(self, r):
        """A primitive r-th root of unity in this field; needs r | m or r <= 2."""
        r = int(r)
        z = self._zeta_cache.get(r)
        if z is not None:
            return z
        if r == 1:
            z = self.one
        elif r == 2:
            z = self.from_fraction(-1)
        elif self.m % r != 0:
            raise ConductorError(f"no primitive {r}-th root of unity in Q(zeta_{self.m})")
        else:
            e = self.m // r
            coef = self.cone
            xc = tuple([_F0, _F1] + [_F0] * (self.deg - 2)) if self.deg >= 2 else None
            if xc is None:
                # deg 1: x is congruent to a rational mod Phi_m (m = 1 or 2)
                xval = -self._phi[0]
                z = self.from_fraction(xval ** e)
            else:
                for _ in range(e):
                    coef = self.cmul(coef, xc)
                z = self.constant(coef)
        self._zeta_cache[r] = z
        return z

    def coerce(self, value):
        if isinstance(value, Scalar):
            if value.field is self:
                return value
            return _embed(value, self)
        if isinstance(value, (int, Fraction)):
            return self.from_fraction(value)
        raise TypeError(f"cannot coerce {value!r} to a scalar")

    def embed_coef(self, coef, target):
        """Image of a coefficient under Q(zeta_m) -> Q(zeta_M), m | M."""
        if target is self:
            return coef
        if target.m % self.m != 0:
            raise ConductorError(f"no embedding of Q(zeta_{self.m}) into Q(zeta_{target.m})")
        t = target.m // self.m
        if target.deg >= 2:
            x = tuple([_F0, _F1] + [_F0] * (target.deg - 2))
        else:
            x = target.cfrac(-target._phi[0])
        step = target.cone
        for _ in range(t):
            step = target.cmul(step, x)
        out = target.czero
        xpow = target.cone
        for j, r in enumerate(coef):
            if j > 0:
                xpow = target.cmul(xpow, step)
            if r:
                out = target.cadd(out, tuple(r * y for y in xpow))
        return out


def _embed(s, target):
    if s.field.var != target.var:
        raise ConductorError(
            f"cannot mix scalars over variables {s.field.var!r} and {target.var!r}")
    num = target.ptrim([s.field.embed_coef(c, target) for c in s.num])
    den = target.ptrim([s.field.embed_coef(c, target) for c in s.den])
    return _make(target, num, den)


def _join(a, b):
    if a.field is b.field:
        return a, b
    if a.field.var != b.field.var:
        raise ConductorError(
            f"cannot mix scalars over variables {a.field.var!r} and {b.field.var!r}")
    ma, mb = a.field.m, b.field.m
    M = ma * mb // __import__("math").gcd(ma, mb)
    target = scalar_field(M, a.field.var)
    return _embed(a, target), _embed(b, target)


def _valuation(p, F):
    for j, c in enumerate(p):
        if not F.cis_zero(c):
            return j
    return len(p)


def _make(F, num, den):
    """Canonical reduced scalar num/den."""
    num, den = F.ptrim(num), F.ptrim(den)
    if not den:
        raise ScalarError("division by zero")
    if not num:
        return F.zero
    # cancel the common power of q
    v = min(_valuation(num, F), _valuation(den, F))
    if v:
        num, den = num[v:], den[v:]
    if len(den) == 1:
        c = den[0]
        if c != F.cone:
            num = F.pmulc(num, F.cinv(c))
        return Scalar(F, num, F.pone)
    if len(num) > 1:
        g = F.pgcd(num, den)
        if len(g) > 1:
            num = F.pdivmod(num, g)[0]
            den = F.pdivmod(den, g)[0]
    lc = den[-1]
    if lc != F.cone:
        ilc = F.cinv(lc)
        num = F.pmulc(num, ilc)
        den = F.pmulc(den, ilc)
    return Scalar(F, num, den)


class Scalar:
    """An element of Q(zeta_m)(q) in canonical reduced form."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Scalar):
            if other.field is self.field:
                return self, other
            return _join(self, other)
        if isinstance(other, (int, Fraction)):
            return self, self.field.from_fraction(other)
        return self, None

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        F = a.field
        if a.den == b.den:
            return _make(F, F.padd(a.num, b.num), a.den)
        num = F.padd(F.pmul(a.num, b.den), F.pmul(b.num, a.den))
        return _make(F, num, F.pmul(a.den, b.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, self.field.pneg(self.num), self.den)

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        F = a.field
        if not a.num or not b.num:
            return F.zero
        if a.den == F.pone and b.den == F.pone:
            return Scalar(F, F.pmul(a.num, b.num), F.pone)
        return _make(F, F.pmul(a.num, b.num), F.pmul(a.den, b.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        if not b.num:
            raise ScalarError("scalar division by zero")
        return _make(a.field, a.field.pmul(a.num, b.den), a.field.pmul(a.den, b.num))

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def inverse(self):
        if not self.num:
            raise ScalarError("zero is not invertible")
        return _make(self.field, self.den, self.num)

    def __pow__(self, e):
        e = int(e)
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = self.field.one
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- predicates and canonical forms ---------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num == self.field.pone and self.den == self.field.pone

    def is_minus_one(self):
        F = self.field
        return self.den == F.pone and self.num == (F.cfrac(-1),)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_fraction(other)
        elif not isinstance(other, Scalar):
            return NotImplemented
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        def strip(p):
            return tuple(tuple(_qp_trim(c)) for c in p)
        return hash((strip(self.num), strip(self.den), self.field.var))

    def __repr__(self):
        return f"Scalar({self.text()})"

    # -- substitutions ---------------------------------------------------------

    def subs_qinv(self):
        """The image under q -> q^(-1) (coefficients fixed)."""
        F = self.field
        N = max(len(self.num), len(self.den))
        num = list(reversed(self.num)) + [F.czero] * (N - len(self.num))
        den = list(reversed(self.den)) + [F.czero] * (N - len(self.den))
        # reversal with common padding computes p(1/q) * q^(N-1)
        return _make(F, num, den)

    def specialize(self, q0):
        """Evaluate at a rational point q0; the result is a constant scalar."""
        F = self.field
        dval = F.peval(self.den, Fraction(q0))
        if F.cis_zero(dval):
            raise ScalarError(f"denominator vanishes at q = {q0}")
        nval = F.peval(self.num, Fraction(q0))
        if F.cis_zero(nval):
            return F.zero
        return _make(F, (nval,), (dval,))

    def as_fraction(self):
        """The value as a Fraction, when it is a rational constant."""
        if self.is_zero():
            return _F0
        if len(self.num) == 1 and len(self.den) == 1 and self.den == F_pone(self.field):
            single = self.field.csingle(self.num[0])
            if single and single[0] == 0:
                return single[1]
        raise ScalarError("scalar is not a rational constant")

    # -- rendering ---------------------------------------------------------------

    def text(self):
        """Canonical equality-witness form, e.g. ``(q^2 - 1)/(q)``."""
        if not self.num:
            return "0"
        nt = _poly_text(self.field, self.num)
        if self.den == self.field.pone:
            return nt
        return f"({nt})/({_poly_text(self.field, self.den)})"

    def laurent_terms(self):
        """Descending (exponent, coefficient) pairs when den is a power of q."""
        F = self.field
        if not self.num:
            return []
        e = len(self.den) - 1
        if any(not F.cis_zero(c) for c in self.den[:-1]) or self.den[-1] != F.cone:
            return None
        out = []
        for j in range(len(self.num) - 1, -1, -1):
            c = self.num[j]
            if not F.cis_zero(c):
                out.append((j - e, c))
        return out

    def coeff_text(self):
        """Parseable text plus a flag telling whether it is a single product."""
        terms = self.laurent_terms()
        if terms is None:
            return self.text(), False
        if not terms:
            return "0", True
        parts = []
        for e, c in terms:
            body = _laurent_term_text(self.field, e, c)
            if not parts:
                parts.append(body)
            elif body.startswith("-"):
                parts.append(" - " + body[1:])
            else:
                parts.append(" + " + body)
        return "".join(parts), len(terms) == 1


def F_pone(F):
    return F.pone


def _laurent_term_text(F, e, c):
    qpart = None
    if e == 1:
        qpart = F.var
    elif e != 0:
        qpart = f"{F.var}^{e}"
    single = F.csingle(c)
    if single is None:
        body = f"({F.ctext(c)})"
        return f"{body}*{qpart}" if qpart else body
    j, r = single
    zpart = None
    if j == 1:
        zpart = "z"
    elif j > 1:
        zpart = f"z^{j}"
    pieces = []
    sign = "-" if r < 0 else ""
    r = abs(r)
    if r != 1 or (zpart is None and qpart is None):
        pieces.append(str(r))
    if zpart:
        pieces.append(zpart)
    if qpart:
        pieces.append(qpart)
    return sign + "*".join(pieces)


def _poly_text(F, p):
    parts = []
    for j in range(len(p) - 1, -1, -1):
        c = p[j]
        if F.cis_zero(c):
            continue
        body = _laurent_term_text(F, j, c)
        if not parts:
            parts.append(body)
        elif body.startswith("-"):
            parts.append(" - " + body[1:])
        else:
            parts.append(" + " + body)
    return "".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def cyclotomic_root(m):
    """zeta_m as a scalar in Q(zeta_m)(q)."""
    return scalar_field(int(m)).zeta(int(m))


def q_integer(n, base):
    """[n]_b = (b^n - b^(-n)) / (b - b^(-1))."""
    if not isinstance(base, Scalar):
        raise TypeError("base must be a Scalar")
    if base.is_zero():
        raise ScalarError("q-integer base must be invertible")
    binv = base.inverse()
    d = base - binv
    if d.is_zero():
        raise ScalarError("degenerate q-integer base: base equals its inverse")
    n = int(n)
    return (base ** n - binv ** n) / d


def q_factorial(n, base):
    n = int(n)
    if n < 0:
        raise ScalarError("q-factorial needs n >= 0")
    out = base.field.one
    for j in range(1, n + 1):
        out = out * q_integer(j, base)
    return out


def q_binomial(n, m, base):
    n, m = int(n), int(m)
    if not 0 <= m <= n:
        raise ScalarError("q-binomial needs 0 <= m <= n")
    return q_factorial(n, base) / (q_factorial(m, base) * q_factorial(n - m, base))
