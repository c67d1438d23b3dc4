"""The rank-n, twist-k quantized Clifford algebra: normal-form arithmetic.

An algebra context fixes the rank n, the twist k (a positive half-integer),
the generator presentation, and the scalar field.  Elements are finite maps
from normal-form monomials to nonzero scalars.  A monomial is stored as
(p, d, v): two n-bit masks for the odd generator exponents and a tuple of
omega exponents, each in [0, 2k).

Multiplication works index by index through a cached rank-1 product table
and composes across indices with a Koszul sign, which is exactly the tensor
factorization of the algebra into rank-1 pieces.  Products of pure omega
powers at or above 2k reduce through the even part; omega powers next to an
odd generator reduce by periodicity (a factor q^(-2k) per period when only
the raising generator is present).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .scalar import Scalar, ScalarError, scalar_field

__all__ = [
    "AlgebraContext",
    "Element",
    "AltElement",
    "QCliffError",
    "ContextError",
    "ConventionError",
    "ScaleError",
    "PSI",
    "PHI",
    "generator",
    "omega_power",
    "multiply",
    "enumerate_basis",
    "basis_element",
    "degree",
    "involution",
    "INVOLUTION_KINDS",
    "to_alt_basis",
    "from_alt_basis",
    "enumerate_alt_basis",
    "convert_convention",
    "defining_relation_residuals",
]

PSI = "psi"
PHI = "phi"


class QCliffError(Exception):
    """Base error for the package."""


class ContextError(QCliffError):
    """Incompatible contexts, bad parameters, or violated numeric guards."""


class ConventionError(ContextError):
    """Operation not available in the context's generator presentation."""


class ScaleError(ContextError):
    """A desk-scale verification tool was asked for an oversized instance."""


def _as_twist(k):
    if isinstance(k, str):
        k = Fraction(k)
    k = Fraction(k)
    if k <= 0 or (2 * k).denominator != 1:
        raise ContextError(f"twist must be a positive half-integer, got {k}")
    return k


class AlgebraContext:
    """Immutable description of one algebra Cl_q(n, k) plus scalar caches."""

    def __init__(self, n, k, convention=PSI, q="formal", conductor=None, sqrt_q=False):
        n = int(n)
        if n < 1:
            raise ContextError("rank must be a positive integer")
        k = _as_twist(k)
        if convention not in (PSI, PHI):
            raise ContextError(f"unknown convention {convention!r}")
        if convention == PSI and k.denominator != 1:
            raise ConventionError("the psi presentation requires an integer twist")
        self.n = n
        self.k = k
        self.two_k = int(2 * k)
        self.convention = convention
        self.sqrt_q = bool(sqrt_q)
        m = int(conductor) if conductor is not None else (
            self.two_k if k.denominator == 1 else 2 * self.two_k)
        m = max(m, 1)
        self.m = m
        self.field = scalar_field(m, "s" if self.sqrt_q else "q")
        if q == "formal":
            self.q_is_formal = True
            self.q_value = None
            g = self.field.q
            self.q = g * g if self.sqrt_q else g
        else:
            if self.sqrt_q:
                raise ContextError("numeric q and a square-root base cannot be combined")
            qv = Fraction(q)
            if qv == 0:
                raise ContextError("q must be invertible")
            self.q_is_formal = False
            self.q_value = qv
            self.q = self.field.from_fraction(qv)
        self.zeta2k = self.field.zeta(self.two_k)
        self.key = (self.n, self.k, self.convention, self.m,
                    self.field.var, "formal" if self.q_is_formal else str(self.q_value))
        self._qpow = {}
        self._site = {}
        self._omega = {}
        self._basis = None
        self._images = {}
        self._twins = {}

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, AlgebraContext) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        gens = self.convention
        qs = "q" if self.q_is_formal else f"q={self.q_value}"
        return f"AlgebraContext(n={self.n}, k={self.k}, {gens}, {qs})"

    def compatible(self, other):
        if not (isinstance(other, AlgebraContext) and self.key == other.key):
            raise ContextError(f"context mismatch: {self!r} vs {other!r}")

    @property
    def dim(self):
        return (4 * self.two_k) ** self.n

    def is_integer_twist(self):
        return self.k.denominator == 1

    def q_root_of_unity(self):
        """True when q^(2k) = 1; never in formal mode."""
        return (self.q ** self.two_k).is_one()

    def twin(self, convention=None, n=None):
        """A context that differs only in presentation and/or rank."""
        convention = convention or self.convention
        n = n or self.n
        key = (convention, n)
        t = self._twins.get(key)
        if t is None:
            t = AlgebraContext(n, self.k, convention,
                               q="formal" if self.q_is_formal else self.q_value,
                               conductor=self.m, sqrt_q=self.sqrt_q)
            self._twins[key] = t
        return t

    # -- scalar helpers --------------------------------------------------------

    def qpow(self, e):
        s = self._qpow.get(e)
        if s is None:
            s = self.q ** e
            self._qpow[e] = s
        return s

    def coerce_scalar(self, value):
        return self.field.coerce(value)

    # -- monomials ---------------------------------------------------------------

    def identity_monomial(self):
        return (0, 0, (0,) * self.n)

    def monomial_valid(self, mono):
        p, d, v = mono
        top = 1 << self.n
        return (0 <= p < top and 0 <= d < top and len(v) == self.n
                and all(0 <= x < self.two_k for x in v))

    # -- the rank-1 product table ---------------------------------------------

    def _pure_omega_terms(self, V, coeff):
        """Expansion of a pure omega power in the normal-form basis."""
        tk = self.two_k
        mid = int(self.k) if self.convention == PSI else 0
        one_minus = self.field.one - self.qpow(-tk)
        out = []
        while V >= tk:
            out.append(((1, 1, (V - tk + mid) % tk), coeff * one_minus))
            coeff = coeff * self.qpow(-tk)
            V -= tk
        out.append(((0, 0, V), coeff))
        return out

    def _site_mul(self, s1, s2):
        """Product of two rank-1 normal monomials as normal-form terms."""
        key = (s1, s2)
        cached = self._site.get(key)
        if cached is not None:
            return cached
        p, d, v = s1
        p2, d2, v2 = s2
        tk = self.two_k
        move = self.qpow(v * (p2 - d2)) if v and p2 != d2 else self.field.one
        raw = []
        if d and p2:
            if self.convention == PSI:
                kk = int(self.k)
                raw.append(((p, d2, v + v2 + kk), move * self.qpow(kk * (1 - d2))))
                if not p and not d2:
                    raw.append(((1, 1, v + v2), -(move * self.qpow(kk))))
            else:
                raw.append(((p, d2, v + v2), move))
                if not p and not d2:
                    raw.append(((1, 1, v + v2), -move))
        elif (p and p2) or (d and d2):
            raw = []
        else:
            raw.append(((p | p2, d | d2, v + v2), move))
        out = {}
        for (P, D, V), c in raw:
            if D:
                pieces = [((P, D, V % tk), c)]
            elif P:
                t, V = divmod(V, tk)
                pieces = [((P, 0, V), c * self.qpow(-tk * t) if t else c)]
            elif V >= tk:
                pieces = self._pure_omega_terms(V, c)
            else:
                pieces = [((0, 0, V), c)]
            for mono, cc in pieces:
                prev = out.get(mono)
                cc = cc if prev is None else prev + cc
                if cc.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = cc
        cached = tuple(out.items())
        self._site[key] = cached
        return cached


def _koszul_sign(left_parity, right_parity, n):
    """Parity of inversions when merging per-index factors."""
    sign = 0
    rp = right_parity
    a = 0
    while rp:
        if rp & 1:
            sign ^= (left_parity >> (a + 1)).bit_count() & 1
        rp >>= 1
        a += 1
    return sign


def _mono_mul(ctx, M, N):
    """Product of two normal monomials as a dict of normal terms."""
    p1, d1, v1 = M
    p2, d2, v2 = N
    sign = _koszul_sign(p1 ^ d1, p2 ^ d2, ctx.n)
    site_terms = []
    for a in range(ctx.n):
        s1 = ((p1 >> a) & 1, (d1 >> a) & 1, v1[a])
        s2 = ((p2 >> a) & 1, (d2 >> a) & 1, v2[a])
        terms = ctx._site_mul(s1, s2)
        if not terms:
            return {}
        site_terms.append(terms)
    out = {}
    for combo in itertools.product(*site_terms):
        p, d = 0, 0
        v = []
        coeff = None
        for a, ((P, D, V), c) in enumerate(combo):
            p |= P << a
            d |= D << a
            v.append(V)
            coeff = c if coeff is None else coeff * c
        if sign:
            coeff = -coeff
        mono = (p, d, tuple(v))
        prev = out.get(mono)
        coeff = coeff if prev is None else prev + coeff
        if coeff.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = coeff
    return out


def _mono_sort_key(mono):
    p, d, v = mono
    return tuple((p >> a & 1, d >> a & 1, v[a]) for a in range(len(v)))


def _mono_text(mono):
    p, d, v = mono
    parts = []
    for a in range(len(v)):
        if p >> a & 1:
            parts.append(f"p{a + 1}")
        if d >> a & 1:
            parts.append(f"d{a + 1}")
        if v[a]:
            parts.append(f"w{a + 1}" if v[a] == 1 else f"w{a + 1}^{v[a]}")
    return "*".join(parts)


class Element:
    """A finite scalar combination of normal-form monomials."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = terms if terms is not None else {}

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return Element(ctx)

    @staticmethod
    def one(ctx):
        return Element(ctx, {ctx.identity_monomial(): ctx.field.one})

    @staticmethod
    def from_scalar(ctx, value):
        s = ctx.coerce_scalar(value)
        if s.is_zero():
            return Element(ctx)
        return Element(ctx, {ctx.identity_monomial(): s})

    @staticmethod
    def from_monomial(ctx, mono, coeff=None):
        if not ctx.monomial_valid(mono):
            raise ContextError(f"monomial {mono} is not valid for {ctx!r}")
        c = ctx.field.one if coeff is None else ctx.coerce_scalar(coeff)
        return Element(ctx, {mono: c} if not c.is_zero() else {})

    # -- ring structure ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Element):
            self.ctx.compatible(other.ctx)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Element.from_scalar(self.ctx, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            prev = out.get(mono)
            c = c if prev is None else prev + c
            if c.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = c
        return Element(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value):
        s = self.ctx.coerce_scalar(value)
        if s.is_zero():
            return Element(self.ctx)
        return Element(self.ctx, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self.ctx.compatible(other.ctx)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for mono, c in _mono_mul(self.ctx, m1, m2).items():
                    c = c * c12
                    prev = out.get(mono)
                    c = c if prev is None else prev + c
                    if c.is_zero():
                        out.pop(mono, None)
                    else:
                        out[mono] = c
        return Element(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            raise ContextError("negative powers are only defined for invertible elements")
        out = Element.one(self.ctx)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- predicates ---------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.key, tuple(sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0])))))

    def coefficient(self, mono):
        return self.terms.get(mono, self.ctx.field.zero)

    def items(self):
        """Terms in the canonical (p, d, v)-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    def parity(self):
        """0/1 when homogeneous mod 2, None otherwise."""
        par = None
        for (p, d, _v) in self.terms:
            cur = (p ^ d).bit_count() & 1
            if par is None:
                par = cur
            elif par != cur:
                return None
        return 0 if par is None else par

    # -- rendering -------------------------------------------------------------------

    def text(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.items():
            ms = _mono_text(mono)
            body, single = c.coeff_text()
            if not ms:
                piece = body if single else f"({body})"
            elif c.is_one():
                piece = ms
            elif c.is_minus_one():
                piece = "-" + ms
            elif single:
                piece = f"{body}*{ms}"
            else:
                piece = f"({body})*{ms}"
            if not parts:
                parts.append(piece)
            elif piece.startswith("-"):
                parts.append(" - " + piece[1:])
            else:
                parts.append(" + " + piece)
        return "".join(parts)

    __str__ = text

    def __repr__(self):
        return f"<{self.text()}>"

    def records(self):
        """Bit-exact serialization records."""
        n = self.ctx.n
        out = []
        for (p, d, v), c in self.items():
            out.append({
                "p": [(p >> a) & 1 for a in range(n)],
                "d": [(d >> a) & 1 for a in range(n)],
                "v": list(v),
                "coeff": c.text(),
            })
        return out


# ---------------------------------------------------------------------------
# generators and basic operations
# ---------------------------------------------------------------------------

_GEN_KINDS = {
    PSI: ("psi", "psid", "w"),
    PHI: ("phi", "phid", "w"),
}


def generator(ctx, kind, a):
    """The generator element: psi/psid/w in the psi presentation, phi/phid/w otherwise."""
    if kind not in _GEN_KINDS[ctx.convention]:
        raise ConventionError(f"generator {kind!r} is not part of the {ctx.convention} presentation")
    a = int(a)
    if not 1 <= a <= ctx.n:
        raise ContextError(f"generator index {a} out of range 1..{ctx.n}")
    bit = 1 << (a - 1)
    zero_v = (0,) * ctx.n
    if kind in ("psi", "phi"):
        mono = (bit, 0, zero_v)
    elif kind in ("psid", "phid"):
        mono = (0, bit, zero_v)
    else:
        v = list(zero_v)
        v[a - 1] = 1
        if ctx.two_k == 1:
            # 2k = 1 forces omega into the even part immediately
            return omega_power(ctx, a, 1)
        mono = (0, 0, tuple(v))
    return Element(ctx, {mono: ctx.field.one})


def multiply(x, y):
    return x * y


def omega_power(ctx, a, e):
    """Normal form of omega_a^e for any integer e."""
    a, e = int(a), int(e)
    if not 1 <= a <= ctx.n:
        raise ContextError(f"index {a} out of range 1..{ctx.n}")
    key = (a, e)
    cached = ctx._omega.get(key)
    if cached is not None:
        return cached
    if e >= 0:
        terms = {}
        for (P, D, V), c in ctx._pure_omega_terms(e, ctx.field.one):
            v = [0] * ctx.n
            v[a - 1] = V
            terms[(P << (a - 1), D << (a - 1), tuple(v))] = c
        out = Element(ctx, terms)
    else:
        tk = ctx.two_k
        w_inv = (omega_power(ctx, a, 2 * tk - 1).scale(-(ctx.qpow(tk)))
                 + omega_power(ctx, a, tk - 1).scale(ctx.qpow(tk) + 1))
        out = w_inv ** (-e)
    ctx._omega[key] = out
    return out


def enumerate_basis(ctx):
    """All normal-form monomials, lexicographically ordered."""
    if ctx._basis is None:
        site = [(p, d, v) for p in (0, 1) for d in (0, 1) for v in range(ctx.two_k)]
        out = []
        for combo in itertools.product(site, repeat=ctx.n):
            p, d = 0, 0
            v = []
            for a, (P, D, V) in enumerate(combo):
                p |= P << a
                d |= D << a
                v.append(V)
            out.append((p, d, tuple(v)))
        out.sort(key=_mono_sort_key)
        ctx._basis = out
    return list(ctx._basis)


def basis_element(ctx, mono):
    return Element.from_monomial(ctx, mono)


def degree(x):
    """The common Z^n-degree p - d, or None when inhomogeneous."""
    deg = None
    for (p, d, _v) in x.terms:
        cur = tuple(((p >> a) & 1) - ((d >> a) & 1) for a in range(x.ctx.n))
        if deg is None:
            deg = cur
        elif deg != cur:
            return None
    return deg if deg is not None else (0,) * x.ctx.n


# ---------------------------------------------------------------------------
# (anti-)involutions
# ---------------------------------------------------------------------------
#
# Each map is specified by generator images, an optional q -> q^(-1) action
# on coefficients, and whether it reverses products.  In numeric mode the
# q-inverting maps require q = q^(-1) (that is, q = +-1): no automorphism of
# the constant field tracks the inversion otherwise.

INVOLUTION_KINDS = (
    "grade", "grade_tilde", "transpose", "dagger", "duality",
    "conjugation", "dual_dagger", "transpose_duality", "kappa_check",
)

_INV_SPEC = {
    # kind: (anti, qinv)
    "grade": (False, False),
    "grade_tilde": (False, False),
    "transpose": (True, False),
    "dagger": (True, False),
    "duality": (True, True),
    "conjugation": (True, False),
    "dual_dagger": (False, True),
    "transpose_duality": (False, True),
    "kappa_check": (False, True),
}


def _involution_images(ctx, kind):
    cached = ctx._images.get(kind)
    if cached is not None:
        return cached
    psi = [generator(ctx, "psi", a) for a in range(1, ctx.n + 1)]
    psid = [generator(ctx, "psid", a) for a in range(1, ctx.n + 1)]
    w = [generator(ctx, "w", a) for a in range(1, ctx.n + 1)]
    winv = [omega_power(ctx, a, -1) for a in range(1, ctx.n + 1)]
    q = ctx.q
    if kind == "grade":
        imgs = ([-g for g in psi], [-g for g in psid], w)
    elif kind == "grade_tilde":
        imgs = ([-g for g in psi], [-g for g in psid], [-g for g in w])
    elif kind == "transpose":
        imgs = (psi, psid, [g.scale(q ** -1) for g in winv])
    elif kind == "dagger":
        imgs = (psid, psi, w)
    elif kind == "duality":
        imgs = (psid, psi, winv)
    elif kind == "conjugation":
        imgs = ([-g for g in psi], [-g for g in psid], [g.scale(q ** -1) for g in winv])
    elif kind == "dual_dagger":
        imgs = (psi, psid, winv)
    elif kind == "transpose_duality":
        imgs = (psid, psi, [g.scale(q) for g in w])
    elif kind == "kappa_check":
        imgs = (psid, psi, [g.scale(q ** -1) for g in w])
    else:
        raise ContextError(f"unknown involution kind {kind!r}")
    ctx._images[kind] = imgs
    return imgs


def involution(kind, x):
    """Apply one of the nine (anti-)involutions to an element."""
    ctx = x.ctx
    if kind not in _INV_SPEC:
        raise ContextError(f"unknown involution kind {kind!r}")
    if ctx.convention == PHI:
        if not ctx.is_integer_twist():
            raise ConventionError("involutions on the phi presentation need an integer twist")
        back = convert_convention(x, PSI)
        return convert_convention(involution(kind, back), PHI)
    anti, qinv = _INV_SPEC[kind]
    if kind == "grade_tilde" and (not ctx.is_integer_twist() or int(ctx.k) % 2):
        raise ContextError("grade_tilde needs an even integer twist")
    if kind == "kappa_check" and not ctx.q_root_of_unity():
        raise ContextError("kappa_check needs q^(2k) = 1 (numeric mode)")
    if qinv and not ctx.q_is_formal and not (ctx.q * ctx.q).is_one():
        raise ContextError("q -> q^(-1) maps need formal q or q = +-1 in numeric mode")
    imgs_p, imgs_d, imgs_w = _involution_images(ctx, kind)
    out = Element.zero(ctx)
    for (p, d, v), c in x.terms.items():
        factors = []
        for a in range(ctx.n):
            if (p >> a) & 1:
                factors.append(imgs_p[a])
            if (d >> a) & 1:
                factors.append(imgs_d[a])
            if v[a]:
                factors.append(imgs_w[a] ** v[a])
        if anti:
            factors.reverse()
        acc = Element.from_scalar(ctx, c.subs_qinv() if qinv else c)
        for f in factors:
            acc = acc * f
        out = out + acc
    return out


# ---------------------------------------------------------------------------
# the omega-heavy alternative basis (q^(2k) != 1)
# ---------------------------------------------------------------------------
#
# Per index the even monomials psi psid w^u trade places with the pure powers
# w^u, u in [0, 4k); odd monomials keep the range [0, 2k).  The paper's
# bound "v <= k" for odd monomials undercounts for k >= 2 (the odd part has
# dimension 4k per index); both versions agree at k = 1.

class AltElement:
    """An expansion in the omega-heavy basis; monomials use the same shape."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = terms if terms is not None else {}

    def items(self):
        return sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    def __eq__(self, other):
        return isinstance(other, AltElement) and self.ctx == other.ctx and self.terms == other.terms

    def text(self):
        return Element(self.ctx, self.terms).text() if self.terms else "0"

    __str__ = text

    def __repr__(self):
        return f"<alt {self.text()}>"


def _alt_guard(ctx):
    if ctx.convention != PSI or not ctx.is_integer_twist():
        raise ConventionError("the alternative basis is defined for the psi presentation at integer twist")
    if not ctx.q_is_formal and ctx.q_root_of_unity():
        raise ContextError("the alternative basis requires q^(2k) != 1")


def to_alt_basis(x):
    """Rewrite an element in the omega-heavy basis."""
    ctx = x.ctx
    _alt_guard(ctx)
    k = int(ctx.k)
    tk = ctx.two_k
    denom = ctx.qpow(tk) - 1
    hi = ctx.qpow(tk) / denom
    lo = ctx.field.one / denom
    out = {}
    for (p, d, v), c in x.terms.items():
        site_terms = []
        for a in range(ctx.n):
            pa, da, va = (p >> a) & 1, (d >> a) & 1, v[a]
            if pa and da:
                if va < k:
                    site_terms.append((((0, 0, 3 * k + va), hi), ((0, 0, k + va), -lo)))
                else:
                    site_terms.append((((0, 0, va + k), lo), ((0, 0, va - k), -(ctx.qpow(-tk) * lo))))
            else:
                site_terms.append((((pa, da, va), ctx.field.one),))
        for combo in itertools.product(*site_terms):
            P, D = 0, 0
            V = []
            coeff = c
            for a, ((pa, da, va), cc) in enumerate(combo):
                P |= pa << a
                D |= da << a
                V.append(va)
                if not cc.is_one():
                    coeff = coeff * cc
            mono = (P, D, tuple(V))
            prev = out.get(mono)
            coeff = coeff if prev is None else prev + coeff
            if coeff.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = coeff
    return AltElement(ctx, out)


def from_alt_basis(alt):
    """Rewrite an omega-heavy expansion back in the standard basis."""
    ctx = alt.ctx
    _alt_guard(ctx)
    out = Element.zero(ctx)
    for (p, d, v), c in alt.terms.items():
        acc = Element.from_scalar(ctx, c)
        for a in range(ctx.n):
            bit = 1 << a
            zero_v = (0,) * ctx.n
            if (p >> a) & 1:
                acc = acc * Element(ctx, {(bit, 0, zero_v): ctx.field.one})
            if (d >> a) & 1:
                acc = acc * Element(ctx, {(0, bit, zero_v): ctx.field.one})
            if v[a]:
                acc = acc * omega_power(ctx, a + 1, v[a])
        out = out + acc
    return out


def enumerate_alt_basis(ctx):
    _alt_guard(ctx)
    tk = ctx.two_k
    site = [(0, 0, u) for u in range(2 * tk)]
    site += [(1, 0, u) for u in range(tk)]
    site += [(0, 1, u) for u in range(tk)]
    out = []
    for combo in itertools.product(site, repeat=ctx.n):
        p, d = 0, 0
        v = []
        for a, (P, D, V) in enumerate(combo):
            p |= P << a
            d |= D << a
            v.append(V)
        out.append((p, d, tuple(v)))
    out.sort(key=_mono_sort_key)
    return out


# ---------------------------------------------------------------------------
# presentation change: phi_a = psi_a, phid_a = psid_a * w_a^k
# ---------------------------------------------------------------------------

def convert_convention(x, target):
    """Re-express an element in the other presentation's normal form."""
    ctx = x.ctx
    if target not in (PSI, PHI):
        raise ContextError(f"unknown convention {target!r}")
    if target == ctx.convention:
        return x
    if not ctx.is_integer_twist():
        raise ConventionError("both presentations exist only for integer twists")
    k = int(ctx.k)
    tctx = ctx.twin(target)
    shift = -k if target == PHI else k
    out = Element.zero(tctx)
    raising = "phi" if target == PHI else "psi"
    lowering = "phid" if target == PHI else "psid"
    for (p, d, v), c in x.terms.items():
        acc = Element.from_scalar(tctx, c)
        for a in range(1, ctx.n + 1):
            bit = 1 << (a - 1)
            e = v[a - 1]
            if p & bit:
                acc = acc * generator(tctx, raising, a)
            if d & bit:
                acc = acc * generator(tctx, lowering, a)
                e += shift
            if e:
                acc = acc * omega_power(tctx, a, e)
        out = out + acc
    return out


# ---------------------------------------------------------------------------
# defining-relation residuals (all should be zero)
# ---------------------------------------------------------------------------

def defining_relation_residuals(ctx):
    """Labeled residual elements of every defining relation of the context."""
    n = ctx.n
    q = ctx.q
    one = Element.one(ctx)
    res = []
    if ctx.convention == PSI:
        k = int(ctx.k)
        psi = {a: generator(ctx, "psi", a) for a in range(1, n + 1)}
        psid = {a: generator(ctx, "psid", a) for a in range(1, n + 1)}
        w = {a: generator(ctx, "w", a) for a in range(1, n + 1)}
        winv = {a: omega_power(ctx, a, -1) for a in range(1, n + 1)}
        for a in range(1, n + 1):
            res.append((f"w{a}*winv{a}=1", w[a] * winv[a] - one))
            res.append((f"pd_qk:{a}", psi[a] * psid[a] + psid[a] * psi[a].scale(q ** k)
                        - omega_power(ctx, a, -k)))
            res.append((f"pd_qmk:{a}", psi[a] * psid[a] + psid[a] * psi[a].scale(q ** -k)
                        - omega_power(ctx, a, k)))
            for b in range(1, n + 1):
                dab = 1 if a == b else 0
                res.append((f"wp:{a},{b}", w[a] * psi[b] - (psi[b] * w[a]).scale(q ** dab)))
                res.append((f"wd:{a},{b}", w[a] * psid[b] - (psid[b] * w[a]).scale(q ** -dab)))
                res.append((f"pp:{a},{b}", psi[a] * psi[b] + psi[b] * psi[a]))
                res.append((f"dd:{a},{b}", psid[a] * psid[b] + psid[b] * psid[a]))
                if a < b:
                    res.append((f"ww:{a},{b}", w[a] * w[b] - w[b] * w[a]))
                if a != b:
                    res.append((f"pd0:{a},{b}", psi[a] * psid[b] + psid[b] * psi[a]))
    else:
        tk = ctx.two_k
        phi = {a: generator(ctx, "phi", a) for a in range(1, n + 1)}
        phid = {a: generator(ctx, "phid", a) for a in range(1, n + 1)}
        w = {a: generator(ctx, "w", a) for a in range(1, n + 1)}
        for a in range(1, n + 1):
            res.append((f"quartic:{a}", omega_power(ctx, a, 2 * tk)
                        - omega_power(ctx, a, tk).scale(1 + q ** -tk)
                        + Element.from_scalar(ctx, q ** -tk)))
            res.append((f"cac:{a}", phi[a] * phid[a] + phid[a] * phi[a] - one))
            res.append((f"pd_q2k:{a}", phi[a] * phid[a] + (phid[a] * phi[a]).scale(q ** -tk)
                        - omega_power(ctx, a, tk)))
            for b in range(1, n + 1):
                dab = 1 if a == b else 0
                res.append((f"wp:{a},{b}", w[a] * phi[b] - (phi[b] * w[a]).scale(q ** dab)))
                res.append((f"wd:{a},{b}", w[a] * phid[b] - (phid[b] * w[a]).scale(q ** -dab)))
                res.append((f"pp:{a},{b}", phi[a] * phi[b] + phi[b] * phi[a]))
                res.append((f"dd:{a},{b}", phid[a] * phid[b] + phid[b] * phid[a]))
                if a < b:
                    res.append((f"ww:{a},{b}", w[a] * w[b] - w[b] * w[a]))
                if a != b:
                    res.append((f"pd0:{a},{b}", phi[a] * phid[b] + phid[b] * phi[a]))
    return res
