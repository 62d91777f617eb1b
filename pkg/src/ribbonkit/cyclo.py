"""Exact arithmetic in the cyclotomic field Q(zeta_N) with N = 4p.

Elements are residues in the power basis 1, z, ..., z^{phi(N)-1} modulo the
minimal polynomial Phi_N(z), with arbitrary-precision rational coefficients.
The distinguished roots are q = zeta_N^2 (so q = e^{pi*i/p} under the
reporting embedding) and the square-root branch q^{1/2} = zeta_N.

No floating point participates in any decision: equality is coefficient
equality of fully reduced residues. embed_complex is reporting-only.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class ContextMismatch(ValueError):
    """Operands belong to different field contexts."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists)


_ZERO = Fraction(0)


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_monic(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide by a monic integer polynomial; exact integer arithmetic."""
    num = list(num)
    dd = len(den) - 1
    assert den[-1] == 1
    quot = [0] * max(len(num) - dd, 0)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def _cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Phi_n as ascending integer coefficients, by exact division of x^n - 1
    by the product of Phi_d over proper divisors d."""
    num = [-1] + [0] * (n - 1) + [1]
    den: list[int] = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, _cyclotomic_poly(d))
    quot, rem = _poly_divmod_monic(num, den)
    assert rem == [0], f"Phi_{n} division not exact"
    return tuple(quot)


# ---------------------------------------------------------------------------


class FieldContext:
    """Q(zeta_{4p}): minimal polynomial, reduction data, cached root powers.

    Instances are immutable and interned per p via field(p).
    """

    def __init__(self, p: int):
        if p < 2:
            raise ValueError(f"p must be >= 2, got {p}")
        self.p = p
        self.N = 4 * p
        self.minimal_polynomial: tuple[int, ...] = _cyclotomic_poly(self.N)
        self.degree = len(self.minimal_polynomial) - 1
        # row j holds x^{degree+j} mod Phi as Fractions, enough rows to
        # reduce any product of two residues (top power 2*degree - 2)
        top = [Fraction(-c) for c in self.minimal_polynomial[: self.degree]]
        rows = [top]
        for _ in range(self.degree - 2):
            prev = rows[-1]
            carry = prev[-1]
            nxt = [Fraction(0)] + prev[:-1]
            if carry:
                nxt = [nxt[i] + carry * top[i] for i in range(self.degree)]
            rows.append(nxt)
        self._reduction_rows = rows
        # sparse view of the same rows for the multiplication hot path
        self._reduction_sparse = [
            tuple((i, c) for i, c in enumerate(row) if c) for row in rows
        ]
        # all N powers of zeta as reduced residues
        powers = []
        cur = [Fraction(1)] + [Fraction(0)] * (self.degree - 1)
        for _ in range(self.N):
            powers.append(tuple(cur))
            carry = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if carry:
                cur = [cur[i] + carry * top[i] for i in range(self.degree)]
        self._root_powers = powers
        self._qint_cache: dict[int, CycNumber] = {}

    # -- constructors

    def zero(self) -> "CycNumber":
        return CycNumber(self, [])

    def one(self) -> "CycNumber":
        return CycNumber(self, [1])

    def rational(self, x) -> "CycNumber":
        return CycNumber(self, [Fraction(x)])

    def root(self, k: int) -> "CycNumber":
        """zeta_N^k, k taken mod N."""
        return CycNumber._raw(self, self._root_powers[k % self.N])

    def q(self) -> "CycNumber":
        return self.root(2)

    def qhalf(self) -> "CycNumber":
        return self.root(1)

    def header(self) -> str:
        return f"cyclotomic(N={self.N})"

    def __repr__(self):
        return f"FieldContext(p={self.p})"


@lru_cache(maxsize=None)
def field(p: int) -> FieldContext:
    return FieldContext(p)


class CycNumber:
    """A residue in Q[z]/(Phi_{4p}(z)), always fully reduced."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > ctx.degree:
            if len(cs) > 2 * ctx.degree - 1:
                raise ValueError("coefficient list too long to reduce in one pass")
            rows = ctx._reduction_rows
            base = cs[: ctx.degree]
            for j, c in enumerate(cs[ctx.degree:]):
                if c:
                    row = rows[j]
                    base = [base[i] + c * row[i] for i in range(ctx.degree)]
            cs = base
        cs += [Fraction(0)] * (ctx.degree - len(cs))
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, ctx, coeffs) -> "CycNumber":
        # trusted constructor: coeffs already reduced Fractions of full length
        self = object.__new__(cls)
        self.ctx = ctx
        self.coeffs = tuple(coeffs)
        return self

    # -- predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.ctx is not self.ctx:
                raise ContextMismatch(
                    f"mixed contexts p={self.ctx.p} and p={other.ctx.p}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNumber._raw(
            self.ctx, [a + b for a, b in zip(self.coeffs, o.coeffs)]
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNumber._raw(
            self.ctx, [a - b for a, b in zip(self.coeffs, o.coeffs)]
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycNumber._raw(self.ctx, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycNumber._raw(self.ctx, [a * f for a in self.coeffs])
        n = self.ctx.degree
        out = [_ZERO] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] += a * b
        base = out[:n]
        sparse = self.ctx._reduction_sparse
        for j in range(n - 1):
            c = out[n + j]
            if c:
                for i, r in sparse[j]:
                    base[i] += c * r
        return CycNumber._raw(self.ctx, base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inv()
        n = abs(n)
        result = self.ctx.one()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inv(self) -> "CycNumber":
        """Multiplicative inverse via extended Euclid against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        if self.is_rational():
            return self.ctx.rational(1 / self.coeffs[0])
        # work over Q[x]: r0 = Phi, r1 = self; keep t-coefficients only
        ctx = self.ctx
        r0 = [Fraction(c) for c in ctx.minimal_polynomial]
        r1 = list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        t0: list[Fraction] = [Fraction(0)]
        t1: list[Fraction] = [Fraction(1)]

        def pdiv(a: list[Fraction], b: list[Fraction]):
            a = a[:]
            db = len(b) - 1
            lead = b[-1]
            q = [Fraction(0)] * max(len(a) - db, 1)
            for k in range(len(a) - 1, db - 1, -1):
                if a[k]:
                    c = a[k] / lead
                    q[k - db] = c
                    for j in range(db + 1):
                        a[k - db + j] -= c * b[j]
            while len(a) > 1 and a[-1] == 0:
                a.pop()
            return q, a

        def padd_scaled(a, q, b):
            # a - q*b
            out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
            for i, x in enumerate(q):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] -= x * y
            while len(out) > 1 and out[-1] == 0:
                out.pop()
            return out

        while not (len(r1) == 1 and r1[0] == 0):
            q, r = pdiv(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, padd_scaled(t0, q, t1)
        # r0 is the gcd, a nonzero constant (Phi_N is irreducible)
        g = r0[0]
        assert len(r0) == 1 and g != 0
        return CycNumber(ctx, [c / g for c in t0])

    # -- equality / hashing

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.rational(other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        if other.ctx is not self.ctx:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.coeffs))

    # -- serialization

    def __str__(self):
        terms = []
        for k in range(self.ctx.degree - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"<cyc p={self.ctx.p}: {self}>"


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+(?:/\d+)?)?\*?(?:(?P<var>z)(?:\^(?P<pow>\d+))?)?$"
)


def parse_cyc(ctx: FieldContext, text: str) -> CycNumber:
    """Inverse of str(): parse '1/2*z^3 - z' style polynomials in z."""
    s = text.strip()
    if s == "0":
        return ctx.zero()
    s = s.replace(" - ", " + -")
    coeffs = [Fraction(0)] * ctx.degree
    for part in s.split(" + "):
        part = part.strip()
        sign = 1
        if part.startswith("-"):
            sign = -1
            part = part[1:]
        m = _TERM_RE.match(part)
        if m is None or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError(f"cannot parse cyclotomic term {part!r}")
        c = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if m.group("var") is None:
            k = 0
        elif m.group("pow") is None:
            k = 1
        else:
            k = int(m.group("pow"))
        if k >= ctx.degree:
            raise ValueError(f"power z^{k} out of range for degree {ctx.degree}")
        coeffs[k] += sign * c
    return CycNumber(ctx, coeffs)


# ---------------------------------------------------------------------------
# free-function aliases for the method API


def make_root(ctx: FieldContext, k: int) -> CycNumber:
    return ctx.root(k)


def add(a: CycNumber, b: CycNumber) -> CycNumber:
    return a + b


def mul(a: CycNumber, b: CycNumber) -> CycNumber:
    return a * b


def neg(a: CycNumber) -> CycNumber:
    return -a


def inv(a: CycNumber) -> CycNumber:
    return a.inv()


def qint(ctx: FieldContext, n: int) -> CycNumber:
    """[n] = (q^n - q^{-n})/(q - q^{-1})."""
    cached = ctx._qint_cache.get(n)
    if cached is not None:
        return cached
    q = ctx.q()
    val = (q**n - q**-n) / (q - q**-1)
    ctx._qint_cache[n] = val
    return val


def qfact(ctx: FieldContext, n: int) -> CycNumber:
    """[n]! = [1][2]...[n]."""
    out = ctx.one()
    for k in range(1, n + 1):
        out = out * qint(ctx, k)
    return out


def qbinom(ctx: FieldContext, n: int, k: int) -> CycNumber:
    """[n choose k] = [n]!/([k]![n-k]!); requires the denominator nonzero."""
    den = qfact(ctx, k) * qfact(ctx, n - k)
    if den.is_zero():
        raise ZeroDivisionError(f"[{k}]! [{n - k}]! vanishes at p={ctx.p}")
    return qfact(ctx, n) / den


def embed_complex(a: CycNumber) -> complex:
    """Numerical image under zeta_N -> e^{2*pi*i/N}; reporting only."""
    z = cmath.exp(2j * cmath.pi / a.ctx.N)
    out = 0j
    for c in reversed(a.coeffs):
        out = out * z + complex(c)
    return out
