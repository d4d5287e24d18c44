"""Exact arithmetic in the field F = Q(i)(t).

Elements are rational functions in one variable t whose coefficients are
Gaussian rationals.  The deformation parameter q is represented through its
square root, q = t^2, so candidate scale factors of the form q^(1/2) and
q^(-1/2) live in F without field extensions.

Canonical form: numerator and denominator are coprime polynomials and the
denominator is monic; zero is 0/1.  Equality and hashing work on canonical
forms, so every identity check in the package is a decidable symbolic-zero
test.

Two conjugation modes are supported:

* real       -- t is fixed (q real), i goes to -i;
* unimodular -- t goes to 1/t (|q| = 1), i goes to -i.

Both are involutive ring automorphisms of F.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

from .errors import DivisionByZero, EvaluationPole, ParseError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _gr(re, im) -> "Gaussian":
    """Raw constructor for parts that are Fractions already."""
    g = Gaussian.__new__(Gaussian)
    g.re = re
    g.im = im
    return g


class Gaussian:
    """A Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        return _gr(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return _gr(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return _gr(-self.re, -self.im)

    def __mul__(self, other):
        if not other.im:
            if not self.im:
                return _gr(self.re * other.re, _ZERO)
            return _gr(self.re * other.re, self.im * other.re)
        return _gr(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise DivisionByZero("inverse of 0 in Q(i)")
        return _gr(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * other.inverse()

    def conj(self):
        return _gr(self.re, -self.im)

    def __eq__(self, other):
        return (
            isinstance(other, Gaussian)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gaussian({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{_frac_str(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        istr = "i" if mag == 1 else f"{_frac_str(mag)}*i"
        return f"{self.re}{sign}{istr}"


G_ZERO = Gaussian(0)
G_ONE = Gaussian(1)
G_I = Gaussian(0, 1)


def _frac_str(f: Fraction) -> str:
    return str(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _frac_sqrt(f: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if f < 0:
        return None
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    if rn * rn != f.numerator or rd * rd != f.denominator:
        return None
    return Fraction(rn, rd)


def gaussian_sqrt(g: Gaussian):
    """A square root of g in Q(i), or None when none exists there."""
    if not g:
        return G_ZERO
    norm = _frac_sqrt(g.re * g.re + g.im * g.im)
    if norm is None:
        return None
    a2 = (g.re + norm) / 2
    b2 = (norm - g.re) / 2
    a = _frac_sqrt(a2)
    b = _frac_sqrt(b2)
    if a is None or b is None:
        return None
    # fix the relative sign so that 2ab matches Im(g)
    if g.im < 0:
        b = -b
    root = Gaussian(a, b)
    return root if root * root == g else None


# ---------------------------------------------------------------------------
# Polynomials over Q(i): tuples of Gaussian coefficients, lowest degree first,
# trailing zeros stripped.  () is the zero polynomial.
# ---------------------------------------------------------------------------

P_ZERO = ()
P_ONE = (G_ONE,)


def _ptrim(cs):
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] = out[k] + c
    return _ptrim(out)


def pneg(a):
    return tuple(-c for c in a)


def pmul(a, b):
    if not a or not b:
        return P_ZERO
    out = [G_ZERO] * (len(a) + len(b) - 1)
    for j, cb in enumerate(b):
        if not cb:
            continue
        for k, ca in enumerate(a):
            if ca:
                out[j + k] = out[j + k] + ca * cb
    return _ptrim(out)


def pscale(a, g: Gaussian):
    if not g:
        return P_ZERO
    return _ptrim([c * g for c in a])


def pdivmod(a, b):
    """Quotient and remainder of a by b (b nonzero)."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [G_ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv_lead = b[-1].inverse()
    while len(r) >= len(b):
        if not r[-1]:
            r.pop()
            continue
        k = len(r) - len(b)
        c = r[-1] * inv_lead
        q[k] = c
        for j, cb in enumerate(b):
            r[k + j] = r[k + j] - c * cb
        r.pop()
    return _ptrim(q), _ptrim(r)


def pgcd(a, b):
    """Monic gcd via the Euclidean algorithm."""
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return P_ZERO
    return pscale(a, a[-1].inverse())


def pconj(a):
    return tuple(c.conj() for c in a)


def peval(a, x: Gaussian) -> Gaussian:
    out = G_ZERO
    for c in reversed(a):
        out = out * x + c
    return out


def pmonomial(k: int, c: Gaussian = G_ONE):
    return _ptrim([G_ZERO] * k + [c])


def poly_sqrt(a):
    """Exact square root of a polynomial over Q(i), or None."""
    if not a:
        return P_ZERO
    if (len(a) - 1) % 2:
        return None
    lead = gaussian_sqrt(a[-1])
    if lead is None:
        return None
    half = (len(a) - 1) // 2
    out = [G_ZERO] * (half + 1)
    out[half] = lead
    inv2l = (lead + lead).inverse()
    # match coefficients from the top down
    for k in range(half - 1, -1, -1):
        acc = a[k + half] if k + half < len(a) else G_ZERO
        for j in range(k + 1, half):
            if 0 <= k + half - j <= half:
                acc = acc - out[j] * out[k + half - j]
        out[k] = acc * inv2l
    cand = _ptrim(out)
    return cand if pmul(cand, cand) == a else None


def _poly_str(a) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        parts.append(_term_str(c, k, first=not parts))
    return "".join(parts)


def _term_str(c: Gaussian, k: int, first: bool) -> str:
    if k == 0:
        body = str(c)
        if ("+" in body[1:]) or ("-" in body[1:]):
            body = f"({body})"
        return body if first else (f"+{body}" if not body.startswith("-") else body)
    var = "t" if k == 1 else f"t^{k}"
    if c == G_ONE:
        body = var
    elif c == Gaussian(-1):
        body = f"-{var}"
    else:
        cs = str(c)
        if ("+" in cs[1:]) or ("-" in cs[1:]) or ("/" in cs) or ("*" in cs):
            cs = f"({cs})"
        body = f"{cs}*{var}"
    if first or body.startswith("-"):
        return body
    return f"+{body}"


class ConjMode(enum.Enum):
    """Conjugation semantics for the transcendental t."""

    REAL = "real"          # t fixed: q real
    UNIMODULAR = "unimodular"  # t -> 1/t: |q| = 1


class Scalar:
    """A rational function in t over Q(i), kept in canonical form.

    Construct through the classmethods or module constants; the raw
    constructor trusts its inputs to be canonical already.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den):
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def normalize(num, den) -> "Scalar":
        """Reduce num/den to canonical form (coprime, monic denominator)."""
        if not den:
            raise DivisionByZero("scalar with zero denominator")
        if not num:
            return ZERO
        g = pgcd(num, den)
        if len(g) > 1:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
        lead = den[-1]
        if lead != G_ONE:
            inv = lead.inverse()
            num = pscale(num, inv)
            den = pscale(den, inv)
        return Scalar(num, den)

    @classmethod
    def from_gaussian(cls, g: Gaussian) -> "Scalar":
        if not g:
            return ZERO
        return cls((g,), P_ONE)

    @classmethod
    def from_int(cls, n) -> "Scalar":
        return cls.from_gaussian(Gaussian(n))

    @classmethod
    def from_fraction(cls, f) -> "Scalar":
        return cls.from_gaussian(Gaussian(Fraction(f)))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            num = padd(self.num, other.num)
            if not num:
                return ZERO
            if self.den == P_ONE:
                return Scalar(num, P_ONE)
            return Scalar.normalize(num, self.den)
        return Scalar.normalize(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar(pneg(self.num), self.den)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if not self.num or not other.num:
            return ZERO
        # polynomial * polynomial stays in lowest terms
        if self.den == P_ONE and other.den == P_ONE:
            return Scalar(pmul(self.num, other.num), P_ONE)
        # constant factors cannot disturb coprimality
        if len(self.num) == 1 and self.den == P_ONE:
            return Scalar(pscale(other.num, self.num[0]), other.den)
        if len(other.num) == 1 and other.den == P_ONE:
            return Scalar(pscale(self.num, other.num[0]), self.den)
        # cross-reduce so no gcd of large products is ever taken
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g = pgcd(n1, d2)
        if len(g) > 1:
            n1 = pdivmod(n1, g)[0]
            d2 = pdivmod(d2, g)[0]
        g = pgcd(n2, d1)
        if len(g) > 1:
            n2 = pdivmod(n2, g)[0]
            d1 = pdivmod(d1, g)[0]
        num = pmul(n1, n2)
        den = pmul(d1, d2)
        lead = den[-1]
        if lead != G_ONE:
            inv = lead.inverse()
            num = pscale(num, inv)
            den = pscale(den, inv)
        return Scalar(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise DivisionByZero("inverse of zero scalar")
        num, den = self.den, self.num
        lead = den[-1]
        if lead != G_ONE:
            inv = lead.inverse()
            num = pscale(num, inv)
            den = pscale(den, inv)
        return Scalar(num, den)

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("scalar exponents must be integers")
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates and structure ------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == P_ONE and self.den == P_ONE

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == P_ONE

    def constant_value(self) -> Gaussian:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else G_ZERO

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction, Gaussian)):
                other = _coerce(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # -- conjugation, evaluation, substitution ------------------------------

    def conjugate(self, mode: ConjMode) -> "Scalar":
        if mode is ConjMode.REAL:
            return Scalar(pconj(self.num), pconj(self.den))
        # t -> 1/t: p(1/t) = t^(-deg p) * reversed(p)
        num = tuple(reversed(pconj(self.num)))
        den = tuple(reversed(pconj(self.den)))
        dn, dd = len(self.num) - 1, len(self.den) - 1
        if dn < dd:
            num = pmul(num, pmonomial(dd - dn))
        elif dd < dn:
            den = pmul(den, pmonomial(dn - dd))
        return Scalar.normalize(_ptrim(num), _ptrim(den))

    def eval_at(self, value) -> Gaussian:
        """Evaluate at t = value in Q(i); raises EvaluationPole at poles."""
        if not isinstance(value, Gaussian):
            value = Gaussian(Fraction(value))
        d = peval(self.den, value)
        if not d:
            raise EvaluationPole(f"pole of {self} at t={value}")
        return peval(self.num, value) / d

    def subs(self, value) -> "Scalar":
        """Substitute a constant for t, returning a constant Scalar."""
        return Scalar.from_gaussian(self.eval_at(value))

    def sqrt(self):
        """A square root in F, or None when none exists."""
        if not self.num:
            return ZERO
        lead = self.num[-1]
        monic_num = pscale(self.num, lead.inverse())
        rn = poly_sqrt(monic_num)
        rd = poly_sqrt(self.den)
        rl = gaussian_sqrt(lead)
        if rn is None or rd is None or rl is None:
            return None
        return Scalar.normalize(pscale(rn, rl), rd)

    def vanishes_at_sqrt(self, q0: Gaussian) -> bool:
        """Decide whether self(t0) = 0 for t0 a square root of q0 in C.

        Exact even when t0 lies outside Q(i): reduce modulo t^2 - q0 and use
        the Q(i)-linear independence of 1 and t0.  Raises EvaluationPole when
        the denominator vanishes at t0.
        """
        t0 = gaussian_sqrt(q0)
        if t0 is not None:
            return not self.eval_at(t0)
        modulus = (-q0, G_ZERO, G_ONE)  # t^2 - q0
        dr = pdivmod(self.den, modulus)[1]
        if not dr:
            raise EvaluationPole(f"pole of {self} at t=sqrt({q0})")
        nr = pdivmod(self.num, modulus)[1]
        return not nr

    # -- presentation --------------------------------------------------------

    def __str__(self):
        ns = _poly_str(self.num)
        if self.den == P_ONE:
            return ns
        ds = _poly_str(self.den)
        multi_n = sum(1 for c in self.num if c) > 1
        multi_d = sum(1 for c in self.den if c) > 1 or ("*" in ds)
        if multi_n or "*" in ns or "/" in ns:
            ns = f"({ns})"
        if multi_d or "/" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"Scalar({self})"


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, Gaussian):
        return Scalar.from_gaussian(x)
    if isinstance(x, (int, Fraction)):
        return Scalar.from_gaussian(Gaussian(Fraction(x)))
    raise TypeError(f"cannot coerce {x!r} to Scalar")


ZERO = Scalar(P_ZERO, P_ONE)
ONE = Scalar(P_ONE, P_ONE)
I = Scalar((G_I,), P_ONE)
T = Scalar((G_ZERO, G_ONE), P_ONE)
Q = T * T  # q = t^2


# ---------------------------------------------------------------------------
# Scalar literal expressions: integers, rationals p/q, i, t, q (= t^2) with
# + - * / ^ (integer exponents, negative allowed) and parentheses.  Shared
# with the presentation DSL.
# ---------------------------------------------------------------------------

_ATOMS = {"i": I, "t": T, "q": Q}


class _ExprParser:
    def __init__(self, text: str, line: int = 1, col_base: int = 0):
        self.text = text
        self.pos = 0
        self.line = line
        self.col_base = col_base

    def error(self, msg, expected=()):
        raise ParseError(msg, self.line, self.col_base + self.pos + 1, expected)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Scalar:
        v = self.sum()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.text[self.pos]!r} in scalar expression")
        return v

    def sum(self) -> Scalar:
        v = self.product()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                v = v + self.product()
            elif c == "-":
                self.pos += 1
                v = v - self.product()
            else:
                return v

    def product(self) -> Scalar:
        v = self.unary()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                v = v * self.unary()
            elif c == "/":
                self.pos += 1
                w = self.unary()
                if w.is_zero():
                    raise DivisionByZero("division by zero in scalar expression")
                v = v / w
            else:
                return v

    def unary(self) -> Scalar:
        c = self.peek()
        if c == "-":
            self.pos += 1
            return -self.unary()
        if c == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> Scalar:
        v = self.atom()
        while self.peek() == "^":
            self.pos += 1
            neg = False
            if self.peek() == "-":
                neg = True
                self.pos += 1
            k = self.integer()
            v = v ** (-k if neg else k)
        return v

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer", expected=("integer",))
        return int(self.text[start:self.pos])

    def atom(self) -> Scalar:
        c = self.peek()
        if c == "(":
            self.pos += 1
            v = self.sum()
            if self.peek() != ")":
                self.error("expected ')'", expected=(")",))
            self.pos += 1
            return v
        if c.isdigit():
            return Scalar.from_int(self.integer())
        if c.isalpha():
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start:self.pos]
            if name in _ATOMS:
                return _ATOMS[name]
            self.error(f"unknown scalar symbol {name!r}", expected=tuple(_ATOMS))
        self.error("expected scalar atom", expected=("number", "i", "t", "q", "("))


def parse_scalar(text: str, line: int = 1, col_base: int = 0) -> Scalar:
    """Parse a scalar literal expression into canonical form."""
    return _ExprParser(text, line, col_base).parse()
