"""Laurent polynomials over F2, polynomials in y with Laurent coefficients,
and the residue ring F2[u]/(u^m - 1).

A Laurent polynomial is stored as a Python int whose bit i is the
coefficient of u^(min_exp + i).  Python ints are word-packed bit vectors,
so addition is a single XOR and multiplication is shift-XOR over the set
bits of the sparser operand.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce as _fold


# -- plain F2[u] helpers on ints (bit i = coefficient of u^i) ---------------

def _clmul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def _pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    db = b.bit_length()
    q = 0
    while a and a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return a


def _strip(bits: int) -> tuple[int, int]:
    """Split off the power of u: bits = u^tz * odd."""
    if bits == 0:
        return 0, 0
    tz = (bits & -bits).bit_length() - 1
    return bits >> tz, tz


# -- LaurentPoly -------------------------------------------------------------

class LaurentPoly:
    """Element of F2[u, u^-1] in canonical trimmed form."""

    __slots__ = ("bits", "min_exp")

    def __init__(self, bits: int = 0, min_exp: int = 0):
        if bits < 0:
            raise ValueError("coefficient bits must be non-negative")
        odd, tz = _strip(bits)
        object.__setattr__(self, "bits", odd)
        object.__setattr__(self, "min_exp", min_exp + tz if odd else 0)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, k: int) -> "LaurentPoly":
        return cls(1, k)

    @classmethod
    def from_exponents(cls, exps) -> "LaurentPoly":
        exps = list(exps)
        if not exps:
            return ZERO
        lo = min(exps)
        bits = 0
        for e in exps:
            bits ^= 1 << (e - lo)
        return cls(bits, lo)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse the text form, e.g. ``"u^-1+1+u"`` or ``"0"``."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return ZERO
        exps = []
        for term in text.split("+"):
            if term == "1":
                exps.append(0)
            elif term == "u":
                exps.append(1)
            else:
                m = re.fullmatch(r"u\^(-?\d+)", term)
                if m is None:
                    raise ValueError(f"bad polynomial term {term!r}")
                exps.append(int(m.group(1)))
        return cls.from_exponents(exps)

    # structure
    def is_zero(self) -> bool:
        return self.bits == 0

    def is_monomial(self) -> bool:
        return self.bits == 1

    @property
    def max_exp(self) -> int:
        return self.min_exp + self.bits.bit_length() - 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def exponents(self) -> list[int]:
        out, b, i = [], self.bits, 0
        while b:
            low = b & -b
            out.append(self.min_exp + low.bit_length() - 1)
            b ^= low
        return out

    def coeff(self, k: int) -> int:
        i = k - self.min_exp
        return (self.bits >> i) & 1 if i >= 0 else 0

    def to_int(self, offset: int) -> int:
        """Bits aligned so that bit i is the coefficient of u^(offset+i)."""
        if not self.bits:
            return 0
        s = self.min_exp - offset
        if s < 0:
            raise ValueError("offset above lowest exponent")
        return self.bits << s

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            other = ONE if other & 1 else ZERO
        if not other.bits:
            return self
        if not self.bits:
            return other
        lo = min(self.min_exp, other.min_exp)
        return LaurentPoly(self.to_int(lo) ^ other.to_int(lo), lo)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            return self if other & 1 else ZERO
        if not self.bits or not other.bits:
            return ZERO
        return LaurentPoly(_clmul(self.bits, other.bits), self.min_exp + other.min_exp)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            return LaurentPoly(1, self.min_exp * n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by u^k."""
        return LaurentPoly(self.bits, self.min_exp + k) if self.bits else self

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit")
        return LaurentPoly(1, -self.min_exp)

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient in the Laurent ring; raises if other does not divide self."""
        q, r = _pdivmod(self.bits, other.bits)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return LaurentPoly(q, self.min_exp - other.min_exp)

    def bar(self) -> "LaurentPoly":
        """Substitute u -> u^-1."""
        if not self.bits:
            return self
        n = self.bits.bit_length()
        rev = int(format(self.bits, "b")[::-1], 2)
        return LaurentPoly(rev, -(self.min_exp + n - 1))

    def reduce(self, m: int) -> "LaurentPoly":
        return LaurentPoly(self.cyclic(m), 0)

    def cyclic(self, m: int) -> int:
        """m-bit integer holding the residue modulo u^m - 1."""
        if m < 1:
            raise ValueError("m must be positive")
        mask = (1 << m) - 1
        b, r = self.bits, 0
        while b:
            r ^= b & mask
            b >>= m
        s = self.min_exp % m
        return ((r << s) | (r >> (m - s))) & mask if s else r

    def evaluate_one(self) -> int:
        """Value at u = 1."""
        return self.bits.bit_count() & 1

    # comparison / display
    def __eq__(self, other):
        if isinstance(other, int):
            other = ONE if other == 1 else ZERO if other == 0 else None
            if other is None:
                return False
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.bits == other.bits and self.min_exp == other.min_exp

    def __hash__(self):
        return hash((self.bits, self.min_exp))

    def __bool__(self):
        return self.bits != 0

    def __str__(self):
        if not self.bits:
            return "0"
        terms = []
        for e in self.exponents():
            terms.append("1" if e == 0 else "u" if e == 1 else f"u^{e}")
        return "+".join(terms)

    def __repr__(self):
        return f"LaurentPoly({self})"


ZERO = LaurentPoly(0)
ONE = LaurentPoly(1)
U = LaurentPoly(1, 1)
UINV = LaurentPoly(1, -1)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


@dataclass(frozen=True)
class ResidueContext:
    """The residue ring modulo u^m - 1 (m unit cells, periodic)."""
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")

    def reduce(self, p: LaurentPoly) -> LaurentPoly:
        return p.reduce(self.m)

    def mul(self, p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(cyclic_mul(p.cyclic(self.m), q.cyclic(self.m), self.m))


def reduce(p: LaurentPoly, ctx: ResidueContext) -> LaurentPoly:
    return ctx.reduce(p)


def cyclic_mul(a: int, b: int, m: int) -> int:
    """Product of two m-bit residues modulo u^m - 1."""
    mask = (1 << m) - 1
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        s = low.bit_length() - 1
        out ^= ((a << s) | (a >> (m - s))) & mask if s else a
        b ^= low
    return out


# -- rational functions F2(u), used only where a field is needed -------------

class RatFunc:
    """num/den with den normalized to an odd F2[u] int (no u factor)."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = ONE):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = ZERO, ONE
            return
        g = _pgcd(num.bits, den.bits)
        n = LaurentPoly(_pdivmod(num.bits, g)[0], num.min_exp - den.min_exp)
        d = LaurentPoly(_pdivmod(den.bits, g)[0], 0)
        self.num, self.den = n, d

    @classmethod
    def of(cls, p):
        return p if isinstance(p, RatFunc) else cls(p)

    def __bool__(self):
        return bool(self.num)

    def __add__(self, o):
        o = RatFunc.of(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __sub__ = __add__

    def __mul__(self, o):
        o = RatFunc.of(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        o = RatFunc.of(o)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        o = RatFunc.of(o)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_laurent(self) -> LaurentPoly:
        if not self.den.is_monomial():
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.num

    def __repr__(self):
        return f"({self.num})/({self.den})"


def _lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    g = _pgcd(a.bits, b.bits)
    return LaurentPoly(_pdivmod(_clmul(a.bits, b.bits), g)[0], 0)


# -- BivarPoly: polynomials in y over the Laurent ring -----------------------

class BivarPoly:
    """Polynomial in y; ``coeffs[i]`` is the Laurent coefficient of y^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, LaurentPoly) else (ONE if c else ZERO) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def y(cls, k: int = 1) -> "BivarPoly":
        return cls([ZERO] * k + [ONE])

    @classmethod
    def parse(cls, text: str) -> "BivarPoly":
        """Inverse of ``str``; terms like ``(u^-1+u)y^3`` or ``y`` or ``1``."""
        text = text.replace(" ", "")
        if text == "0":
            return cls()
        terms, depth, cur = [], 0, ""
        for ch in text:
            if ch == "+" and depth == 0:
                terms.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        terms.append(cur)
        out: dict[int, LaurentPoly] = {}
        for t in terms:
            m = re.fullmatch(r"(?:\((.*)\))?(?:y(?:\^(\d+))?)?", t)
            if t and m and (m.group(1) is not None or "y" in t):
                coef = LaurentPoly.parse(m.group(1)) if m.group(1) is not None else ONE
                deg = int(m.group(2)) if m.group(2) else (1 if "y" in t else 0)
            else:
                coef, deg = LaurentPoly.parse(t.strip("()")), 0
            out[deg] = out.get(deg, ZERO) + coef
        n = max(out) + 1 if out else 0
        return cls([out.get(i, ZERO) for i in range(n)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self) -> LaurentPoly:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return BivarPoly([x + (b[i] if i < len(b) else ZERO) for i, x in enumerate(a)])

    __sub__ = __add__

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return BivarPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return BivarPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return _fold(lambda x, _: x * self, range(n), BivarPoly([ONE]))

    def map_coeffs(self, f) -> "BivarPoly":
        return BivarPoly([f(c) for c in self.coeffs])

    def bar(self) -> "BivarPoly":
        return self.map_coeffs(LaurentPoly.bar)

    def reciprocal(self, n: int | None = None) -> "BivarPoly":
        """y^n * p(1/y), default n = degree."""
        n = self.degree if n is None else n
        cs = [ZERO] * (n + 1)
        for i, c in enumerate(self.coeffs):
            cs[n - i] = c
        return BivarPoly(cs)

    def evaluate(self, y: LaurentPoly) -> LaurentPoly:
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * y + c
        return out

    def derivative(self) -> "BivarPoly":
        return BivarPoly([c if i & 1 else ZERO for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> LaurentPoly:
        g = 0
        for c in self.coeffs:
            g = _pgcd(g, c.bits)
        return LaurentPoly(g, 0)

    def primitive(self) -> "BivarPoly":
        """Divide out the content and the u-power of the leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        p = BivarPoly([x.exact_div(c) for x in self.coeffs])
        return p * LaurentPoly(1, -p.lc().min_exp)

    def __divmod__(self, other):
        return bivar_divmod(self, other)

    def __floordiv__(self, other):
        q, r, s = bivar_divmod(self, other)
        if s != ONE:
            raise ArithmeticError("quotient needs a non-unit denominator")
        return q

    def __mod__(self, other):
        q, r, s = bivar_divmod(self, other)
        if s != ONE:
            raise ArithmeticError("remainder needs a non-unit denominator")
        return r

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            ys = "" if i == 0 else "y" if i == 1 else f"y^{i}"
            if i == 0:
                parts.append(str(c))
            elif c == ONE:
                parts.append(ys)
            else:
                parts.append(f"({c}){ys}")
        return "+".join(parts)

    def __repr__(self):
        return f"BivarPoly({self})"


def _rat_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    q = [RatFunc(ZERO)] * max(len(a) - db, 0)
    inv_lc = RatFunc(ONE) / b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        if not a[i]:
            continue
        f = a[i] * inv_lc
        q[i - db] = f
        for j in range(db + 1):
            a[i - db + j] = a[i - db + j] - f * b[j]
    r = a[:db]
    while r and not r[-1]:
        r.pop()
    return q, r


def _clear(rs: list) -> tuple[BivarPoly, LaurentPoly]:
    den = _fold(_lcm, (r.den for r in rs), ONE)
    return BivarPoly([(r * den).to_laurent() for r in rs]), den


def bivar_divmod(a: BivarPoly, b: BivarPoly) -> tuple[BivarPoly, BivarPoly, LaurentPoly]:
    """Division over the fraction field with the denominator cleared.

    Returns ``(q, r, s)`` with ``s*a == q*b + r`` and ``deg r < deg b``;
    ``s`` is 1 whenever the leading coefficient of ``b`` is a unit.
    """
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    qa, ra = _rat_divmod([RatFunc(c) for c in a.coeffs], [RatFunc(c) for c in b.coeffs])
    _, s = _clear(qa + ra)
    q = BivarPoly([(x * s).to_laurent() for x in qa])
    r = BivarPoly([(x * s).to_laurent() for x in ra])
    return q, r, s


def bivar_gcd(a: BivarPoly, b: BivarPoly) -> BivarPoly:
    """Greatest common divisor over F2(u)[y], returned primitive with unit-free lc."""
    x = [RatFunc(c) for c in a.coeffs]
    y = [RatFunc(c) for c in b.coeffs]
    while y:
        _, r = _rat_divmod(x, y)
        x, y = y, r
    if not x:
        return BivarPoly()
    return _clear(x)[0].primitive()


def squarefree_part(f: BivarPoly) -> BivarPoly:
    """Product of the distinct irreducible factors of f over F2(u)."""
    if f.degree <= 0:
        return BivarPoly([ONE]) if f else f
    df = f.derivative()
    if not df:
        # f = g(y^2); take a square root when every coefficient is a square
        cs = f.coeffs[::2]
        if all(all(e % 2 == 0 for e in c.exponents()) for c in cs):
            root = BivarPoly([LaurentPoly.from_exponents(e // 2 for e in c.exponents()) for c in cs])
            return squarefree_part(root)
        return f.primitive()
    g = bivar_gcd(f, df)
    if g.degree == 0:
        return f.primitive()
    w, _, _ = bivar_divmod(f, g)
    w = w.primitive()
    rg = squarefree_part(g)
    common = bivar_gcd(w, rg)
    q, _, _ = bivar_divmod(w * rg, common)
    return q.primitive()
