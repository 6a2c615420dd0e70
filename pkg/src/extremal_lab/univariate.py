"""Dense univariate polynomials in t over the rationals, plus Sturm root counting."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exact_poly import as_rational


class UPoly:
    """Polynomial c_0 + c_1 t + ... stored as a tuple of Fractions without trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, cs: list) -> "UPoly":
        while cs and not cs[-1]:
            cs.pop()
        p = cls.__new__(cls)
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def t(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return out + "".join(f" {s} {b}" for s, b in parts[1:])

    def _coerce(self, other) -> "UPoly":
        return other if isinstance(other, UPoly) else UPoly.const(other)

    def __add__(self, other) -> "UPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return UPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            c = as_rational(other)
            return UPoly._raw([c * x for x in self.coeffs]) if c else UPoly()
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UPoly":
        out = UPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, t):
        acc = Fraction(0) if not isinstance(t, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def deriv(self) -> "UPoly":
        return UPoly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def antideriv(self) -> "UPoly":
        """Antiderivative vanishing at t = 0."""
        return UPoly._raw([Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def integral_from(self, a) -> "UPoly":
        """t -> integral of self from a to t."""
        F = self.antideriv()
        return F - F(as_rational(a))

    def compose(self, q: "UPoly") -> "UPoly":
        acc = UPoly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UPoly._raw([c / lead for c in self.coeffs])

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.coeffs
        q = [Fraction(0)] * max(len(rem) - len(d) + 1, 0)
        lead = d[-1]
        for k in range(len(rem) - len(d), -1, -1):
            c = rem[k + len(d) - 1] / lead
            q[k] = c
            if c:
                for j, dj in enumerate(d):
                    rem[k + j] -= c * dj
        return UPoly._raw(q), UPoly._raw(rem[: len(d) - 1] if len(d) > 1 else [])

    def __mod__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[0]


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def sturm_sequence(p: UPoly) -> list[UPoly]:
    seq = [p, p.deriv()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r)
    return seq


def _sign_changes(seq: Sequence[UPoly], x: Fraction) -> int:
    signs = [s(x) for s in seq]
    signs = [v for v in signs if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def count_roots(p: UPoly, a, b) -> int:
    """Number of distinct real roots of p in the closed interval [a, b]."""
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    a, b = as_rational(a), as_rational(b)
    if p.degree == 0:
        return 0
    sq = p // upoly_gcd(p, p.deriv())
    seq = sturm_sequence(sq)
    count = _sign_changes(seq, a) - _sign_changes(seq, b)  # roots in (a, b]
    if sq(a) == 0:
        count += 1
    return count


def isolate_roots(p: UPoly, a, b, width=Fraction(1, 2 ** 30)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint closed intervals in [a, b], each holding exactly one root of p.

    Rational roots are returned exactly as degenerate intervals (x, x); the
    remaining roots are irrational, so bisection midpoints never hit them.
    """
    a, b = as_rational(a), as_rational(b)
    exact = [x for x in rational_roots(p) if a <= x <= b]
    out = [(x, x) for x in exact]
    q = p
    for x in rational_roots(p):
        lin = UPoly((-x, 1))
        while not (q % lin):
            q = q // lin
    if q.degree >= 1:
        stack = [(a, b)]
        while stack:
            lo, hi = stack.pop()
            k = count_roots(q, lo, hi)
            if k == 0:
                continue
            if k == 1 and hi - lo <= width:
                out.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            stack.extend([(lo, mid), (mid, hi)])
    out.sort()
    return out


def rational_roots(p: UPoly) -> list[Fraction]:
    """Exact rational roots of p, read off the linear factors of its factorization over QQ."""
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    from sympy import Poly, QQ, Symbol

    t = Symbol("t")
    poly = Poly([c for c in reversed(p.coeffs)], t, domain=QQ)
    roots = []
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            q = -b / a
            roots.append(Fraction(int(q.numerator), int(q.denominator)))
    return sorted(roots)
