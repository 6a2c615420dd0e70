"""Exact rational polynomials and polynomial vector fields.

Multi-indices are plain tuples of nonnegative ints.  Coefficients are
:class:`fractions.Fraction`; nothing in this module touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

MultiIndex = tuple  # tuple[int, ...]


class DimensionError(ValueError):
    """Objects living in spaces of different dimension were mixed."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


# -- multi-indices -----------------------------------------------------------

def unit(n: int, k: int) -> MultiIndex:
    """The multi-index e_k (1-based k) of length n."""
    return tuple(1 if i == k - 1 else 0 for i in range(n))


def zero_index(n: int) -> MultiIndex:
    return (0,) * n


def mi_abs(alpha: MultiIndex) -> int:
    return sum(alpha)


def mi_factorial(alpha: MultiIndex) -> Fraction:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return Fraction(out)


def mi_top(alpha: MultiIndex) -> int:
    """u_alpha: largest 1-based index with a nonzero entry, 0 for alpha = 0."""
    for i in range(len(alpha) - 1, -1, -1):
        if alpha[i]:
            return i + 1
    return 0


def mi_leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return all(a <= b for a, b in zip(alpha, beta))


def mi_add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


def mi_sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    out = tuple(a - b for a, b in zip(alpha, beta))
    if min(out, default=0) < 0:
        raise ValueError(f"{beta} is not <= {alpha}")
    return out


def weighted_degree(alpha: MultiIndex, degrees: Sequence[int]) -> int:
    if len(alpha) != len(degrees):
        raise DimensionError(f"multi-index of length {len(alpha)} vs {len(degrees)} degrees")
    return sum(a * d for a, d in zip(alpha, degrees))


def grlex_key(alpha: MultiIndex):
    """Graded lexicographic key: total degree first, then x_1 > x_2 > ..."""
    return (sum(alpha), tuple(-a for a in alpha))


def multi_indices_up_to(degrees: Sequence[int], max_degree: int) -> list[MultiIndex]:
    """All alpha with weighted_degree(alpha, degrees) <= max_degree, grlex order."""
    n = len(degrees)
    out: list[MultiIndex] = []

    def rec(pos: int, budget: int, prefix: list[int]) -> None:
        if pos == n:
            out.append(tuple(prefix))
            return
        d = degrees[pos]
        for a in range(budget // d + 1):
            prefix.append(a)
            rec(pos + 1, budget - a * d, prefix)
            prefix.pop()

    if max_degree >= 0:
        rec(0, max_degree, [])
    out.sort(key=grlex_key)
    return out


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Sparse polynomial in ``nvars`` variables with Fraction coefficients.

    Treated as immutable: every operation returns a new instance.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, object] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[MultiIndex, Fraction] = {}
        for alpha, c in items:
            alpha = tuple(alpha)
            if len(alpha) != nvars:
                raise DimensionError(f"exponent {alpha} in a {nvars}-variable polynomial")
            c = as_rational(c)
            if c:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
                if not clean[alpha]:
                    del clean[alpha]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        """The coordinate x_i (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable x_{i} out of range 1..{nvars}")
        return cls._raw(nvars, {unit(nvars, i): Fraction(1)})

    @classmethod
    def monomial(cls, alpha: MultiIndex, c=1) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(len(alpha), {tuple(alpha): c} if c else {})

    # basic protocol
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.nvars, other)

    # arithmetic
    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for alpha, c in small.items():
            s = out.get(alpha, 0) + c
            if s:
                out[alpha] = s
            else:
                out.pop(alpha, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out: dict[MultiIndex, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                s = out.get(key, 0) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Polynomial._raw(self.nvars, out)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus
    def partial(self, i: int) -> "Polynomial":
        if not 1 <= i <= self.nvars:
            raise IndexError(f"partial derivative index {i} out of range 1..{self.nvars}")
        j = i - 1
        out = {}
        for alpha, c in self.terms.items():
            a = alpha[j]
            if a:
                out[alpha[:j] + (a - 1,) + alpha[j + 1:]] = c * a
        return Polynomial._raw(self.nvars, out)

    def integrate(self, i: int) -> "Polynomial":
        """Antiderivative in x_i vanishing on {x_i = 0}."""
        j = i - 1
        out = {}
        for alpha, c in self.terms.items():
            a = alpha[j]
            out[alpha[:j] + (a + 1,) + alpha[j + 1:]] = c / (a + 1)
        return Polynomial._raw(self.nvars, out)

    # evaluation and substitution
    def __call__(self, x: Sequence) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x: Sequence):
        if len(x) != self.nvars:
            raise DimensionError(f"point of length {len(x)} for {self.nvars} variables")
        total = Fraction(0)
        for alpha, c in self.terms.items():
            term = c
            for xi, a in zip(x, alpha):
                if a:
                    term = term * xi ** a
            total = total + term
        return total

    def compose(self, subs: Sequence) -> object:
        """Substitute x_i -> subs[i]; subs are ring elements supporting + and *.

        Works for any ring with a ``one``-like behaviour given by ``subs[0]``'s
        type: Polynomials, univariate polynomials, or scalars.
        """
        if len(subs) != self.nvars:
            raise DimensionError(f"{len(subs)} substitutions for {self.nvars} variables")
        powers: list[dict[int, object]] = [dict() for _ in subs]

        def power(i: int, k: int):
            cache = powers[i]
            if k not in cache:
                if k == 1:
                    cache[1] = subs[i]
                else:
                    half = power(i, k // 2)
                    sq = half * half
                    cache[k] = sq * subs[i] if k % 2 else sq
            return cache[k]

        total = None
        for alpha, c in self.terms.items():
            term = None
            for i, a in enumerate(alpha):
                if a:
                    p = power(i, a)
                    term = p if term is None else term * p
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return 0
        return total

    def variables(self) -> set[int]:
        """1-based indices of variables that actually occur."""
        out = set()
        for alpha in self.terms:
            out.update(i + 1 for i, a in enumerate(alpha) if a)
        return out

    def degree(self, degrees: Sequence[int] | None = None) -> int:
        """Total (or weighted) degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if degrees is None:
            return max(sum(a) for a in self.terms)
        return max(weighted_degree(a, degrees) for a in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # serialization
    def to_json(self) -> list[dict]:
        return [
            {"exp": list(alpha), "num": str(c.numerator), "den": str(c.denominator)}
            for alpha, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list[dict], nvars: int | None = None) -> "Polynomial":
        if nvars is None:
            if not data:
                raise ValueError("cannot infer dimension of an empty term list")
            nvars = len(data[0]["exp"])
        return cls(nvars, [(tuple(t["exp"]), Fraction(int(t["num"]), int(t["den"]))) for t in data])

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(p: Polynomial, names: Sequence[str] | None = None) -> str:
    if not p.terms:
        return "0"
    if names is None:
        names = [f"x{i + 1}" for i in range(p.nvars)]
    parts = []
    for alpha, c in p.sorted_terms():
        mono = "*".join(
            names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(alpha) if a
        )
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- vector fields -----------------------------------------------------------

class PolyVectorField:
    """Polynomial vector field sum_l comps[l] d/dx_l, stored sparsely.

    ``comps`` maps a 1-based coordinate index to a nonzero Polynomial.
    """

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: Mapping[int, Polynomial] | Sequence[Polynomial]):
        self.n = n
        items = comps.items() if isinstance(comps, Mapping) else enumerate(comps, start=1)
        clean = {}
        for l, p in items:
            if p.nvars != n:
                raise DimensionError(f"component in {p.nvars} variables for a field on R^{n}")
            if not 1 <= l <= n:
                raise IndexError(f"component index {l} out of range")
            if p:
                clean[l] = p
        self.comps = clean

    @classmethod
    def zero(cls, n: int) -> "PolyVectorField":
        return cls(n, {})

    @classmethod
    def coordinate(cls, n: int, l: int) -> "PolyVectorField":
        return cls(n, {l: Polynomial.constant(n, 1)})

    def component(self, l: int) -> Polynomial:
        return self.comps.get(l) or Polynomial.zero(self.n)

    def components(self) -> list[Polynomial]:
        return [self.component(l) for l in range(1, self.n + 1)]

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyVectorField) and self.n == other.n and self.comps == other.comps

    def __hash__(self):
        return hash((self.n, frozenset(self.comps.items())))

    def _check(self, other: "PolyVectorField") -> None:
        if self.n != other.n:
            raise DimensionError(f"vector fields on R^{self.n} and R^{other.n}")

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        out = dict(self.comps)
        for l, p in other.comps.items():
            out[l] = out[l] + p if l in out else p
        return PolyVectorField(self.n, out)

    def __neg__(self) -> "PolyVectorField":
        return PolyVectorField(self.n, {l: -p for l, p in self.comps.items()})

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return self + (-other)

    def scale(self, c) -> "PolyVectorField":
        c = as_rational(c)
        if not c:
            return PolyVectorField.zero(self.n)
        return PolyVectorField(self.n, {l: p.scale(c) for l, p in self.comps.items()})

    __rmul__ = scale

    def apply(self, f: Polynomial) -> Polynomial:
        """Directional derivative X f = sum_l X_l df/dx_l."""
        if f.nvars != self.n:
            raise DimensionError("function and field live in different dimensions")
        used = f.variables()
        total = Polynomial.zero(self.n)
        for l, p in self.comps.items():
            if l in used:
                total = total + p * f.partial(l)
        return total

    def at(self, x: Sequence) -> list[Fraction]:
        return [self.component(l).evaluate(x) for l in range(1, self.n + 1)]

    def at_origin(self) -> list[Fraction]:
        return [self.component(l).constant_term() for l in range(1, self.n + 1)]

    def to_json(self) -> list[list[dict]]:
        return [self.component(l).to_json() for l in range(1, self.n + 1)]

    def __repr__(self) -> str:
        body = " + ".join(f"({format_poly(p)})d{l}" for l, p in sorted(self.comps.items()))
        return f"PolyVectorField({self.n}, {body or '0'})"


def vf_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y]_l = X(Y_l) - Y(X_l)."""
    X._check(Y)
    if X.is_zero() or Y.is_zero():
        return PolyVectorField.zero(X.n)
    out = {}
    for l in set(X.comps) | set(Y.comps):
        c = Polynomial.zero(X.n)
        if l in Y.comps:
            c = c + X.apply(Y.comps[l])
        if l in X.comps:
            c = c - Y.apply(X.comps[l])
        if c:
            out[l] = c
    return PolyVectorField(X.n, out)


def linear_combination(fields: Sequence[PolyVectorField], coeffs: Mapping[int, Fraction]) -> PolyVectorField:
    """sum_k coeffs[k] * fields[k-1] for 1-based keys."""
    n = fields[0].n
    total = PolyVectorField.zero(n)
    for k, c in coeffs.items():
        if c:
            total = total + fields[k - 1].scale(c)
    return total
