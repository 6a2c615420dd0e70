"""Hall basis of the free nilpotent Lie algebra of rank r and step s.

Elements are numbered 1..n.  Within a degree, composite elements [X_i, X_j]
are ordered by the key (d(j), i, j); generators keep their input order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .exact_poly import MultiIndex, mi_top

DEFAULT_CAP = 1000
ORDERING_VERSION = "hall-dj-i-j-v1"


class ResourceCapError(RuntimeError):
    """Requested algebra is larger than the configured dimension cap."""


def witt_dimension(r: int, d: int) -> int:
    """Dimension of the degree-d layer of the free Lie algebra on r letters."""
    from sympy import divisors
    from sympy.functions.combinatorial.numbers import mobius

    total = sum(int(mobius(e)) * r ** (d // e) for e in divisors(d))
    assert total % d == 0
    return total // d


def free_dimension(r: int, s: int) -> int:
    return sum(witt_dimension(r, d) for d in range(1, s + 1))


@dataclass(frozen=True)
class HallElement:
    index: int
    degree: int
    children: Optional[tuple[int, int]]
    ell0: int
    chain: tuple[int, ...]
    I: MultiIndex

    @property
    def is_generator(self) -> bool:
        return self.children is None

    def label(self) -> str:
        if self.children is None:
            return f"X{self.index}"
        i, j = self.children
        return f"[X{i}, X{j}]"


@dataclass(frozen=True)
class HallBasis:
    r: int
    s: int
    elements: tuple[HallElement, ...]
    _lookup: dict = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.elements)

    def __getitem__(self, index: int) -> HallElement:
        if not 1 <= index <= self.n:
            raise IndexError(f"basis index {index} out of range 1..{self.n}")
        return self.elements[index - 1]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(e.degree for e in self.elements)

    @cached_property
    def layer_dims(self) -> tuple[int, ...]:
        dims = [0] * self.s
        for e in self.elements:
            dims[e.degree - 1] += 1
        return tuple(dims)

    def layer(self, d: int) -> range:
        """Indices of the degree-d layer."""
        start = 1 + sum(self.layer_dims[: d - 1])
        return range(start, start + self.layer_dims[d - 1])

    def degree(self, index: int) -> int:
        return self[index].degree

    def index_of(self, i: int, j: int) -> Optional[int]:
        """Basis index of the Hall element [X_i, X_j], or None."""
        return self._lookup.get((i, j))

    def canonical_chain(self, index: int) -> tuple[int, MultiIndex, tuple[int, ...]]:
        e = self[index]
        return e.ell0, e.I, e.chain

    def hall_bracket_index(self, l: int, k: int) -> Optional[int]:
        """Index of [X_l, X_k] if it is itself a basis vector, else None."""
        if not (1 <= k < l <= self.n):
            return None
        u = mi_top(self[l].I)
        if u > k:
            return None
        return self._lookup.get((l, k))

    def is_hall_bracket(self, l: int, k: int) -> bool:
        return self.hall_bracket_index(l, k) is not None

    def precedes(self, j: int, l: int) -> bool:
        """j < l in the direct-descendant order: X_j is a chain prefix of X_l."""
        a, b = self[j], self[l]
        if a.ell0 != b.ell0:
            return False
        return b.chain[: len(a.chain)] == a.chain

    @cached_property
    def descendants(self) -> dict[int, tuple[int, ...]]:
        """For each index i, the indices l with i < l in the prefix order."""
        out = {}
        for e in self.elements:
            out[e.index] = tuple(l for l in range(1, self.n + 1) if self.precedes(e.index, l))
        return out

    def to_json(self) -> list[dict]:
        return [
            {
                "index": e.index,
                "degree": e.degree,
                "children": list(e.children) if e.children else None,
                "ell0": e.ell0,
                "chain": list(e.chain),
                "I": list(e.I),
            }
            for e in self.elements
        ]

    def dumps(self) -> str:
        return json.dumps({"r": self.r, "s": self.s, "elements": self.to_json()}, sort_keys=True)

    def describe(self, index: int) -> str:
        e = self[index]
        I = ",".join(str(a) for a in e.I[: min(len(e.I), 6)])
        if len(e.I) > 6:
            I += ",..."
        head = f"X{e.index} = {e.label()}" if e.children else f"X{e.index}"
        return f"{head}  d={e.degree}  I=({I})"


def build_hall_basis(r: int, s: int, cap: int = DEFAULT_CAP) -> HallBasis:
    if r < 2:
        raise ValueError("rank must be at least 2")
    if s < 1:
        raise ValueError("step must be at least 1")
    n = free_dimension(r, s)
    if n > cap:
        raise ResourceCapError(f"free nilpotent algebra of rank {r}, step {s} has dimension {n} > cap {cap}")

    degree: list[int] = [1] * r
    children: list[Optional[tuple[int, int]]] = [None] * r
    for d in range(2, s + 1):
        found = []
        count = len(degree)
        for i in range(1, count + 1):
            di = degree[i - 1]
            ci = children[i - 1]
            for j in range(1, i):
                if di + degree[j - 1] != d:
                    continue
                if ci is not None and ci[1] > j:
                    continue
                found.append((degree[j - 1], i, j))
        found.sort()
        for _, i, j in found:
            degree.append(d)
            children.append((i, j))
    assert len(degree) == n, (len(degree), n)

    elements = []
    for idx in range(1, n + 1):
        ch = children[idx - 1]
        if ch is None:
            ell0, chain = idx, ()
        else:
            left = elements[ch[0] - 1]
            ell0, chain = left.ell0, left.chain + (ch[1],)
        I = [0] * n
        for c in chain:
            I[c - 1] += 1
        elements.append(HallElement(idx, degree[idx - 1], ch, ell0, chain, tuple(I)))

    lookup = {e.children: e.index for e in elements if e.children}
    return HallBasis(r, s, tuple(elements), lookup)


def unfold_chain(basis: HallBasis, index: int) -> list[int]:
    """Re-derive [l_0, l_1, ..., l_h] by expanding left children."""
    e = basis[index]
    if e.children is None:
        return [index]
    return unfold_chain(basis, e.children[0]) + [e.children[1]]


def validate_basis(basis: HallBasis) -> list[str]:
    """Independent check of the Hall conditions and chain properties.

    Returns a list of problems (empty when the basis is sound).
    """
    problems = []
    deg = basis.degrees
    for a, b in zip(deg, deg[1:]):
        if a > b:
            problems.append("degrees not nondecreasing")
            break
    for e in basis.elements:
        if e.children is None:
            if e.index > basis.r or e.degree != 1 or e.chain or any(e.I):
                problems.append(f"bad generator X{e.index}")
            continue
        i, j = e.children
        if not (i > j and i < e.index and j < e.index):
            problems.append(f"X{e.index}: children {e.children} out of order")
        if deg[i - 1] + deg[j - 1] != e.degree:
            problems.append(f"X{e.index}: degree mismatch")
        left = basis[i].children
        if left is not None and left[1] > j:
            problems.append(f"X{e.index}: Hall condition k <= j fails")
        seq = unfold_chain(basis, e.index)
        l0, rest = seq[0], seq[1:]
        if (l0, tuple(rest)) != (e.ell0, e.chain):
            problems.append(f"X{e.index}: stored chain disagrees with unfolding")
        if not (l0 > rest[0] and deg[l0 - 1] == 1 and deg[rest[0] - 1] == 1):
            problems.append(f"X{e.index}: chain start violates l0 > l1, d = 1")
        if any(a > b for a, b in zip(rest, rest[1:])):
            problems.append(f"X{e.index}: chain not nondecreasing")
        k = l0
        for pos, li in enumerate(rest):
            if pos >= 1 and not li < k:
                problems.append(f"X{e.index}: chain entry {li} not below prefix X{k}")
            k = basis.index_of(k, li)
            if k is None:
                problems.append(f"X{e.index}: chain prefix is not a basis element")
                break
        else:
            if k != e.index:
                problems.append(f"X{e.index}: chain does not rebuild the element")
        if mi_top(e.I) != rest[-1]:
            problems.append(f"X{e.index}: u_I != last chain entry")
    dims = basis.layer_dims
    for d in range(1, basis.s + 1):
        if dims[d - 1] != witt_dimension(basis.r, d):
            problems.append(f"layer {d} has {dims[d - 1]} elements, Witt formula says {witt_dimension(basis.r, d)}")
    return problems
