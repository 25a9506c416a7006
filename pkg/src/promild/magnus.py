"""Truncated Magnus expansions over F_p.

A ``TruncatedSeries`` stores, for every length ``k <= cap``, a dense vector
of the ``d**k`` coefficients of the words of that length.  A word
``(a_1 ... a_k)`` sits at index ``a_1 d^(k-1) + ... + a_k``, so the
coefficients of a product in degree ``n`` are ``sum_i outer(s_i, t_{n-i})``
flattened.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .words import Word

Syllable = tuple[int, int]


@dataclass(frozen=True)
class GroupElement:
    """An element of the free group written as syllables ``x_a ** e``."""

    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        syl = tuple((int(a), int(e)) for a, e in self.syllables)
        for a, e in syl:
            if e == 0:
                raise ValueError("syllable exponents must be nonzero")
            if a < 0:
                raise ValueError("letter indices must be nonnegative")
        object.__setattr__(self, "syllables", syl)

    @classmethod
    def letter(cls, a: int, e: int = 1) -> "GroupElement":
        return cls(((a, e),))

    @classmethod
    def commutator(cls, g: "GroupElement", h: "GroupElement") -> "GroupElement":
        """``[g, h] = g^-1 h^-1 g h``."""
        return g.inverse() * h.inverse() * g * h

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.syllables + other.syllables)

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple((a, -e) for a, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        return GroupElement(base.syllables * abs(k))

    def __len__(self):
        return len(self.syllables)

    def reduced(self) -> "GroupElement":
        """Free reduction: merge equal neighbours, drop cancelled syllables."""
        stack: list[list[int]] = []
        for a, e in self.syllables:
            if stack and stack[-1][0] == a:
                stack[-1][1] += e
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([a, e])
        return GroupElement(tuple((a, e) for a, e in stack))

    @property
    def is_trivial(self) -> bool:
        return not self.reduced().syllables

    def exponent_sums(self) -> dict[int, int]:
        sums: dict[int, int] = {}
        for a, e in self.syllables:
            sums[a] = sums.get(a, 0) + e
        return sums

    def max_letter(self) -> int:
        return max((a for a, _ in self.syllables), default=-1)


IDENTITY = GroupElement()


def word_index(w: Word, d: int) -> int:
    idx = 0
    for a in w:
        idx = idx * d + a
    return idx


def index_word(idx: int, k: int, d: int) -> Word:
    out = []
    for _ in range(k):
        idx, a = divmod(idx, d)
        out.append(a)
    return tuple(reversed(out))


class TruncatedSeries:
    """A noncommutative power series over F_p, truncated above length ``cap``."""

    __slots__ = ("p", "cap", "d", "parts")

    def __init__(self, p: int, cap: int, d: int, parts: Sequence[np.ndarray]):
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        if d < 1:
            raise ValueError("alphabet must be nonempty")
        self.p = p
        self.cap = cap
        self.d = d
        self.parts = tuple(np.asarray(parts[k], dtype=np.int64) % p for k in range(cap + 1))
        for k, part in enumerate(self.parts):
            if part.shape != (d**k,):
                raise ValueError(f"degree {k} part must have {d**k} entries")

    # construction --------------------------------------------------------

    @classmethod
    def zero(cls, p, cap, d):
        return cls(p, cap, d, [np.zeros(d**k, dtype=np.int64) for k in range(cap + 1)])

    @classmethod
    def one(cls, p, cap, d):
        s = cls.zero(p, cap, d)
        s.parts[0][0] = 1
        return s

    @classmethod
    def from_dict(cls, coeffs: dict[Word, int], p: int, cap: int, d: int) -> "TruncatedSeries":
        s = cls.zero(p, cap, d)
        for w, c in coeffs.items():
            if len(w) <= cap:
                s.parts[len(w)][word_index(w, d)] = (s.parts[len(w)][word_index(w, d)] + c) % p
        return s

    @classmethod
    def generator(cls, a: int, p: int, cap: int, d: int) -> "TruncatedSeries":
        """The series ``1 + x_a``."""
        return cls.from_dict({(): 1, (a,): 1}, p, cap, d)

    # access ---------------------------------------------------------------

    def coefficient(self, w: Word) -> int:
        w = tuple(w)
        if len(w) > self.cap:
            raise ValueError(f"coefficient of a length-{len(w)} word is unknown at cap {self.cap}")
        if any(not 0 <= a < self.d for a in w):
            raise ValueError(f"word {w} is not over a {self.d}-letter alphabet")
        return int(self.parts[len(w)][word_index(w, self.d)])

    __getitem__ = coefficient

    def items(self) -> Iterator[tuple[Word, int]]:
        """Nonzero coefficients, by length then lexicographically."""
        for k, part in enumerate(self.parts):
            for idx in np.flatnonzero(part):
                yield index_word(int(idx), k, self.d), int(part[idx])

    def as_dict(self) -> dict[Word, int]:
        return dict(self.items())

    def lowest_degree(self, start: int = 1) -> int | None:
        """Least ``k >= start`` with a nonzero length-``k`` coefficient."""
        for k in range(start, self.cap + 1):
            if self.parts[k].any():
                return k
        return None

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap > self.cap:
            raise ValueError("cannot raise the truncation cap")
        return TruncatedSeries(self.p, cap, self.d, self.parts[: cap + 1])

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.p == other.p
            and self.cap == other.cap
            and self.d == other.d
            and all(np.array_equal(a, b) for a, b in zip(self.parts, other.parts))
        )

    def __repr__(self):
        return f"TruncatedSeries(p={self.p}, cap={self.cap}, d={self.d}, terms={len(self.as_dict())})"

    # arithmetic -----------------------------------------------------------

    def _aligned(self, other: "TruncatedSeries"):
        if self.p != other.p or self.d != other.d:
            raise ValueError("series over different primes or alphabets")
        cap = min(self.cap, other.cap)
        return self.parts[: cap + 1], other.parts[: cap + 1], cap

    def __add__(self, other):
        a, b, cap = self._aligned(other)
        return TruncatedSeries(self.p, cap, self.d, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        a, b, cap = self._aligned(other)
        return TruncatedSeries(self.p, cap, self.d, [x - y for x, y in zip(a, b)])

    def __neg__(self):
        return TruncatedSeries(self.p, self.cap, self.d, [-x for x in self.parts])

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b, cap = self._aligned(other)
        p = self.p
        out = []
        for n in range(cap + 1):
            acc = np.zeros(self.d**n, dtype=np.int64)
            for i in range(n + 1):
                x, y = a[i], b[n - i]
                if x.any() and y.any():
                    acc += np.outer(x, y).ravel() % p
            out.append(acc % p)
        return TruncatedSeries(p, cap, self.d, out)

    def inverse(self) -> "TruncatedSeries":
        """``(1 + h)^-1 = sum_k (-h)^k``; requires constant term 1."""
        if self.parts[0][0] != 1:
            raise ValueError("only series with constant term 1 are inverted")
        minus_h = TruncatedSeries.one(self.p, self.cap, self.d) - self
        result = TruncatedSeries.one(self.p, self.cap, self.d)
        term = result
        for _ in range(self.cap):
            term = term * minus_h
            result = result + term
        return result

    def __pow__(self, k: int) -> "TruncatedSeries":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = TruncatedSeries.one(self.p, self.cap, self.d)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def times_letter_series(self, a: int, coeffs: Sequence[int]) -> "TruncatedSeries":
        """Right-multiply by ``sum_k coeffs[k] x_a^k`` (a one-letter series)."""
        d, p = self.d, self.p
        out = []
        for n in range(self.cap + 1):
            acc = np.zeros(d**n, dtype=np.int64)
            for k in range(n + 1):
                c = coeffs[k] if k < len(coeffs) else 0
                if not c:
                    continue
                src = self.parts[n - k]
                view = acc.reshape(d ** (n - k), d**k)
                view[:, _power_index(a, k, d)] += c * src
            out.append(acc % p)
        return TruncatedSeries(p, self.cap, d, out)


def _power_index(a: int, k: int, d: int) -> int:
    return word_index((a,) * k, d)


@functools.lru_cache(maxsize=4096)
def _letter_power_coeffs(a: int, e: int, p: int, cap: int, d: int) -> tuple[int, ...]:
    # (1 + x_a)^e through series arithmetic: binary powering, inverting first if e < 0
    s = TruncatedSeries.generator(a, p, cap, d) ** e
    return tuple(int(s.parts[k][_power_index(a, k, d)]) for k in range(cap + 1))


def expand(g: GroupElement, p: int, cap: int, d: int | None = None) -> TruncatedSeries:
    """Magnus expansion of ``g`` (``x_a -> 1 + x_a``) truncated at length ``cap``."""
    if cap < 1:
        raise ValueError("truncation cap must be at least 1")
    if d is None:
        d = g.max_letter() + 1 or 1
    if g.max_letter() >= d:
        raise ValueError(f"element uses letters beyond a {d}-letter alphabet")
    result = TruncatedSeries.one(p, cap, d)
    for a, e in g.reduced().syllables:
        result = result.times_letter_series(a, _letter_power_coeffs(a, e, p, cap, d))
    return result


def coefficient(s: TruncatedSeries, w: Word) -> int:
    return s.coefficient(w)


@dataclass(frozen=True)
class ZassenhausDegree:
    """``status`` is ``"degree"``, ``"beyond_cap"`` or ``"identity"``."""

    status: str
    n: int | None = None
    cap: int | None = None

    def __str__(self):
        if self.status == "degree":
            return f"Degree({self.n})"
        if self.status == "identity":
            return "Identity"
        return f"BeyondCap({self.cap})"


def zassenhaus_degree(g: GroupElement, p: int, cap: int, d: int | None = None) -> ZassenhausDegree:
    """Least length of a word with nonzero Magnus coefficient in ``g``."""
    if g.is_trivial:
        return ZassenhausDegree("identity", cap=cap)
    n = expand(g, p, cap, d).lowest_degree()
    if n is None:
        return ZassenhausDegree("beyond_cap", cap=cap)
    return ZassenhausDegree("degree", n, cap)


def rho_matrix(s: TruncatedSeries, w: Word) -> np.ndarray:
    w = tuple(w)
    n = len(w)
    if n > s.cap:
        raise ValueError(f"|w| = {n} exceeds the cap {s.cap}")
    M = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(n + 1):
        for j in range(i, n + 1):
            M[i, j] = s.coefficient(w[i:j])
    return M


def rho(g: GroupElement, w: Word, p: int, cap: int, d: int | None = None) -> np.ndarray:
    """The unitriangular matrix ``(eps_{w[i:j]}(g))_{i <= j}``."""
    if d is None:
        d = max(g.max_letter(), max(w, default=-1)) + 1 or 1
    return rho_matrix(expand(g, p, cap, d), w)
