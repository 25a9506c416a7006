"""Combinatorics on words over a finite weighted alphabet.

Words are plain tuples of letter indices.  The alphabet fixes the letter
names, their weights and (through its listing order) the base total order
on letters; every order on words is described by an ``OrderSpec`` value.
"""

from __future__ import annotations

import functools
import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]

LESS, EQUAL, GREATER = -1, 0, 1


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("alphabet must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate letter names in {names}")
        weights = tuple(self.weights) or (1,) * len(names)
        if len(weights) != len(names):
            raise ValueError("one weight per letter required")
        if any(int(t) < 1 for t in weights):
            raise ValueError("letter weights must be >= 1")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", tuple(int(t) for t in weights))

    @classmethod
    def standard(cls, d: int, prefix: str = "x") -> "Alphabet":
        return cls(tuple(f"{prefix}{i}" for i in range(1, d + 1)))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree(self, w: Word) -> int:
        """Weighted degree of ``w`` (the sum of its letter weights)."""
        return sum(self.weights[a] for a in w)

    def format(self, w: Word) -> str:
        return "".join(self.names[a] for a in w) if w else "1"

    def parse_word(self, text: str) -> Word:
        """Read a word such as ``"x1x2"``, ``"x1 x2"`` or ``"x1*x2"``.

        Without separators the text is split greedily, longest name first.
        ``"1"`` (when not a letter name) denotes the empty word.
        """
        text = text.strip()
        if text in ("", "1") and "1" not in self.names:
            return ()
        pieces = [t for t in re.split(r"[\s*.]+", text) if t]
        word: list[int] = []
        by_length = sorted(self.names, key=len, reverse=True)
        for piece in pieces:
            pos = 0
            while pos < len(piece):
                for name in by_length:
                    if piece.startswith(name, pos):
                        word.append(self.names.index(name))
                        pos += len(name)
                        break
                else:
                    raise KeyError(f"cannot read a generator at {piece[pos:]!r}")
        return tuple(word)

    def words(self, n: int) -> list[Word]:
        """All words of length ``n`` in listing (lexicographic) order."""
        return list(itertools.product(range(len(self)), repeat=n))

    def words_of_degree(self, n: int) -> list[Word]:
        """All words of weighted degree ``n``, lexicographically sorted."""
        return _words_of_degree(self.weights, n)


@functools.lru_cache(maxsize=256)
def _words_of_degree(weights: tuple[int, ...], n: int) -> list[Word]:
    if n == 0:
        return [()]
    out = []
    for a, t in enumerate(weights):
        if t <= n:
            out.extend((a,) + rest for rest in _words_of_degree(weights, n - t))
    return sorted(out)


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------


def _check_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(a) for a in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm} is not a permutation of the alphabet")
    return perm


def _ranks(perm: tuple[int, ...]) -> tuple[int, ...]:
    ranks = [0] * len(perm)
    for position, letter in enumerate(perm):
        ranks[letter] = position
    return tuple(ranks)


@dataclass(frozen=True)
class _Reversed:
    key: object

    def __lt__(self, other):
        return other.key < self.key

    def __eq__(self, other):
        return self.key == other.key


class OrderSpec:
    """A total order on words.  Subclasses supply ``key``."""

    size: int

    def key(self, w: Word):
        raise NotImplementedError

    def check(self, w: Word) -> None:
        if any(not 0 <= a < self.size for a in w):
            raise ValueError(f"word {w} is not over this order's {self.size}-letter alphabet")

    def sorted(self, words: Iterable[Word], reverse: bool = False) -> list[Word]:
        words = list(words)
        for w in words:
            self.check(w)
        return sorted(words, key=self.key, reverse=reverse)

    def max(self, words: Iterable[Word]) -> Word:
        return max(words, key=self.key)

    def min(self, words: Iterable[Word]) -> Word:
        return min(words, key=self.key)


@dataclass(frozen=True)
class Lex(OrderSpec):
    """Lexicographic order; a proper prefix is smaller than its extensions.

    ``perm`` lists the letters from smallest to largest.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", _check_permutation(self.perm))
        object.__setattr__(self, "_rank", _ranks(self.perm))

    @classmethod
    def natural(cls, d: int) -> "Lex":
        return cls(tuple(range(d)))

    @property
    def size(self):
        return len(self.perm)

    def key(self, w):
        rank = self._rank
        return tuple(rank[a] for a in w)


@dataclass(frozen=True)
class LengthLex(OrderSpec):
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", _check_permutation(self.perm))
        object.__setattr__(self, "_rank", _ranks(self.perm))

    @classmethod
    def natural(cls, d: int) -> "LengthLex":
        return cls(tuple(range(d)))

    @property
    def size(self):
        return len(self.perm)

    def key(self, w):
        rank = self._rank
        return (len(w), tuple(rank[a] for a in w))


@dataclass(frozen=True)
class GOrder(OrderSpec):
    """Order by ``(tau*, s_s*, s_s#, ..., s_1*, s_1#, lex)``.

    ``sigmas`` is the list ``sigma_1, ..., sigma_s`` of 0/1 letter maps; the
    last one has the highest priority after the weighted degree.
    """

    tau: tuple[int, ...]
    sigmas: tuple[tuple[int, ...], ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        perm = _check_permutation(self.perm)
        tau = tuple(int(t) for t in self.tau)
        sigmas = tuple(tuple(int(v) for v in s) for s in self.sigmas)
        if len(tau) != len(perm) or any(len(s) != len(perm) for s in sigmas):
            raise ValueError("tau and every sigma need one value per letter")
        if any(t < 1 for t in tau):
            raise ValueError("weights must be positive")
        if any(v not in (0, 1) for s in sigmas for v in s):
            raise ValueError("each sigma must map letters to {0, 1}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "_rank", _ranks(perm))

    @property
    def size(self):
        return len(self.perm)

    def key(self, w):
        key = [sum(self.tau[a] for a in w)]
        for sigma in reversed(self.sigmas):
            key.append(sigma_star(sigma, w))
            key.append(sigma_sharp(sigma, self.tau, w))
        rank = self._rank
        return (*key, tuple(rank[a] for a in w))


@dataclass(frozen=True)
class Opposite(OrderSpec):
    inner: OrderSpec

    @property
    def size(self):
        return self.inner.size

    def key(self, w):
        return _Reversed(self.inner.key(w))


def compare(order: OrderSpec, w: Word, u: Word) -> int:
    """Return ``LESS``, ``EQUAL`` or ``GREATER``."""
    order.check(w)
    order.check(u)
    if w == u:
        return EQUAL
    kw, ku = order.key(w), order.key(u)
    return LESS if kw < ku else GREATER


def sigma_star(sigma: Sequence[int], w: Word) -> int:
    return sum(sigma[a] for a in w)


def sigma_sharp(sigma: Sequence[int], tau: Sequence[int], w: Word) -> int:
    total = 0
    prefix_weight = 0
    for a in w:
        prefix_weight += tau[a]
        total += sigma[a] * prefix_weight
    return total


# ---------------------------------------------------------------------------
# factors and combinatorial freeness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """Witness that a word set is not combinatorially free.

    ``kind`` is ``"middle"`` (``words[i]`` is a middle factor of ``words[j]``)
    or ``"overlap"`` (``factor`` is a proper left factor of ``words[i]`` and
    a proper right factor of ``words[j]``).
    """

    kind: str
    i: int
    j: int
    factor: Word


def is_middle_factor(u: Word, w: Word) -> bool:
    n, k = len(w), len(u)
    return any(w[s:s + k] == u for s in range(n - k + 1))


def is_combinatorially_free(words: Sequence[Word]) -> Violation | None:
    """Return ``None`` when ``words`` is combinatorially free, else a witness."""
    words = [tuple(w) for w in words]
    if any(not w for w in words):
        raise ValueError("combinatorial freeness is defined for nonempty words")
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            if i != j and is_middle_factor(wi, wj):
                return Violation("middle", i, j, wi)
    suffixes: dict[Word, int] = {}
    for j, wj in enumerate(words):
        for s in range(1, len(wj)):
            suffixes.setdefault(wj[s:], j)
    for i, wi in enumerate(words):
        for s in range(1, len(wi)):
            j = suffixes.get(wi[:s])
            if j is not None:
                return Violation("overlap", i, j, wi[:s])
    return None


# ---------------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------------


def is_lyndon(order: OrderSpec, w: Word) -> bool:
    w = tuple(w)
    if not w:
        return False
    order.check(w)
    kw = order.key(w)
    return all(kw < order.key(w[s:]) for s in range(1, len(w)))


def _duval(d: int, n: int):
    # Lyndon words of length exactly n over 0 < 1 < ... < d-1, in lex order.
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == n:
            yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == d - 1:
            w.pop()


def lyndon_words(d: int, n: int, order: OrderSpec) -> list[Word]:
    """All Lyndon words of length ``n`` for ``order``, ascending.

    Lexicographic orders use Duval's generation algorithm; other orders are
    handled by filtering all ``d**n`` words.
    """
    if n < 1:
        raise ValueError("length must be positive")
    if order.size != d:
        raise ValueError("order and alphabet sizes differ")
    if isinstance(order, Lex):
        found = [tuple(order.perm[a] for a in w) for w in _duval(d, n)]
    else:
        found = [w for w in itertools.product(range(d), repeat=n) if is_lyndon(order, w)]
    return order.sorted(found)


# ---------------------------------------------------------------------------
# shuffles
# ---------------------------------------------------------------------------


def shuffle(u: Word, v: Word) -> Counter:
    """The shuffle product ``u ⧢ v`` as a multiset of words."""
    u, v = tuple(u), tuple(v)
    if not u or not v:
        raise ValueError("shuffle factors must be nonempty")
    n = len(u) + len(v)
    out: Counter = Counter()
    for positions in itertools.combinations(range(n), len(u)):
        taken = set(positions)
        iu, iv = iter(u), iter(v)
        out[tuple(next(iu) if k in taken else next(iv) for k in range(n))] += 1
    return out


def shuffle_generators(d: int, n: int) -> list[Counter]:
    """All ``u ⧢ v`` with ``|u| + |v| = n`` and both factors nonempty."""
    gens = []
    for a in range(1, n):
        for u in itertools.product(range(d), repeat=a):
            for v in itertools.product(range(d), repeat=n - a):
                gens.append(shuffle(u, v))
    return gens


def lyndon_reduce(s: dict[Word, int], p: int, order: OrderSpec) -> dict[Word, int]:
    """Coordinates of ``s`` modulo shuffles, in the Lyndon-word basis over F_p.

    Only defined for degree ``n < p``; the result maps every Lyndon word of
    that length (ascending) to a residue in ``[0, p)``.
    """
    from .fplinalg import solve

    terms = {tuple(w): c for w, c in s.items() if c % p}
    lengths = {len(w) for w in s}
    if len(lengths) > 1:
        raise ValueError("formal sum is not homogeneous")
    if not lengths:
        raise ValueError("cannot infer the degree of an empty formal sum")
    (n,) = lengths
    if n >= p:
        raise ValueError(f"Lyndon basis of the shuffle quotient needs degree < p (got n={n}, p={p})")
    d = order.size
    for w in s:
        order.check(w)
    basis = lyndon_words(d, n, order)
    words = list(itertools.product(range(d), repeat=n))
    col = {w: i for i, w in enumerate(words)}
    # unknown vector z = (Lyndon coords, shuffle multipliers); one equation per word
    generators = [{w: 1} for w in basis] + [dict(g) for g in shuffle_generators(d, n)]
    system = [[0] * len(generators) for _ in words]
    for k, g in enumerate(generators):
        for w, c in g.items():
            system[col[w]][k] = c % p
    rhs = [terms.get(w, 0) % p for w in words]
    z = solve(system, rhs, p)
    if z is None:
        raise ArithmeticError("formal sum is not in the span of Lyndon words and shuffles")
    return {w: z[k] for k, w in enumerate(basis)}
