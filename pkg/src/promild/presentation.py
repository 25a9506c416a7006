"""Finite presentations of pro-p groups: parsing, standard constructors,
entry degree, minimality evidence and word compatibility."""

from __future__ import annotations

import functools
import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fplinalg import rank
from .magnus import IDENTITY, GroupElement, TruncatedSeries, expand, zassenhaus_degree
from .words import Alphabet, Word

PROBE_LIMIT = 1 << 21  # largest d**k a default-cap probe may allocate


class RelatorSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}‸{text[pos:]}")
        self.text = text
        self.pos = pos


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


# ---------------------------------------------------------------------------
# relator and form parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<sym>[\[\](),*^+\-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise RelatorSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message):
        raise RelatorSyntaxError(message, self.text, self.tok[2])

    def take(self, sym):
        if self.tok[1] != sym or self.tok[0] not in ("sym",):
            self.error(f"expected {sym!r}")
        self.i += 1

    def at_atom(self):
        kind, val, _ = self.tok
        return kind == "name" or (kind == "sym" and val in "[(") or (kind == "int" and val == "1")

    def expr(self) -> GroupElement:
        if not self.at_atom():
            self.error("expected a generator, '[' or '('")
        g = self.factor()
        while True:
            if self.tok[0] == "sym" and self.tok[1] == "*":
                self.i += 1
                if not self.at_atom():
                    self.error("expected a factor after '*'")
            elif not self.at_atom():
                return g
            g = g * self.factor()

    def factor(self) -> GroupElement:
        g = self.atom()
        if self.tok[0] == "sym" and self.tok[1] == "^":
            self.i += 1
            sign = 1
            if self.tok[0] == "sym" and self.tok[1] == "-":
                sign = -1
                self.i += 1
            if self.tok[0] != "int":
                self.error("expected an integer exponent")
            e = sign * int(self.tok[1])
            if e == 0:
                self.error("zero exponent")
            self.i += 1
            if len(g.syllables) == 1:
                (a, f), = g.syllables
                return GroupElement(((a, f * e),))
            return g**e
        return g

    def atom(self) -> GroupElement:
        kind, val, pos = self.tok
        if kind == "name":
            try:
                a = self.alphabet.index(val)
            except KeyError:
                self.error(f"unknown generator {val!r}")
            self.i += 1
            return GroupElement.letter(a)
        if kind == "int" and val == "1":
            self.i += 1
            return IDENTITY
        if val == "[":
            self.i += 1
            g = self.expr()
            self.take(",")
            h = self.expr()
            self.take("]")
            return GroupElement.commutator(g, h)
        if val == "(":
            self.i += 1
            g = self.expr()
            self.take(")")
            return g
        self.error("expected a generator, '[' or '('")

    def parse(self) -> GroupElement:
        g = self.expr()
        if self.tok[0] != "end":
            self.error("unexpected trailing input")
        return g


def parse_relator(text: str, alphabet: Alphabet) -> GroupElement:
    """Parse e.g. ``"x1^3 [x1,x2]^-1 * (x2 x3)^2"``; ``[a,b] = a^-1 b^-1 a b``."""
    return _Parser(text, alphabet).parse()


def unparse(g: GroupElement, alphabet: Alphabet) -> str:
    if not g.syllables:
        return "1"
    return "*".join(
        alphabet.names[a] if e == 1 else f"{alphabet.names[a]}^{e}" for a, e in g.syllables
    )


def parse_form(text: str, alphabet: Alphabet) -> dict[Word, int]:
    """Parse a noncommutative polynomial such as ``"x1 x2 - x2 x1 + 2 x3x3"``.

    Coefficients are integers; reduction mod p happens at the caller.
    """
    tokens = _tokenize(text)
    i = 0
    terms: dict[Word, int] = {}

    def err(msg):
        raise RelatorSyntaxError(msg, text, tokens[i][2])

    sign = 1
    if tokens[i][1] in "+-" and tokens[i][0] == "sym":
        sign = -1 if tokens[i][1] == "-" else 1
        i += 1
    while True:
        coeff = 1
        if tokens[i][0] == "int":
            coeff = int(tokens[i][1])
            i += 1
            if tokens[i][1] == "*" and tokens[i][0] == "sym":
                i += 1
        word: list[int] = []
        while tokens[i][0] == "name":
            try:
                word.extend(alphabet.parse_word(tokens[i][1]))
            except KeyError as exc:
                err(str(exc.args[0]))
            i += 1
            if tokens[i][1] == "*" and tokens[i][0] == "sym" and tokens[i + 1][0] == "name":
                i += 1
        if not word and tokens[i - 1][0] != "int":
            err("expected a term")
        w = tuple(word)
        terms[w] = terms.get(w, 0) + sign * coeff
        kind, val, _ = tokens[i]
        if kind == "end":
            break
        if kind == "sym" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        err("expected '+' or '-'")
    return {w: c for w, c in terms.items() if c}


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def default_cap(relators: Sequence[GroupElement], p: int, d: int) -> int:
    """Entry degree plus four, found by probing increasing truncations."""
    k = 1
    while True:
        degrees = [expand(r, p, k, d).lowest_degree() for r in relators]
        found = [n for n in degrees if n is not None]
        if found:
            return min(found) + 4
        if d ** (k + 1) > PROBE_LIMIT or k >= 24:
            return k
        k += 1


@dataclass(frozen=True)
class Presentation:
    p: int
    alphabet: Alphabet
    relators: tuple[GroupElement, ...]
    cap: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        relators = tuple(self.relators)
        if not relators:
            raise ValueError("a presentation needs at least one relator")
        d = len(self.alphabet)
        for j, r in enumerate(relators):
            if r.max_letter() >= d:
                raise ValueError(f"relator {j + 1} uses a letter outside the alphabet")
            if r.is_trivial:
                raise ValueError(f"relator {j + 1} is the identity")
        object.__setattr__(self, "relators", relators)
        if self.cap is None:
            object.__setattr__(self, "cap", default_cap(relators, self.p, d))
        elif self.cap < 1:
            raise ValueError("truncation cap must be at least 1")

    @property
    def d(self) -> int:
        return len(self.alphabet)

    @property
    def m(self) -> int:
        return len(self.relators)

    @functools.cached_property
    def series(self) -> tuple[TruncatedSeries, ...]:
        return tuple(expand(r, self.p, self.cap, self.d) for r in self.relators)

    def epsilon(self, j: int, w: Word) -> int:
        """Magnus coefficient of ``w`` in relator ``j`` (0-based)."""
        return self.series[j].coefficient(w)

    def with_relators(self, relators: Iterable[GroupElement]) -> "Presentation":
        return Presentation(self.p, self.alphabet, tuple(relators), self.cap)

    def with_cap(self, cap: int) -> "Presentation":
        return Presentation(self.p, self.alphabet, self.relators, cap)

    def relator_text(self, j: int) -> str:
        return unparse(self.relators[j], self.alphabet)


@dataclass(frozen=True)
class KochData:
    """Koch-type data, 1-based as in ``r_j = x_j^(p a_j) prod_k [x_j, x_k]^(a_jk)``.

    ``a`` maps ``j`` to ``a_j``; ``ajk`` maps ``(j, k)`` to ``a_jk``.  Missing
    entries are zero.
    """

    d: int
    m: int
    a: dict = field(default_factory=dict)
    ajk: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.m <= self.d:
            raise ValueError("Koch data needs 1 <= m <= d")
        for j in self.a:
            if not 1 <= j <= self.m:
                raise ValueError(f"a_{j} out of range")
        for j, k in self.ajk:
            if not (1 <= j <= self.m and 1 <= k <= self.d) or j == k:
                raise ValueError(f"a_{j},{k} out of range")

    def get(self, j: int, k: int) -> int:
        return self.ajk.get((j, k), 0)

    def validate(self, p: int) -> None:
        for key, v in list(self.a.items()) + list(self.ajk.items()):
            if not 0 <= v < p:
                raise ValueError(f"Koch coefficient {key} = {v} outside [0, {p})")


def koch_relator(data: KochData, j: int, p: int) -> GroupElement:
    g = IDENTITY
    if data.a.get(j, 0):
        g = GroupElement.letter(j - 1, p * data.a[j])
    xj = GroupElement.letter(j - 1)
    for k in range(1, data.d + 1):
        if k != j and data.get(j, k):
            g = g * GroupElement.commutator(xj, GroupElement.letter(k - 1)) ** data.get(j, k)
    return g


def koch_presentation(data: KochData, p: int, cap: int | None = None) -> Presentation:
    data.validate(p)
    relators = []
    for j in range(1, data.m + 1):
        r = koch_relator(data, j, p)
        if not r.syllables:
            raise ValueError(f"Koch relator r_{j} is the identity (all its coefficients vanish)")
        relators.append(r)
    return Presentation(p, Alphabet.standard(data.d), tuple(relators), cap)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        seen = set()
        for i, k in self.edges:
            if i == k:
                raise ValueError(f"loop at vertex {vertices[i]}")
            if not (0 <= i < len(vertices) and 0 <= k < len(vertices)):
                raise ValueError("edge endpoint out of range")
            e = (min(i, k), max(i, k))
            if e in seen:
                raise ValueError(f"duplicate edge {vertices[e[0]]}-{vertices[e[1]]}")
            seen.add(e)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_names(cls, vertices: Sequence[str], edges: Iterable[Sequence[str]]) -> "Graph":
        vertices = tuple(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("duplicate vertex names")
        try:
            return cls(vertices, tuple((index[a], index[b]) for a, b in edges))
        except KeyError as exc:
            raise ValueError(f"edge uses unknown vertex {exc.args[0]!r}") from None

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(tuple(f"x{i}" for i in range(1, n + 1)), tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(tuple(f"x{i}" for i in range(1, n + 1)), tuple((i, i + 1) for i in range(n - 1)))

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, k in self.edges:
            adj[i].append(k)
            adj[k].append(i)
        return adj


def raag_presentation(graph: Graph, p: int, cap: int | None = None) -> Presentation:
    """One relator ``[x_i, x_k]`` (``i < k``) per edge, edges in sorted order."""
    if not graph.edges:
        raise ValueError("the graph has no edges")
    relators = tuple(
        GroupElement.commutator(GroupElement.letter(i), GroupElement.letter(k)) for i, k in graph.edges
    )
    return Presentation(p, Alphabet(graph.vertices), relators, cap)


# ---------------------------------------------------------------------------
# degrees, minimality, compatibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EntryDegree:
    n: int
    uniform: bool
    degrees: tuple[int, ...]


def entry_degree(pres: Presentation) -> EntryDegree:
    degrees = []
    for j, r in enumerate(pres.relators):
        z = zassenhaus_degree(r, pres.p, pres.cap, pres.d)
        if z.status != "degree":
            raise ValueError(
                f"relator {j + 1} has no nonzero coefficient up to length {pres.cap}; raise the cap"
            )
        degrees.append(z.n)
    n = min(degrees)
    return EntryDegree(n, all(k == n for k in degrees), tuple(degrees))


def initial_form_vectors(pres: Presentation, n: int) -> list[list[int]]:
    """Rows ``(eps_w(r_j))_{|w| = n}`` in lexicographic column order."""
    return [[int(x) for x in s.parts[n]] for s in pres.series]


@dataclass(frozen=True)
class MinimalityReport:
    """``status``: ``"certified"``, ``"degree1_only"`` or ``"failed"``."""

    status: str
    message: str
    relator: int | None = None
    generator: int | None = None
    rank: int | None = None

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def validate_minimal(pres: Presentation) -> MinimalityReport:
    for j, s in enumerate(pres.series):
        for a in range(pres.d):
            if s.parts[1][a]:
                return MinimalityReport(
                    "failed",
                    f"relator {j + 1} has eps_({pres.alphabet.names[a]}) = {int(s.parts[1][a])} != 0, "
                    "so it is not in the Frattini subgroup",
                    relator=j,
                    generator=a,
                )
    try:
        entry = entry_degree(pres)
    except ValueError as exc:
        return MinimalityReport("degree1_only", f"degree-1 test passed, independence not certified: {exc}")
    if not entry.uniform:
        return MinimalityReport(
            "degree1_only", "degree-1 test passed, independence not certified (entry degree not uniform)"
        )
    r = rank(initial_form_vectors(pres, entry.n), pres.p)
    if r == pres.m:
        return MinimalityReport(
            "certified", f"minimality certified: {r} independent degree-{entry.n} initial forms", rank=r
        )
    return MinimalityReport(
        "degree1_only",
        f"degree-1 test passed, independence not certified: degree-{entry.n} initial forms have rank {r} < {pres.m}",
        rank=r,
    )


def is_compatible(pres: Presentation, w: Word) -> bool:
    """Every proper factor of ``w`` has vanishing coefficient in every relator."""
    w = tuple(w)
    n = len(w)
    if n > pres.cap:
        raise ValueError(f"|w| = {n} exceeds the cap {pres.cap}")
    for i in range(n):
        for j in range(i + 1, n + 1):
            if (i, j) == (0, n):
                continue
            u = w[i:j]
            if any(s.coefficient(u) for s in pres.series):
                return False
    return True


def _vanishing(pres: Presentation, k: int) -> np.ndarray:
    out = np.ones(pres.d**k, dtype=bool)
    for s in pres.series:
        out &= s.parts[k] == 0
    return out


def compatible_words(pres: Presentation, n: int) -> list[Word]:
    """All compatible words of length ``n``, in lexicographic order."""
    if n > pres.cap:
        raise ValueError(f"n = {n} exceeds the cap {pres.cap}")
    d = pres.d
    idx = np.arange(d**n, dtype=np.int64)
    ok = np.ones(d**n, dtype=bool)
    for length in range(1, n):
        vanish = _vanishing(pres, length)
        if vanish.all():
            continue
        for i in range(n - length + 1):
            j = i + length
            ok &= vanish[(idx // d ** (n - j)) % d**length]
    return [tuple(w) for w, keep in zip(itertools.product(range(d), repeat=n), ok) if keep]


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def _read_json(source) -> dict:
    if isinstance(source, dict):
        return source
    return json.loads(Path(source).read_text(encoding="utf-8"))


def alphabet_from_json(data: dict) -> Alphabet:
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ValueError("'generators' must be a nonempty list")
    names, weights = [], []
    for g in gens:
        if isinstance(g, str):
            names.append(g)
            weights.append(1)
        else:
            names.append(g["name"])
            weights.append(int(g.get("weight", 1)))
    return Alphabet(tuple(names), tuple(weights))


def resolve_prime(data: dict, prime: int | None, default: int | None = None) -> int:
    """The file's prime, or ``prime`` when the file leaves it open (never both)."""
    if data.get("prime") is not None:
        if prime is not None:
            raise ValueError("the input file sets 'prime'; a prime override is not allowed")
        return int(data["prime"])
    if prime is not None:
        return int(prime)
    if default is None:
        raise ValueError("no prime given: set 'prime' in the file or pass one explicitly")
    return default


def presentation_from_json(source, cap: int | None = None, prime: int | None = None) -> Presentation:
    """``{"prime": p, "generators": [{"name": .., "weight": ..}], "relators": [..]}``."""
    data = _read_json(source)
    alphabet = alphabet_from_json(data)
    relators = tuple(parse_relator(t, alphabet) for t in data.get("relators", []))
    return Presentation(resolve_prime(data, prime), alphabet, relators, cap)


def graph_from_json(source) -> Graph:
    """``{"vertices": [..], "edges": [[u, v], ..]}``."""
    data = _read_json(source)
    return Graph.from_names(data["vertices"], data.get("edges", []))


def koch_from_json(source) -> tuple[KochData, int | None]:
    """``{"prime": p, "d": d, "m": m, "a": {"j": a_j}, "ajk": [[j, k, v], ..]}``."""
    data = _read_json(source)
    a = {int(j): int(v) for j, v in data.get("a", {}).items()}
    ajk = {}
    for j, k, v in data.get("ajk", []):
        if (int(j), int(k)) in ajk:
            raise ValueError(f"a_{j},{k} given twice")
        ajk[(int(j), int(k))] = int(v)
    prime = data.get("prime")
    return KochData(int(data["d"]), int(data["m"]), a, ajk), (int(prime) if prime is not None else None)
