"""Mildness criteria built on Magnus coefficients.

The cohomology class attached to a compatible word ``w`` is represented only
by its pairing vector ``(eps_w(r_1), ..., eps_w(r_m))`` against the given
relators; it vanishes exactly when that vector does.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import fplinalg
from .fplinalg import Op
from .magnus import GroupElement, expand
from .presentation import (
    Graph,
    KochData,
    MinimalityReport,
    Presentation,
    compatible_words,
    entry_degree,
    is_compatible,
    koch_presentation,
    raag_presentation,
    unparse,
    validate_minimal,
)
from .words import (
    Alphabet,
    GOrder,
    Lex,
    LengthLex,
    Opposite,
    OrderSpec,
    Word,
    _words_of_degree,
    is_combinatorially_free,
)

DEFAULT_MAX_WORDS = 200_000


class CriterionError(ValueError):
    """A precondition of a criterion does not hold."""


class SizeLimitError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomogeneousPoly:
    """A weighted-homogeneous element of F_p<X>: ``terms`` maps words to residues."""

    terms: dict
    degree: int
    p: int

    @classmethod
    def from_terms(cls, terms: dict[Word, int], p: int, weights: Sequence[int], degree: int | None = None):
        clean = {tuple(w): c % p for w, c in terms.items() if c % p}
        degrees = {sum(weights[a] for a in w) for w in terms}
        if degree is not None:
            degrees.add(degree)
        if len(degrees) > 1:
            raise CriterionError(f"terms of mixed degrees {sorted(degrees)}")
        if not degrees:
            raise CriterionError("degree of an empty polynomial is unknown")
        return cls(clean, degrees.pop(), p)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return (self.terms, self.degree, self.p) == (other.terms, other.degree, other.p)

    def leading_term(self, order: OrderSpec) -> Word:
        return order.max(self.terms)

    def format(self, alphabet: Alphabet) -> str:
        return format_terms(self.terms, self.p, alphabet)


def signed(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def format_terms(terms: dict[Word, int], p: int, alphabet: Alphabet) -> str:
    """Render ``{w: c}`` as e.g. ``1 + x1x2 - x2x1`` (coefficients in (-p/2, p/2])."""
    out = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = signed(terms[w], p)
        if not c:
            continue
        body = alphabet.format(w)
        mag = abs(c)
        text = body if (mag == 1 and w) else (str(mag) if not w else f"{mag}{body}")
        out.append(("- " if c < 0 else "+ ") + text)
    if not out:
        return "0"
    s = " ".join(out)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass
class CoefficientMatrix:
    rows: list[list[int]]
    columns: tuple[Word, ...]
    p: int

    @property
    def m(self):
        return len(self.rows)


@dataclass
class OracleReport:
    N: int
    dims: list[int]
    series: list[int]
    gap: tuple[int, int, int] | None

    @property
    def equal(self) -> bool:
        return self.gap is None

    @property
    def verdict(self) -> str:
        if self.gap is None:
            return f"EqualUpToN({self.N})"
        return "FirstGapAt({}, {}, {})".format(*self.gap)

    @property
    def dominates(self) -> bool:
        """Whether ``a_n >= b_n`` at every computed degree."""
        return all(a >= b for a, b in zip(self.dims, self.series))

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "N": self.N, "dims": self.dims, "series": self.series,
                "gap": list(self.gap) if self.gap else None}


@dataclass
class AnickResult:
    certified: bool
    leading: list[Word]
    witness: dict | None = None

    @property
    def verdict(self) -> str:
        return "StronglyFreeCertified" if self.certified else "Inconclusive"


@dataclass
class Failure:
    condition: str
    message: str
    witness: dict | None = None

    verdict = "Failure"

    def to_dict(self) -> dict:
        return {"condition": self.condition, "message": self.message, "witness": self.witness}


@dataclass
class Certificate:
    alphabet: Alphabet
    p: int
    order: str
    relators: tuple[GroupElement, ...]
    log: tuple[Op, ...]
    columns: tuple[Word, ...]
    echelon: list[list[int]]
    pivots: tuple[Word, ...]
    initial_forms: tuple[HomogeneousPoly, ...]
    flags: dict
    minimality: MinimalityReport
    oracle: OracleReport | None = None
    caveats: list[str] = field(default_factory=list)

    verdict = "Certified"

    def to_dict(self) -> dict:
        a = self.alphabet
        return {
            "order": self.order,
            "relators": [unparse(r, a) for r in self.relators],
            "log": [fplinalg.op_to_dict(op) for op in self.log],
            "columns": [a.format(w) for w in self.columns],
            "echelon": self.echelon,
            "pivots": [a.format(w) for w in self.pivots],
            "initial_forms": [f.format(a) for f in self.initial_forms],
            "flags": self.flags,
            "minimality": self.minimality.message,
            "oracle": self.oracle.to_dict() if self.oracle else None,
            "caveats": self.caveats,
        }


@dataclass
class MildCertified:
    certificate: Certificate
    coloring: dict | None = None
    branch: str | None = None

    verdict = "MildCertified"

    def to_dict(self) -> dict:
        out = {"certificate": self.certificate.to_dict()}
        if self.coloring is not None:
            out["coloring"] = self.coloring
        if self.branch is not None:
            out["branch"] = self.branch
        return out


@dataclass
class Inapplicable:
    reason: str
    witness: dict | None = None

    verdict = "Inapplicable"

    def to_dict(self) -> dict:
        return {"reason": self.reason, "witness": self.witness}


# ---------------------------------------------------------------------------
# pairing vectors and coefficient matrices
# ---------------------------------------------------------------------------


def massey_vector(pres: Presentation, w: Word) -> tuple[int, ...]:
    """``(eps_w(r_1), ..., eps_w(r_m))`` for a compatible word ``w``."""
    w = tuple(w)
    if not w:
        raise CriterionError("the empty word carries no cohomology class")
    if not is_compatible(pres, w):
        raise CriterionError(f"word {pres.alphabet.format(w)} is not compatible with the presentation")
    return tuple(s.coefficient(w) for s in pres.series)


def _check_word_set(pres: Presentation, words: Sequence[Word], weights, what: str) -> int | None:
    words = [tuple(w) for w in words]
    if len(set(words)) != len(words):
        raise CriterionError(f"{what} contains duplicate words")
    degrees = {sum(weights[a] for a in w) for w in words}
    if len(degrees) > 1:
        raise CriterionError(f"{what} mixes degrees {sorted(degrees)}")
    for w in words:
        if not w:
            raise CriterionError(f"{what} contains the empty word")
        if not is_compatible(pres, w):
            raise CriterionError(f"{what}: {pres.alphabet.format(w)} is not compatible")
    return degrees.pop() if degrees else None


def build_coeff_matrix(pres: Presentation, B: Sequence[Word], order: OrderSpec,
                       weights: Sequence[int] | None = None) -> CoefficientMatrix:
    """``[eps_w(r_j)]`` with columns sorted descending by ``order``."""
    weights = weights or pres.alphabet.weights
    if not B:
        raise CriterionError("B must be nonempty")
    _check_word_set(pres, B, weights, "B")
    columns = tuple(order.sorted(B, reverse=True))
    rows = [[s.coefficient(w) for w in columns] for s in pres.series]
    return CoefficientMatrix(rows, columns, pres.p)


def transform_relators(pres: Presentation, log: Iterable[Op]) -> tuple[GroupElement, ...]:
    """Mirror row operations on relators: swap, ``r_s -> r_s^k``, ``r_s -> r_s r_t^k``."""
    rel = list(pres.relators)
    for op in log:
        fplinalg.validate_op(op, len(rel), pres.p)
        if isinstance(op, fplinalg.Swap):
            rel[op.s], rel[op.t] = rel[op.t], rel[op.s]
        elif isinstance(op, fplinalg.Scale):
            rel[op.s] = (rel[op.s] ** op.k).reduced()
        else:
            rel[op.s] = (rel[op.s] * rel[op.t] ** op.k).reduced()
    return tuple(rel)


def initial_form(pres: Presentation, relator: GroupElement, A: Sequence[Word],
                 weights: Sequence[int] | None = None) -> HomogeneousPoly:
    """``sum_{w in A} eps_w(r) w``."""
    weights = weights or pres.alphabet.weights
    if not A:
        raise CriterionError("A must be nonempty")
    degree = _check_word_set(pres, A, weights, "A")
    s = expand(relator, pres.p, pres.cap, pres.d)
    return HomogeneousPoly.from_terms({w: s.coefficient(w) for w in A}, pres.p, weights, degree)


# ---------------------------------------------------------------------------
# Anick's criterion and the Hilbert series oracle
# ---------------------------------------------------------------------------


def anick_check(polys: Sequence[HomogeneousPoly], order: OrderSpec) -> AnickResult:
    """Certify strong freeness when the leading terms are combinatorially free.

    A negative answer is inconclusive: the criterion only works one way.
    """
    leading = []
    for f in polys:
        if not f:
            raise CriterionError("anick_check needs nonzero polynomials")
        if f.degree < 1:
            raise CriterionError("anick_check needs polynomials of positive degree")
        leading.append(f.leading_term(order))
    seen: dict[Word, int] = {}
    for i, w in enumerate(leading):
        if w in seen:
            return AnickResult(False, leading, {"kind": "duplicate", "i": seen[w], "j": i, "word": w})
        seen[w] = i
    v = is_combinatorially_free(leading)
    if v is not None:
        return AnickResult(False, leading, {"kind": v.kind, "i": v.i, "j": v.j, "word": v.factor})
    return AnickResult(True, leading)


def gs_series(weights: Sequence[int], degrees: Sequence[int], N: int) -> list[int]:
    """Coefficients of ``1 / (1 - sum_x z^tau(x) + sum_j z^n_j)`` up to ``z^N``."""
    if any(e < 1 for e in degrees):
        raise ValueError("relator degrees must be positive")
    c = [0] * (N + 1)
    c[0] = 1
    for t in weights:
        if t <= N:
            c[t] -= 1
    for e in degrees:
        if e <= N:
            c[e] += 1
    b = [1] + [0] * N
    for n in range(1, N + 1):
        b[n] = -sum(c[k] * b[n - k] for k in range(1, n + 1))
    return b


def graded_dims(polys: Sequence[HomogeneousPoly], weights: Sequence[int], N: int,
                max_words: int = DEFAULT_MAX_WORDS) -> list[int]:
    """Dimensions of the graded pieces of ``F_p<X> / (polys)`` up to degree ``N``.

    Degree ``n`` is the word space modulo the span of all ``u f v`` landing in
    degree ``n``, reduced by brute force.
    """
    weights = tuple(int(t) for t in weights)
    ps = {f.p for f in polys}
    if len(ps) > 1:
        raise ValueError("polynomials over different primes")
    p = ps.pop() if ps else 2
    for f in polys:
        if f.degree < 1:
            raise ValueError("relations must have positive degree")
    dims = []
    for n in range(N + 1):
        words_n = _words_of_degree(weights, n)
        if len(words_n) > max_words:
            raise SizeLimitError(f"degree {n} has {len(words_n)} words (limit {max_words})")
        index = {w: i for i, w in enumerate(words_n)}
        rows = []
        for f in polys:
            if f.degree > n:
                continue
            terms = list(f.terms.items())
            rest = n - f.degree
            for a in range(rest + 1):
                for u in _words_of_degree(weights, a):
                    for v in _words_of_degree(weights, rest - a):
                        rows.append({index[u + t + v]: c for t, c in terms})
        dims.append(len(words_n) - fplinalg.rank_sparse(rows, p))
    return dims


def strong_freeness_oracle(polys: Sequence[HomogeneousPoly], weights: Sequence[int], N: int,
                           max_words: int = DEFAULT_MAX_WORDS) -> OracleReport:
    """Compare the Hilbert series of the quotient with the Golod-Shafarevich series.

    A gap proves the sequence is not strongly free; agreement up to ``N`` is
    evidence only.
    """
    dims = graded_dims(polys, weights, N, max_words)
    series = gs_series(weights, [f.degree for f in polys], N)
    # H(z) * (1 - sum z^tau + sum z^deg) >= 1 coefficient-wise
    c = [0] * (N + 1)
    c[0] = 1
    for t in weights:
        if t <= N:
            c[t] -= 1
    for f in polys:
        if f.degree <= N:
            c[f.degree] += 1
    for n in range(N + 1):
        product = sum(c[k] * dims[n - k] for k in range(n + 1))
        if product < (1 if n == 0 else 0):
            raise ArithmeticError(f"Golod-Shafarevich inequality violated in degree {n}; dims={dims}")
    gap = next(((n, a, b) for n, (a, b) in enumerate(zip(dims, series)) if a != b), None)
    return OracleReport(N, dims, series, gap)


# ---------------------------------------------------------------------------
# the main criterion
# ---------------------------------------------------------------------------


def describe_order(order: OrderSpec, alphabet: Alphabet) -> str:
    names = alphabet.names
    if isinstance(order, Lex):
        return "lex:" + "<".join(names[a] for a in order.perm)
    if isinstance(order, LengthLex):
        return "lenlex:" + "<".join(names[a] for a in order.perm)
    if isinstance(order, GOrder):
        parts = "|".join(
            f"Y{j + 1}:" + ",".join(names[a] for a in range(len(names)) if s[a])
            for j, s in enumerate(order.sigmas)
        )
        tau = ",".join(str(t) for t in order.tau)
        return f"gorder:tau={tau};parts={parts};base=" + "<".join(names[a] for a in order.perm)
    if isinstance(order, Opposite):
        return "op:" + describe_order(order.inner, alphabet)
    return repr(order)


def _order_caveats(order: OrderSpec, weights: Sequence[int]) -> list[str]:
    if isinstance(order, Opposite):
        raise CriterionError("the opposite of a word order is not a monoid order (the empty word is maximal)")
    if isinstance(order, Lex):
        if any(t != 1 for t in weights):
            raise CriterionError("plain lexicographic order is not a monoid order; use lenlex or gorder")
        return ["lexicographic order agrees with length-lexicographic order on words of one length"]
    return []


def check_main_criterion(pres: Presentation, order: OrderSpec, A: Sequence[Word], B: Sequence[Word],
                         weights: Sequence[int] | None = None,
                         oracle_depth: int | None = None) -> Certificate | Failure:
    """Verify combinatorial freeness of ``B``, the closure condition and full rank.

    On success the coefficient matrix is row reduced, the operations are
    mirrored on the relators and the resulting initial forms are checked
    against Anick's criterion.
    """
    weights = tuple(weights or pres.alphabet.weights)
    A = [tuple(w) for w in A]
    B = [tuple(w) for w in B]
    if order.size != pres.d:
        raise CriterionError("order and presentation alphabets differ")
    caveats = _order_caveats(order, weights)
    if not A:
        raise CriterionError("A must be nonempty")
    degree = _check_word_set(pres, A, weights, "A")
    if not set(B) <= set(A):
        extra = next(w for w in B if w not in set(A))
        raise CriterionError(f"B is not a subset of A: {pres.alphabet.format(extra)}")
    if len(set(B)) != len(B):
        raise CriterionError("B contains duplicate words")
    minimality = validate_minimal(pres)
    if not minimality.ok:
        raise CriterionError(minimality.message)
    fmt = pres.alphabet.format

    # (a)
    if B:
        v = is_combinatorially_free(B)
        if v is not None:
            return Failure("a", f"B is not combinatorially free ({v.kind}: {fmt(v.factor)})",
                           {"kind": v.kind, "words": [fmt(B[v.i]), fmt(B[v.j])], "factor": fmt(v.factor)})

    # (b): every nonzero word of A outside B lies below the least nonzero word of B
    vectors = {w: tuple(s.coefficient(w) for s in pres.series) for w in A}
    nonzero_B = [w for w in B if any(vectors[w])]
    if nonzero_B:
        threshold = order.min(nonzero_B)
        tkey = order.key(threshold)
        in_B = set(B)
        for w in order.sorted(A, reverse=True):
            if w not in in_B and any(vectors[w]) and not order.key(w) < tkey:
                return Failure("b", f"{fmt(w)} has a nonzero class, lies outside B and is not below {fmt(threshold)}",
                               {"word": fmt(w), "threshold": fmt(threshold), "vector": list(vectors[w])})

    # (c)
    if not B:
        return Failure("c", f"rank 0 < m = {pres.m}: B is empty", {"rank": 0})
    M = build_coeff_matrix(pres, B, order, weights)
    red = fplinalg.row_reduce(M.rows, pres.p)
    if red.rank < pres.m:
        null = fplinalg.left_nullspace(M.rows, pres.p)
        return Failure("c", f"coefficient matrix has rank {red.rank} < m = {pres.m}",
                       {"rank": red.rank, "combination": null[0]})

    new_relators = transform_relators(pres, red.log)
    transformed = pres.with_relators(new_relators)
    rebuilt = [[s.coefficient(w) for w in M.columns] for s in transformed.series]
    if rebuilt != red.echelon:
        raise ArithmeticError("transformed relators do not reproduce the echelon matrix")
    pivots = tuple(M.columns[c] for c in red.pivots)
    forms = tuple(initial_form(transformed, r, A, weights) for r in new_relators)
    for j, (f, w) in enumerate(zip(forms, pivots)):
        if f.leading_term(order) != w:
            raise ArithmeticError(f"pivot of row {j + 1} is not the leading term of its initial form")
    anick = anick_check(forms, order)
    if not anick.certified:
        raise ArithmeticError(f"Anick's criterion rejected certified pivots: {anick.witness}")
    flags = {"combinatorially_free": True, "closure": True, "rank": red.rank, "anick": True,
             "degree": degree}
    oracle = None
    if oracle_depth is not None:
        oracle = strong_freeness_oracle(forms, weights, oracle_depth)
        if not oracle.equal:
            raise ArithmeticError(f"oracle refutes a certified sequence: {oracle.verdict}")
        flags["oracle_depth"] = oracle_depth
    return Certificate(pres.alphabet, pres.p, describe_order(order, pres.alphabet), new_relators,
                       red.log, M.columns, red.echelon, pivots, forms, flags, minimality, oracle, caveats)


# ---------------------------------------------------------------------------
# specialised criteria
# ---------------------------------------------------------------------------


def partition_criterion(pres: Presentation, parts: Sequence[Sequence[int]], ks: Sequence[int],
                        oracle_depth: int | None = None) -> Certificate | Failure:
    """Criterion for a partition ``X = Y_0 | ... | Y_s`` with budgets ``k_0..k_s``.

    (i) compatible words with more than ``k_j`` letters from some ``Y_j``
    (``j >= 1``) must have zero class; (ii) the words in
    ``Y_0^k_0 ... Y_s^k_s`` must give full rank.
    """
    parts = [tuple(part) for part in parts]
    ks = [int(k) for k in ks]
    if len(parts) < 2 or len(parts) != len(ks):
        raise CriterionError("need parts Y_0..Y_s with s >= 1 and one budget per part")
    if any(not part for part in parts):
        raise CriterionError("partition parts must be nonempty")
    if any(k < 1 for k in ks):
        raise CriterionError("budgets k_j must be positive")
    flat = [a for part in parts for a in part]
    if sorted(flat) != list(range(pres.d)):
        raise CriterionError("parts must partition the alphabet")
    n = sum(ks)
    entry = entry_degree(pres)
    if not entry.uniform or entry.n != n:
        raise CriterionError(f"entry degree {entry.degrees} is not uniformly k_0+...+k_s = {n}")
    block_of = {a: j for j, part in enumerate(parts) for a in part}
    fmt = pres.alphabet.format

    C = compatible_words(pres, n)

    def counts(w):
        c = [0] * len(parts)
        for a in w:
            c[block_of[a]] += 1
        return c

    for w in C:
        cw = counts(w)
        if any(cw[j] > ks[j] for j in range(1, len(parts))):
            vec = [s.coefficient(w) for s in pres.series]
            if any(vec):
                return Failure("i", f"{fmt(w)} exceeds a letter budget but has a nonzero class",
                               {"word": fmt(w), "vector": vec})
    layout = [j for j, k in enumerate(ks) for _ in range(k)]
    B = [w for w in C if all(block_of[a] == j for a, j in zip(w, layout))]
    if not B:
        return Failure("ii", "no compatible word of the block shape exists", {"rank": 0})
    rows = [[s.coefficient(w) for w in B] for s in pres.series]
    r = fplinalg.rank(rows, pres.p)
    if r < pres.m:
        return Failure("ii", f"block words give rank {r} < m = {pres.m}",
                       {"rank": r, "combination": fplinalg.left_nullspace(rows, pres.p)[0]})
    d = pres.d
    sigmas = [tuple(int(block_of[a] == j) for a in range(d)) for j in range(1, len(parts))]
    order = GOrder((1,) * d, tuple(sigmas), tuple(range(d)))
    A = [w for w in C if all(c <= ks[j] for j, c in enumerate(counts(w)) if j >= 1)]
    result = check_main_criterion(pres, order, A, B, weights=(1,) * d, oracle_depth=oracle_depth)
    if isinstance(result, Certificate):
        result.caveats.append(
            "entry degree is a bound for this presentation; the exact Zassenhaus invariant is not computed"
        )
    return result


def _evens_then_odds(d: int) -> tuple[int, ...]:
    # x2 < x4 < ... < x1 < x3 < ...  (0-based letter indices)
    return tuple(range(1, d, 2)) + tuple(range(0, d, 2))


def koch_circuit_check(data: KochData, p: int, cap: int | None = None,
                       oracle_depth: int | None = None) -> MildCertified | Inapplicable:
    """Circuit criteria for Koch-type presentations (``d = m`` and ``m < d``)."""
    data.validate(p)
    d, m = data.d, data.m
    a = data.get
    for j in range(1, m + 1):
        for k in range(1, d + 1):
            if j != k and j % 2 and k % 2 and a(j, k) % p:
                return Inapplicable(f"condition (ii) fails: a_{j}{k} = {a(j, k)} with {j} and {k} both odd",
                                    {"j": j, "k": k})
    if d == m:
        branch = "d=m"
        if d < 4:
            return Inapplicable(f"d = m = {d} < 4")
        forward = backward = 1
        for i in range(1, d + 1):
            nxt = i % d + 1
            forward *= a(i, nxt)
            backward *= a(nxt, i)
        if forward % p == backward % p:
            return Inapplicable(f"condition (i) fails: both circuit products are {forward % p} mod {p}",
                                {"forward": forward % p, "backward": backward % p})
        if d % 2:
            raise ArithmeticError("conditions (i) and (ii) hold for odd d = m")
    else:
        branch = "m<d"
        for j in range(1, m + 1):
            if not a(j, j + 1) % p:
                return Inapplicable(f"condition (i) fails: a_{j}{j + 1} = 0", {"j": j})
    pres = koch_presentation(data, p, cap)
    order = LengthLex(_evens_then_odds(d))
    A = pres.alphabet.words(2)
    B = [(i, k) for i, k in A if i % 2 == 0 and k % 2 == 1]  # x_i odd, x_k even (1-based)
    result = check_main_criterion(pres, order, A, B, oracle_depth=oracle_depth)
    if isinstance(result, Failure):
        return Inapplicable(f"main criterion fails at condition ({result.condition}): {result.message}",
                            result.witness)
    return MildCertified(result, branch=branch)


def _odd_cycle(graph: Graph) -> tuple[dict[int, int], list[int] | None]:
    adj = graph.neighbours()
    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for root in range(len(graph.vertices)):
        if root in color:
            continue
        color[root], parent[root], depth[root] = 0, None, 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in color:
                    color[v], parent[v], depth[v] = 1 - color[u], u, depth[u] + 1
                    queue.append(v)
                elif color[v] == color[u]:
                    up, vp = [u], [v]
                    while up[-1] != vp[-1]:
                        if depth[up[-1]] >= depth[vp[-1]]:
                            up.append(parent[up[-1]])
                        else:
                            vp.append(parent[vp[-1]])
                    return color, up + vp[-2::-1]
    return color, None


def raag_bipartite_check(graph: Graph, p: int, cap: int | None = None,
                         oracle_depth: int | None = None) -> MildCertified | Inapplicable:
    """Certify a RAAG on a bipartite graph via a length-lexicographic order."""
    if not graph.edges:
        raise CriterionError("the graph has no edges")
    color, cycle = _odd_cycle(graph)
    if cycle is not None:
        names = [graph.vertices[v] for v in cycle]
        return Inapplicable(f"graph is not bipartite: odd cycle {'-'.join(names)}", {"cycle": names})
    upper = [v for v in range(len(graph.vertices)) if color[v] == 0]
    lower = [v for v in range(len(graph.vertices)) if color[v] == 1]
    pres = raag_presentation(graph, p, cap)
    order = LengthLex(tuple(lower) + tuple(upper))
    A = pres.alphabet.words(2)
    B = sorted((i, k) if color[i] == 0 else (k, i) for i, k in graph.edges)
    result = check_main_criterion(pres, order, A, B, oracle_depth=oracle_depth)
    if isinstance(result, Failure):
        raise ArithmeticError(f"bipartite RAAG rejected at condition ({result.condition}): {result.message}")
    coloring = {"Y1": [graph.vertices[v] for v in upper], "Y2": [graph.vertices[v] for v in lower]}
    return MildCertified(result, coloring=coloring)
