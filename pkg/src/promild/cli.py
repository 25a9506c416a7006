"""The ``mild`` command line tool.

Exit status: 0 certified or computed, 1 criterion failed or inapplicable,
2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__, fplinalg
from .magnus import expand, zassenhaus_degree
from .mildness import (
    Certificate,
    CriterionError,
    Failure,
    HomogeneousPoly,
    MildCertified,
    SizeLimitError,
    build_coeff_matrix,
    check_main_criterion,
    format_terms,
    koch_circuit_check,
    partition_criterion,
    raag_bipartite_check,
    signed,
    strong_freeness_oracle,
)
from .presentation import (
    Presentation,
    alphabet_from_json,
    compatible_words,
    graph_from_json,
    koch_from_json,
    parse_form,
    parse_relator,
    presentation_from_json,
    resolve_prime,
    unparse,
)
from .words import (
    Alphabet,
    GOrder,
    LengthLex,
    Lex,
    Opposite,
    OrderSpec,
    Word,
    lyndon_words,
    shuffle,
)

DEFAULT_GRAPH_PRIME = 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _perm(spec: str, alphabet: Alphabet) -> tuple[int, ...]:
    perm = tuple(alphabet.index(n.strip()) for n in spec.split("<"))
    if sorted(perm) != list(range(len(alphabet))):
        raise InputError(f"order {spec!r} must list every generator exactly once")
    return perm


def parse_order(text: str, alphabet: Alphabet) -> OrderSpec:
    """``lex``, ``lenlex``, ``gorder`` specs, optionally prefixed with ``op:``.

    Examples: ``lenlex:x2<x4<x1<x3``,
    ``gorder:tau=1;parts=Y0:x1,x3|Y1:x2,x4;base=x1<x2<x3<x4``.
    """
    d = len(alphabet)
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "op":
        return Opposite(parse_order(rest, alphabet))
    if kind in ("lex", "lenlex"):
        perm = _perm(rest, alphabet) if rest.strip() else tuple(range(d))
        return Lex(perm) if kind == "lex" else LengthLex(perm)
    if kind != "gorder":
        raise InputError(f"unknown order kind {kind!r} (expected lex, lenlex, gorder or op:)")
    fields = {}
    for item in filter(None, (s.strip() for s in rest.split(";"))):
        key, eq, value = item.partition("=")
        if not eq:
            raise InputError(f"gorder field {item!r} is not key=value")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"tau", "parts", "base"}
    if unknown:
        raise InputError(f"unknown gorder fields {sorted(unknown)}")
    tau_text = fields.get("tau", "1")
    taus = [int(t) for t in tau_text.split(",")]
    if len(taus) == 1:
        taus = taus * d
    elif len(taus) != d:
        raise InputError(f"tau needs 1 or {d} values")
    sigmas = []
    if "parts" in fields:
        parts = _parse_parts(fields["parts"], alphabet)
        sigmas = [tuple(int(a in part) for a in range(d)) for part in parts[1:]]
    base = _perm(fields["base"], alphabet) if "base" in fields else tuple(range(d))
    return GOrder(tuple(taus), tuple(sigmas), base)


def _parse_parts(text: str, alphabet: Alphabet) -> list[tuple[int, ...]]:
    parts = []
    for j, chunk in enumerate(text.split("|")):
        label, colon, names = chunk.partition(":")
        if not colon:
            raise InputError(f"part {chunk!r} must look like Y{j}:x1,x2")
        if label.strip() != f"Y{j}":
            raise InputError(f"expected part label Y{j}, got {label.strip()!r}")
        parts.append(tuple(alphabet.index(n.strip()) for n in names.split(",") if n.strip()))
    return parts


def parse_word_set(text: str, pres: Presentation) -> list[Word]:
    """Comma-separated words, or ``X^n`` (all words) / ``C^n`` (compatible words)."""
    text = text.strip()
    if text[:2] in ("X^", "C^") and text[2:].isdigit():
        n = int(text[2:])
        return pres.alphabet.words(n) if text[0] == "X" else compatible_words(pres, n)
    if not text:
        return []
    return [pres.alphabet.parse_word(w) for w in text.split(",")]


def _digest(paths: Sequence[str]) -> str | None:
    if not paths:
        return None
    h = hashlib.sha256()
    for path in paths:
        h.update(Path(path).read_bytes())
    return h.hexdigest()


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_pres(args) -> Presentation:
    data = _load_json(args.pres)
    return presentation_from_json(data, cap=args.cap, prime=args.prime)


def _alphabet_and_prime(args) -> tuple[Alphabet, int]:
    if args.pres:
        data = _load_json(args.pres)
        return alphabet_from_json(data), resolve_prime(data, args.prime)
    if not args.generators:
        raise InputError("give --pres FILE or --generators x1,x2,...")
    names = tuple(n.strip() for n in args.generators.split(","))
    if args.prime is None:
        raise InputError("--prime is required with --generators")
    return Alphabet(names), args.prime


# ---------------------------------------------------------------------------
# commands: each returns (exit code, report fields, human lines)
# ---------------------------------------------------------------------------


def _cmd_expand(args):
    alphabet, p = _alphabet_and_prime(args)
    g = parse_relator(args.element, alphabet)
    s = expand(g, p, args.max_degree, len(alphabet))
    terms = s.as_dict()
    text = format_terms(terms, p, alphabet)
    result = {"element": args.element, "prime": p, "max_degree": args.max_degree,
              "terms": {alphabet.format(w) or "1": signed(c, p) for w, c in sorted(terms.items(), key=lambda t: (len(t[0]), t[0]))},
              "text": text}
    return 0, {"verdict": "Computed", "result": result}, [text]


def _cmd_zassenhaus(args):
    pres = _load_pres(args)
    cap = args.max_degree or pres.cap
    if args.element:
        targets = [(args.element, parse_relator(args.element, pres.alphabet))]
    else:
        targets = [(pres.relator_text(j), r) for j, r in enumerate(pres.relators)]
    rows = []
    for text, g in targets:
        rows.append({"element": text, "degree": str(zassenhaus_degree(g, pres.p, cap, pres.d))})
    lines = [f"{r['element']}: {r['degree']}" for r in rows]
    return 0, {"verdict": "Computed", "result": rows}, lines


def _cmd_matrix(args):
    pres = _load_pres(args)
    order = parse_order(args.order, pres.alphabet)
    B = parse_word_set(args.B, pres)
    M = build_coeff_matrix(pres, B, order)
    red = fplinalg.row_reduce(M.rows, pres.p)
    fmt = pres.alphabet.format
    result = {"columns": [fmt(w) for w in M.columns], "matrix": M.rows, "echelon": red.echelon,
              "rank": red.rank, "log": [fplinalg.op_to_dict(op) for op in red.log]}
    width = max(len(fmt(w)) for w in M.columns)
    lines = ["columns: " + " ".join(fmt(w).rjust(width) for w in M.columns)]
    lines += ["         " + " ".join(str(x).rjust(width) for x in row) for row in M.rows]
    lines.append(f"rank {red.rank} of m = {pres.m}")
    return 0, {"verdict": "Computed", "result": result}, lines


def _certificate_lines(cert: Certificate) -> list[str]:
    a = cert.alphabet
    lines = [f"order: {cert.order}"]
    for j, (r, f, w) in enumerate(zip(cert.relators, cert.initial_forms, cert.pivots), 1):
        lines.append(f"r{j} = {unparse(r, a)}")
        lines.append(f"  initial form {f.format(a)}, leading term {a.format(w)}")
    if cert.oracle:
        lines.append(f"oracle: {cert.oracle.verdict} dims {cert.oracle.dims}")
    lines += [f"caveat: {c}" for c in cert.caveats]
    return lines


def _criterion_report(result):
    if isinstance(result, Certificate):
        return 0, {"verdict": "Certified", "certificate": result.to_dict()}, ["Certified"] + _certificate_lines(result)
    if isinstance(result, MildCertified):
        lines = ["MildCertified"]
        if result.coloring:
            lines.append(f"coloring: Y1 = {result.coloring['Y1']}, Y2 = {result.coloring['Y2']}")
        lines += _certificate_lines(result.certificate)
        return 0, {"verdict": "MildCertified", "certificate": result.to_dict()}, lines
    if isinstance(result, Failure):
        return 1, {"verdict": f"Failure({result.condition})", "witness": result.to_dict()}, [
            f"Failure({result.condition}): {result.message}"]
    return 1, {"verdict": "Inapplicable", "witness": result.to_dict()}, [f"Inapplicable: {result.reason}"]


def _cmd_check(args):
    pres = _load_pres(args)
    order = parse_order(args.order, pres.alphabet)
    A = parse_word_set(args.A, pres)
    B = parse_word_set(args.B, pres)
    return _criterion_report(check_main_criterion(pres, order, A, B, oracle_depth=args.oracle))


def _cmd_partition(args):
    pres = _load_pres(args)
    parts = _parse_parts(args.parts, pres.alphabet)
    ks = [int(k) for k in args.k.split(",")]
    return _criterion_report(partition_criterion(pres, parts, ks, oracle_depth=args.oracle))


def _cmd_circuit(args):
    data = _load_json(args.koch)
    kd, _ = koch_from_json(data)
    p = resolve_prime(data, args.prime)
    return _criterion_report(koch_circuit_check(kd, p, args.cap, oracle_depth=args.oracle))


def _cmd_raag(args):
    data = _load_json(args.graph)
    graph = graph_from_json(data)
    p = resolve_prime(data, args.prime, DEFAULT_GRAPH_PRIME)
    return _criterion_report(raag_bipartite_check(graph, p, args.cap, oracle_depth=args.oracle))


def _cmd_oracle(args):
    data = _load_json(args.forms)
    alphabet = alphabet_from_json(data)
    p = resolve_prime(data, args.prime)
    polys = []
    for text in data.get("forms", []):
        terms = parse_form(text, alphabet)
        try:
            polys.append(HomogeneousPoly.from_terms(terms, p, alphabet.weights))
        except CriterionError as exc:
            raise InputError(f"form {text!r}: {exc}") from exc
        if not polys[-1]:
            raise InputError(f"form {text!r} vanishes mod {p}")
    report = strong_freeness_oracle(polys, alphabet.weights, args.max_degree)
    lines = [report.verdict, f"dims   {report.dims}", f"series {report.series}"]
    fields = {"verdict": report.verdict, "dims": report.dims, "series": report.series,
              "witness": {"gap": list(report.gap)} if report.gap else None}
    return (0 if report.equal else 1), fields, lines


def _cmd_lyndon(args):
    alphabet, _ = _alphabet_and_prime_optional(args)
    order = parse_order(args.order, alphabet) if args.order else Lex.natural(len(alphabet))
    words = lyndon_words(len(alphabet), args.length, order)
    out = [alphabet.format(w) for w in words]
    return 0, {"verdict": "Computed", "result": {"count": len(out), "words": out}}, [f"{len(out)} Lyndon words"] + out


def _alphabet_and_prime_optional(args):
    if args.pres:
        data = _load_json(args.pres)
        return alphabet_from_json(data), data.get("prime")
    if not args.generators:
        raise InputError("give --pres FILE or --generators x1,x2,...")
    return Alphabet(tuple(n.strip() for n in args.generators.split(","))), None


def _cmd_shuffle(args):
    alphabet, _ = _alphabet_and_prime_optional(args)
    u = alphabet.parse_word(args.u)
    v = alphabet.parse_word(args.v)
    sh = shuffle(u, v)
    terms = {alphabet.format(w): c for w, c in sorted(sh.items())}
    lines = [" + ".join(f"{c}{w}" if c != 1 else w for w, c in terms.items())]
    return 0, {"verdict": "Computed", "result": terms}, lines


COMMANDS = {
    "expand": _cmd_expand,
    "zassenhaus": _cmd_zassenhaus,
    "matrix": _cmd_matrix,
    "check": _cmd_check,
    "partition": _cmd_partition,
    "circuit": _cmd_circuit,
    "raag": _cmd_raag,
    "oracle": _cmd_oracle,
    "lyndon": _cmd_lyndon,
    "shuffle": _cmd_shuffle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mild", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mild {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--prime", type=int, help="prime for files that do not set one")
    common.add_argument("--cap", type=int, help="truncation length for Magnus expansions")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def alphabet_args(p):
        p.add_argument("--pres", help="presentation JSON file")
        p.add_argument("--generators", help="comma-separated generator names")

    p = add("expand", "Magnus expansion of a group element")
    alphabet_args(p)
    p.add_argument("--element", required=True)
    p.add_argument("--max-degree", type=int, default=3)

    p = add("zassenhaus", "Zassenhaus degree of relators or an element")
    p.add_argument("--pres", required=True)
    p.add_argument("--element")
    p.add_argument("--max-degree", type=int)

    p = add("matrix", "coefficient matrix and its echelon form")
    p.add_argument("--pres", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--B", required=True, help="comma-separated words, X^n or C^n")

    p = add("check", "main mildness criterion")
    p.add_argument("--pres", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--A", required=True, help="comma-separated words, X^n or C^n")
    p.add_argument("--B", required=True)
    p.add_argument("--oracle", type=int, metavar="N", help="also run the Hilbert series oracle to degree N")

    p = add("partition", "criterion for a partition of the generators")
    p.add_argument("--pres", required=True)
    p.add_argument("--parts", required=True, help="e.g. Y0:x1,x3|Y1:x2,x4")
    p.add_argument("--k", required=True, help="budgets k_0,...,k_s")
    p.add_argument("--oracle", type=int, metavar="N")

    p = add("circuit", "circuit criterion for Koch-type presentations")
    p.add_argument("--koch", required=True)
    p.add_argument("--oracle", type=int, metavar="N")

    p = add("raag", "bipartite criterion for right-angled Artin groups")
    p.add_argument("--graph", required=True)
    p.add_argument("--oracle", type=int, metavar="N")

    p = add("oracle", "Hilbert series against the Golod-Shafarevich series")
    p.add_argument("--forms", required=True)
    p.add_argument("--max-degree", type=int, required=True)

    p = add("lyndon", "Lyndon words of a given length")
    alphabet_args(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--order")

    p = add("shuffle", "shuffle product of two words")
    alphabet_args(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    return parser


def _input_files(args) -> list[str]:
    return [getattr(args, k) for k in ("pres", "koch", "graph", "forms") if getattr(args, k, None)]


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    start = time.perf_counter()
    try:
        code, fields, lines = COMMANDS[args.command](args)
        digest = _digest(_input_files(args))
    except (InputError, ValueError, KeyError, SizeLimitError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"mild {args.command}: error: {msg}", file=stderr)
        return 2
    elapsed = time.perf_counter() - start
    if args.json:
        report = {"command": ["mild", *argv], "version": __version__, "input_digest": digest,
                  "verdict": fields["verdict"], "certificate": fields.get("certificate"),
                  "witness": fields.get("witness"), "dims": fields.get("dims"),
                  "series": fields.get("series")}
        if "result" in fields:
            report["result"] = fields["result"]
        print(json.dumps(report, indent=2, sort_keys=True), file=stdout)
    else:
        if not lines or fields["verdict"] not in lines[0]:
            print(fields["verdict"], file=stdout)
        for line in lines:
            print(line, file=stdout)
        print(f"({elapsed:.3f} s, mild {__version__})", file=stderr)
    return code


def main() -> None:
    sys.exit(run())
