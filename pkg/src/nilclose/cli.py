"""Command-line interface: ``nilclose <command> [options] ...``.

Exit status is 0 on success (negative answers included), 2 on bad input
and 3 when a resource cap is hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from pathlib import Path

from . import automata, oracle, stallings
from .closures import (dense_primes, nil_closure_product, nil_closure_rational,
                       nil_closure_subgroup, p_closure, primes_closed, pro_g_closure, pseudonorm)
from .closures.primes import is_prime
from .errors import InternalError, NilcloseError, ResourceCapError, caps
from .freegroup import Alphabet, multiply, invert
from .monoids import (analyze_structure, builtin_monoids, gnil_kernel, in_J_malcev_Gnil,
                      in_J_star_Gnil, load_monoid)

log = logging.getLogger("nilclose")

_LETTER = re.compile(r"[A-Za-z][0-9]*")
_MAX_TEXT_EXPRESSION = 300


class UsageError(Exception):
    pass


def _read(value: str) -> str:
    """Argument text; ``-`` reads stdin and ``@path`` reads a UTF-8 file."""
    if value == "-":
        return sys.stdin.read().strip()
    if value.startswith("@"):
        return Path(value[1:]).read_text(encoding="utf-8").strip()
    return value


def _alphabet(args, *texts: str) -> Alphabet:
    if args.alphabet:
        return Alphabet.of(args.alphabet)
    names = sorted({m.group(0).lower() for t in texts for m in _LETTER.finditer(t)},
                   key=lambda s: (s[0], int(s[1:] or 0)))
    if not names:
        raise UsageError("cannot infer an alphabet; pass --alphabet")
    return Alphabet.of(names)


def _subgroup(alphabet: Alphabet, text: str) -> stallings.Subgroup:
    gens = [g for g in text.split(",") if g.strip()]
    return stallings.fold([alphabet.parse(g) for g in gens], alphabet)


def _factors(tokens: list[str]) -> list[str]:
    groups, cur = [], []
    for tok in tokens:
        parts = tok.split(";")
        for i, part in enumerate(parts):
            if i:
                groups.append(",".join(cur))
                cur = []
            if part.strip():
                cur.append(part.strip())
    groups.append(",".join(cur))
    return groups


def _subgroup_json(h: stallings.Subgroup) -> dict:
    return {"basis": [str(b) for b in h.basis], "rank": h.rank,
            "index": None if h.index == float("inf") else h.index,
            "graph": h.graph.to_json()}


def _subgroup_text(h: stallings.Subgroup) -> str:
    idx = "infinite" if h.index == float("inf") else str(h.index)
    return f"{h!r}  rank {h.rank}  index {idx}  vertices {h.graph.vertices}"


def _automaton_out(args, a: automata.WordAutomaton, extra: dict | None = None):
    a = automata.minimal(a)
    if args.format == "dot":
        return a.to_dot()
    universal = automata.is_universal(a)
    empty = automata.is_empty(a)
    if args.format == "json":
        data = dict(extra or {})
        data.update({"universal": universal, "empty": empty, "automaton": a.to_json(),
                     "expression": str(automata.extract_expression(a))})
        return data
    lines = [f"{k}: {v}" for k, v in (extra or {}).items()]
    lines.append(f"universal: {str(universal).lower()}")
    lines.append(f"empty: {str(empty).lower()}")
    lines.append(f"states: {a.states}")
    expr = str(automata.extract_expression(a))
    if len(expr) <= _MAX_TEXT_EXPRESSION:
        lines.append(f"expression: {expr}")
    else:
        lines.append(f"expression: ({len(expr)} characters; use --format json)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands


def cmd_stallings(args):
    text = _read(args.generators)
    alphabet = _alphabet(args, text)
    h = _subgroup(alphabet, text)
    if args.format == "dot":
        return h.graph.to_dot()
    if args.format == "json":
        return _subgroup_json(h)
    edges = [f"  {p} -{alphabet.token(x)}-> {q}" for p, x, q in h.graph.positive_edges()]
    return "\n".join([_subgroup_text(h), "edges:"] + edges)


def cmd_overgroups(args):
    text = _read(args.generators)
    alphabet = _alphabet(args, text)
    found = stallings.overgroups(_subgroup(alphabet, text))
    if args.format == "json":
        return [_subgroup_json(s) for s in found]
    if args.format == "dot":
        return "\n".join(s.graph.to_dot(f"O{i}") for i, s in enumerate(found))
    return "\n".join(_subgroup_text(s) for s in found)


def cmd_primes_closed(args):
    text = _read(args.generators)
    alphabet = _alphabet(args, text)
    h = _subgroup(alphabet, text)
    ps = primes_closed(h)
    dense = dense_primes(h, stallings.whole(alphabet))
    if args.format == "json":
        return {"subgroup": [str(b) for b in h.basis], "primes_closed": ps.to_json(),
                "dense_in_F": dense.to_json()}
    return f"closed for: {ps}\ndense in F for: {dense}"


def cmd_pclosure(args):
    if not is_prime(args.p):
        raise UsageError(f"{args.p} is not prime")
    text = _read(args.generators)
    alphabet = _alphabet(args, text)
    c = p_closure(_subgroup(alphabet, text), args.p)
    if args.format == "json":
        return _subgroup_json(c)
    if args.format == "dot":
        return c.graph.to_dot()
    return _subgroup_text(c)


def cmd_nil_subgroup(args):
    text = _read(args.generators)
    alphabet = _alphabet(args, text)
    h = _subgroup(alphabet, text)
    c = nil_closure_subgroup(h)
    if args.format == "json":
        return dict(_subgroup_json(c), closed=c == h)
    if args.format == "dot":
        return c.graph.to_dot()
    return f"{_subgroup_text(c)}\nnil-closed: {str(c == h).lower()}"


def cmd_nil_product(args):
    tokens = [_read(t) for t in args.factors]
    alphabet = _alphabet(args, *tokens)
    hs = [_subgroup(alphabet, f) for f in _factors(tokens)]
    result = nil_closure_product(hs)
    return _automaton_out(args, result, {"factors": ";".join(repr(h) for h in hs)})


def _rational_source(args):
    text = _read(args.expression)
    if text.lstrip().startswith("{"):
        a = automata.WordAutomaton.from_json(text)
        return a, a.alphabet
    alphabet = _alphabet(args, text)
    return automata.parse_expression(text, alphabet), alphabet


def cmd_nil_rational(args):
    source, alphabet = _rational_source(args)
    return _automaton_out(args, nil_closure_rational(source, alphabet))


def cmd_profinite(args):
    source, alphabet = _rational_source(args)
    if isinstance(source, automata.WordAutomaton):
        source = automata.extract_expression(source)
    nf = pro_g_closure(source, alphabet)
    if args.format == "json":
        return nf.to_json()
    if args.format == "dot":
        from .closures.rational import nf_to_automaton
        return nf_to_automaton(nf).to_dot()
    return str(nf)


def _catalog(args):
    if args.catalog:
        return oracle.load_catalog(args.catalog)
    return oracle.load_catalog()


def cmd_pseudonorm(args):
    text = _read(args.word)
    other = _read(args.minus) if args.minus else None
    alphabet = _alphabet(args, text, other or "")
    g = alphabet.reduced(text)
    if other is not None:
        g = multiply(g, invert(alphabet.reduced(other)))
    res = pseudonorm(g, _catalog(args))
    if args.format == "json":
        return dict(res.to_json(), word=str(g))
    lines = [f"norm: {res.norm}"]
    if res.witness:
        w = res.witness.describe()
        lines.append(f"witness: {w['group']} " +
                     " ".join(f"{a}->{x}" for a, x in w["assignment"].items()))
    return "\n".join(lines)


def _monoid(args):
    if args.builtin:
        table = builtin_monoids()
        if args.builtin not in table:
            raise UsageError(f"unknown builtin monoid {args.builtin}; choose from {', '.join(table)}")
        return table[args.builtin]
    if not args.file:
        raise UsageError("give a monoid JSON file or --builtin NAME")
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text(encoding="utf-8")
    return load_monoid(json.loads(text))


def _names(m, elems):
    return [m.name(x) for x in sorted(elems)]


def cmd_monoid_analyze(args):
    m = _monoid(args)
    r = analyze_structure(m)
    data = {
        "size": m.size,
        "j_classes": [_names(m, c) for c in r.j_classes],
        "is_j_trivial": r.is_j_trivial,
        "regulars": _names(m, r.regulars),
        "inverse_map": {m.name(a): m.name(b) for a, b in sorted(r.inverse_map.items())},
        "is_block_group": r.is_block_group,
        "is_group": r.is_group,
        "is_nilpotent_group": r.is_nilpotent_group,
    }
    if args.check == "j-star-gnil":
        d = in_J_star_Gnil(m)
        cert = dict(d.certificate)
        if "pair" in cert:
            cert["pair"] = [m.name(x) for x in cert["pair"]]
            cert["lhs"], cert["rhs"] = m.name(cert["lhs"]), m.name(cert["rhs"])
        if "element" in cert:
            cert["element"] = m.name(cert["element"])
            cert["inverses"] = [m.name(x) for x in cert["inverses"]]
        data["j_star_gnil"] = {"member": d.member, "certificate": cert}
    elif args.check == "j-malcev-gnil":
        data["j_malcev_gnil"] = {"member": in_J_malcev_Gnil(m),
                                 "kernel": _names(m, gnil_kernel(m))}
    if args.format == "json":
        return data
    lines = []
    for k, v in data.items():
        if isinstance(v, dict) and "member" in v:
            lines.append(f"{k}: {str(v['member']).lower()}")
            for ck, cv in v.get("certificate", {}).items():
                lines.append(f"  {ck}: {cv}")
            if "kernel" in v:
                lines.append(f"  kernel: {v['kernel']}")
        else:
            lines.append(f"{k}: {str(v).lower() if isinstance(v, bool) else v}")
    return "\n".join(lines)


def cmd_monoid_kernel(args):
    m = _monoid(args)
    k = gnil_kernel(m)
    if args.format == "json":
        return {"kernel": _names(m, k), "indices": sorted(k)}
    return "kernel: {" + ", ".join(_names(m, k)) + "}"


def cmd_catalog_generate(args):
    cat = oracle.nilpotent_catalog(args.max_order)
    data = oracle.catalog_to_json(cat)
    if args.output:
        Path(args.output).write_text(json.dumps(data), encoding="utf-8")
        return f"wrote {len(cat)} groups to {args.output}" if args.format == "text" else \
            {"groups": len(cat), "output": args.output}
    if args.format == "json":
        return data
    return "\n".join(f"{g.name}  order {g.order}  class {g.nilpotency_class}" for g in cat)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="generator names, e.g. 'ab' or 'x1,x2' (default: inferred)")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--max-states", type=int, help="cap on automaton product states")
    common.add_argument("--max-overgroups", type=int, help="cap on enumerated overgroups")
    common.add_argument("--max-monoid", type=int, help="cap on monoid size")
    common.add_argument("--max-homs", type=int, help="cap on enumerated homomorphisms per group")
    common.add_argument("--catalog", help="nilpotent group catalog JSON (default: bundled, order <= 16)")
    common.add_argument("--timing", action="store_true", help="report elapsed time on stderr")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="nilclose", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(subparsers, name, func, help_text, **kw):
        p = subparsers.add_parser(name, parents=[common], help=help_text, description=help_text, **kw)
        p.set_defaults(func=func)
        return p

    gens_help = "comma-separated generators, '-' for stdin or @file"
    add(sub, "stallings", cmd_stallings, "Stallings graph of a subgroup").add_argument(
        "generators", help=gens_help)
    add(sub, "overgroups", cmd_overgroups, "overgroups of a subgroup").add_argument(
        "generators", help=gens_help)
    add(sub, "primes-closed", cmd_primes_closed, "primes p for which a subgroup is p-closed") \
        .add_argument("generators", help=gens_help)
    p = add(sub, "pclosure", cmd_pclosure, "closure of a subgroup in the pro-p topology")
    p.add_argument("-p", type=int, required=True, help="a prime")
    p.add_argument("generators", help=gens_help)

    nil = sub.add_parser("nilclosure", help="closures in the pro-nilpotent topology")
    nsub = nil.add_subparsers(dest="kind", required=True)
    add(nsub, "subgroup", cmd_nil_subgroup, "nil-closure of a subgroup").add_argument(
        "generators", help=gens_help)
    add(nsub, "product", cmd_nil_product, "nil-closure of a product of subgroups").add_argument(
        "factors", nargs="+", help="generator lists separated by ';' tokens")
    add(nsub, "rational", cmd_nil_rational, "nil-closure of a rational subset").add_argument(
        "expression", help="rational expression or automaton JSON ('-' for stdin, @file)")

    clo = sub.add_parser("closure", help="closures in the profinite topology")
    csub = clo.add_subparsers(dest="kind", required=True)
    add(csub, "profinite", cmd_profinite, "profinite closure of a rational subset").add_argument(
        "expression", help="rational expression or automaton JSON ('-' for stdin, @file)")

    p = add(sub, "pseudonorm", cmd_pseudonorm, "catalog-bounded pro-nilpotent pseudonorm")
    p.add_argument("word")
    p.add_argument("--minus", help="second word; report the distance d(word, minus)")

    mon = sub.add_parser("monoid", help="finite monoid structure and G_nil-kernel")
    msub = mon.add_subparsers(dest="kind", required=True)
    for name, func, help_text in [("analyze", cmd_monoid_analyze, "structure report"),
                                  ("kernel", cmd_monoid_kernel, "G_nil-kernel")]:
        p = add(msub, name, func, help_text)
        p.add_argument("file", nargs="?", help="monoid JSON file or '-' for stdin")
        p.add_argument("--builtin", help="use a bundled monoid: " + ", ".join(builtin_monoids()))
        if name == "analyze":
            p.add_argument("--check", choices=["j-star-gnil", "j-malcev-gnil"])

    cat = sub.add_parser("catalog", help="nilpotent group catalog")
    gsub = cat.add_subparsers(dest="kind", required=True)
    p = add(gsub, "generate", cmd_catalog_generate, "generate the catalog")
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("-o", "--output")
    return parser


def _emit(result, fmt: str, out) -> None:
    if isinstance(result, (dict, list)):
        out.write(json.dumps(result, indent=2, ensure_ascii=False, sort_keys=False) + "\n")
    else:
        out.write(str(result).rstrip("\n") + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in ("max_states", "max_overgroups", "max_monoid", "max_homs")
                 if getattr(args, k) is not None}
    start = time.perf_counter()
    try:
        with caps(**overrides):
            result = args.func(args)
    except ResourceCapError as e:
        print(f"nilclose: resource cap exceeded: {e}", file=sys.stderr)
        return 3
    except InternalError as e:
        print(f"nilclose: internal error: {e}", file=sys.stderr)
        return 1
    except (UsageError, NilcloseError, ValueError, OSError, json.JSONDecodeError, KeyError) as e:
        print(f"nilclose: error: {e}", file=sys.stderr)
        return 2
    _emit(result, args.format, sys.stdout)
    if args.timing:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
