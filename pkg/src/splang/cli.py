"""Batch command-line front end.

Subcommand groups wrap the library one-to-one: ``term``, ``lang``, ``regex``,
``grammar``, ``automaton``, and ``equiv`` (the grammar/automaton bounded
equivalence check). Data goes to stdout, diagnostics to stderr, ``-`` means
stdin for any file argument, and every output is byte-deterministic.

Exit codes: 0 success/true, 1 false/inequality, 2 parse or usage error,
3 mode mismatch, 4 outside the regex fragment, 5 grammar classification.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import automata, grammars, langs, regexes, terms
from .errors import (
    EnumerationCapError,
    FragmentError,
    ModeMismatchError,
    NotParallelLinearError,
    SplangError,
    TermSyntaxError,
)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_PARSE = 2
EXIT_MODE = 3
EXIT_FRAGMENT = 4
EXIT_CLASS = 5


@dataclass(frozen=True)
class CliConfig:
    mode: terms.SemanticsMode = terms.ORDERED
    max_atoms: int = 5
    n_max: int = 3
    step_factor: int = 4
    step_offset: int = 8
    cap: int = terms.DEFAULT_CAP


def _config(args: argparse.Namespace) -> CliConfig:
    # the shared options use SUPPRESS defaults so a subparser never clobbers
    # a value parsed before the subcommand; missing attributes mean defaults
    mode_name = getattr(args, "mode", "ordered")
    mode = terms.COMMUTATIVE if mode_name == "commutative" else terms.ORDERED
    return CliConfig(
        mode=mode,
        max_atoms=getattr(args, "max_atoms", 5),
        n_max=getattr(args, "nmax", 3),
    )


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _steps(cfg: CliConfig, max_atoms: int) -> int:
    return cfg.step_factor * max_atoms + cfg.step_offset


# ---------------------------------------------------------------------------
# term

def _cmd_term(args) -> int:
    cfg = _config(args)
    if args.sub == "enum":
        lang = langs.universe(args.alphabet, cfg.max_atoms, cfg.mode, cfg.cap)
        sys.stdout.write(langs.dump_lang(lang))
        return EXIT_OK
    t = terms.canonicalize(terms.parse_term(args.term), cfg.mode)
    if args.sub == "metrics":
        print(
            f"lg={terms.length(t)} dp={terms.depth(t)} "
            f"atoms={terms.atoms_count(t)} class={terms.classify_term(t).value}"
        )
    elif args.sub == "reverse":
        print(terms.format_term(terms.canonicalize(terms.reverse_term(t), cfg.mode)))
    else:  # canon
        print(terms.format_term(t))
    return EXIT_OK


# ---------------------------------------------------------------------------
# lang

def _cmd_lang(args) -> int:
    cfg = _config(args)
    if args.sub in ("concat", "par", "union", "equal"):
        left = langs.load_lang(_read(args.left))
        right = langs.load_lang(_read(args.right))
        if args.sub == "equal":
            diff = langs.lang_equal(left, right)
            if diff:
                return EXIT_OK
            print(diff.report(), file=sys.stderr)
            return EXIT_FALSE
        op = {
            "concat": langs.concat_lang,
            "par": langs.par_lang,
            "union": langs.union_lang,
        }[args.sub]
        sys.stdout.write(langs.dump_lang(op(left, right)))
        return EXIT_OK
    lang = langs.load_lang(_read(args.file))
    if args.sub == "power":
        kind = langs.PowerKind(args.kind)
        n = cfg.n_max if args.n is None else args.n
        result = langs.power(lang, n, kind)
    elif args.sub == "closure":
        result = langs.kleene_bounded(lang, langs.ClosureKind(args.kind), cfg.n_max)
    else:  # reverse
        result = langs.reverse_lang(lang)
    sys.stdout.write(langs.dump_lang(result))
    return EXIT_OK


# ---------------------------------------------------------------------------
# regex

def _cmd_regex(args) -> int:
    cfg = _config(args)
    r = regexes.parse_regex(args.regex)
    if args.sub == "match":
        t = terms.parse_term(args.term)
        hit = regexes.matches(r, t, cfg.mode)
        print("true" if hit else "false")
        return EXIT_OK if hit else EXIT_FALSE
    if args.sub == "enum":
        alphabet = tuple(args.alphabet) if args.alphabet else regexes.regex_alphabet(r)
        lang = regexes.regex_enumerate(r, alphabet, cfg.max_atoms, cfg.mode, cfg.cap)
        sys.stdout.write(langs.dump_lang(lang))
        return EXIT_OK
    # to-grammar
    g = regexes.to_parallel_linear_grammar(r)
    sys.stdout.write(grammars.format_grammar(g))
    return EXIT_OK


# ---------------------------------------------------------------------------
# grammar

def _cmd_grammar(args) -> int:
    cfg = _config(args)
    g = grammars.parse_grammar(_read(args.file))
    if args.sub == "classify":
        print(" ".join(grammars.classify_grammar(g).flags()))
        return EXIT_OK
    if args.sub == "generate":
        lang = grammars.generate(g, cfg.max_atoms, _steps(cfg, cfg.max_atoms), cfg.mode, cfg.cap)
        sys.stdout.write(langs.dump_lang(lang))
        return EXIT_OK
    # member
    t = terms.parse_term(args.term)
    result = grammars.is_member(g, t, cfg.mode, cfg.step_factor, cfg.step_offset, cfg.cap)
    print("true" if result else "false")
    if result and args.trace:
        for form in result.trace:
            print(terms.format_term(form))
    return EXIT_OK if result else EXIT_FALSE


# ---------------------------------------------------------------------------
# automaton / equiv

def _cmd_automaton(args) -> int:
    cfg = _config(args)
    if args.sub == "from-grammar":
        g = grammars.parse_grammar(_read(args.file))
        sys.stdout.write(automata.serialize_automaton(automata.from_linear_grammar(g)))
        return EXIT_OK
    aut = automata.parse_automaton(_read(args.file))
    if args.sub == "accepts":
        t = terms.parse_term(args.term)
        hit = automata.accepts(aut, t)
        print("true" if hit else "false")
        return EXIT_OK if hit else EXIT_FALSE
    # enum
    alphabet = tuple(args.alphabet) if args.alphabet else automata.automaton_alphabet(aut)
    lang = automata.enumerate_accepted(aut, alphabet, cfg.max_atoms, cfg.cap)
    sys.stdout.write(langs.dump_lang(lang))
    return EXIT_OK


def _cmd_equiv(args) -> int:
    cfg = _config(args)
    g = grammars.parse_grammar(_read(args.file))
    aut = automata.from_linear_grammar(g)
    generated = grammars.generate(
        g, cfg.max_atoms, _steps(cfg, cfg.max_atoms), terms.COMMUTATIVE, cfg.cap
    )
    accepted = automata.enumerate_accepted(aut, sorted(g.terminals), cfg.max_atoms, cfg.cap)
    diff = langs.lang_equal(generated, accepted)
    if diff:
        print(f"equal: {len(generated)} words up to {cfg.max_atoms} atoms")
        return EXIT_OK
    print("not equal", file=sys.stderr)
    print(diff.report(), file=sys.stderr)
    return EXIT_FALSE


# ---------------------------------------------------------------------------
# parser assembly

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["ordered", "commutative"],
                        default=argparse.SUPPRESS,
                        help="semantics mode (default: ordered)")
    common.add_argument("--max-atoms", type=int, metavar="N",
                        default=argparse.SUPPRESS,
                        help="atom bound for enumerations (default: 5)")
    common.add_argument("--nmax", type=int, metavar="N",
                        default=argparse.SUPPRESS,
                        help="repetition bound for powers and closures (default: 3)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed reserved for fixture-grammar tooling")

    parser = argparse.ArgumentParser(prog="splang", parents=[common],
                                     description="series-parallel language workbench")
    sub = parser.add_subparsers(dest="group", required=True)

    p_term = sub.add_parser("term", parents=[common], help="term metrics and rewriting")
    term_sub = p_term.add_subparsers(dest="sub", required=True)
    for name in ("metrics", "reverse", "canon"):
        p = term_sub.add_parser(name, parents=[common])
        p.add_argument("term")
        p.set_defaults(func=_cmd_term, sub=name)
    p = term_sub.add_parser("enum", parents=[common])
    p.add_argument("--alphabet", default="ab", help="letters to enumerate over (default: ab)")
    p.set_defaults(func=_cmd_term, sub="enum")

    p_lang = sub.add_parser("lang", parents=[common], help="finite-language operations")
    lang_sub = p_lang.add_subparsers(dest="sub", required=True)
    for name in ("concat", "par", "union", "equal"):
        p = lang_sub.add_parser(name, parents=[common])
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=_cmd_lang, sub=name)
    p = lang_sub.add_parser("power", parents=[common])
    p.add_argument("file")
    p.add_argument("--kind", choices=["seq", "par"], required=True)
    p.add_argument("--n", type=int, default=None, help="exponent (default: --nmax)")
    p.set_defaults(func=_cmd_lang, sub="power")
    p = lang_sub.add_parser("closure", parents=[common])
    p.add_argument("file")
    p.add_argument("--kind", choices=["star", "par", "sp"], required=True)
    p.set_defaults(func=_cmd_lang, sub="closure")
    p = lang_sub.add_parser("reverse", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_lang, sub="reverse")

    p_regex = sub.add_parser("regex", parents=[common], help="regular-expression operations")
    regex_sub = p_regex.add_subparsers(dest="sub", required=True)
    p = regex_sub.add_parser("match", parents=[common])
    p.add_argument("regex")
    p.add_argument("term")
    p.set_defaults(func=_cmd_regex, sub="match")
    p = regex_sub.add_parser("enum", parents=[common])
    p.add_argument("regex")
    p.add_argument("--alphabet", default=None, help="letters (default: atoms of the regex)")
    p.set_defaults(func=_cmd_regex, sub="enum")
    p = regex_sub.add_parser("to-grammar", parents=[common])
    p.add_argument("regex")
    p.set_defaults(func=_cmd_regex, sub="to-grammar")

    p_grammar = sub.add_parser("grammar", parents=[common], help="grammar operations")
    grammar_sub = p_grammar.add_subparsers(dest="sub", required=True)
    p = grammar_sub.add_parser("classify", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_grammar, sub="classify")
    p = grammar_sub.add_parser("generate", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_grammar, sub="generate")
    p = grammar_sub.add_parser("member", parents=[common])
    p.add_argument("file")
    p.add_argument("term")
    p.add_argument("--trace", action="store_true", help="print the derivation on success")
    p.set_defaults(func=_cmd_grammar, sub="member")

    p_auto = sub.add_parser("automaton", parents=[common], help="branching-automaton operations")
    auto_sub = p_auto.add_subparsers(dest="sub", required=True)
    p = auto_sub.add_parser("from-grammar", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=_cmd_automaton, sub="from-grammar")
    p = auto_sub.add_parser("accepts", parents=[common])
    p.add_argument("file")
    p.add_argument("term")
    p.set_defaults(func=_cmd_automaton, sub="accepts")
    p = auto_sub.add_parser("enum", parents=[common])
    p.add_argument("file")
    p.add_argument("--alphabet", default=None, help="letters (default: transition labels)")
    p.set_defaults(func=_cmd_automaton, sub="enum")

    p_equiv = sub.add_parser("equiv", parents=[common],
                             help="bounded grammar/automaton language equality")
    p_equiv.add_argument("file")
    p_equiv.set_defaults(func=_cmd_equiv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TermSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ModeMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except FragmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRAGMENT
    except NotParallelLinearError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except (EnumerationCapError, SplangError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
