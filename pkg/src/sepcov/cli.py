"""Command-line interface.

The report goes to stdout as JSON and depends only on the inputs; a short
summary with timing goes to stderr.  Exit codes: 0 separable or coverable,
1 not, 2 usage or input error, 3 capacity guard.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .amt import amt_coverable, synth_amt_cover
from .automata import ext_to_doc, parse_nfa, serialize_nfa, trim
from .dyck import build_extended, build_inverse_completion
from .errors import CapacityError, SepcovError
from .gr import common_alphabet, gr_coverable
from .hardness import (Cnf3Formula, MonotoneCircuit, brute_sat3, eval_monotone_circuit,
                       sample_circuit, gen_amt_from_3sat, gen_gr_from_circuit,
                       gen_mod_from_3sat, random_circuit, random_formula, unfold_circuit)
from .mod import mod_coverable, mod_separable, synth_mod_separator, unary_extended
from .monoid import ash_gr_coverable

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(SepcovError):
    pass


def _load(paths):
    out = []
    for p in paths:
        try:
            text = Path(p).read_text()
        except OSError as exc:
            raise UsageError(f"{p}: {exc.strerror}") from None
        try:
            out.append(parse_nfa(text))
        except SepcovError as exc:
            raise UsageError(f"{p}: {exc}") from None
    return out


def _need(paths, lo, hi=None):
    if len(paths) < lo or (hi is not None and len(paths) > hi):
        want = str(lo) if hi == lo else f"at least {lo}"
        raise UsageError(f"expected {want} automata, got {len(paths)}")


def _verdict_word(yes: bool, sep: bool) -> str:
    if sep:
        return "separable" if yes else "not separable"
    return "coverable" if yes else "not coverable"


def _decide_gr(args, sep):
    inputs = _load(args.files)
    v = gr_coverable(inputs)
    doc = {"verdict": _verdict_word(v.coverable, sep)}
    doc.update(v.to_doc())
    if args.witness and not v.coverable:
        machines = [trim(a) for a in common_alphabet(inputs)]
        doc["witness_accepted"] = [build_extended(a).accepts(v.witness) for a in machines]
    if args.explain:
        machines = [trim(a) for a in common_alphabet(inputs)]
        doc["notes"] = {
            "method": "epsilon saturation of the inverse completion, then product emptiness",
            "inputs": [{"states": a.state_count,
                        "inverse_edges": len(build_inverse_completion(a).signed) - len(a.transitions),
                        "eps_pairs": len(build_extended(a).non_identity_eps())}
                       for a in machines],
        }
    return v.coverable, doc


def cmd_gr_sep(args):
    _need(args.files, 2, 2)
    return _decide_gr(args, sep=True)


def cmd_gr_cover(args):
    _need(args.files, 1)
    return _decide_gr(args, sep=False)


def cmd_amt_cover(args):
    _need(args.files, 1)
    inputs = _load(args.files)
    v = amt_coverable(inputs, method=args.method, budget=args.budget)
    doc = {"verdict": _verdict_word(v.coverable, len(inputs) == 2 and args.sep)}
    doc.update(v.to_doc())
    if not args.witness:
        doc.pop("realizations", None)
    if args.explain:
        doc["notes"] = {"method": args.method,
                        "counts": "letter minus inverse-letter occurrences over the inverse completion"}
    return v.coverable, doc


def cmd_mod_cover(args):
    _need(args.files, 1)
    v = mod_coverable(_load(args.files), budget=args.budget)
    doc = {"verdict": _verdict_word(v.coverable, False)}
    doc.update(v.to_doc())
    if not args.witness:
        doc.pop("realizations", None)
    if args.explain:
        doc["notes"] = {"method": "unary projection; abelian route checked against the group route"}
    return v.coverable, doc


def cmd_mod_sep(args):
    _need(args.files, 2, 2)
    l1, l2 = _load(args.files)
    v = mod_separable(l1, l2)
    doc = {"verdict": _verdict_word(v.coverable, True)}
    doc.update(v.to_doc())
    if args.explain:
        doc["notes"] = {"method": "unary projection with the bounded-height saturation",
                        "eps_pairs": [len(unary_extended(trim(a)).non_identity_eps())
                                      for a in (l1, l2)]}
    return v.coverable, doc


def cmd_synth_mod(args):
    _need(args.files, 2, 2)
    l1, l2 = _load(args.files)
    decided = mod_separable(l1, l2).coverable
    sep = synth_mod_separator(l1, l2, args.qmax) if decided else None
    doc = {"verdict": _verdict_word(decided, True),
           "separator": sep.to_doc() if sep else None}
    if decided and sep is None:
        doc["note"] = "no separator up to the modulus bound; inconclusive"
    return decided, doc


def cmd_synth_amt(args):
    _need(args.files, 1)
    inputs = _load(args.files)
    decided = amt_coverable(inputs, budget=args.budget).coverable
    cover = synth_amt_cover(inputs, args.dmax, args.budget) if decided else None
    doc = {"verdict": _verdict_word(decided, False),
           "cover": cover.to_doc() if cover else None}
    if decided and cover is None:
        doc["note"] = "no cover up to the modulus bound; inconclusive"
    return decided, doc


def cmd_check(args):
    _need(args.files, 1)
    inputs = _load(args.files)
    decider = gr_coverable(inputs).coverable
    oracle = ash_gr_coverable(inputs)
    doc = {"oracle": args.oracle, "decider": _verdict_word(decider, False),
           "oracle_verdict": _verdict_word(oracle, False), "agreement": decider == oracle}
    return decider == oracle, doc


def cmd_inspect(args):
    _need(args.files, 1, 1)
    (a,) = _load(args.files)
    return True, {"inverse_completion": ext_to_doc(build_inverse_completion(a)),
                  "extended": ext_to_doc(build_extended(a))}


def _read_spec(spec: str) -> str:
    p = Path(spec)
    return p.read_text() if p.is_file() else spec


def _random_seed(spec: str):
    if spec.startswith("random:"):
        try:
            return random.Random(int(spec.split(":", 1)[1]))
        except ValueError:
            raise UsageError(f"bad seed in {spec!r}") from None
    return None


def _circuit(spec: str) -> MonotoneCircuit:
    if spec == "sample":
        return sample_circuit()
    rng = _random_seed(spec)
    if rng is not None:
        return random_circuit(rng)
    try:
        return MonotoneCircuit.from_doc(json.loads(_read_spec(spec)))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad circuit: {exc.msg}") from None


def _formula(spec: str, max_vars: int) -> Cnf3Formula:
    rng = _random_seed(spec)
    if rng is not None:
        return random_formula(rng, max_vars, 6)
    try:
        return Cnf3Formula.parse(_read_spec(spec))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad formula: {exc}") from None


def cmd_gen(args):
    out = Path(args.out)
    if args.kind == "circuit":
        c = _circuit(args.spec)
        if args.unfold:
            c = unfold_circuit(c)
        value = eval_monotone_circuit(c)
        langs = gen_gr_from_circuit(c)
        source = {"circuit": c.to_doc(), "value": value}
        expected = {"command": "gr-sep", "verdict": _verdict_word(not value, True)}
    elif args.kind == "amt3sat":
        f = _formula(args.spec, 5)
        sat = brute_sat3(f)
        langs = gen_amt_from_3sat(f)
        source = {"formula": f.to_doc(), "satisfiable": sat}
        expected = {"command": "amt-cover", "verdict": _verdict_word(not sat, False)}
    else:
        f = _formula(args.spec, 4)
        sat = brute_sat3(f)
        langs = gen_mod_from_3sat(f)
        source = {"formula": f.to_doc(), "satisfiable": sat}
        expected = {"command": "mod-cover", "verdict": _verdict_word(not sat, False)}
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, a in enumerate(langs, 1):
        name = f"L{i}.nfa"
        (out / name).write_text(serialize_nfa(a))
        names.append(name)
    manifest = {"kind": args.kind, **source, "files": names, "expected": expected}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return True, manifest


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sepcov",
        description="Separation and covering of regular languages by group, "
                    "abelian-group and modulo languages.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help, files="+"):
        p = sub.add_parser(name, help=help)
        if files:
            p.add_argument("files", nargs=files, metavar="NFA")
        p.add_argument("--witness", action="store_true", help="include and check witnesses")
        p.add_argument("--explain", action="store_true", help="include algorithm notes")
        p.add_argument("--budget", type=int, default=None,
                       help="capacity guard for exact constructions (default: $SEPCOV_BUDGET)")
        p.set_defaults(func=func)
        return p

    add("gr-sep", cmd_gr_sep, "group separation of two automata")
    add("gr-cover", cmd_gr_cover, "group covering of several automata")
    p = add("amt-cover", cmd_amt_cover, "abelian-group covering")
    p.add_argument("--method", choices=("auto", "product", "images"), default="auto")
    p.add_argument("--sep", action="store_true", help="phrase the verdict as separation")
    add("mod-cover", cmd_mod_cover, "length-modulo covering")
    add("mod-sep", cmd_mod_sep, "length-modulo separation of two automata")
    p = add("synth-mod", cmd_synth_mod, "synthesize a length-modulo separator")
    p.add_argument("--qmax", type=int, default=None, help="largest modulus tried")
    p = add("synth-amt", cmd_synth_amt, "synthesize a letter-count-modulo cover")
    p.add_argument("--dmax", type=int, default=6, help="largest modulus tried")
    p = add("check", cmd_check, "cross-check the group decider against an oracle")
    p.add_argument("--oracle", choices=("ash",), default="ash")
    add("inspect", cmd_inspect, "print the inverse completion and its epsilon extension")
    p = add("gen", cmd_gen, "generate a reduction instance", files=None)
    p.add_argument("kind", choices=("circuit", "amt3sat", "mod3sat"))
    p.add_argument("spec", help="file, inline document, 'sample' or 'random:SEED'")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--unfold", action="store_true",
                   help="copy shared subcircuits before building the automaton")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        ok, doc = args.func(args)
    except CapacityError as exc:
        print(f"{args.command}: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SepcovError, ValueError) as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": args.command, **doc}
    print(json.dumps(report, indent=2))
    elapsed = time.perf_counter() - start
    summary = doc.get("verdict") or ("agreement" if doc.get("agreement") else "done")
    print(f"{args.command}: {summary} ({elapsed:.3f} s)", file=sys.stderr)
    return EXIT_YES if ok else EXIT_NO
