"""nilmassey command line: lemma suites, scenario verification, random suites.

Exit codes: 0 success, 1 mathematical or scenario validation failure,
2 usage error or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources
from math import factorial, gcd
from pathlib import Path

from . import __version__
from .action import BadCharacter, InvalidAction, make_cyclic_action
from .coeffs import ModulusError, check_modulus
from .lemmas import run_lemma_suite
from .magnus import Series, gen_x, gen_y, group_commutator, group_power
from .obstruction import mu_delta_report, verify_main_theorem
from .scenarios import (
    PROFILES,
    SCENARIO_VERSION,
    NotLiftable,
    Scenario,
    ScenarioError,
    parse_scenario,
    random_scenarios,
    scenario_cocycle,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- argument helpers -------------------------------------------------------------

def parse_int_list(text: str) -> list[int]:
    """'3..6' or '3,4,7' or a mix like '3..4,7'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


_TOKEN = re.compile(r"\s*(\[|\]|,|\*|\^-?\d+|[xy])")


def parse_word(text: str, n: int, m: int) -> Series:
    """Group word in x, y with products '*', powers '^k' and commutators '[a,b]'."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise UsageError(f"cannot parse word at {text[pos:]!r}")
        tokens.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def expr():
        nonlocal i
        out = term()
        while i < len(tokens) and tokens[i] == "*":
            i += 1
            out = out * term()
        return out

    def term():
        nonlocal i
        if i >= len(tokens):
            raise UsageError("unexpected end of word")
        tok = tokens[i]
        i += 1
        if tok == "x":
            out = gen_x(n, m)
        elif tok == "y":
            out = gen_y(n, m)
        elif tok == "[":
            a = expr()
            if i >= len(tokens) or tokens[i] != ",":
                raise UsageError("expected ',' in commutator")
            i += 1
            b = expr()
            if i >= len(tokens) or tokens[i] != "]":
                raise UsageError("expected ']'")
            i += 1
            out = group_commutator(a, b)
        else:
            raise UsageError(f"unexpected token {tok!r}")
        while i < len(tokens) and tokens[i].startswith("^"):
            out = group_power(out, int(tokens[i][1:]))
            i += 1
        return out

    word = expr()
    if i != len(tokens):
        raise UsageError(f"trailing input in word {text!r}")
    return word


def emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def load_json(path: str) -> dict:
    """Read a JSON file; bundled fixtures are found by file name as a fallback."""
    p = Path(path)
    if not p.exists():
        bundled = resources.files("nilmassey") / "data" / p.name
        if not bundled.is_file():
            raise UsageError(f"no such file: {path}")
        return json.loads(bundled.read_text())
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e})")


# -- running scenarios ------------------------------------------------------------

def run_scenario(sc: Scenario, timing: bool = False) -> dict:
    try:
        q = scenario_cocycle(sc)
    except NotLiftable as e:
        return {"scenario": sc.id, "ok": False, "error": f"recipe does not lift: {e}", "path": "cocycle"}
    except (ValueError, KeyError, TypeError, ArithmeticError) as e:
        return {"scenario": sc.id, "ok": False, "error": f"bad cocycle recipe: {e}", "path": "cocycle"}
    if not q.is_valid():
        return {"scenario": sc.id, "ok": False, "error": "cocycle law fails", "path": "cocycle",
                "witness": list(q.failures()[0])}
    if q.level == sc.n + 1:
        rep = verify_main_theorem(sc.spec, q, sc.id, check=False)
    else:
        rep = mu_delta_report(sc.spec, q, sc.id)
    out = rep.to_json(timing=timing)
    if sc.seed is not None:
        out["seed"] = sc.seed
    return out


def summarize(results: list[dict]) -> dict:
    return {
        "scenarios": len(results),
        "passed": sum(1 for r in results if r.get("ok")),
        "failures": sum(1 for r in results if not r.get("ok")),
        "classes_nontrivial": sum(1 for r in results if r.get("massey_class") not in (None, "0")),
        "delta_nonzero": sum(1 for r in results if r.get("delta_class_zero") is False),
    }


# -- subcommands --------------------------------------------------------------------

def cmd_check_lemmas(args) -> int:
    ns = parse_int_list(args.n)
    ms = parse_int_list(args.m)
    if min(ns) < 3:
        raise UsageError("n must be at least 3")
    if args.trials < 0:
        raise UsageError("trials must be non-negative")
    for m in ms:
        if m < 2 or gcd(m, factorial(min(ns))) != 1:
            raise UsageError(f"m = {m}: gcd(m, {min(ns)}!) != 1")
    rep = run_lemma_suite(ns, ms, args.trials, args.seed)
    emit({"version": __version__, **rep.to_json(timing=args.timing)}, args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    data = load_json(args.file)
    if not isinstance(data, dict) or not isinstance(data.get("scenarios"), list):
        raise UsageError("expected an object with a 'scenarios' list")
    results, seen = [], set()
    for i, item in enumerate(data["scenarios"]):
        try:
            sc = parse_scenario(item, i)
        except ScenarioError as e:
            results.append({"scenario": e.scenario, "ok": False, "error": e.message, "path": e.path})
            continue
        if sc.id in seen:
            raise UsageError(f"duplicate scenario id {sc.id!r}")
        seen.add(sc.id)
        results.append(run_scenario(sc, args.timing))
    results.sort(key=lambda r: str(r.get("scenario")))
    report = {"version": __version__, "seed": data.get("seed"), "results": results, "summary": summarize(results)}
    emit(report, args.out)
    return EXIT_OK if all(r.get("ok") for r in results) else EXIT_FAIL


def cmd_random_suite(args) -> int:
    if args.count < 0:
        raise UsageError("count must be non-negative")
    scenarios = random_scenarios(args.count, args.seed, args.profile)
    results = [run_scenario(sc, args.timing) for sc in scenarios]
    results.sort(key=lambda r: str(r.get("scenario")))
    report = {
        "version": __version__,
        "seed": args.seed,
        "profile": args.profile,
        "results": results,
        "summary": summarize(results),
    }
    if args.scenarios_out:
        emit({"version": SCENARIO_VERSION, "seed": args.seed, "scenarios": [s.to_json() for s in scenarios]},
             args.scenarios_out)
    emit(report, args.out)
    return EXIT_OK if all(r.get("ok") for r in results) else EXIT_FAIL


def cmd_make_action(args) -> int:
    try:
        check_modulus(args.m, args.n)
    except ModulusError as e:
        raise UsageError(str(e))
    gamma = parse_word(args.gamma, args.n, args.m) if args.gamma else Series.one(args.n, args.m)
    try:
        spec = make_cyclic_action(args.d, args.c, gamma, args.n, args.m)
    except (BadCharacter, ValueError) as e:
        raise UsageError(str(e))
    emit(spec.to_json(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilmassey", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-lemmas", help="randomized checks of the matrix lemmas")
    p.add_argument("--n", default="3..6", help="degrees, e.g. 3..6 or 3,5")
    p.add_argument("--m", default="25,49,121,125", help="moduli, comma separated")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
    p.set_defaults(func=cmd_check_lemmas)

    p = sub.add_parser("verify", help="verify every scenario of a scenario file")
    p.add_argument("file")
    p.add_argument("--out", default="-")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random-suite", help="generate and verify random scenarios")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", choices=PROFILES, default="default")
    p.add_argument("--out", default="-")
    p.add_argument("--scenarios-out", default=None, help="also write the generated scenario file")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_random_suite)

    p = sub.add_parser("make-action", help="emit ActionSpec JSON for a cyclic action")
    p.add_argument("--d", type=int, required=True, help="order of the cyclic group")
    p.add_argument("--c", type=int, required=True, help="chi(sigma), with c^d = 1 mod m")
    p.add_argument("--gamma", default=None, help="element of [pi]_2, e.g. '[x,y]*[[x,y],x]'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_make_action)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ScenarioError, InvalidAction, ModulusError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
