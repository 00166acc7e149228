"""Command-line entry point ``attackreduce``."""
from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

from . import fixtures
from .automaton import InvalidArgument, export_dot, trace_str
from .io import ParseError, load_alphabet, load_model, render_model, write_text
from .pipeline import (BRUTE_CAP, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, EXIT_USAGE,
                       context_artifacts, describe_congruence, ratio_text,
                       run_pipeline, write_models)
from .reduction import SearchTooLarge, as_attacker, brute_min, reduce_ra
from .transform import build_context
from .verify import attack_equivalent, check_covert, validate_attacker


class UsageError(Exception):
    pass


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def _context(args):
    _need(args, "plant", "sup", "alphabet")
    al = load_alphabet(args.alphabet)
    return build_context(load_model(args.plant), load_model(args.sup), al)


def cmd_transform(args) -> int:
    _need(args, "out")
    ctx = _context(args)
    write_models(Path(args.out), context_artifacts(ctx))
    for stem, aut in context_artifacts(ctx).items():
        print(f"{stem}: {aut.n_states} states, {aut.n_transitions} transitions")
    return EXIT_OK


def cmd_reduce(args) -> int:
    _need(args, "attacker")
    ctx = _context(args)
    a = as_attacker(load_model(args.attacker), ctx)
    c, reduced = reduce_ra(a, ctx)
    print(f"attacker states: {a.n_states} -> {reduced.n_states}")
    print(f"compression ratio {ratio_text(a.n_states, reduced.n_states)}")
    print(f"congruence: {describe_congruence(c, a)}")
    if args.brute:
        try:
            cb, _ = brute_min(a, ctx, max_states=BRUTE_CAP)
            print(f"exhaustive minimum: {len(cb)} states")
        except SearchTooLarge as e:
            print(f"exhaustive minimum: skipped ({e})")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_text(out / "reduced_attacker.fsa", render_model(reduced))
    else:
        sys.stdout.write(render_model(reduced))
    return EXIT_OK


def cmd_verify(args) -> int:
    _need(args, "attacker", "candidate")
    ctx = _context(args)
    a1 = as_attacker(load_model(args.attacker), ctx)
    a2 = as_attacker(load_model(args.candidate), ctx)
    same, cex = attack_equivalent(a1, a2, ctx)
    print("attack equivalent: yes" if same else f"attack equivalent: no ({cex})")
    return EXIT_OK if same else EXIT_INVALID


def cmd_check(args) -> int:
    _need(args, "attacker")
    ctx = _context(args)
    a = as_attacker(load_model(args.attacker), ctx)
    report = validate_attacker(a, ctx)
    print(report.render())
    covert, witness = check_covert(a, ctx)
    print("PASS covertness" if covert else f"FAIL covertness: {trace_str(witness)}")
    return EXIT_OK if report.ok and covert else EXIT_INVALID


def cmd_export_dot(args) -> int:
    text = export_dot(load_model(args.model))
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    _need(args, "plant", "sup", "attacker", "alphabet", "out")
    res = run_pipeline(args.plant, args.sup, args.attacker, args.alphabet,
                       args.out, brute=args.brute)
    sys.stdout.write(res.report)
    return res.exit_code


def cmd_fixture(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for src in fixtures.water_tank_files().values():
        shutil.copyfile(src, out / src.name)
        print(out / src.name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="attackreduce",
        description="Sensor-attack models for supervisory control: build, reduce, verify.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        for flag in flags:
            sp.add_argument(f"--{flag}", metavar="FILE" if flag != "out" else "DIR")

    sp = sub.add_parser("transform", help="write BT(S), BT(S)^A, CE and AC")
    common(sp, "plant", "sup", "alphabet", "out")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("reduce", help="reduce an attacker by control congruence")
    common(sp, "plant", "sup", "alphabet", "attacker", "out")
    sp.add_argument("--brute", action="store_true",
                    help=f"cross-check with exhaustive search (<= {BRUTE_CAP} states)")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("verify", help="check attack equivalence of two attackers")
    common(sp, "plant", "sup", "alphabet", "attacker", "candidate")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("check", help="validity and covertness of an attacker")
    common(sp, "plant", "sup", "alphabet", "attacker")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("export-dot", help="render a model file as Graphviz DOT")
    sp.add_argument("model")
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_export_dot)

    sp = sub.add_parser("pipeline", help="transform, validate, reduce and verify")
    common(sp, "plant", "sup", "alphabet", "attacker", "out")
    sp.add_argument("--brute", action="store_true")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("fixture", help="copy the water-tank example files")
    sp.add_argument("--out", metavar="DIR", required=True)
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgument as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
