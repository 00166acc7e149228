"""End-to-end run: build the attacked closed loop, validate, reduce, verify."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .automaton import Automaton, InvalidArgument, export_dot, trace_str
from .io import ParseError, load_alphabet, load_model, render_model, write_text
from .reduction import (Congruence, SearchTooLarge, as_attacker, brute_min,
                        compute_profile, is_congruence, reduce_ra)
from .transform import AttackContext, build_context
from .verify import attack_equivalent, check_covert, damage_witness, validate_attacker

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3

BRUTE_CAP = 14


def ratio_text(before: int, after: int) -> str:
    """``'14/3 (4.67)'``: exact quotient plus a half-up 2-decimal rendering."""
    value = (Decimal(before) / Decimal(after)).quantize(Decimal("0.01"), ROUND_HALF_UP)
    return f"{before}/{after} ({value})"


def describe_congruence(c: Congruence, a: Automaton) -> str:
    return " ".join("{" + ",".join(a.state_names[q] for q in sorted(cell)) + "}"
                    for cell in c.cells)


@dataclass
class PipelineResult:
    exit_code: int
    lines: list[str] = field(default_factory=list)
    reduced: Automaton | None = None
    congruence: Congruence | None = None

    @property
    def report(self) -> str:
        return "\n".join(self.lines) + "\n"


def context_artifacts(ctx: AttackContext) -> dict[str, Automaton]:
    return {"bts": ctx.bts, "bts_attacked": ctx.bts_attacked,
            "ce": ctx.ce, "ac": ctx.ac}


def write_models(out: Path, models: dict[str, Automaton]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for stem, aut in models.items():
        write_text(out / f"{stem}.fsa", render_model(aut))
        write_text(out / f"{stem}.dot", export_dot(aut))


def analyse(g: Automaton, s: Automaton, a: Automaton, alphabet,
            brute: bool = False) -> PipelineResult:
    """Run every stage in memory; nothing is written."""
    res = PipelineResult(EXIT_OK)
    out = res.lines
    try:
        ctx = build_context(g, s, alphabet)
        a = as_attacker(a, ctx)
    except InvalidArgument as e:
        out.append(f"error: {e}")
        res.exit_code = EXIT_INVALID
        return res
    out.append(f"plant: {g.n_states} states, {len(g.marked)} damage")
    out.append(f"supervisor: {s.n_states} states, {len(ctx.gammas)} commands")
    out.append(f"models: |BT(S)|={ctx.bts.n_states} |BT(S)^A|={ctx.bts_attacked.n_states} "
               f"|CE|={ctx.ce.n_states} |AC|={ctx.ac.n_states} "
               f"|G||CE||BT(S)^A|={ctx.plant_prime.n_states}")
    broken = ctx.size_violations()
    if broken:
        out.extend(f"invariant violated: {b}" for b in broken)
        res.exit_code = EXIT_INTERNAL
        return res

    report = validate_attacker(a, ctx)
    out.append("validity:")
    out.extend("  " + line for line in report.render().splitlines())
    if not report.ok:
        res.exit_code = EXIT_INVALID
        return res
    covert, witness = check_covert(a, ctx)
    out.append("covert: yes" if covert else f"covert: no, exposed by {trace_str(witness)}")

    c, reduced = reduce_ra(a, ctx)
    res.congruence, res.reduced = c, reduced
    ok, why = is_congruence(c, a, compute_profile(a, ctx))
    if not ok:
        out.append(f"invariant violated: {why}")
        res.exit_code = EXIT_INTERNAL
        return res
    out.append(f"attacker states: {a.n_states} -> {reduced.n_states}")
    out.append(f"compression ratio {ratio_text(a.n_states, reduced.n_states)}")
    out.append(f"congruence: {describe_congruence(c, a)}")
    if brute:
        try:
            cb, _ = brute_min(a, ctx, max_states=BRUTE_CAP)
            out.append(f"exhaustive minimum: {len(cb)} states")
        except SearchTooLarge as e:
            out.append(f"exhaustive minimum: skipped ({e})")
    same, cex = attack_equivalent(a, reduced, ctx)
    if same:
        out.append("attack equivalent: yes")
    else:
        out.append(f"attack equivalent: NO ({cex})")
        res.exit_code = EXIT_INTERNAL
        return res
    dmg = damage_witness(reduced, ctx)
    out.append("damage witness: " + (trace_str(dmg) if dmg is not None else "none"))
    return res


def run_pipeline(plant, sup, attacker, alphabet, out_dir, brute: bool = False) -> PipelineResult:
    """Load the four input files, analyse, and write artifacts to ``out_dir``."""
    out = Path(out_dir)
    try:
        al = load_alphabet(alphabet)
        g, s, a = load_model(plant), load_model(sup), load_model(attacker)
    except (OSError, ParseError, InvalidArgument) as e:
        return PipelineResult(EXIT_USAGE, [f"error: {e}"])
    res = analyse(g, s, a, al, brute=brute)
    out.mkdir(parents=True, exist_ok=True)
    try:
        write_models(out, context_artifacts(build_context(g, s, al)))
    except InvalidArgument:
        pass  # already reported by analyse()
    if res.reduced is not None:
        write_models(out, {"reduced_attacker": res.reduced})
    write_text(out / "report.txt", res.report)
    log.info("pipeline finished with exit code %d", res.exit_code)
    return res
