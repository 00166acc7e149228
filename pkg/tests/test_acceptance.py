"""Acceptance gate: one PASS/FAIL line per criterion (run with ``-s`` to see them)."""
import random
import time

from attackreduce import (attack_equivalent, build_context, check_covert, damage_witness,
                          language_equal, marked_language_equal)
from attackreduce.fixtures import water_tank_files
from attackreduce.pipeline import run_pipeline
from attackreduce.reduction import (brute_min, compute_profile, induce, is_congruence,
                                    ra_congruence, reduce_ra)
from attackreduce.automaton import Automaton

from _gen import plain, random_dfa, random_system, strings_upto

SUITE_SEED = 2024


def verdict(n: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def random_suite(count: int, seed: int = SUITE_SEED):
    rng = random.Random(seed)
    for _ in range(count):
        g, s, a, al = random_system(rng, max_plant=6, max_sup=5, max_att=7)
        yield g, s, a, al, build_context(g, s, al)


def test_criterion_1_water_tank_end_to_end(tmp_path, tank_ctx, tank_attacker):
    f = water_tank_files()
    t0 = time.perf_counter()
    res = run_pipeline(f["plant"], f["sup"], f["attacker"], f["alphabet"], tmp_path)
    elapsed = time.perf_counter() - t0
    canonical_ok = (res.exit_code == 0 and tank_attacker.n_states == 14
                    and res.reduced.n_states == 3
                    and attack_equivalent(tank_attacker, res.reduced, tank_ctx)[0])

    profile = compute_profile(tank_attacker, tank_ctx)
    rng = random.Random(7)
    worst = 0
    all_equal = True
    for _ in range(60):
        order = list(range(tank_attacker.n_states))
        rng.shuffle(order)
        c = ra_congruence(tank_attacker, profile, order)
        reduced = induce(c, tank_attacker, profile)
        worst = max(worst, reduced.n_states)
        all_equal &= attack_equivalent(tank_attacker, reduced, tank_ctx)[0]
    ok = canonical_ok and worst <= 4 and all_equal and elapsed < 1.0
    verdict(1, ok, f"canonical 14 -> {res.reduced.n_states if res.reduced else None}, "
                   f"worst over 60 orders {worst}, equivalent={all_equal}, "
                   f"pipeline {elapsed:.3f}s")


def test_criterion_2_compression_ratio(tmp_path):
    f = water_tank_files()
    res = run_pipeline(f["plant"], f["sup"], f["attacker"], f["alphabet"], tmp_path)
    line = next((x for x in res.lines if x.startswith("compression ratio ")), "")
    verdict(2, line == "compression ratio 14/3 (4.67)", repr(line))


def test_criterion_3_congruence_property_suite():
    t0 = time.perf_counter()
    n = passed = 0
    first_bad = None
    for g, s, a, al, ctx in random_suite(250):
        n += 1
        c, reduced = reduce_ra(a, ctx)
        ok_c, why = is_congruence(c, a, compute_profile(a, ctx))
        same, cex = attack_equivalent(a, reduced, ctx)
        if ok_c and same:
            passed += 1
        elif first_bad is None:
            first_bad = why or str(cex)
    elapsed = time.perf_counter() - t0
    verdict(3, passed == n and elapsed < 60,
            f"{passed}/{n} systems, {elapsed:.2f}s" + (f", first failure {first_bad}"
                                                      if first_bad else ""))


def test_criterion_4_oracle_dominance(tank_ctx, tank_attacker):
    n = good = 0
    for g, s, a, al, ctx in random_suite(80, seed=SUITE_SEED + 1):
        n += 1
        cr, ra = reduce_ra(a, ctx)
        cb, bm = brute_min(a, ctx, max_states=7)
        if (len(cb) <= len(cr) and attack_equivalent(a, ra, ctx)[0]
                and attack_equivalent(a, bm, ctx)[0]):
            good += 1
    tank_min, _ = brute_min(tank_attacker, tank_ctx, max_states=14)
    verdict(4, good == n and len(tank_min) == 3,
            f"{good}/{n} random attackers dominated, water-tank minimum {len(tank_min)}")


def test_criterion_5_size_invariants():
    n = 0
    broken = []
    for g, s, a, al, ctx in random_suite(250):
        n += 1
        ns = s.n_states
        commands = {frozenset(row) for row in s.delta}
        sizes = (ctx.bts.n_states, ctx.bts_attacked.n_states, ctx.ac.n_states,
                 ctx.ce.n_states)
        expected = (2 * ns, 2 * ns + 1, 2, len(commands) + 1)
        if sizes != expected:
            broken.append((sizes, expected))
    verdict(5, not broken, f"{n} contexts, {len(broken)} violations")


def _split_state(rng, a: Automaton) -> Automaton:
    """Same language: clone one state and point some incoming edges at the clone."""
    q = rng.randrange(a.n_states)
    n = a.n_states
    rows = [dict(r) for r in a.delta] + [dict(a.delta[q])]
    for r in rows:
        for lab, dst in r.items():
            if dst == q and rng.random() < 0.5:
                r[lab] = n
    marked = set(a.marked) | ({n} if q in a.marked else set())
    return Automaton(list(a.state_names) + ["clone"], a.alphabet, rows,
                     n if a.initial == q and rng.random() < 0.5 else a.initial, marked)


def _agrees(a, b, marked, k=8):
    same, w = (marked_language_equal if marked else language_equal)(a, b)
    la, lb = strings_upto(a, k, marked), strings_upto(b, k, marked)
    diff = la ^ lb
    if same:
        return not diff
    if len(w) > k:
        return not diff
    return (bool(diff) and w in diff and min(len(x) for x in diff) == len(w))


def test_criterion_6_equivalence_oracle():
    rng = random.Random(SUITE_SEED)
    labels = plain("a", "b")
    n = ok = equal_seen = 0
    for i in range(150):
        a = random_dfa(rng, rng.randint(1, 6), labels)
        b = _split_state(rng, a) if i % 3 == 0 else random_dfa(rng, rng.randint(1, 6), labels)
        for marked in (False, True):
            n += 1
            ok += _agrees(a, b, marked)
            equal_seen += (marked_language_equal if marked else language_equal)(a, b)[0]
    verdict(6, ok == n, f"{ok}/{n} comparisons agree ({equal_seen} equal pairs)")


def test_criterion_7_covertness_and_damage(tank_ctx, tank_attacker):
    covert, _ = check_covert(tank_attacker, tank_ctx)
    _, reduced = reduce_ra(tank_attacker, tank_ctx)
    w = [str(x) for x in (damage_witness(reduced, tank_ctx) or ())]
    want = ["H", "L#", "cmd{EH,H,L,close}", "close", "EH"]
    it = iter(w)
    in_order = all(x in it for x in want)
    verdict(7, covert and bool(w) and w[-1] == "EH" and in_order,
            f"covert={covert}, witness {' '.join(w)}")
