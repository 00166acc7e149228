"""Attack equivalence, attacker validity and covertness checks."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automaton import (Automaton, EventLabel, InvalidArgument, label_key,
                        language_equal, marked_language_equal, shortest_path,
                        trace_str)
from .reduction import as_attacker, closed_loop
from .transform import AttackContext


@dataclass(frozen=True)
class Counterexample:
    kind: str  # "closed" or "marked"
    trace: tuple[EventLabel, ...]

    def __str__(self):
        return f"{self.kind}: {trace_str(self.trace)}"


def attack_equivalent(a1: Automaton, a2: Automaton,
                      ctx: AttackContext) -> tuple[bool, Counterexample | None]:
    """Do both attackers yield the same closed and marked closed-loop behaviour?"""
    if a1.alphabet != a2.alphabet:
        raise InvalidArgument("attackers are over different alphabets")
    b1 = closed_loop(as_attacker(a1, ctx), ctx)
    b2 = closed_loop(as_attacker(a2, ctx), ctx)
    same, w = language_equal(b1, b2)
    if not same:
        return False, Counterexample("closed", w)
    same, w = marked_language_equal(b1, b2)
    if not same:
        return False, Counterexample("marked", w)
    return True, None


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self):
        head = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        return f"{head}: {self.detail}" if self.detail else head


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        return "\n".join(str(c) for c in self.checks)


def _ac_containment(a: Automaton, ac: Automaton) -> CheckResult:
    # Simulate a inside AC; every reachable a-move must be matched.
    start = (a.initial, ac.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        qa, qc = pair
        for lab in sorted(a.delta[qa], key=label_key):
            nc = ac.delta[qc].get(lab)
            if nc is None:
                trace = [lab]
                node = pair
                while parent[node] is not None:
                    node, l2 = parent[node]
                    trace.append(l2)
                return CheckResult("ac-containment", False,
                                   f"{trace_str(tuple(reversed(trace)))} not in L(AC)")
            nxt = (a.delta[qa][lab], nc)
            if nxt not in parent:
                parent[nxt] = (pair, lab)
                queue.append(nxt)
    return CheckResult("ac-containment", True)


def _controllability(a: Automaton, ctx: AttackContext) -> CheckResult:
    # The attacker may only withhold attacked copies; any other label the
    # surrogate plant offers must be followed.
    b = closed_loop(a, ctx)
    plant = ctx.plant_prime

    def bad(x: int) -> bool:
        p, qa = b.components[x]
        return any(not lab.is_attacked and lab in a.alphabet and lab not in a.delta[qa]
                   for lab in plant.delta[p])

    path = shortest_path(b, bad)
    if path is None:
        return CheckResult("controllability", True)
    p, qa = b.components[b.run(path)]
    labs = sorted((lab for lab in plant.delta[p]
                   if not lab.is_attacked and lab in a.alphabet and lab not in a.delta[qa]),
                  key=label_key)
    return CheckResult("controllability", False,
                       f"{trace_str(path + (labs[0],))} disables {labs[0]} "
                       f"at attacker state {a.state_names[qa]}")


def _feasibility(a: Automaton, ctx: AttackContext) -> CheckResult:
    hidden = ctx.alphabet.sigma - ctx.alphabet.sigma_oa
    for q, lab, dst in a.transitions():
        if lab.is_plain and lab.name in hidden and dst != q:
            return CheckResult("feasibility", False,
                               f"unobserved {lab} moves {a.state_names[q]} -> {a.state_names[dst]}")
    return CheckResult("feasibility", True)


def validate_attacker(a: Automaton, ctx: AttackContext) -> ValidityReport:
    """Run the AC-containment, controllability and feasibility checks."""
    a = as_attacker(a, ctx)
    return ValidityReport((_ac_containment(a, ctx.ac),
                           _controllability(a, ctx),
                           _feasibility(a, ctx)))


def check_covert(a: Automaton, ctx: AttackContext) -> tuple[bool, tuple[EventLabel, ...] | None]:
    """Covert iff the closed loop never drives the supervisor into ``no_covert``."""
    b = closed_loop(as_attacker(a, ctx), ctx)
    sup = [ctx.plant_prime.components[p][2] for p, _ in b.components]
    path = shortest_path(b, lambda x: sup[x] == ctx.no_covert_state)
    return path is None, path


def damage_witness(a: Automaton, ctx: AttackContext) -> tuple[EventLabel, ...] | None:
    """Shortest closed-loop string reaching a damage state under ``a``."""
    b = closed_loop(as_attacker(a, ctx), ctx)
    return shortest_path(b, lambda x: x in b.marked)
