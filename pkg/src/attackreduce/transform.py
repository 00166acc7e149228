"""Closed-loop models under sensor attack.

From a plant ``G`` (damage states marked), a supervisor ``S`` and an
:class:`AlphabetSpec` this builds the command-execution automaton, the
attack-constraint automaton, the bipartite supervisor and its attacked
variant, and finally the surrogate plant ``G || CE || BT(S)^A`` against
which attackers are analysed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .alphabet import AlphabetSpec
from .automaton import (Automaton, EventLabel, InvalidArgument, accessible,
                        label_key, sync_product)

NO_COVERT = "no_covert"


class InfeasibleSupervisor(InvalidArgument):
    pass


def gamma_of(s: Automaton, q: int, alphabet: AlphabetSpec) -> EventLabel:
    """Control command issued by ``s`` at state ``q`` (its enabled set)."""
    if not 0 <= q < s.n_states:
        raise InvalidArgument(f"unknown supervisor state {q!r}")
    enabled = {lab.name for lab in s.delta[q] if lab.is_plain}
    missing = alphabet.sigma_uc - enabled
    if missing:
        raise InfeasibleSupervisor(
            f"supervisor state {s.state_names[q]!r} disables uncontrollable "
            f"events {sorted(missing)}")
    return EventLabel.command(enabled)


def supervisor_commands(s: Automaton, alphabet: AlphabetSpec) -> list[EventLabel]:
    """Distinct commands issued by ``s``, in canonical order."""
    return sorted({gamma_of(s, q, alphabet) for q in range(s.n_states)}, key=label_key)


def build_ce(gammas: Iterable[EventLabel], alphabet: AlphabetSpec) -> Automaton:
    """Command execution: accept a command, run unobservables, fire one observable."""
    gammas = sorted(set(gammas), key=label_key)
    if not gammas:
        raise InvalidArgument("build_ce needs at least one command")
    for g in gammas:
        if not g.is_command:
            raise InvalidArgument(f"{g} is not a control command")
        if not alphabet.sigma_uc <= g.members:
            raise InvalidArgument(f"command {g} omits uncontrollable events")
        alphabet.check_label(g)
    names = ["ce_init"] + [f"q_{g}" for g in gammas]
    rows: list[dict[EventLabel, int]] = [{g: i + 1 for i, g in enumerate(gammas)}]
    for i, g in enumerate(gammas, start=1):
        row = {}
        for e in sorted(g.members):
            row[EventLabel.plain(e)] = i if e in alphabet.sigma_uo else 0
        rows.append(row)
    return Automaton(names, alphabet.plain | frozenset(gammas), rows, 0,
                     range(len(names)), name="CE")


def build_ac(alphabet: AlphabetSpec) -> Automaton:
    """Two-state model of the replace-after-observe attack mechanism."""
    init: dict[EventLabel, int] = {}
    obs: dict[EventLabel, int] = {}
    for e in sorted(alphabet.sigma):
        init[EventLabel.plain(e)] = 1 if e in alphabet.sigma_sa else 0
    for e in sorted(alphabet.sigma_sa):
        obs[EventLabel.attacked(e)] = 0
    return Automaton(["ac_init", "obs"], alphabet.attacker_alphabet,
                     [init, obs], 0, [0, 1], name="AC")


def bipartize(s: Automaton, alphabet: AlphabetSpec) -> Automaton:
    """Split every supervisor state into a command state and a reaction state.

    Reaction states keep the supervisor's numbering ``0..n-1``; command
    states follow as ``n..2n-1`` named ``<state>_com``.
    """
    n = s.n_states
    for lab in s.alphabet:
        if not lab.is_plain:
            raise InvalidArgument(f"supervisor uses non-plain label {lab}")
        alphabet.check_label(lab)
    gammas = [gamma_of(s, q, alphabet) for q in range(n)]
    rows: list[dict[EventLabel, int]] = []
    for q in range(n):
        row = {}
        for lab, dst in s.delta[q].items():
            if lab.name in alphabet.sigma_uo:
                if dst != q:
                    raise InfeasibleSupervisor(
                        f"unobservable event {lab} moves supervisor from "
                        f"{s.state_names[q]!r} to {s.state_names[dst]!r}")
                row[lab] = q
            else:
                row[lab] = n + dst
        rows.append(row)
    for q in range(n):
        rows.append({gammas[q]: q})
    names = list(s.state_names) + [f"{nm}_com" for nm in s.state_names]
    return Automaton(names, alphabet.plain | frozenset(gammas), rows,
                     n + s.initial, range(2 * n), name="BT(S)")


def reaction_states(bts: Automaton) -> list[int]:
    """States of a bipartite supervisor that react to plant events."""
    out = []
    for q, row in enumerate(bts.delta):
        cmd = any(lab.is_command for lab in row)
        plain = any(not lab.is_command for lab in row)
        if cmd and plain:
            raise InvalidArgument(
                f"state {bts.state_names[q]!r} mixes command and event transitions")
        if not cmd:
            out.append(q)
    return out


def attack_bipartize(bts: Automaton, alphabet: AlphabetSpec) -> tuple[Automaton, int]:
    """Relabel compromised observations to their attacked copies.

    Returns the attacked supervisor and the index of its exposure sink
    ``no_covert``, reached whenever the supervisor receives a reading it
    could not have received without an attack.
    """
    reacting = set(reaction_states(bts))
    sink = bts.n_states
    rows: list[dict[EventLabel, int]] = []
    for q, row in enumerate(bts.delta):
        new = {}
        for lab, dst in row.items():
            if lab.is_plain and lab.name in alphabet.sigma_sa and q in reacting:
                new[EventLabel.attacked(lab.name)] = dst
                new[lab] = q
            else:
                new[lab] = dst
        if q in reacting:
            for e in alphabet.sigma_sa:
                if EventLabel.plain(e) not in row:
                    new[EventLabel.attacked(e)] = sink
            for e in alphabet.sigma_o - alphabet.sigma_sa:
                if EventLabel.plain(e) not in row:
                    new[EventLabel.plain(e)] = sink
        rows.append(new)
    rows.append({})
    alph = bts.alphabet | alphabet.plain | alphabet.attacked
    out = Automaton(list(bts.state_names) + [NO_COVERT], alph, rows,
                    bts.initial, range(sink + 1), name="BT(S)^A")
    return out, sink


@dataclass(frozen=True)
class AttackContext:
    """Everything an attacker is analysed against.

    ``plant_prime`` is ``G || CE || BT(S)^A``; its ``components`` give the
    (plant, CE, attacked supervisor) state behind each of its states.
    """

    alphabet: AlphabetSpec
    plant: Automaton
    supervisor: Automaton
    ce: Automaton
    ac: Automaton
    bts: Automaton
    bts_attacked: Automaton
    plant_prime: Automaton
    no_covert_state: int
    gammas: tuple[EventLabel, ...]

    def size_violations(self) -> list[str]:
        """Broken structural size invariants (empty when all hold)."""
        ns = self.supervisor.n_states
        bad = []
        if self.bts.n_states != 2 * ns:
            bad.append(f"|BT(S)| = {self.bts.n_states}, expected {2 * ns}")
        if self.bts_attacked.n_states != 2 * ns + 1:
            bad.append(f"|BT(S)^A| = {self.bts_attacked.n_states}, expected {2 * ns + 1}")
        if self.ac.n_states != 2:
            bad.append(f"|AC| = {self.ac.n_states}, expected 2")
        if self.ce.n_states != len(self.gammas) + 1:
            bad.append(f"|CE| = {self.ce.n_states}, expected {len(self.gammas) + 1}")
        return bad


def build_context(g: Automaton, s: Automaton, alphabet: AlphabetSpec) -> AttackContext:
    """Assemble all derived models for plant ``g`` under supervisor ``s``.

    Both inputs are widened to the full event set so that no plant event
    interleaves freely in a product.
    """
    for aut, what in ((g, "plant"), (s, "supervisor")):
        for lab in aut.alphabet:
            if not lab.is_plain:
                raise InvalidArgument(f"{what} uses non-plain label {lab}")
            alphabet.check_label(lab)
    g = g.with_alphabet(alphabet.plain).renamed(g.name or "G")
    s = s.with_alphabet(alphabet.plain).renamed(s.name or "S")
    gammas = tuple(supervisor_commands(s, alphabet))
    ce = build_ce(gammas, alphabet)
    ac = build_ac(alphabet)
    bts = bipartize(s, alphabet)
    bts_a, sink = attack_bipartize(bts, alphabet)
    plant_prime = accessible(sync_product([g, ce, bts_a], name="G||CE||BT(S)^A"))
    return AttackContext(alphabet, g, s, ce, ac, bts, bts_a, plant_prime, sink, gammas)
