"""Attacker reduction by control congruence.

The attacker is treated as a supervisor of the surrogate plant
``G || CE || BT(S)^A``.  States whose enabled and disabled event sets never
clash may be merged, provided the merge is closed under successors.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automaton import (Automaton, EventLabel, InvalidArgument, label_key,
                        sync_product)
from .transform import AttackContext


@dataclass(frozen=True)
class EnDisProfile:
    """Per attacker state: labels it enables, and labels it visibly disables.

    A label is disabled at ``q`` when the surrogate plant can fire it at
    some closed-loop state paired with ``q`` but ``q`` does not define it.
    """

    en: tuple[frozenset[EventLabel], ...]
    dis: tuple[frozenset[EventLabel], ...]

    def __len__(self):
        return len(self.en)


def closed_loop(a: Automaton, ctx: AttackContext) -> Automaton:
    """``G || CE || BT(S)^A || a``; components are (plant' state, a state)."""
    return sync_product([ctx.plant_prime, a], name=f"B[{a.name or 'A'}]")


def check_attacker_alphabet(a: Automaton, ctx: AttackContext) -> None:
    for lab in a.alphabet:
        if lab.is_command:
            raise InvalidArgument(f"attacker alphabet contains command label {lab}")
    extra = a.alphabet - ctx.alphabet.attacker_alphabet
    if extra:
        raise InvalidArgument(
            f"attacker labels outside Sigma and the attacked copies: "
            f"{sorted(map(str, extra))}")


def as_attacker(a: Automaton, ctx: AttackContext) -> Automaton:
    """``a`` over the full attacker alphabet (labels it never uses included)."""
    check_attacker_alphabet(a, ctx)
    return a.with_alphabet(ctx.alphabet.attacker_alphabet).renamed(a.name or "A")


def compute_profile(a: Automaton, ctx: AttackContext) -> EnDisProfile:
    a = as_attacker(a, ctx)
    plant = ctx.plant_prime
    dis: list[set[EventLabel]] = [set() for _ in range(a.n_states)]
    for p, qa in closed_loop(a, ctx).components:
        for lab in plant.delta[p]:
            if lab in a.alphabet and lab not in a.delta[qa]:
                dis[qa].add(lab)
    en = tuple(frozenset(row) for row in a.delta)
    return EnDisProfile(en, tuple(frozenset(d) for d in dis))


def compatible(profile: EnDisProfile, q: int, q2: int) -> bool:
    return not (profile.en[q] & profile.dis[q2]) and not (profile.en[q2] & profile.dis[q])


class Congruence:
    """Indexed partition of attacker states; cell ``i`` is ``cells[i]``."""

    __slots__ = ("cells",)

    def __init__(self, cells: Sequence[Sequence[int]]):
        self.cells = tuple(frozenset(c) for c in cells)

    @classmethod
    def singletons(cls, n: int) -> "Congruence":
        return cls([[q] for q in range(n)])

    @classmethod
    def from_assignment(cls, assignment: Sequence[int]) -> "Congruence":
        """Cells numbered by first appearance in ``assignment``."""
        cells: dict[int, list[int]] = {}
        for q, c in enumerate(assignment):
            cells.setdefault(c, []).append(q)
        return cls(list(cells.values()))

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return "Congruence(" + ", ".join(str(sorted(c)) for c in self.cells) + ")"

    def cell_of(self) -> dict[int, int]:
        return {q: i for i, c in enumerate(self.cells) for q in c}


def is_congruence(c: Congruence, a: Automaton,
                  profile: EnDisProfile | None) -> tuple[bool, str | None]:
    """Check the three congruence conditions; report the first violation.

    With ``profile=None`` the pairwise compatibility condition is skipped.
    """
    n = a.n_states
    seen: dict[int, int] = {}
    for i, cell in enumerate(c.cells):
        if not cell:
            return False, f"condition 1/2: cell {i} is empty"
        for q in sorted(cell):
            if not 0 <= q < n:
                return False, f"condition 1: cell {i} names unknown state {q}"
            if q in seen:
                return False, f"condition 1: state {a.state_names[q]} in cells {seen[q]} and {i}"
            seen[q] = i
    if len(seen) != n:
        missing = sorted(set(range(n)) - set(seen))
        return False, f"condition 1: states {[a.state_names[q] for q in missing]} not covered"
    if profile is not None:
        for i, cell in enumerate(c.cells):
            members = sorted(cell)
            for x, q in enumerate(members):
                for q2 in members[x + 1:]:
                    if not compatible(profile, q, q2):
                        return False, (f"condition 2: cell {i} holds incompatible states "
                                       f"{a.state_names[q]} and {a.state_names[q2]}")
    for i, cell in enumerate(c.cells):
        targets: dict[EventLabel, tuple[int, int]] = {}
        for q in sorted(cell):
            for lab in sorted(a.delta[q], key=label_key):
                j = seen[a.delta[q][lab]]
                if lab in targets and targets[lab][0] != j:
                    return False, (f"condition 3: cell {i} sends {lab} to cells "
                                   f"{targets[lab][0]} and {j} (from states "
                                   f"{a.state_names[targets[lab][1]]}, {a.state_names[q]})")
                targets.setdefault(lab, (j, q))
    return True, None


def induce(c: Congruence, a: Automaton, profile: EnDisProfile | None = None) -> Automaton:
    """Quotient attacker whose states are the cells of ``c`` (named ``c0, c1, ...``)."""
    ok, why = is_congruence(c, a, profile)
    if not ok:
        raise InvalidArgument(f"not a control congruence: {why}")
    where = c.cell_of()
    rows: list[dict[EventLabel, int]] = []
    for cell in c.cells:
        row = {}
        for q in cell:
            for lab, dst in a.delta[q].items():
                row[lab] = where[dst]
        rows.append(row)
    return Automaton([f"c{i}" for i in range(len(c))], a.alphabet, rows,
                     where[a.initial], range(len(c)),
                     name=f"{a.name or 'A'}_reduced")


def canonical_order(a: Automaton) -> list[int]:
    """Breadth-first state order from the initial state, labels sorted.

    Unreachable states follow in index order.
    """
    order = [a.initial]
    seen = {a.initial}
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for lab in sorted(a.delta[q], key=label_key):
            dst = a.delta[q][lab]
            if dst not in seen:
                seen.add(dst)
                order.append(dst)
                queue.append(dst)
    order.extend(q for q in range(a.n_states) if q not in seen)
    return order


def _sorted_cells(groups, rank: dict[int, int]) -> Congruence:
    cells = sorted((sorted(g, key=rank.__getitem__) for g in groups),
                   key=lambda g: rank[g[0]])
    return Congruence(cells)


def ra_congruence(a: Automaton, profile: EnDisProfile,
                  order: Sequence[int] | None = None) -> Congruence:
    """Greedy pairwise merging with forced-merge propagation and rollback.

    Pairs ``(order[i], order[j])``, ``i < j``, are tried row by row; the
    default order is :func:`canonical_order`.  A tentative merge drags in
    every merge it forces through shared labels and is undone as a whole if
    any of them joins two incompatible states.
    """
    n = a.n_states
    order = canonical_order(a) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise InvalidArgument("order must be a permutation of the attacker states")
    rank = {q: i for i, q in enumerate(order)}
    parent = list(range(n))
    members = {q: [q] for q in range(n)}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, qi in enumerate(order):
        for qj in order[i + 1:]:
            if find(qi) == find(qj):
                continue
            saved_parent = parent[:]
            saved_members = {k: v[:] for k, v in members.items()}
            pending = deque([(qi, qj)])
            ok = True
            while pending:
                x, y = pending.popleft()
                rx, ry = find(x), find(y)
                if rx == ry:
                    continue
                if any(not compatible(profile, u, v)
                       for u in members[rx] for v in members[ry]):
                    ok = False
                    break
                if rank[ry] < rank[rx]:
                    rx, ry = ry, rx
                parent[ry] = rx
                members[rx].extend(members.pop(ry))
                # every label must send the merged cell into a single cell
                succ: dict[EventLabel, int] = {}
                for u in members[rx]:
                    for lab, dst in a.delta[u].items():
                        if lab in succ:
                            if find(succ[lab]) != find(dst):
                                pending.append((succ[lab], dst))
                        else:
                            succ[lab] = dst
            if not ok:
                parent = saved_parent
                members = saved_members
    return _sorted_cells(members.values(), rank)


def reduce_ra(a: Automaton, ctx: AttackContext) -> tuple[Congruence, Automaton]:
    """Reduce ``a`` to an attack-equivalent attacker with fewer states."""
    a = as_attacker(a, ctx)
    profile = compute_profile(a, ctx)
    c = ra_congruence(a, profile)
    return c, induce(c, a, profile)


class SearchTooLarge(InvalidArgument):
    pass


def min_congruence(a: Automaton, profile: EnDisProfile,
                   upper: int | None = None) -> Congruence:
    """Smallest congruence by exhaustive search over set partitions.

    States are assigned to cells in canonical order; an assignment is
    abandoned as soon as it pairs incompatible states or splits the
    successors of one cell.  Cell budgets grow from 1, so the first
    congruence found has the fewest cells and, within that size, the
    lexicographically least assignment.
    """
    n = a.n_states
    order = canonical_order(a)
    rank = {q: i for i, q in enumerate(order)}
    upper = n if upper is None else upper
    preds: list[list[tuple[int, EventLabel]]] = [[] for _ in range(n)]
    for q, row in enumerate(a.delta):
        for lab, dst in row.items():
            preds[dst].append((q, lab))
    compat = [[compatible(profile, x, y) for y in range(n)] for x in range(n)]

    cell = [-1] * n
    cells: list[list[int]] = []

    def consistent(v: int) -> bool:
        cv = cell[v]
        for u in cells[cv]:
            if u == v:
                continue
            for lab, dst in a.delta[v].items():
                other = a.delta[u].get(lab)
                if other is not None and cell[dst] >= 0 and cell[other] >= 0 \
                        and cell[dst] != cell[other]:
                    return False
        for p, lab in preds[v]:
            cp = cell[p]
            if cp < 0:
                continue
            for u in cells[cp]:
                w = a.delta[u].get(lab)
                if w is not None and cell[w] >= 0 and cell[w] != cv:
                    return False
        return True

    def search(k: int, budget: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for ci in range(min(len(cells) + 1, budget)):
            if ci < len(cells) and not all(compat[v][u] for u in cells[ci]):
                continue
            if ci == len(cells):
                cells.append([])
            cells[ci].append(v)
            cell[v] = ci
            if consistent(v) and search(k + 1, budget):
                return True
            cells[ci].pop()
            cell[v] = -1
            if not cells[ci]:
                cells.pop()
        return False

    for budget in range(1, upper + 1):
        if search(0, budget):
            return _sorted_cells(cells, rank)
    raise AssertionError("singleton partition is always a congruence")


def brute_min(a: Automaton, ctx: AttackContext,
              max_states: int = 10) -> tuple[Congruence, Automaton]:
    """Minimum-cell congruence by exhaustive search; small attackers only."""
    a = as_attacker(a, ctx)
    if a.n_states > max_states:
        raise SearchTooLarge(
            f"attacker has {a.n_states} states, exhaustive search capped at {max_states}")
    profile = compute_profile(a, ctx)
    upper = len(ra_congruence(a, profile))
    c = min_congruence(a, profile, upper)
    return c, induce(c, a, profile)
