"""Deterministic finite-state automata over tagged event labels.

States are dense integer indices ``0..n-1`` with a display name each.  An
automaton is immutable once built; every operation here returns a new one.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence


class InvalidArgument(ValueError):
    """Raised when an operation receives malformed or out-of-contract input."""


class Kind(enum.IntEnum):
    PLAIN = 0
    ATTACKED = 1
    COMMAND = 2


@dataclass(frozen=True)
class EventLabel:
    """A plain event ``x``, its attacked copy ``x#``, or a control command.

    Commands are identified by their member set alone, so two commands with
    the same members compare equal no matter how they were built.
    """

    kind: Kind
    name: str = ""
    members: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def plain(cls, name: str) -> "EventLabel":
        return cls(Kind.PLAIN, name)

    @classmethod
    def attacked(cls, name: str) -> "EventLabel":
        return cls(Kind.ATTACKED, name)

    @classmethod
    def command(cls, members: Iterable[str]) -> "EventLabel":
        return cls(Kind.COMMAND, "", frozenset(members))

    @classmethod
    def parse(cls, text: str) -> "EventLabel":
        """Inverse of ``str()``: accepts ``x``, ``x#`` and ``cmd{a,b}``."""
        if text.startswith("cmd{") and text.endswith("}"):
            inner = text[4:-1]
            members = [m for m in inner.split(",")] if inner else []
            if any(not _is_ident(m) for m in members):
                raise InvalidArgument(f"bad command label {text!r}")
            return cls.command(members)
        if text.endswith("#"):
            base = text[:-1]
            if not _is_ident(base):
                raise InvalidArgument(f"bad attacked label {text!r}")
            return cls.attacked(base)
        if not _is_ident(text):
            raise InvalidArgument(f"bad event label {text!r}")
        return cls.plain(text)

    @property
    def is_plain(self) -> bool:
        return self.kind is Kind.PLAIN

    @property
    def is_attacked(self) -> bool:
        return self.kind is Kind.ATTACKED

    @property
    def is_command(self) -> bool:
        return self.kind is Kind.COMMAND

    def __str__(self) -> str:
        if self.kind is Kind.PLAIN:
            return self.name
        if self.kind is Kind.ATTACKED:
            return self.name + "#"
        return "cmd{" + ",".join(sorted(self.members)) + "}"

    def __repr__(self) -> str:
        return f"EventLabel({str(self)!r})"

    def __lt__(self, other: "EventLabel") -> bool:
        return str(self) < str(other)


def _is_ident(text: str) -> bool:
    return bool(text) and all(c.isalnum() or c in "_-.'" for c in text)


def label_key(label: EventLabel) -> str:
    return str(label)


def trace_str(trace: Sequence[EventLabel]) -> str:
    return " ".join(str(x) for x in trace) if trace else "(empty)"


class Automaton:
    """A deterministic automaton ``(Q, Sigma, delta, q0, Qm)``.

    ``delta[q]`` maps each enabled label at ``q`` to its unique target.
    Product automata carry ``components``: the factor-state tuple behind
    every product state.
    """

    __slots__ = ("name", "state_names", "alphabet", "delta", "initial",
                 "marked", "components")

    def __init__(
        self,
        state_names: Sequence[str],
        alphabet: Iterable[EventLabel],
        delta: Sequence[Mapping[EventLabel, int]],
        initial: int,
        marked: Iterable[int],
        *,
        name: str = "",
        components: Sequence[tuple[int, ...]] | None = None,
    ):
        n = len(state_names)
        if n == 0:
            raise InvalidArgument("an automaton needs at least one state")
        if len(delta) != n:
            raise InvalidArgument("delta must have one row per state")
        if not 0 <= initial < n:
            raise InvalidArgument(f"initial state {initial} out of range")
        marked = frozenset(marked)
        if any(not 0 <= q < n for q in marked):
            raise InvalidArgument("marked state out of range")
        alphabet = frozenset(alphabet)
        rows = []
        for q, row in enumerate(delta):
            row = dict(row)
            for lab, dst in row.items():
                if lab not in alphabet:
                    raise InvalidArgument(
                        f"label {lab} at state {state_names[q]!r} not in alphabet")
                if not 0 <= dst < n:
                    raise InvalidArgument(f"transition target {dst} out of range")
            rows.append(row)
        self.name = name
        self.state_names = tuple(state_names)
        self.alphabet = alphabet
        self.delta = tuple(rows)
        self.initial = initial
        self.marked = marked
        self.components = tuple(components) if components is not None else None

    def __setattr__(self, key, value):
        if hasattr(self, "components"):
            raise AttributeError("Automaton is immutable")
        object.__setattr__(self, key, value)

    @classmethod
    def from_transitions(
        cls,
        states: Sequence[str],
        alphabet: Iterable[EventLabel] | None,
        transitions: Iterable[tuple[str, EventLabel | str, str]],
        initial: str,
        marked: Iterable[str] | None = None,
        *,
        name: str = "",
    ) -> "Automaton":
        """Build from named states and ``(src, label, dst)`` triples.

        ``marked=None`` marks every state.  ``alphabet=None`` uses exactly
        the labels that occur in ``transitions``.  A second, different
        target for the same ``(src, label)`` is rejected.
        """
        index = {s: i for i, s in enumerate(states)}
        if len(index) != len(states):
            raise InvalidArgument("duplicate state name")
        rows: list[dict[EventLabel, int]] = [{} for _ in states]
        used = set()
        for src, lab, dst in transitions:
            if isinstance(lab, str):
                lab = EventLabel.parse(lab)
            try:
                s, d = index[src], index[dst]
            except KeyError as e:
                raise InvalidArgument(f"unknown state {e.args[0]!r}") from None
            if lab in rows[s] and rows[s][lab] != d:
                raise InvalidArgument(
                    f"nondeterministic transition on {lab} from {src!r}")
            rows[s][lab] = d
            used.add(lab)
        if initial not in index:
            raise InvalidArgument(f"unknown initial state {initial!r}")
        if marked is None:
            marked_idx = range(len(states))
        else:
            try:
                marked_idx = [index[m] for m in marked]
            except KeyError as e:
                raise InvalidArgument(f"unknown marked state {e.args[0]!r}") from None
        return cls(states, used if alphabet is None else alphabet, rows,
                   index[initial], marked_idx, name=name)

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def __len__(self) -> int:
        return len(self.state_names)

    def __repr__(self) -> str:
        return (f"<Automaton {self.name or '?'}: {self.n_states} states, "
                f"{self.n_transitions} transitions>")

    @property
    def n_transitions(self) -> int:
        return sum(len(row) for row in self.delta)

    def state(self, name: str) -> int:
        try:
            return self.state_names.index(name)
        except ValueError:
            raise InvalidArgument(f"no state named {name!r}") from None

    def step(self, q: int, label: EventLabel) -> int | None:
        return self.delta[q].get(label)

    def run(self, trace: Iterable[EventLabel], q: int | None = None) -> int | None:
        """State reached after ``trace``, or None if it leaves the language."""
        q = self.initial if q is None else q
        for lab in trace:
            q = self.delta[q].get(lab)
            if q is None:
                return None
        return q

    def accepts(self, trace: Iterable[EventLabel]) -> bool:
        q = self.run(trace)
        return q is not None and q in self.marked

    def transitions(self) -> list[tuple[int, EventLabel, int]]:
        """All transitions, sorted by source then canonical label."""
        return [(q, lab, row[lab])
                for q, row in enumerate(self.delta)
                for lab in sorted(row, key=label_key)]

    def with_alphabet(self, alphabet: Iterable[EventLabel]) -> "Automaton":
        """Same transition structure over a different (covering) alphabet."""
        return Automaton(self.state_names, alphabet, self.delta, self.initial,
                         self.marked, name=self.name)

    def renamed(self, name: str) -> "Automaton":
        return Automaton(self.state_names, self.alphabet, self.delta,
                         self.initial, self.marked, name=name,
                         components=self.components)

    def is_deterministic(self) -> bool:
        # Structural: a dict row cannot hold two targets for one label.
        return all(isinstance(row, dict) for row in self.delta)


def enabled_set(a: Automaton, q: int) -> frozenset[EventLabel]:
    """Labels with a defined transition at ``q``."""
    if not isinstance(q, int) or not 0 <= q < a.n_states:
        raise InvalidArgument(f"unknown state {q!r}")
    return frozenset(a.delta[q])


def accessible(a: Automaton) -> Automaton:
    """Restrict ``a`` to the states reachable from its initial state.

    Surviving states keep their relative order.
    """
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        q = stack.pop()
        for dst in a.delta[q].values():
            if dst not in seen:
                seen.add(dst)
                stack.append(dst)
    keep = sorted(seen)
    remap = {old: new for new, old in enumerate(keep)}
    rows = [{lab: remap[d] for lab, d in a.delta[q].items()} for q in keep]
    comps = [a.components[q] for q in keep] if a.components is not None else None
    return Automaton([a.state_names[q] for q in keep], a.alphabet, rows,
                     remap[a.initial], [remap[q] for q in a.marked if q in remap],
                     name=a.name, components=comps)


def sync_product(factors: Sequence[Automaton], name: str = "") -> Automaton:
    """Synchronous product of one or more automata, accessible part only.

    A label moves every factor that has it in its alphabet and is blocked
    unless all of those factors enable it; factors without the label stay
    put.  For a list this is the same as folding the binary product from the
    left.  States are numbered breadth-first with labels in canonical order
    and keep their factor-state tuple in ``components``.
    """
    factors = list(factors)
    if not factors:
        raise InvalidArgument("sync_product needs at least one factor")
    alphabet = frozenset().union(*(f.alphabet for f in factors))
    owners = {lab: tuple(i for i, f in enumerate(factors) if lab in f.alphabet)
              for lab in alphabet}
    start = tuple(f.initial for f in factors)
    index = {start: 0}
    order = [start]
    rows: list[dict[EventLabel, int]] = []
    head = 0
    while head < len(order):
        tup = order[head]
        head += 1
        candidates = set()
        for f, q in zip(factors, tup):
            candidates.update(f.delta[q])
        row = {}
        for lab in sorted(candidates, key=label_key):
            nxt = list(tup)
            for i in owners[lab]:
                dst = factors[i].delta[tup[i]].get(lab)
                if dst is None:
                    break
                nxt[i] = dst
            else:
                nxt = tuple(nxt)
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                row[lab] = index[nxt]
        rows.append(row)
    names = [",".join(f.state_names[q] for f, q in zip(factors, tup)) for tup in order]
    marked = [i for i, tup in enumerate(order)
              if all(q in f.marked for f, q in zip(factors, tup))]
    return Automaton(names, alphabet, rows, 0, marked, name=name,
                     components=order)


def shortest_path(a: Automaton, goal: Callable[[int], bool]) -> tuple[EventLabel, ...] | None:
    """Shortlex-least string leading from the initial state to a goal state."""
    parent: dict[int, tuple[int, EventLabel] | None] = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if goal(q):
            path = []
            while parent[q] is not None:
                q, lab = parent[q]
                path.append(lab)
            return tuple(reversed(path))
        for lab in sorted(a.delta[q], key=label_key):
            dst = a.delta[q][lab]
            if dst not in parent:
                parent[dst] = (q, lab)
                queue.append(dst)
    return None


def _pair_search(a: Automaton, b: Automaton, marked: bool):
    # BFS over (qa, qb) with None standing for "fell out of the language".
    # Queue order with sorted expansion visits pairs in shortlex order of
    # their access strings, so the first discrepancy is the shortlex witness.
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])

    def path_to(node, extra=None):
        out = [] if extra is None else [extra]
        while parent[node] is not None:
            node, lab = parent[node]
            out.append(lab)
        return tuple(reversed(out))

    while queue:
        pair = queue.popleft()
        qa, qb = pair
        if marked:
            in_a = qa is not None and qa in a.marked
            in_b = qb is not None and qb in b.marked
            if in_a != in_b:
                return False, path_to(pair)
        labels = set()
        if qa is not None:
            labels.update(a.delta[qa])
        if qb is not None:
            labels.update(b.delta[qb])
        for lab in sorted(labels, key=label_key):
            na = a.delta[qa].get(lab) if qa is not None else None
            nb = b.delta[qb].get(lab) if qb is not None else None
            if not marked and (na is None) != (nb is None):
                return False, path_to(pair, lab)
            nxt = (na, nb)
            if nxt not in parent:
                parent[nxt] = (pair, lab)
                queue.append(nxt)
    return True, None


def language_equal(a: Automaton, b: Automaton) -> tuple[bool, tuple[EventLabel, ...] | None]:
    """Compare closed behaviours; on mismatch return the shortest witness."""
    _check_det(a, b)
    return _pair_search(a, b, marked=False)


def marked_language_equal(a: Automaton, b: Automaton) -> tuple[bool, tuple[EventLabel, ...] | None]:
    """Compare marked behaviours; the witness is accepted by exactly one side."""
    _check_det(a, b)
    return _pair_search(a, b, marked=True)


def _check_det(*autos: Automaton) -> None:
    for x in autos:
        if not isinstance(x, Automaton) or not x.is_deterministic():
            raise InvalidArgument("language comparison needs deterministic automata")


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(a: Automaton) -> str:
    """Graphviz rendering with stable node and edge order."""
    lines = [f"digraph {_dot_quote(a.name or 'automaton')} {{",
             "  rankdir=LR;",
             '  __start [shape=point, label=""];']
    for q, nm in enumerate(a.state_names):
        shape = "doublecircle" if q in a.marked else "circle"
        lines.append(f"  s{q} [label={_dot_quote(nm)}, shape={shape}];")
    lines.append(f"  __start -> s{a.initial};")
    edges = sorted(a.transitions(), key=lambda t: (t[0], str(t[1]), t[2]))
    for src, lab, dst in edges:
        lines.append(f"  s{src} -> s{dst} [label={_dot_quote(str(lab))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
