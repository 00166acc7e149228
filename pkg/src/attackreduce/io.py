"""Plain-text model and alphabet files.

Model file::

    # comment lines start with '#'
    automaton G
    alphabet: L H EH open close      (optional; default = labels used)
    states: g0 g1 g2
    initial: g0                      (optional; default = first state)
    marked: g2                       ('*' marks every state)
    transitions:
    g0 L g1
    g1 H# g2

Alphabet file: ``events:``, ``controllable:``, ``observable:``,
``attacker-observable:`` and ``compromised:`` lines, each followed by a
whitespace-separated list of event names.
"""
from __future__ import annotations

from pathlib import Path

from .alphabet import AlphabetSpec
from .automaton import Automaton, EventLabel, InvalidArgument


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, source: str = ""):
        where = f"{source}:" if source else ""
        where += f"{line}: " if line is not None else (" " if where else "")
        super().__init__(f"{where}{msg}")
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line


def parse_model(text: str, source: str = "") -> Automaton:
    name = ""
    alphabet = None
    states = None
    initial = None
    marked = None
    transitions = []
    in_trans = False
    seen_at: dict[tuple[str, EventLabel], int] = {}

    def labels(tokens, no):
        try:
            return [EventLabel.parse(t) for t in tokens]
        except InvalidArgument as e:
            raise ParseError(str(e), no, source) from None

    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip()
        if line.startswith("automaton ") or line == "automaton":
            if name:
                raise ParseError("duplicate 'automaton' header", no, source)
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected 'automaton <name>'", no, source)
            name = parts[1]
            in_trans = False
        elif sep and key in ("alphabet", "states", "initial", "marked", "transitions"):
            tokens = rest.split()
            in_trans = False
            if key == "alphabet":
                alphabet = labels(tokens, no)
            elif key == "states":
                if states is not None:
                    raise ParseError("duplicate 'states' section", no, source)
                states = tokens
                if len(set(states)) != len(states):
                    raise ParseError("duplicate state name", no, source)
            elif key == "initial":
                if len(tokens) != 1:
                    raise ParseError("expected exactly one initial state", no, source)
                initial = tokens[0]
            elif key == "marked":
                marked = tokens
            else:
                if tokens:
                    raise ParseError("transitions go on the following lines", no, source)
                in_trans = True
        elif in_trans:
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("expected '<src> <label> <dst>'", no, source)
            src, lab_text, dst = parts
            (lab,) = labels([lab_text], no)
            if states is None or src not in states or dst not in states:
                bad = src if states is None or src not in states else dst
                raise ParseError(f"undeclared state {bad!r}", no, source)
            if (src, lab) in seen_at:
                raise ParseError(
                    f"second transition for ({src}, {lab}); first on line "
                    f"{seen_at[(src, lab)]}", no, source)
            seen_at[(src, lab)] = no
            transitions.append((src, lab, dst))
        else:
            raise ParseError(f"unexpected line {line!r}", no, source)

    if states is None:
        raise ParseError("missing 'states:' section", None, source)
    if not states:
        raise ParseError("'states:' section is empty", None, source)
    if initial is None:
        initial = states[0]
    if initial not in states:
        raise ParseError(f"initial state {initial!r} not declared", None, source)
    if marked is None:
        marked_names = []
    elif marked == ["*"]:
        marked_names = None
    else:
        missing = [m for m in marked if m not in states]
        if missing:
            raise ParseError(f"marked state {missing[0]!r} not declared", None, source)
        marked_names = marked
    used = {lab for _, lab, _ in transitions}
    if alphabet is not None and not used <= set(alphabet):
        extra = sorted(map(str, used - set(alphabet)))
        raise ParseError(f"labels {extra} missing from alphabet", None, source)
    return Automaton.from_transitions(states, alphabet, transitions, initial,
                                      marked_names, name=name)


def render_model(a: Automaton) -> str:
    out = [f"automaton {a.name or 'A'}",
           "alphabet: " + " ".join(sorted(map(str, a.alphabet))),
           "states: " + " ".join(a.state_names),
           f"initial: {a.state_names[a.initial]}"]
    if len(a.marked) == a.n_states:
        out.append("marked: *")
    else:
        out.append("marked: " + " ".join(a.state_names[q] for q in sorted(a.marked)))
    out.append("transitions:")
    for src, lab, dst in a.transitions():
        out.append(f"{a.state_names[src]} {lab} {a.state_names[dst]}")
    return "\n".join(out) + "\n"


_ALPHA_KEYS = {"events": "sigma", "controllable": "sigma_c", "observable": "sigma_o",
               "attacker-observable": "sigma_oa", "compromised": "sigma_sa"}


def parse_alphabet(text: str, source: str = "") -> AlphabetSpec:
    fields: dict[str, list[str]] = {}
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _ALPHA_KEYS:
            raise ParseError(f"unexpected line {line!r}", no, source)
        if key in fields:
            raise ParseError(f"duplicate '{key}' line", no, source)
        names = rest.split()
        for nm in names:
            try:
                if not EventLabel.parse(nm).is_plain:
                    raise InvalidArgument
            except InvalidArgument:
                raise ParseError(f"bad event name {nm!r}", no, source) from None
        fields[key] = names
    missing = [k for k in _ALPHA_KEYS if k not in fields]
    if missing:
        raise ParseError(f"missing '{missing[0]}' line", None, source)
    try:
        return AlphabetSpec(**{_ALPHA_KEYS[k]: frozenset(v) for k, v in fields.items()})
    except InvalidArgument as e:
        raise ParseError(str(e), None, source) from None


def render_alphabet(alphabet: AlphabetSpec) -> str:
    return "".join(f"{k}: {' '.join(sorted(getattr(alphabet, f)))}\n"
                   for k, f in _ALPHA_KEYS.items())


def load_model(path) -> Automaton:
    path = Path(path)
    return parse_model(path.read_text(encoding="utf-8"), source=str(path))


def load_alphabet(path) -> AlphabetSpec:
    path = Path(path)
    return parse_alphabet(path.read_text(encoding="utf-8"), source=str(path))


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
