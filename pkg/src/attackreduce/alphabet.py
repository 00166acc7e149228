"""Event universe with its control, observation and attack partitions."""
from __future__ import annotations

from dataclasses import dataclass

from .automaton import EventLabel, InvalidArgument


@dataclass(frozen=True)
class AlphabetSpec:
    """``sigma`` plus the chain ``sigma_sa <= sigma_oa <= sigma_o <= sigma``.

    Uncontrollable and unobservable sets are derived, never stored.
    """

    sigma: frozenset[str]
    sigma_c: frozenset[str]
    sigma_o: frozenset[str]
    sigma_oa: frozenset[str]
    sigma_sa: frozenset[str]

    def __post_init__(self):
        for fld in ("sigma", "sigma_c", "sigma_o", "sigma_oa", "sigma_sa"):
            object.__setattr__(self, fld, frozenset(getattr(self, fld)))
        if not self.sigma:
            raise InvalidArgument("event set is empty")
        if not self.sigma_c <= self.sigma:
            raise InvalidArgument(f"controllable events not in sigma: {sorted(self.sigma_c - self.sigma)}")
        if not self.sigma_o <= self.sigma:
            raise InvalidArgument(f"observable events not in sigma: {sorted(self.sigma_o - self.sigma)}")
        if not self.sigma_oa <= self.sigma_o:
            raise InvalidArgument(
                f"attacker-observable events must be observable: {sorted(self.sigma_oa - self.sigma_o)}")
        if not self.sigma_sa <= self.sigma_oa:
            raise InvalidArgument(
                f"compromised events must be attacker-observable: {sorted(self.sigma_sa - self.sigma_oa)}")

    @classmethod
    def build(cls, sigma, controllable=(), observable=None, attacker_observable=None,
              compromised=()) -> "AlphabetSpec":
        """Convenience constructor; observation sets default to everything."""
        sigma = frozenset(sigma)
        observable = sigma if observable is None else frozenset(observable)
        attacker_observable = observable if attacker_observable is None else attacker_observable
        return cls(sigma, frozenset(controllable), observable,
                   frozenset(attacker_observable), frozenset(compromised))

    @property
    def sigma_uc(self) -> frozenset[str]:
        return self.sigma - self.sigma_c

    @property
    def sigma_uo(self) -> frozenset[str]:
        return self.sigma - self.sigma_o

    @property
    def plain(self) -> frozenset[EventLabel]:
        return frozenset(EventLabel.plain(e) for e in self.sigma)

    @property
    def attacked(self) -> frozenset[EventLabel]:
        return frozenset(EventLabel.attacked(e) for e in self.sigma_sa)

    @property
    def attacker_alphabet(self) -> frozenset[EventLabel]:
        """Sigma together with the attacked copies of the compromised events."""
        return self.plain | self.attacked

    def check_label(self, label: EventLabel) -> None:
        if label.is_plain and label.name not in self.sigma:
            raise InvalidArgument(f"unknown event {label}")
        if label.is_attacked and label.name not in self.sigma_sa:
            raise InvalidArgument(f"{label} is not the copy of a compromised event")
        if label.is_command and not label.members <= self.sigma:
            raise InvalidArgument(f"command {label} has unknown members")
