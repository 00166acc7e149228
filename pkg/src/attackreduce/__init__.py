"""Sensor-attack models for supervisory control and attacker reduction."""
from .alphabet import AlphabetSpec
from .automaton import (Automaton, EventLabel, InvalidArgument, Kind, accessible,
                        enabled_set, export_dot, language_equal,
                        marked_language_equal, sync_product)
from .io import ParseError, parse_alphabet, parse_model, render_model
from .reduction import (Congruence, EnDisProfile, brute_min, compatible,
                        compute_profile, induce, is_congruence, reduce_ra)
from .transform import (AttackContext, InfeasibleSupervisor, attack_bipartize,
                        bipartize, build_ac, build_ce, build_context, gamma_of)
from .verify import (attack_equivalent, check_covert, damage_witness,
                     validate_attacker)

__version__ = "0.1.0"
