"""Bundled water-tank example."""
from __future__ import annotations

from pathlib import Path

from .io import load_alphabet, load_model

WATER_TANK = Path(__file__).parent / "data" / "water_tank"


def water_tank_files() -> dict[str, Path]:
    return {
        "plant": WATER_TANK / "plant.fsa",
        "sup": WATER_TANK / "supervisor.fsa",
        "attacker": WATER_TANK / "attacker.fsa",
        "alphabet": WATER_TANK / "alphabet.txt",
    }


def water_tank():
    """``(plant, supervisor, attacker, alphabet)`` parsed from the bundled files."""
    f = water_tank_files()
    return (load_model(f["plant"]), load_model(f["sup"]),
            load_model(f["attacker"]), load_alphabet(f["alphabet"]))
