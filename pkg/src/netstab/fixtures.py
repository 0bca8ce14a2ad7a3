"""Bundled example instances."""

from importlib.resources import files

from .attack import SetSystem, parse_set_system
from .pattern import CandidatePattern, SystemPattern, parse_candidates, parse_system


def path(name: str):
    return files("netstab") / "data" / name


def load_p11() -> SystemPattern:
    """The 11-state example with one input driving x1 and x4."""
    return parse_system(path("p11.json").read_text())


def load_cand6() -> CandidatePattern:
    """Six recovery candidates u2..u7 for the 11-state example."""
    return parse_candidates(path("cand6.json").read_text())


def load_fig4() -> SetSystem:
    return parse_set_system(path("fig4_sets.json").read_text())
