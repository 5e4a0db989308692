"""Uniform front end over the solvers, shared by the CLI and the bench harness."""
from __future__ import annotations

from typing import Optional

from .division import solve_by_divisions
from .horizon import (
    color_solve,
    solve_colorcoding_deterministic,
    solve_egal_horizon,
    solve_util_set_packing,
)
from .model import EGAL, Instance, SolveResult, UTIL
from .oracle import solve_bruteforce
from .subset import solve_polymult, solve_subset_dp

ALGORITHMS = (
    "oracle",
    "polymult",
    "subset-dp",
    "division",
    "set-packing",
    "color-coding",
    "color-coding-det",
    "auto",
)


def pick_auto(instance: Instance) -> str:
    if instance.election.m <= 12:
        return "subset-dp"
    if instance.k * instance.tau <= 12 and instance.k * instance.tau * (instance.f + 1) <= 63:
        return "color-coding-det"
    return "oracle"


def run_algorithm(name: str, instance: Instance, seed: int = 0,
                  reps: Optional[int] = None) -> SolveResult:
    """Run one named solver; raises ValueError when it does not apply."""
    if name == "auto":
        name = pick_auto(instance)
    if name == "oracle":
        return solve_bruteforce(instance)
    if name == "polymult":
        return solve_polymult(instance)
    if name == "subset-dp":
        return solve_subset_dp(instance)
    if name == "division":
        return solve_by_divisions(instance)
    if name == "set-packing":
        if instance.alpha == EGAL:
            return solve_egal_horizon(instance, "exact-small")
        return solve_util_set_packing(instance, "exact-small")
    if name == "color-coding":
        if instance.alpha == EGAL:
            return solve_egal_horizon(instance, "color-coding", seed)
        return color_solve(instance, seed, reps=reps)
    if name == "color-coding-det":
        if instance.alpha == EGAL:
            return solve_egal_horizon(instance, "derandomized")
        return solve_colorcoding_deterministic(instance)
    raise ValueError(f"unknown algorithm {name!r}")
