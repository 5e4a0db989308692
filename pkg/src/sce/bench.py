"""Benchmark and cross-solver consistency harness producing CSV reports."""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .generators import approval_bernoulli, ordinal_impartial_culture
from .model import (
    APPROVAL_SCORE,
    CC,
    COVERAGE,
    EGAL_CC,
    GuardExceeded,
    Instance,
    ScoringSpec,
    THRESHOLD_CC,
    WEAKLY_SEPARABLE,
    phi_borda,
    phi_plurality,
)
from .oracle import max_quality_exhaustive
from .runner import run_algorithm

CSV_COLUMNS = ["algorithm", "m", "n", "tau", "k", "f", "eta", "alpha", "beta",
               "decision", "quality", "millis", "seed"]

BETA_NAMES = {
    "cc": CC,
    "egal-cc": EGAL_CC,
    "ws": WEAKLY_SEPARABLE,
    "coverage": COVERAGE,
    "threshold-cc": THRESHOLD_CC,
    "approval": APPROVAL_SCORE,
}


def make_spec(beta_name: str, m: int, phi: str = "borda", gamma: Optional[Fraction] = None) -> ScoringSpec:
    beta = BETA_NAMES[beta_name]
    if beta == WEAKLY_SEPARABLE:
        table = phi_borda(m) if phi == "borda" else phi_plurality(m)
        return ScoringSpec(beta, phi=table)
    if beta == THRESHOLD_CC:
        return ScoringSpec(beta, gamma=gamma or Fraction(1, 2))
    return ScoringSpec(beta)


@dataclass
class RunReport:
    """One solver run, ready to become a CSV row."""

    algorithm: str
    m: int
    n: int
    tau: int
    k: int
    f: int
    eta: int
    alpha: str
    beta: str
    decision: str
    quality: Optional[int]
    millis: float
    seed: int
    stats: dict = field(default_factory=dict)

    def row(self) -> list:
        return [self.algorithm, self.m, self.n, self.tau, self.k, self.f, self.eta,
                self.alpha, self.beta, self.decision,
                "" if self.quality is None else self.quality,
                f"{self.millis:.3f}", self.seed]


def run_report(algorithm: str, instance: Instance, beta_label: str, seed: int) -> RunReport:
    start = time.perf_counter()
    try:
        result = run_algorithm(algorithm, instance, seed)
        decision = "yes" if result.feasible else "no"
        quality = result.quality
        stats = result.stats
    except GuardExceeded:
        decision, quality, stats = "guard", None, {}
    except ValueError:
        decision, quality, stats = "inapplicable", None, {}
    millis = (time.perf_counter() - start) * 1000
    return RunReport(algorithm, instance.election.m, instance.election.n,
                     instance.tau, instance.k, instance.f, instance.eta,
                     instance.alpha, beta_label, decision, quality, millis, seed, stats)


def run_grid(m_list, k_list, tau_list, f_list, alphas, beta_names, algorithms,
             n: int = 3, per_cell: int = 1, seed: int = 0, etas: Optional[list[int]] = None,
             phi: str = "borda", gamma: Optional[Fraction] = None,
             approval_p: Optional[Fraction] = None) -> list[RunReport]:
    """Run every algorithm over the grid; eta defaults to an oracle sweep."""
    reports: list[RunReport] = []
    approval_p = approval_p or Fraction(1, 2)
    for m in m_list:
        elections = {}
        for idx in range(per_cell):
            cell_seed = seed * 10_000 + m * 100 + idx
            elections[("ordinal", idx)] = ordinal_impartial_culture(m, n, cell_seed)
            elections[("approval", idx)] = approval_bernoulli(m, n, approval_p, cell_seed)
        for beta_name in beta_names:
            spec = make_spec(beta_name, m, phi, gamma)
            label = beta_name if beta_name != "threshold-cc" else f"threshold-cc:{spec.gamma}"
            for k in k_list:
                if k > m:
                    continue
                for tau in tau_list:
                    for f in f_list:
                        for alpha in alphas:
                            for idx in range(per_cell):
                                election = elections[(spec.kind, idx)]
                                cell_seed = seed * 10_000 + m * 100 + idx
                                if etas is None:
                                    base = Instance(election, spec, tau, k, f, 0, alpha)
                                    best = max_quality_exhaustive(base)
                                    sweep = [0, 1] if best is None else sorted({0, max(0, best - 1), best, best + 1})
                                else:
                                    sweep = etas
                                for eta in sweep:
                                    instance = Instance(election, spec, tau, k, f, eta, alpha)
                                    for algorithm in algorithms:
                                        reports.append(run_report(algorithm, instance, label, cell_seed))
    return reports


def write_csv(reports: list[RunReport], path: str) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rep in reports:
            writer.writerow(rep.row())


def count_disagreements(reports: list[RunReport]) -> int:
    """Cells where a solver's decision differs from the oracle's."""
    oracle: dict[tuple, str] = {}
    for rep in reports:
        if rep.algorithm == "oracle":
            oracle[_cell(rep)] = rep.decision
    bad = 0
    for rep in reports:
        if rep.algorithm == "oracle" or rep.decision in ("guard", "inapplicable"):
            continue
        want = oracle.get(_cell(rep))
        if want is not None and rep.decision != want:
            bad += 1
    return bad


def _cell(rep: RunReport) -> tuple:
    return (rep.m, rep.n, rep.tau, rep.k, rep.f, rep.eta, rep.alpha, rep.beta, rep.seed)
