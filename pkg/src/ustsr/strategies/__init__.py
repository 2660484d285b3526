"""Builder strategies and a small registry keyed by command-line names."""

from __future__ import annotations

import re

from ..graphs import PatternGraph, is_central
from .base import Strategy
from .cover import HCover
from .factors import AlmostFactor, CentralFactor, ChainFactor, TreeFactor
from .hamilton import HamiltonCycle
from .kconn import KConnected
from .matching import BipartiteMatcher, PerfectMatching
from .min_degree import MinDegree, min_degree_prediction
from .spanning import SpanningTreeGreedy

STRATEGIES = ("min_degree", "matching", "hamilton", "factor", "cover", "kconn")


def factor_strategy(pattern: str | PatternGraph, omega: float | None = None) -> Strategy:
    """Tree factor for trees, chain factor for ``k<r>_chain``, central factor otherwise."""
    if isinstance(pattern, str):
        m = re.fullmatch(r"k(\d+)_chain", pattern.strip().lower())
        if m:
            return ChainFactor(int(m.group(1)), omega=omega)
        pattern = PatternGraph.named(pattern)
    if pattern.is_tree():
        return TreeFactor(pattern, omega=omega)
    if is_central(pattern) is not None:
        return CentralFactor(pattern, omega=omega)
    raise ValueError("factor strategies need a tree, a pattern with a central vertex, or a clique chain")


def build_strategy(name: str, k: int = 1, pattern: str | None = None, omega: float | None = None) -> Strategy:
    if name == "min_degree":
        return MinDegree(k)
    if name == "matching":
        return PerfectMatching(omega=omega)
    if name == "hamilton":
        return HamiltonCycle(omega=omega)
    if name == "kconn":
        return KConnected(k, omega=omega)
    if name == "factor":
        return factor_strategy(pattern or "p3", omega=omega)
    if name == "cover":
        return HCover(PatternGraph.named(pattern or "triangle"))
    raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")


__all__ = [
    "AlmostFactor",
    "BipartiteMatcher",
    "CentralFactor",
    "ChainFactor",
    "HCover",
    "HamiltonCycle",
    "KConnected",
    "MinDegree",
    "PerfectMatching",
    "STRATEGIES",
    "SpanningTreeGreedy",
    "Strategy",
    "TreeFactor",
    "build_strategy",
    "factor_strategy",
    "min_degree_prediction",
]
