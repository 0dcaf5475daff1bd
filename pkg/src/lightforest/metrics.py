"""The four evaluation metrics of a light-forest.

Average delay is kept as an exact rational; reports never round it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .model import LightForest, MulticastSession


@dataclass(frozen=True)
class MetricsReport:
    diameter: int
    average_delay: Fraction
    link_stress: int
    total_cost: int
    num_trees: int


def diameter(forest: LightForest) -> int:
    """Maximum hop count from the source to any destination in its own tree."""
    return max(forest.trees[k].depth[d] for d, k in forest.served.items())


def average_delay(forest: LightForest, session: MulticastSession) -> Fraction:
    """Sum of per-destination hop counts divided by the destination count."""
    total = 0
    for d in session.destinations:
        k = forest.served.get(d)
        if k is None:
            raise ValueError(f"destination {d} is not served by this forest")
        total += forest.trees[k].depth[d]
    return Fraction(total, session.n)


def link_stress(forest: LightForest) -> int:
    """Maximum number of trees (wavelengths) sharing one fiber link."""
    counts = Counter()
    for tree in forest.trees:
        counts.update(tree.edges())
    return max(counts.values())


def total_cost(forest: LightForest) -> int:
    """Wavelength channels used: hops summed over all trees.

    A link carrying two trees counts twice; it occupies two channels.
    """
    return sum(tree.edge_count for tree in forest.trees)


def measure(forest: LightForest, session: MulticastSession) -> MetricsReport:
    """All four metrics of a forest, sanity-checked against each other."""
    report = MetricsReport(
        diameter=diameter(forest),
        average_delay=average_delay(forest, session),
        link_stress=link_stress(forest),
        total_cost=total_cost(forest),
        num_trees=len(forest.trees),
    )
    assert report.average_delay <= report.diameter <= report.total_cost
    assert report.link_stress <= report.num_trees
    return report


@dataclass(frozen=True)
class ReductionReport:
    """Baseline-minus-candidate improvements, absolute and relative."""

    diameter_reduction: int
    delay_reduction: Fraction
    diameter_reduction_rel: Fraction
    delay_reduction_rel: Fraction


def reductions(mo: MetricsReport, dp: MetricsReport) -> ReductionReport:
    """Improvements of a report over a baseline report on the same instance."""
    ddiff = mo.diameter - dp.diameter
    ldiff = mo.average_delay - dp.average_delay
    return ReductionReport(
        diameter_reduction=ddiff,
        delay_reduction=ldiff,
        diameter_reduction_rel=Fraction(ddiff, mo.diameter),
        delay_reduction_rel=ldiff / mo.average_delay,
    )
