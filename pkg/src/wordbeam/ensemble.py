"""Hypothesis fusion by plurality voting with likelihood tie-breaks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InputValidationError


@dataclass(frozen=True)
class Hypothesis:
    """A recognizer's output string together with its reported likelihood."""

    text: str
    likelihood: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.likelihood) or self.likelihood < 0:
            raise InputValidationError("likelihood must be finite and non-negative")


def vote(hypotheses: Sequence[Hypothesis]) -> Hypothesis:
    """Plurality vote over exact-string groups.

    Cascade: a unique largest group wins outright; groups tied for the
    largest size fall to the highest mean likelihood (this also covers
    the all-distinct case, where every group has size one); exact mean
    ties fall to the lexicographically smallest string. The returned
    hypothesis is the winning group's highest-likelihood member.
    """
    hyps = list(hypotheses)
    if not hyps:
        raise InputValidationError("vote requires at least one hypothesis")
    groups: dict[str, list[Hypothesis]] = {}
    for h in hyps:
        groups.setdefault(h.text, []).append(h)
    top_size = max(len(g) for g in groups.values())
    tied = [(text, members) for text, members in groups.items() if len(members) == top_size]
    if len(tied) == 1:
        members = tied[0][1]
    else:
        _, members = min(
            tied, key=lambda tm: (-sum(h.likelihood for h in tm[1]) / len(tm[1]), tm[0])
        )
    return max(members, key=lambda h: h.likelihood)


def winning_group_size(hypotheses: Sequence[Hypothesis], winner: Hypothesis) -> int:
    return sum(1 for h in hypotheses if h.text == winner.text)


def borda_vote(ballots: Sequence[Sequence[Hypothesis]]) -> Hypothesis:
    """Borda count over ranked ballots, best candidate first.

    Kept for comparison experiments; plurality voting is the default
    everywhere else. A candidate at rank r of an n-entry ballot earns
    n - 1 - r points. Point ties fall to the highest likelihood seen,
    then to the lexicographically smallest string.
    """
    ballots = [list(b) for b in ballots]
    if not ballots or any(not b for b in ballots):
        raise InputValidationError("borda_vote requires non-empty ranked ballots")
    points: dict[str, int] = {}
    best_by_text: dict[str, Hypothesis] = {}
    for ballot in ballots:
        n = len(ballot)
        for rank, hyp in enumerate(ballot):
            points[hyp.text] = points.get(hyp.text, 0) + (n - 1 - rank)
            cur = best_by_text.get(hyp.text)
            if cur is None or hyp.likelihood > cur.likelihood:
                best_by_text[hyp.text] = hyp
    winner_text = min(
        points, key=lambda t: (-points[t], -best_by_text[t].likelihood, t)
    )
    return best_by_text[winner_text]
