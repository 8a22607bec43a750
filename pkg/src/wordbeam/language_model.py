"""Character n-gram scoring for the constrained decoder.

The model is trained on a word list (by default the decoding dictionary
itself) with add-k smoothing, which keeps every conditional strictly
positive; the decoder's multiplicative ranking requires that. Contexts
never cross word boundaries: only the trailing run of word characters
of a hypothesis feeds the conditioning context.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import InputValidationError
from .prefix_tree import PrefixTree

WORD_BOUNDARY = "\x00"

_MODE_KINDS = ("words", "ngrams", "ngrams_forecast", "ngrams_forecast_sample")


@dataclass(frozen=True)
class ScoringMode:
    """How the language model contributes to beam ranking.

    ``words``: dictionary constraint only, no model score.
    ``ngrams``: a completed word is scored once, when the beam leaves it.
    ``ngrams_forecast``: every word-character extension is scored with the
    summed probability of all completions of the current prefix.
    ``ngrams_forecast_sample``: like forecast, but the sum is estimated
    from a uniform sample of ``sample_size`` completions and rescaled by
    (total / sampled). Sampling is a pure function of ``seed`` and the
    prefix, so repeated queries agree.
    """

    kind: str
    sample_size: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _MODE_KINDS:
            raise InputValidationError(f"unknown scoring mode {self.kind!r}")
        if self.sample_size < 1:
            raise InputValidationError("sample_size must be at least 1")

    @property
    def uses_lm(self) -> bool:
        return self.kind != "words"

    @property
    def uses_forecast(self) -> bool:
        return self.kind in ("ngrams_forecast", "ngrams_forecast_sample")


WORDS = ScoringMode("words")
NGRAMS = ScoringMode("ngrams")
NGRAMS_FORECAST = ScoringMode("ngrams_forecast")


def forecast_sample(sample_size: int = 20, seed: int = 0) -> ScoringMode:
    return ScoringMode("ngrams_forecast_sample", sample_size=sample_size, seed=seed)


class NgramModel:
    """Add-k smoothed character n-gram model over word-boundary-padded words."""

    def __init__(
        self,
        order: int,
        smoothing_k: float,
        vocabulary: frozenset[str],
        counts: dict[str, Counter],
    ) -> None:
        self.order = order
        self.smoothing_k = smoothing_k
        self.vocabulary = vocabulary
        self._counts = counts
        self._totals = {ctx: sum(ctr.values()) for ctx, ctr in counts.items()}

    @classmethod
    def train(
        cls, corpus: Sequence[str], order: int = 2, smoothing_k: float = 1.0
    ) -> "NgramModel":
        """Count all length <= order windows over boundary-padded words."""
        if not corpus:
            raise InputValidationError("training corpus must be non-empty")
        if order < 1:
            raise InputValidationError("n-gram order must be at least 1")
        if smoothing_k <= 0:
            raise InputValidationError("smoothing constant must be positive")
        vocab: set[str] = set()
        counts: dict[str, Counter] = {}
        pad = WORD_BOUNDARY * (order - 1)
        for word in corpus:
            if not word:
                raise InputValidationError("corpus words must be non-empty")
            if WORD_BOUNDARY in word:
                raise InputValidationError("corpus word contains the boundary sentinel")
            vocab.update(word)
            seq = pad + word + WORD_BOUNDARY
            for i in range(order - 1, len(seq)):
                ctx = seq[i - order + 1 : i]
                ctr = counts.get(ctx)
                if ctr is None:
                    ctr = counts[ctx] = Counter()
                ctr[seq[i]] += 1
        return cls(order, smoothing_k, frozenset(vocab), counts)

    @property
    def num_outcomes(self) -> int:
        """Vocabulary size including the boundary sentinel."""
        return len(self.vocabulary) + 1

    def _context(self, word_prefix: str) -> str:
        if self.order == 1:
            return ""
        width = self.order - 1
        return (WORD_BOUNDARY * width + word_prefix)[-width:]

    def conditional(self, word_prefix: str, c: str) -> float:
        """Smoothed P(c | last order-1 characters of the current word)."""
        ctx = self._context(word_prefix)
        ctr = self._counts.get(ctx)
        count = ctr[c] if ctr is not None else 0
        total = self._totals.get(ctx, 0)
        k = self.smoothing_k
        return (count + k) / (total + k * self.num_outcomes)

    def current_word_prefix(self, beam_text: str) -> str:
        """Trailing run of vocabulary characters in ``beam_text``."""
        i = len(beam_text)
        while i and beam_text[i - 1] in self.vocabulary:
            i -= 1
        return beam_text[i:]

    def score_extension(self, beam_text: str, c: str) -> float:
        """Probability of seeing ``c`` next within the current partial word."""
        if c != WORD_BOUNDARY and c not in self.vocabulary:
            raise InputValidationError(f"character {c!r} is outside the model vocabulary")
        return self.conditional(self.current_word_prefix(beam_text), c)

    def word_probability(self, word: str) -> float:
        """Chain probability of a whole word, boundary close included."""
        p = 1.0
        for i, ch in enumerate(word):
            p *= self.conditional(word[:i], ch)
        return p * self.conditional(word, WORD_BOUNDARY)

    def remainder_probability(self, prefix: str, remainder: str) -> float:
        """Chain probability of completing ``prefix`` with ``remainder``."""
        p = 1.0
        cur = prefix
        for ch in remainder:
            p *= self.conditional(cur, ch)
            cur += ch
        return p * self.conditional(cur, WORD_BOUNDARY)

    def forecast_for_prefix(self, tree: PrefixTree, prefix: str, mode: ScoringMode) -> float:
        """Summed (or sampled-and-rescaled) completion probability of a prefix.

        Returns 0 for a prefix with no completions; the decoder prunes
        such beams.
        """
        completions = tree.completions(prefix)
        n = len(completions)
        if n == 0:
            return 0.0
        if mode.kind != "ngrams_forecast_sample" or mode.sample_size >= n:
            return sum(self.remainder_probability(prefix, r) for _, r in completions)
        rng = random.Random(f"forecast|{mode.seed}|{prefix}")
        chosen = rng.sample(completions, mode.sample_size)
        partial = sum(self.remainder_probability(prefix, r) for _, r in chosen)
        return partial * (n / mode.sample_size)

    def score_forecast(self, tree: PrefixTree, beam_text: str, mode: ScoringMode) -> float:
        if not mode.uses_forecast:
            raise InputValidationError("forecast scoring requires a forecast mode")
        return self.forecast_for_prefix(tree, self.current_word_prefix(beam_text), mode)
