"""Alphabets, posterior matrices and baseline CTC decoding.

Probabilities are kept in the linear domain in double precision: the
matrices handled here are short (at most a few hundred frames), so
underflow is not a practical concern and linear arithmetic keeps the
bookkeeping transparent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, InputValidationError

ROW_SUM_TOLERANCE = 1e-6
ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class Alphabet:
    """Ordered character inventory plus the implicit trailing blank.

    Columns are laid out as the base characters in order, then the
    optional separator, then the blank in the last column.
    """

    characters: str
    separator: str | None = None

    def __post_init__(self) -> None:
        if len(set(self.characters)) != len(self.characters):
            raise InputValidationError("alphabet characters must be pairwise distinct")
        if self.separator is not None:
            if len(self.separator) != 1:
                raise InputValidationError("separator must be a single character")
            if self.separator in self.characters:
                raise InputValidationError(
                    f"separator {self.separator!r} collides with the alphabet"
                )

    @property
    def symbols(self) -> str:
        """All non-blank symbols in column order."""
        return self.characters + (self.separator or "")

    @property
    def num_classes(self) -> int:
        return len(self.symbols) + 1

    @property
    def blank_index(self) -> int:
        return self.num_classes - 1

    def column_map(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.symbols)}

    def index_of(self, char: str) -> int:
        i = self.symbols.find(char)
        if i < 0:
            raise InputValidationError(f"character {char!r} is not in the alphabet")
        return i


class PosteriorMatrix:
    """T x C row-stochastic matrix of per-frame class probabilities.

    Rows that do not sum to 1 within ``ROW_SUM_TOLERANCE`` are rejected
    rather than renormalized, so producer bugs surface immediately.
    """

    __slots__ = ("probs",)

    def __init__(self, probs) -> None:
        arr = np.array(probs, dtype=np.float64)
        if arr.ndim != 2:
            raise InputValidationError("posterior matrix must be two-dimensional")
        t, c = arr.shape
        if t < 1 or c < 2:
            raise InputValidationError(f"posterior matrix needs T >= 1 and C >= 2, got {t}x{c}")
        if not np.all(np.isfinite(arr)):
            raise InputValidationError("posterior matrix contains non-finite entries")
        if np.any(arr < 0.0):
            raise InputValidationError("posterior matrix contains negative entries")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)
        if bad.size:
            raise InputValidationError(
                f"row {int(bad[0])} sums to {sums[bad[0]]!r}; matrices are rejected, "
                "not renormalized"
            )
        arr.setflags(write=False)
        self.probs = arr

    @property
    def num_frames(self) -> int:
        return self.probs.shape[0]

    @property
    def num_classes(self) -> int:
        return self.probs.shape[1]

    def rows(self) -> list[list[float]]:
        return self.probs.tolist()

    def __repr__(self) -> str:
        return f"PosteriorMatrix({self.num_frames}x{self.num_classes})"


def collapse(path: Sequence[int], alphabet: Alphabet) -> str:
    """Map a frame-level path to its labeling.

    Adjacent repeats are merged first, then blanks are removed.
    """
    blank = alphabet.blank_index
    symbols = alphabet.symbols
    n = alphabet.num_classes
    out: list[str] = []
    last = -1
    for idx in path:
        if not 0 <= idx < n:
            raise InputValidationError(f"path index {idx} out of range for {n} classes")
        if idx != last and idx != blank:
            out.append(symbols[idx])
        last = idx
    return "".join(out)


def best_path_decode(m: PosteriorMatrix, alphabet: Alphabet) -> tuple[str, float]:
    """Greedy CTC decoding: per-frame argmax followed by collapse.

    The likelihood is the product of the chosen per-frame maxima,
    accumulated left to right.
    """
    _check_shape(m, alphabet)
    path: list[int] = []
    likelihood = 1.0
    for row in m.probs:
        j = int(np.argmax(row))
        path.append(j)
        likelihood *= float(row[j])
    return collapse(path, alphabet), likelihood


def labeling_distribution(m: PosteriorMatrix, alphabet: Alphabet) -> dict[str, float]:
    """Exhaustively enumerate all C^T paths, grouped by collapsed labeling.

    This is the brute-force reference the beam decoders are checked
    against; it shares no machinery with them. Enumeration is capped at
    ``ENUMERATION_CAP`` paths.
    """
    _check_shape(m, alphabet)
    t_max, c_max = m.num_frames, m.num_classes
    if c_max ** t_max > ENUMERATION_CAP:
        raise CapacityError(
            f"{c_max}^{t_max} paths exceed the enumeration cap of {ENUMERATION_CAP}"
        )
    rows = m.probs.tolist()
    blank = alphabet.blank_index
    symbols = alphabet.symbols
    dist: dict[str, float] = {}

    def walk(t: int, labeling: str, last: int, prob: float) -> None:
        if t == t_max:
            dist[labeling] = dist.get(labeling, 0.0) + prob
            return
        row = rows[t]
        for c in range(c_max):
            p = prob * row[c]
            if p == 0.0:
                continue  # zero-probability subtree contributes nothing
            walk(t + 1, labeling if (c == blank or c == last) else labeling + symbols[c], c, p)

    walk(0, "", -1, 1.0)
    return dist


def labeling_probability(m: PosteriorMatrix, labeling: str, alphabet: Alphabet) -> float:
    """Total probability of all paths collapsing to ``labeling``."""
    if len(labeling) > m.num_frames:
        return 0.0
    symbols = set(alphabet.symbols)
    for ch in labeling:
        if ch not in symbols:
            raise InputValidationError(f"labeling character {ch!r} is not in the alphabet")
    return labeling_distribution(m, alphabet).get(labeling, 0.0)


def _check_shape(m: PosteriorMatrix, alphabet: Alphabet) -> None:
    if m.num_classes != alphabet.num_classes:
        raise InputValidationError(
            f"matrix has {m.num_classes} classes but the alphabet implies "
            f"{alphabet.num_classes}"
        )
