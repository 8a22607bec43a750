"""Synthetic recognizer determinism, validity and noise behaviour."""

import numpy as np
import pytest

from wordbeam import (
    Alphabet,
    InputValidationError,
    PLAIN,
    PrefixTree,
    RecognizerSim,
    best_path_decode,
    decode,
    decode_label,
    extra_separator,
    make_ensemble,
)

def test_noiseless_emission_recovers_label():
    a = Alphabet("abdefgiln")
    sim = RecognizerSim(alphabet=a, noise_level=0.0)
    label, _ = best_path_decode(sim.emit("abba"), a)
    assert label == "abba"  # repeated letter survives via transition blanks


def test_noiseless_extra_separator_round_trip():
    a = Alphabet("acdotv", separator="|")
    scheme = extra_separator("|")
    sim = RecognizerSim(alphabet=a, noise_level=0.0)
    label, _ = best_path_decode(sim.emit("advocaat", scheme), a)
    assert label == "advocaat|"
    assert decode_label(label, scheme).text == "advocaat"


def test_emission_is_deterministic():
    a = Alphabet("abc")
    sim = RecognizerSim(alphabet=a, noise_level=0.4, seed=99)
    m1 = sim.emit("abc")
    m2 = sim.emit("abc")
    assert m1.probs.tobytes() == m2.probs.tobytes()


def test_emission_depends_on_seed():
    a = Alphabet("abc")
    m1 = RecognizerSim(alphabet=a, noise_level=0.4, seed=1).emit("abc")
    m2 = RecognizerSim(alphabet=a, noise_level=0.4, seed=2).emit("abc")
    assert m1.probs.tobytes() != m2.probs.tobytes()


def test_frame_layout():
    a = Alphabet("ab")
    sim = RecognizerSim(alphabet=a, frames_per_char=3, noise_level=0.0)
    m = sim.emit("ab")
    assert m.num_frames == 3 * 2 + 1  # one blank transition frame between chars


def test_rows_are_valid_distributions():
    a = Alphabet("abcde")
    for noise in (0.1, 0.5, 0.9):
        sim = RecognizerSim(alphabet=a, noise_level=noise, seed=5)
        m = sim.emit("beadcabbed")
        assert np.all(m.probs >= 0)
        assert np.allclose(m.probs.sum(axis=1), 1.0, atol=1e-12)


def test_out_of_alphabet_character_rejected():
    sim = RecognizerSim(alphabet=Alphabet("ab"))
    with pytest.raises(InputValidationError):
        sim.emit("abz")


def test_empty_label_rejected():
    sim = RecognizerSim(alphabet=Alphabet("ab"))
    with pytest.raises(InputValidationError):
        sim.emit("")


def test_parameter_validation():
    with pytest.raises(InputValidationError):
        RecognizerSim(alphabet=Alphabet("ab"), noise_level=1.5)
    with pytest.raises(InputValidationError):
        RecognizerSim(alphabet=Alphabet("ab"), frames_per_char=0)
    with pytest.raises(InputValidationError):
        RecognizerSim(alphabet=Alphabet("ab"), separator_noise_factor=2.0)


def test_separator_region_is_reliable():
    # Separator frames carry scaled-down noise, and no other frame leaks
    # mass onto the separator column.
    a = Alphabet("abcde", separator="|")
    scheme = extra_separator("|")
    sim = RecognizerSim(alphabet=a, noise_level=0.5, seed=8, frames_per_char=3)
    m = sim.emit("abcde", scheme)
    sep_col = a.index_of("|")
    sep_frames = m.probs[-3:, sep_col]
    assert np.all(sep_frames > 0.5)
    assert np.all(m.probs[:-3, sep_col] == 0.0)


class TestMakeEnsemble:
    def test_singleton(self):
        base = RecognizerSim(alphabet=Alphabet("ab"), noise_level=0.3, seed=4)
        sims = make_ensemble(base, 1)
        assert len(sims) == 1

    def test_distinct_seeds_and_bounded_jitter(self):
        base = RecognizerSim(alphabet=Alphabet("ab"), noise_level=0.3, seed=4)
        sims = make_ensemble(base, 8, jitter=0.05)
        assert len({s.seed for s in sims}) == 8
        assert all(abs(s.noise_level - 0.3) <= 0.05 + 1e-12 for s in sims)

    def test_reproducible(self):
        base = RecognizerSim(alphabet=Alphabet("ab"), noise_level=0.3, seed=4)
        assert make_ensemble(base, 3) == make_ensemble(base, 3)

    def test_bad_count(self):
        base = RecognizerSim(alphabet=Alphabet("ab"))
        with pytest.raises(InputValidationError):
            make_ensemble(base, 0)


def _accuracy(decoder, sim, words, *decoder_args):
    hits = 0
    for w in words:
        label = decoder(sim.emit(w), *decoder_args)
        hits += label == w
    return hits / len(words)


def test_accuracy_non_increasing_in_noise():
    import random

    rng = random.Random(31)
    a = Alphabet("abcdefgh")
    words = ["".join(rng.choice(a.characters) for _ in range(4)) for _ in range(60)]
    inversions = 0
    for seed in range(5):
        accs = []
        for noise in (0.05, 0.3, 0.6):
            sim = RecognizerSim(alphabet=a, noise_level=noise, seed=seed)
            accs.append(
                _accuracy(lambda m: best_path_decode(m, a)[0], sim, words)
            )
        inversions += sum(hi > lo + 1e-9 for lo, hi in zip(accs, accs[1:]))
    assert inversions <= 1


def test_dictionary_decoding_beats_best_path_at_noise_04():
    import random

    rng = random.Random(17)
    a = Alphabet("abcdefgh")
    dictionary = sorted(
        {"".join(rng.choice(a.characters) for _ in range(rng.randint(3, 5))) for _ in range(120)}
    )
    tree = PrefixTree(dictionary, set(a.characters))
    words = [rng.choice(dictionary) for _ in range(150)]
    sim = RecognizerSim(alphabet=a, noise_level=0.4, seed=12, frames_per_char=3)
    bp = wbs = 0
    for w in words:
        m = sim.emit(w, PLAIN)
        bp += best_path_decode(m, a)[0] == w
        wbs += decode(m, a, tree, width=8)[0] == w
    assert wbs > bp
