"""Dual-state word beam search: bookkeeping, constraints and completion."""

import numpy as np
import pytest

from wordbeam import (
    Alphabet,
    Beam,
    ConfigurationError,
    InputValidationError,
    NGRAMS,
    NGRAMS_FORECAST,
    NgramModel,
    PosteriorMatrix,
    PrefixTree,
    WORDS,
    best_path_decode,
    complete_beams,
    decode,
    forecast_sample,
    frame_beams,
    labeling_distribution,
)

from _support import constrained_argmax, random_matrix

WC = set("abcdefgh")


class TestDecodeBasics:
    def test_peaked_word_matches_exhaustive(self):
        alphabet = Alphabet("ab")
        tree = PrefixTree(["ab"], {"a", "b"})
        m = PosteriorMatrix([[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]])
        label, p = decode(m, alphabet, tree, width=10_000)
        exp_label, exp_p = constrained_argmax(labeling_distribution(m, alphabet), tree)
        assert label == exp_label == "ab"
        assert p == pytest.approx(exp_p, abs=1e-12)

    def test_width_one_degenerates_to_best_path(self):
        alphabet = Alphabet("ab")
        tree = PrefixTree(["ab"], {"a", "b"})
        m = PosteriorMatrix([[0.9, 0.05, 0.05], [0.05, 0.9, 0.05]])
        label, _ = decode(m, alphabet, tree, width=1)
        assert label == best_path_decode(m, alphabet)[0] == "ab"

    def test_uniform_two_frame_hand_scores(self):
        alphabet = Alphabet("a")
        tree = PrefixTree(["a"], {"a"})
        m = PosteriorMatrix([[0.5, 0.5], [0.5, 0.5]])
        beams = None
        for beams in frame_beams(m, alphabet, tree, width=100):
            pass
        a = beams["a"]
        assert a.p_blank == pytest.approx(0.25)
        assert a.p_nonblank == pytest.approx(0.5)
        assert beams[""].p_total == pytest.approx(0.25)
        label, p = decode(m, alphabet, tree, width=100)
        assert label == "a"
        assert p == pytest.approx(0.75)

    def test_bad_width(self):
        alphabet = Alphabet("a")
        tree = PrefixTree(["a"], {"a"})
        m = PosteriorMatrix([[0.5, 0.5]])
        with pytest.raises(InputValidationError):
            decode(m, alphabet, tree, width=0)

    def test_unextendable_configuration(self):
        alphabet = Alphabet("ab")
        tree = PrefixTree([], {"a", "b"})
        m = PosteriorMatrix([[0.4, 0.3, 0.3]])
        with pytest.raises(ConfigurationError):
            decode(m, alphabet, tree)

    def test_partition_mismatch(self):
        alphabet = Alphabet("abc")
        tree = PrefixTree(["ab"], {"a", "b"})  # 'c' is unclassified
        m = PosteriorMatrix([[0.25, 0.25, 0.25, 0.25]])
        with pytest.raises(ConfigurationError):
            decode(m, alphabet, tree)

    def test_lm_required_for_ngram_modes(self):
        alphabet = Alphabet("ab")
        tree = PrefixTree(["ab"], {"a", "b"})
        m = PosteriorMatrix([[0.8, 0.1, 0.1]])
        with pytest.raises(InputValidationError):
            decode(m, alphabet, tree, mode=NGRAMS)


class TestOracleEquivalence:
    def test_random_instances(self):
        rng = np.random.default_rng(1234)
        py_rng = __import__("random").Random(1234)
        for i in range(40):
            use_nonword = i % 2 == 1
            chars = "abc" + ("." if use_nonword else "")
            alphabet = Alphabet(chars)
            pool = [
                "".join(p)
                for k in (1, 2, 3)
                for p in __import__("itertools").product("abc", repeat=k)
            ]
            words = py_rng.sample(pool, py_rng.randint(1, 8))
            tree = PrefixTree(
                words, {"a", "b", "c"}, {"."} if use_nonword else set()
            )
            t = int(rng.integers(2, 7))
            m = random_matrix(rng, t, alphabet.num_classes)
            label, p = decode(m, alphabet, tree, width=10_000)
            exp_label, exp_p = constrained_argmax(labeling_distribution(m, alphabet), tree)
            assert label == exp_label, f"instance {i}"
            assert p == pytest.approx(exp_p, abs=1e-9)

    def test_every_output_is_dictionary_consistent(self):
        rng = np.random.default_rng(77)
        py_rng = __import__("random").Random(77)
        alphabet = Alphabet("abc.")
        for _ in range(25):
            words = py_rng.sample(["a", "b", "ab", "abc", "ba", "ca", "cc"], 4)
            tree = PrefixTree(words, {"a", "b", "c"}, {"."})
            m = random_matrix(rng, int(rng.integers(2, 6)), 5)
            label, _ = decode(m, alphabet, tree, width=50)
            for fragment in label.split("."):
                assert fragment == "" or tree.is_word(fragment)

    def test_monotone_width(self):
        rng = np.random.default_rng(5)
        py_rng = __import__("random").Random(5)
        alphabet = Alphabet("abc")
        for _ in range(20):
            words = py_rng.sample(["a", "ab", "abc", "b", "bc", "ca", "cb"], 5)
            tree = PrefixTree(words, {"a", "b", "c"})
            m = random_matrix(rng, 5, 4)
            scores = [
                decode(m, alphabet, tree, width=w)[1] for w in (1, 2, 4, 8, 1000)
            ]
            for lo, hi in zip(scores, scores[1:]):
                assert hi >= lo - 1e-12

    def test_mass_conservation_without_constraints(self):
        # With every character classified non-word the search is
        # unconstrained, so the merged beams must carry all path mass.
        rng = np.random.default_rng(21)
        alphabet = Alphabet("ab")
        tree = PrefixTree([], set(), {"a", "b"})
        for _ in range(10):
            m = random_matrix(rng, int(rng.integers(1, 8)), 3)
            for beams in frame_beams(m, alphabet, tree, width=10**9):
                assert sum(b.p_total for b in beams.values()) == pytest.approx(
                    1.0, abs=1e-9
                )


class TestScoringModes:
    def _setup(self):
        alphabet = Alphabet("ab", separator="|")
        tree = PrefixTree(["ab"], {"a", "b"}, {"|"})
        m = PosteriorMatrix(
            [
                [0.90, 0.04, 0.02, 0.04],
                [0.04, 0.90, 0.02, 0.04],
                [0.02, 0.02, 0.92, 0.04],
            ]
        )
        lm = NgramModel.train(["ab"], order=2)
        return alphabet, tree, m, lm

    def test_words_mode_ignores_lm(self):
        alphabet, tree, m, lm = self._setup()
        assert decode(m, alphabet, tree, None, 50, WORDS) == decode(
            m, alphabet, tree, lm, 50, WORDS
        )

    def test_ngrams_scores_word_on_transition(self):
        alphabet, tree, m, lm = self._setup()
        label_w, p_w = decode(m, alphabet, tree, None, 50, WORDS)
        label_n, p_n = decode(m, alphabet, tree, lm, 50, NGRAMS)
        assert label_w == label_n == "ab|"
        assert p_n == pytest.approx(p_w * lm.word_probability("ab"))

    def test_forecast_modes_agree_on_completed_words(self):
        alphabet, tree, m, lm = self._setup()
        _, p_n = decode(m, alphabet, tree, lm, 50, NGRAMS)
        label_f, p_f = decode(m, alphabet, tree, lm, 50, NGRAMS_FORECAST)
        label_s, p_s = decode(m, alphabet, tree, lm, 50, forecast_sample(5, seed=2))
        assert label_f == label_s == "ab|"
        assert p_f == pytest.approx(p_n)
        assert p_s == p_f  # sample covers all completions: identical arithmetic

    def test_ngrams_can_overturn_a_narrow_mass_lead(self):
        # "ab|" has slightly more path mass than "aa|", but the model is
        # trained mostly on "aa" and flips the ranking at the transition.
        alphabet = Alphabet("ab", separator="|")
        tree = PrefixTree(["aa", "ab"], {"a", "b"}, {"|"})
        lm = NgramModel.train(["aa", "aa", "aa", "ab"], order=2)
        m = PosteriorMatrix(
            [
                [0.9, 0.02, 0.04, 0.04],
                [0.02, 0.02, 0.02, 0.94],
                [0.47, 0.47, 0.02, 0.04],
                [0.02, 0.02, 0.92, 0.04],
            ]
        )
        label_words, _ = decode(m, alphabet, tree, None, 200, WORDS)
        label_ngrams, _ = decode(m, alphabet, tree, lm, 200, NGRAMS)
        assert label_words == "ab|"
        assert label_ngrams == "aa|"
        assert lm.word_probability("aa") > lm.word_probability("ab")


class TestCompleteBeams:
    def test_unique_completion(self):
        tree = PrefixTree(["abc"], WC)
        out = complete_beams([Beam("ab", "ab", 0.3, 0.2)], tree)
        assert list(out) == ["abc"]
        assert out["abc"].p_blank == 0.3
        assert out["abc"].p_nonblank == 0.2
        assert out["abc"].word_prefix == "abc"

    def test_complete_word_untouched(self):
        tree = PrefixTree(["ab", "abc"], WC)
        out = complete_beams([Beam("ab", "ab", 0.1, 0.1)], tree)
        assert list(out) == ["ab"]

    def test_nonword_state_untouched(self):
        tree = PrefixTree(["ab"], WC, {"|"})
        out = complete_beams([Beam("ab|", "", 0.1, 0.1)], tree)
        assert list(out) == ["ab|"]

    def test_lm_ranked_completion(self):
        tree = PrefixTree(["abc", "abd"], WC)
        lm = NgramModel.train(["abc", "abc", "abd"], order=2)
        out = complete_beams([Beam("ab", "ab", 0.2, 0.2)], tree, lm, NGRAMS)
        assert list(out) == ["abc"]  # hand-checked: (3/8)(3/7) > (2/8)(2/6)
        assert out["abc"].p_text == pytest.approx(lm.word_probability("abc"))

    def test_lexicographic_completion_in_words_mode(self):
        tree = PrefixTree(["abd", "abc"], WC)
        out = complete_beams([Beam("ab", "ab", 0.2, 0.2)], tree)
        assert list(out) == ["abc"]

    def test_collision_sums_mass(self):
        tree = PrefixTree(["abc"], WC)
        out = complete_beams(
            [Beam("ab", "ab", 0.1, 0.2), Beam("abc", "abc", 0.05, 0.15)], tree
        )
        assert list(out) == ["abc"]
        assert out["abc"].p_total == pytest.approx(0.5)
