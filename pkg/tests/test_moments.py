import pytest

import schurhad as sh
from schurhad.errors import BudgetExceeded
from schurhad.words import Word, all_words

from oracles import oracle_circular_moment


def test_circular_star_moment_examples():
    assert sh.circular_star_moment("1*") == 1
    assert sh.circular_star_moment("11") == 0
    assert sh.circular_star_moment("1*1*") == 2
    assert sh.circular_star_moment("11**") == 1
    assert sh.circular_star_moment("1*1") == 0


def test_circular_alternating_is_catalan():
    for k in range(1, 7):
        assert sh.circular_star_moment(Word.alternating(2 * k)) == sh.catalan(k)


def test_circular_matches_oracle_short_words():
    for length in range(1, 7):
        for w in all_words(length):
            assert sh.circular_star_moment(w) == oracle_circular_moment(str(w))


def test_circular_adjoint_symmetry():
    for length in range(1, 9):
        for w in all_words(length):
            assert sh.circular_star_moment(w) == sh.circular_star_moment(w.reversed_flipped())


def test_circular_budget():
    with pytest.raises(BudgetExceeded):
        sh.circular_star_moment("1*" * 9)


def test_semicircle_moment():
    assert sh.semicircle_moment(2) == 1
    assert sh.semicircle_moment(4) == 2
    assert sh.semicircle_moment(5) == 0
    assert sh.semicircle_moment(6) == 5
    with pytest.raises(BudgetExceeded):
        sh.semicircle_moment(34)


def test_empirical_rademacher_identity_word_is_exact():
    est = sh.empirical_star_moment(sh.toeplitz(), sh.hankel(), sh.RADEMACHER, sh.RADEMACHER,
                                   100, "1*", trials=5, seed=2)
    assert est.mean == 1.0
    assert est.std_error == 0.0


def test_empirical_gaussian_identity_word():
    est = sh.empirical_star_moment(sh.toeplitz(), sh.hankel(), sh.GAUSSIAN, sh.GAUSSIAN,
                                   200, "1*", trials=10, seed=3)
    assert abs(est.mean - 1.0) <= max(0.05, 3 * est.std_error)


def test_empirical_deterministic_given_seed():
    args = (sh.toeplitz(), sh.hankel(), sh.GAUSSIAN, sh.GAUSSIAN, 60, "1*1*")
    a = sh.empirical_star_moment(*args, trials=4, seed=9)
    b = sh.empirical_star_moment(*args, trials=4, seed=9)
    assert a.mean == b.mean and a.std_error == b.std_error


def test_empirical_validation():
    t, h = sh.toeplitz(), sh.hankel()
    with pytest.raises(ValueError):
        sh.empirical_star_moment(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 10, "1*", trials=1)
    with pytest.raises(BudgetExceeded):
        sh.empirical_star_moment(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 4000, "1*1*1*", trials=500)


def test_batch_matches_single():
    t, h = sh.toeplitz(), sh.hankel()
    batch = sh.empirical_star_moments(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 50,
                                      ["1*", "1*1*"], trials=4, seed=5)
    single = sh.empirical_star_moment(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 50, "1*1*",
                                      trials=4, seed=5)
    assert batch["1*1*"].mean == single.mean


def test_odd_words_shrink_or_stay_small():
    t, h = sh.toeplitz(), sh.hankel()
    words = [w for L in (1, 3, 5) for w in all_words(L)]
    means = {}
    for n in (250, 500, 1000):
        res = sh.empirical_star_moments(t, h, sh.GAUSSIAN, sh.GAUSSIAN, n, words,
                                        trials=6, seed=17)
        means[n] = {s: est.mean for s, est in res.items()}
    for w in words:
        s = str(w)
        seq = [abs(means[n][s]) for n in (250, 500, 1000)]
        assert seq[-1] <= seq[0] + 1e-9 or seq[-1] < 0.1


def test_symmetric_moment_normalization():
    est = sh.symmetric_moment(sh.toeplitz(), sh.hankel(), sh.GAUSSIAN, sh.GAUSSIAN,
                              300, 2, trials=8, seed=4)
    assert abs(est.mean - 1.0) <= max(0.05, 3 * est.std_error)


def test_symmetric_moment_validation():
    t, h = sh.toeplitz(), sh.hankel()
    with pytest.raises(ValueError):
        sh.symmetric_moment(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 50, 3)
    with pytest.raises(BudgetExceeded):
        sh.symmetric_moment(t, h, sh.GAUSSIAN, sh.GAUSSIAN, 50, 10)
