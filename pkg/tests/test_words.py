import pytest

from schurhad.words import Word, all_words


def test_round_trip():
    w = Word.from_string("1*1*")
    assert str(w) == "1*1*"
    assert len(w) == 4
    assert w[1] == "*"


def test_validation():
    with pytest.raises(ValueError):
        Word.from_string("")
    with pytest.raises(ValueError):
        Word.from_string("1a*")


def test_alternating():
    assert str(Word.alternating(5)) == "1*1*1"
    with pytest.raises(ValueError):
        Word.alternating(0)


def test_all_words():
    ws = list(all_words(3))
    assert len(ws) == 8
    assert len(set(str(w) for w in ws)) == 8


def test_reversed_flipped():
    assert str(Word.from_string("11*").reversed_flipped()) == "1**"
