import random

import pytest

from primdyn.freegroup import Word, parse_word


@pytest.fixture
def rng():
    return random.Random(1234)


def w(text: str) -> Word:
    return parse_word(text, 2)
