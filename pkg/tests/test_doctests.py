import doctest

import dgtrace.linalg
import dgtrace.prng


def test_linalg_doctests():
    failures, _ = doctest.testmod(dgtrace.linalg)
    assert failures == 0
