import math

import pytest

from chasing.roots import BracketError, bisect


def test_finds_sqrt2():
    r = bisect(lambda x: x * x - 2.0, 0.0, 2.0, 1e-14)
    assert r.root == pytest.approx(math.sqrt(2.0), abs=1e-13)
    assert r.residual < 1e-13


def test_target_shift():
    r = bisect(math.exp, 0.0, 2.0, 1e-14, target=math.e)
    assert r.root == pytest.approx(1.0, abs=1e-13)


def test_endpoint_root():
    assert bisect(lambda x: x, 0.0, 1.0, 1e-12).root == 0.0


def test_no_sign_change():
    with pytest.raises(BracketError):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0, 1e-12)


def test_nan_endpoint():
    with pytest.raises(BracketError):
        bisect(lambda x: math.nan, 0.0, 1.0, 1e-12)
