import numpy as np
import pytest

from pl_rffp.errors import SignalError
from pl_rffp.signals import wifi
from pl_rffp.signals.wifi import gen_wifi_preamble, long_training_field, short_training_field


def test_preamble_length_and_power():
    w = gen_wifi_preamble()
    assert len(w) == 320
    assert w.power() == pytest.approx(1.0, abs=1e-12)


def test_short_training_field_has_period_16():
    stf = short_training_field()
    assert stf.shape == (160,)
    assert np.allclose(stf[16:], stf[:-16])


def test_long_training_field_guard_is_cyclic():
    ltf = long_training_field()
    assert ltf.shape == (160,)
    assert np.allclose(ltf[:32], ltf[-32:])
    assert np.allclose(ltf[32:96], ltf[96:])


def test_preamble_is_deterministic():
    assert np.array_equal(gen_wifi_preamble().iq, gen_wifi_preamble().iq)


def test_preamble_length_is_checked(monkeypatch):
    monkeypatch.setattr(wifi, 'short_training_field', lambda: np.ones(150, dtype=np.complex128))
    with pytest.raises(SignalError, match="expected 320"):
        wifi.gen_wifi_preamble()
