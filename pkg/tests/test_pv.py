import numpy as np
import pytest

from koppelman.errors import DivergenceError
from koppelman.pv import PVSchedule, estimate_order, sep_regularize


def test_constant_family():
    sch = PVSchedule()
    r = sep_regularize([2.5 + 1j] * len(sch.deltas), sch)
    assert r.value == 2.5 + 1j


def test_linear_family():
    sch = PVSchedule.geometric(3, 8, order=1)
    d = np.array(sch.deltas)
    r = sep_regularize(3.0 + 0.7 * d, sch)
    assert abs(r.value - 3.0) < 1e-12
    assert abs(r.order - 1) < 1e-9


def test_square_root_tail():
    sch = PVSchedule()
    d = np.array(sch.deltas)
    assert len(d) == 10
    r = sep_regularize(1.0 + 0.8 * np.sqrt(d) + 0.3 * d, sch)
    assert abs(r.value - 1.0) < 1e-4


def test_divergent_family_raises():
    sch = PVSchedule()
    d = np.array(sch.deltas)
    with pytest.raises(DivergenceError):
        sep_regularize(np.log(d), sch)
    with pytest.raises(DivergenceError):
        sep_regularize([np.nan] * len(d), sch)


def test_noise_floor():
    sch = PVSchedule.geometric(3, 8)
    vals = [1.0, 1.0 + 1e-11, 1.0 - 2e-11, 1.0 + 3e-11, 1.0, 1.0 + 1e-11]
    with pytest.raises(DivergenceError):
        sep_regularize(vals, sch)
    assert abs(sep_regularize(vals, sch, noise=1e-9).value - 1.0) < 1e-10


def test_schedule_validation():
    with pytest.raises(ValueError):
        PVSchedule((0.1,))
    with pytest.raises(ValueError):
        PVSchedule((0.1, 0.2))
    with pytest.raises(ValueError):
        PVSchedule((0.2, 0.1), extrapolation="magic")


def test_estimate_order():
    d = [0.1, 0.05, 0.025]
    assert abs(estimate_order(d, [1 + x ** 2 for x in d]) - 2) < 1e-9


def test_pure_square_root_tail():
    sch = PVSchedule()
    d = np.array(sch.deltas)
    r = sep_regularize(2.0 - 0.5j + 1.3 * np.sqrt(d), sch)
    assert abs(r.value - (2.0 - 0.5j)) < 1e-4
    assert r.order == 0.5


def test_snap_order():
    from koppelman.pv import snap_order
    assert snap_order(0.508) == 0.5
    assert snap_order(1.995) == 2.0
    assert snap_order(0.4137) == 0.4137
