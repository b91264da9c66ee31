"""Smoke tests for the python bindings against the calibrated model."""

import ifa


def test_rule54_table():
    t = ifa.decode_rule(54)
    assert t.at(1, 1).next_state == 1
    assert t.at(1, 1).action == 0
    assert t.at(1, 0).next_state == 2
    assert t.at(1, 0).action == 1


def test_roundtrip_and_relabel():
    for n in (0, 54, 99, 201, 255):
        assert ifa.encode_rule(ifa.decode_rule(n)) == n
    assert ifa.relabel_rule(54) == 201
    assert ifa.relabel_rule(201) == 54


def test_evolutions():
    ups = ifa.evolve(99, steps=25, window=10)
    assert ups == [1] * 25
    r54 = ifa.detect_cycle(54, window=10)
    assert (r54.preperiod, r54.period) == (0, 889)
    pair = ifa.detect_cycle(52, window=10, rule2=99)
    assert pair.period == 1588
    alt = ifa.detect_cycle(54, window=10, alt_window=True)
    assert alt.period == 1


def test_multi_asset():
    mov = ifa.evolve(12345678, steps=100, window=12, assets=2)
    assert len(mov) == 100
    s0 = ifa.asset_series(mov, 0)
    s1 = ifa.asset_series(mov, 1)
    assert set(s0) <= {-1, 1} and set(s1) <= {-1, 1}
    hits = ifa.scan_multi_range(0, 4096, workers=2)
    assert isinstance(hits, list)


def test_stats():
    m = ifa.moments([1.0, -1.0] * 30)
    assert abs(m.skewness) < 1e-12
    assert abs(m.kurtosis - 1.0) < 1e-12
    assert abs(ifa.pearson([1, 2, 3, 4.0], [2, 4, 6, 8.0]) - 1.0) < 1e-12
    roll = ifa.rolling_correlation([1.0, -1.0] * 40, [1.0, -1.0] * 40, window=50)
    assert all(abs(r - 1.0) < 1e-12 for r in roll if r is not None)


def test_calibration_is_unique():
    accepted = ifa.calibrate()
    assert len(accepted) == 1
    assert accepted[0]["window"] == 10
    assert accepted[0]["relabel_classes"] == 136
    assert all(accepted[0]["anchors"].values())
