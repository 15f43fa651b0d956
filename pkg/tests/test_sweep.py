"""Parameter sweeps: grids, determinism, failure isolation, contours."""

import os
import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

import srswitch as sr
from srswitch import ValidationError
from srswitch.sweep import (SPECTRAL_CSV_HEADER, SWEEP_CSV_HEADER,
                            TRANSITIONS_CSV_HEADER, write_spectral_csv,
                            write_sweep_csv, write_transitions_csv)
from srswitch.csvio import read_csv


def _spec_1d(net, start=0.5, stop=50.0, points=7, **kw):
    return sr.SweepSpec(net, (sr.AxisSpec("kappa_L", start, stop, points),), **kw)


def _spec_2d(net, points=5, **kw):
    axes = (sr.AxisSpec("kappa_L", 0.1, 10.0, points),
            sr.AxisSpec("kappa_R", 0.1, 10.0, points))
    return sr.SweepSpec(net, axes, **kw)


def test_axis_spec_grids_and_validation():
    log = sr.AxisSpec("kappa_L", 1.0, 100.0, 3)
    assert_allclose(log.grid(), [1.0, 10.0, 100.0], rtol=1e-14)
    lin = sr.AxisSpec("kappa_R", 0.0, 1.0, 5, scale="linear")
    assert_allclose(lin.grid(), [0.0, 0.25, 0.5, 0.75, 1.0], rtol=1e-14)
    with pytest.raises(ValidationError, match="axis name"):
        sr.AxisSpec("gamma", 1.0, 2.0, 3)
    with pytest.raises(ValidationError, match=">= 2 points"):
        sr.AxisSpec("kappa_L", 1.0, 2.0, 1)
    with pytest.raises(ValidationError, match="range"):
        sr.AxisSpec("kappa_L", 2.0, 1.0, 3)
    with pytest.raises(ValidationError, match="scale"):
        sr.AxisSpec("kappa_L", 1.0, 2.0, 3, scale="sqrt")
    with pytest.raises(ValidationError, match="log axis"):
        sr.AxisSpec("kappa_L", 0.0, 2.0, 3)


def test_sweep_spec_validation(multimer):
    axis = sr.AxisSpec("kappa_L", 0.1, 10.0, 5)
    with pytest.raises(ValidationError, match="unknown law"):
        sr.SweepSpec(multimer, (axis,), law="magic")
    with pytest.raises(ValidationError, match="vary kappa_L"):
        sr.SweepSpec(multimer, (sr.AxisSpec("kappa_R", 0.1, 10.0, 5),))
    with pytest.raises(ValidationError, match="q > 0"):
        sr.SweepSpec(multimer, (axis,), q=None)
    with pytest.raises(ValidationError, match="q > 0"):
        sr.SweepSpec(multimer, (axis,), q=-4.0)
    with pytest.raises(ValidationError, match="kappa_L, kappa_R"):
        sr.SweepSpec(multimer, (sr.AxisSpec("kappa_R", 0.1, 1.0, 3),
                                sr.AxisSpec("kappa_L", 0.1, 1.0, 3)))
    with pytest.raises(ValidationError, match="1 or 2 axes"):
        sr.SweepSpec(multimer, (axis, axis, axis))
    with pytest.raises(ValidationError, match="horizon"):
        sr.SweepSpec(multimer, (axis,), horizon_ps=0.0)
    with pytest.raises(ValidationError, match="workers"):
        sr.SweepSpec(multimer, (axis,), workers=0)


def test_effective_bath_precedence(multimer, thermal_bath):
    import dataclasses
    axis = sr.AxisSpec("kappa_L", 0.1, 10.0, 5)
    carrying = dataclasses.replace(multimer, bath=sr.BathSpec(77.0, 10.0, 100.0))
    spec = sr.SweepSpec(carrying, (axis,))
    assert spec.effective_bath() == carrying.bath
    override = sr.SweepSpec(carrying, (axis,), bath=thermal_bath)
    assert override.effective_bath() == thermal_bath
    assert override.to_dict()["bath"]["temperature_K"] == 300.0


def test_sweep_1d_matches_direct_evaluation(multimer):
    spec = _spec_1d(multimer, points=5)
    result = sr.sweep_1d(spec)
    assert len(result.records) == 5
    assert result.failures == ()
    ref = sr.reference_coupling(multimer)
    for rec, kappa in zip(result.records, spec.axes[0].grid()):
        kappa_r = kappa / spec.q
        assert rec.kappa_L == kappa
        assert rec.kappa_R == kappa_r
        net = sr.with_sink_strengths(multimer, 2 * ref * kappa, 2 * ref * kappa_r)
        eta_L, eta_R, trace = sr.final_efficiencies(net, horizon_ps=20.0)
        assert rec.eta_L == eta_L and rec.eta_R == eta_R
        assert rec.unbalanced == eta_L - eta_R
        assert rec.final_trace == trace
        assert abs(rec.eta_L + rec.eta_R + rec.final_trace - 1.0) <= 1e-9
        assert rec.row() == (rec.kappa_L, rec.kappa_R, rec.eta_L, rec.eta_R,
                             rec.unbalanced, rec.final_trace)


def test_sweep_2d_row_major_order(multimer):
    spec = _spec_2d(multimer, points=3)
    result = sr.sweep_2d(spec)
    kl = spec.axes[0].grid()
    kr = spec.axes[1].grid()
    assert len(result.records) == 9
    for i in range(3):
        for j in range(3):
            rec = result.records[i * 3 + j]
            assert rec.kappa_L == kl[i] and rec.kappa_R == kr[j]
    grids = result.grids()
    assert set(grids) == {"eta_L", "eta_R", "unbalanced", "final_trace"}
    assert grids["eta_L"].shape == (3, 3)
    assert grids["unbalanced"][1, 2] == result.records[1 * 3 + 2].unbalanced
    with pytest.raises(ValidationError, match="1-d"):
        result.crossings()
    with pytest.raises(ValidationError, match="2-d"):
        sr.sweep_1d(_spec_1d(multimer)).grids()


def test_axis_count_guards(multimer):
    with pytest.raises(ValidationError, match="single kappa_L axis"):
        sr.sweep_1d(_spec_2d(multimer))
    with pytest.raises(ValidationError, match="kappa_L and kappa_R"):
        sr.sweep_2d(_spec_1d(multimer))
    with pytest.raises(ValidationError, match="single kappa_L"):
        sr.scan_spectral(_spec_2d(multimer))
    with pytest.raises(ValidationError, match="single kappa_L"):
        sr.transition_scan(_spec_2d(multimer))


def test_lindblad_sweep_requires_bath(multimer):
    with pytest.raises(ValidationError, match="need a bath"):
        sr.sweep_1d(_spec_1d(multimer, points=2, law="lindblad"))


def test_csv_outputs_are_deterministic(multimer, tmp_path):
    paths = []
    for tag, workers in (("a", 1), ("b", 3), ("c", 1)):
        spec = _spec_1d(multimer, points=13, workers=workers)
        path = tmp_path / f"sweep1d_{tag}.csv"
        write_sweep_csv(path, sr.sweep_1d(spec))
        paths.append(path)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]

    paths = []
    for tag, workers in (("a", 1), ("b", 3)):
        spec = _spec_2d(multimer, points=5, workers=workers)
        path = tmp_path / f"sweep2d_{tag}.csv"
        write_sweep_csv(path, sr.sweep_2d(spec))
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_csv_round_trip(multimer, tmp_path):
    result = sr.sweep_1d(_spec_1d(multimer, points=5))
    path = tmp_path / "sweep.csv"
    write_sweep_csv(path, result)
    header, data = read_csv(path)
    assert header == SWEEP_CSV_HEADER
    assert data.shape == (5, 6)
    for row, rec in zip(data, result.records):
        assert tuple(row) == rec.row()


def test_scan_csv_round_trips(multimer, tmp_path):
    spec = _spec_1d(multimer, points=3)
    scan = sr.scan_spectral(spec)
    path = tmp_path / "spectral.csv"
    write_spectral_csv(path, scan)
    header, data = read_csv(path)
    assert header == SPECTRAL_CSV_HEADER
    assert data.shape == (18, len(SPECTRAL_CSV_HEADER))
    assert all(tuple(row) == scan.rows[i] for i, row in enumerate(data))

    trans = sr.transition_scan(spec)
    path = tmp_path / "transitions.csv"
    write_transitions_csv(path, trans)
    header, data = read_csv(path)
    assert header == TRANSITIONS_CSV_HEADER
    assert_allclose(data[:, 0], trans.kappas, rtol=0)
    assert_allclose(data[:, 1], trans.curve, rtol=0)


def test_scan_spectral_rows_match_eigendecompose(multimer):
    spec = _spec_1d(multimer, points=3)
    scan = sr.scan_spectral(spec)
    ref = sr.reference_coupling(multimer)
    per = scan.per_kappa()
    for kappa in spec.axes[0].grid():
        net = sr.with_sink_strengths(multimer, 2 * ref * kappa,
                                     2 * ref * kappa / spec.q)
        sp = sr.eigendecompose(net)
        block = per[float(kappa)]
        assert block.shape == (6, 6)
        assert np.array_equal(block[:, 0], np.arange(1, 7))
        assert np.array_equal(block[:, 1], sp.energies_cm1.real)
        assert np.array_equal(block[:, 2], sp.widths_cm1)
        assert np.array_equal(block[:, 3], sp.participation)


def test_transition_scan_matches_spectral_helper(multimer):
    spec = _spec_1d(multimer, start=0.5, stop=2.0, points=4)
    scan = sr.transition_scan(spec)
    ref = sr.reference_coupling(multimer)
    assert np.array_equal(scan.kappas, spec.axes[0].grid())
    for kappa, value in zip(scan.kappas, scan.curve):
        net = sr.with_sink_strengths(multimer, 2 * ref * kappa,
                                     2 * ref * kappa / spec.q)
        assert value == sr.subradiant_average_width(sr.eigendecompose(net))


@pytest.mark.parametrize("workers", [1, 2])
def test_failed_points_record_nan_and_continue(multimer, monkeypatch, workers):
    real = sr.final_efficiencies

    def flaky(net, law, horizon_ps, initial, bath, gamma_d_cm1, dissipator):
        if sr.coupling_ratios(net).kappa_L > 5.0:
            raise RuntimeError("boom")
        return real(net, law, horizon_ps, initial, bath=bath,
                    gamma_d_cm1=gamma_d_cm1, dissipator=dissipator)

    monkeypatch.setattr("srswitch.sweep.final_efficiencies", flaky)
    spec = _spec_1d(multimer, start=1.0, stop=10.0, points=3, workers=workers)
    result = sr.sweep_1d(spec)
    assert len(result.records) == 3
    assert np.isfinite(result.records[0].eta_L)
    assert np.isfinite(result.records[1].eta_L)
    bad = result.records[2]
    assert np.isnan(bad.eta_L) and np.isnan(bad.eta_R)
    assert np.isnan(bad.unbalanced) and np.isnan(bad.final_trace)
    assert bad.kappa_L == 10.0
    assert result.failures == ({"index": 2, "kappa_L": 10.0,
                                "kappa_R": 0.1, "error": "RuntimeError: boom"},)


def test_find_crossings_interpolates_in_log_kappa():
    kappas = np.array([1.0, 10.0, 100.0])
    crossings = sr.find_crossings(kappas, np.array([1.0, -1.0, 1.0]))
    assert_allclose(crossings, [10.0**0.5, 10.0**1.5], rtol=1e-14)
    assert sr.find_crossings(kappas, np.array([1.0, 0.0, -1.0])) == [10.0]
    assert sr.find_crossings(kappas, np.array([1.0, 2.0, 3.0])) == []
    with_nan = sr.find_crossings(kappas, np.array([1.0, np.nan, -1.0]))
    assert with_nan == []


def test_primary_crossing_prefers_sqrt_q():
    assert sr.primary_crossing([2.0, 12.0, 500.0], 100.0) == 12.0
    assert sr.primary_crossing([], 100.0) is None


def _synthetic_grid():
    kl = np.logspace(0.0, 2.0, 9)
    kr = np.logspace(0.0, 2.0, 9)
    eta_L = np.tile(kl[:, None], (1, 9))
    eta_R = np.tile(kr[None, :], (9, 1))
    return kl, kr, eta_L, eta_R


def test_contour_equal_family_traces_the_diagonal():
    kl, kr, eta_L, eta_R = _synthetic_grid()
    lines = sr.contour_extract(kl, kr, eta_L, eta_R, ratio=1.0)
    assert [ln.family for ln in lines] == ["equal"]
    pts = lines[0].points
    assert_allclose(np.log10(pts[:, 0]), np.log10(pts[:, 1]), atol=1e-12)
    span = np.log10(pts[:, 0])
    assert span.min() <= 0.26 and span.max() >= 1.74


def test_contour_ratio_families():
    kl, kr, eta_L, eta_R = _synthetic_grid()
    lines = sr.contour_extract(kl, kr, eta_L, eta_R, ratio=9.0)
    families = sorted(ln.family for ln in lines)
    assert families == ["L_over_R", "R_over_L"]
    for ln in lines:
        assert ln.ratio == 9.0
        logdiff = np.log10(ln.points[:, 0]) - np.log10(ln.points[:, 1])
        want = np.log10(9.0) if ln.family == "L_over_R" else -np.log10(9.0)
        assert_allclose(logdiff, want, atol=1e-12)
    reciprocal = sr.contour_extract(kl, kr, eta_L, eta_R, ratio=1.0 / 9.0)
    assert sorted(ln.family for ln in reciprocal) == ["L_over_R", "R_over_L"]
    assert all(ln.ratio == 9.0 for ln in reciprocal)


def test_contour_absent_level_and_validation():
    kl, kr, eta_L, eta_R = _synthetic_grid()
    flat = sr.contour_extract(kl, kr, eta_L, eta_L, ratio=9.0)
    assert flat == []
    with pytest.raises(ValidationError, match="ratio"):
        sr.contour_extract(kl, kr, eta_L, eta_R, ratio=0.0)
    with pytest.raises(ValidationError, match="grids"):
        sr.contour_extract(kl, kr, eta_L[:3], eta_R, ratio=9.0)


@pytest.mark.skipif(len(os.sched_getaffinity(0)) < 2,
                    reason="needs at least 2 cores to measure scaling")
def test_worker_scaling_soft_bound(multimer):
    spec = _spec_1d(multimer, points=256, workers=1)
    t0 = time.perf_counter()
    sr.sweep_1d(spec)
    t1 = time.perf_counter() - t0
    workers = min(4, len(os.sched_getaffinity(0)))
    spec = _spec_1d(multimer, points=256, workers=workers)
    t0 = time.perf_counter()
    sr.sweep_1d(spec)
    tw = time.perf_counter() - t0
    assert tw <= (1.0 / min(workers, 256) + 0.25) * t1
