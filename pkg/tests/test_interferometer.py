import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import idpsim.interferometer as itf
from idpsim.errors import ConvergenceError, DomainError
from idpsim.interferometer import (
    SOURCE,
    align,
    align_many,
    error_rates,
    propagate,
    run_pair,
    trace,
)
from idpsim.states import JonesVector, make_states

from conftest import cos2


def loss_angle(alpha):
    return math.degrees(math.asin(math.tan(math.radians(alpha)))) / 2


# -- propagate ------------------------------------------------------------------

def test_orthogonal_case_hits_pd1(aligned_ideal):
    p = propagate(SOURCE, aligned_ideal(45.0))
    assert p.p_pd1 == pytest.approx(1.0, abs=1e-9)
    assert p.p_pd2 == pytest.approx(0.0, abs=1e-9)
    assert p.p_pd3 == pytest.approx(0.0, abs=1e-9)


def test_identical_states_all_inconclusive(ideal):
    cfg = replace(ideal.prepared_for(0.0), wp4_angle=0.0)
    assert propagate(SOURCE, cfg).p_pd3 == pytest.approx(1.0, abs=1e-12)


def test_22_5_degrees(aligned_ideal):
    p = propagate(SOURCE, aligned_ideal(22.5))
    assert p.p_pd3 == pytest.approx(math.sqrt(0.5), abs=1e-9)
    assert p.p_pd1 == pytest.approx(1 - math.sqrt(0.5), abs=1e-9)
    assert p.p_pd2 == pytest.approx(0.0, abs=1e-9)


def test_unnormalized_input_rejected(ideal):
    with pytest.raises(DomainError):
        propagate(JonesVector(1.0, 0.1), ideal)


# -- align --------------------------------------------------------------------------

def test_align_45_zero_loss(aligned_ideal):
    cfg = aligned_ideal(45.0)
    assert cfg.wp4_angle == pytest.approx(45.0, abs=1e-6)
    assert propagate(SOURCE, cfg).p_pd2 < 1e-12


def test_align_22_5_loss_angle(aligned_ideal):
    cfg = aligned_ideal(22.5)
    assert math.sin(math.radians(2 * cfg.wp4_angle)) == pytest.approx(math.tan(math.radians(22.5)), abs=1e-6)
    assert cfg.wp4_angle == pytest.approx(12.2349, abs=1e-4)


def test_align_0_sends_everything_to_pd3(aligned_ideal):
    cfg = aligned_ideal(0.0)
    assert cfg.wp4_angle == pytest.approx(0.0, abs=1e-6)
    assert propagate(SOURCE, cfg).p_pd3 == pytest.approx(1.0, abs=1e-9)


def test_align_ideal_path_phase(aligned_ideal):
    # arms recombine in quadrature: one PBS reflection phase per arm mismatch
    for alpha in (10.0, 30.0):
        assert aligned_ideal(alpha).path_phase_delta == pytest.approx(math.pi / 2, abs=1e-5)


def test_align_many_matches_align(ideal, aligned_ideal):
    res = align_many([5.0, 33.0], ideal)
    for r, a in zip(res, (5.0, 33.0)):
        assert r.converged
        assert r.config.wp4_angle == pytest.approx(aligned_ideal(a).wp4_angle, abs=1e-12)


def test_align_many_empty(ideal):
    assert align_many([], ideal) == []


def test_align_rejects_bad_alpha(ideal):
    with pytest.raises(DomainError):
        align(46.0, ideal)


def test_align_convergence_error(ideal, monkeypatch):
    def stuck(E, *args):
        n = len(E)
        return (np.full(n, 10.0), np.zeros(n), np.full(n, 0.3),
                np.zeros(n, dtype=bool), np.full(n, 60))

    monkeypatch.setattr(itf.kernels, "align_batch", stuck)
    with pytest.raises(ConvergenceError) as exc:
        align(20.0, ideal)
    d = exc.value.diagnostics
    assert d["alpha"] == 20.0 and d["passes"] == 60 and d["p_pd2"] == 0.3


# -- run_pair ----------------------------------------------------------------------

def test_run_pair_orthogonal(aligned_ideal):
    plus, minus = run_pair(45.0, aligned_ideal(45.0))
    assert plus.p_pd1 == pytest.approx(1.0, abs=1e-9)
    assert minus.p_pd2 == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("alpha", [3.0, 17.0, 22.5, 38.0])
def test_run_pair_zero_error(aligned_ideal, alpha):
    plus, minus = run_pair(alpha, aligned_ideal(alpha))
    e_plus, e_minus = error_rates(alpha, plus, minus)
    assert e_plus < 1e-9 and e_minus < 1e-9


def test_run_pair_prepares_unprepared_config(ideal):
    cfg = replace(ideal, wp4_angle=loss_angle(20.0), path_phase_delta=math.pi / 2)
    plus, _ = run_pair(20.0, cfg)
    assert plus.p_pd3 == pytest.approx(cos2(20.0), abs=1e-12)


def test_run_pair_rejects_mismatched_preparation(aligned_ideal):
    with pytest.raises(DomainError):
        run_pair(30.0, aligned_ideal(20.0))


def test_error_rates_absent_at_zero(aligned_ideal):
    plus, minus = run_pair(0.0, aligned_ideal(0.0))
    assert error_rates(0.0, plus, minus) == (None, None)
    assert plus.p_pd3 == pytest.approx(1.0, abs=1e-9)


def test_calibrated_error_small_but_nonzero(aligned_calibrated):
    plus, minus = run_pair(40.0, aligned_calibrated(40.0))
    assert 0.0 < plus.p_pd2 < 0.05


def test_calibrated_error_larger_at_small_alpha(aligned_calibrated):
    def avg(alpha):
        plus, minus = run_pair(alpha, aligned_calibrated(alpha))
        return sum(error_rates(alpha, plus, minus)) / 2

    assert avg(4.0) > avg(40.0)


@pytest.mark.parametrize("alpha", [8.0, 40.0])
def test_calibrated_conserves_probability(aligned_calibrated, alpha):
    plus, minus = run_pair(alpha, aligned_calibrated(alpha))
    for p in (plus, minus):
        assert p.total + p.p_lost == pytest.approx(1.0, abs=1e-9)


# -- invariants over a fine grid ---------------------------------------------------

@pytest.fixture(scope="module")
def fine_ideal(ideal):
    alphas = np.linspace(0.0, 45.0, 1024)
    res = align_many(alphas, ideal)
    pairs = [run_pair(a, r.config) for a, r in zip(alphas, res)]
    return alphas, pairs


def test_inconclusive_is_cos2alpha(fine_ideal):
    alphas, pairs = fine_ideal
    dev = max(abs(plus.p_pd3 - cos2(a)) for a, (plus, _) in zip(alphas, pairs))
    assert dev < 1e-9


def test_zero_error_and_mirror_symmetry(fine_ideal):
    for plus, minus in fine_ideal[1]:
        assert plus.p_pd2 < 1e-9 and minus.p_pd1 < 1e-9
        assert plus.p_pd1 == pytest.approx(minus.p_pd2, abs=1e-9)
        assert plus.p_pd2 == pytest.approx(minus.p_pd1, abs=1e-9)
        assert plus.total == pytest.approx(1.0, abs=1e-9)
        assert minus.total == pytest.approx(1.0, abs=1e-9)


# -- independent element-by-element route ------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.floats(0, 45), st.floats(-90, 90), st.floats(0, 2 * math.pi), st.booleans(), st.booleans())
def test_trace_matches_kernel(alpha, phi, delta, wp3, calibrated):
    base = itf.calibrated_config() if calibrated else itf.ideal_config()
    cfg = replace(base.prepared_for(alpha), wp4_angle=phi, path_phase_delta=delta, wp3_inserted=wp3)
    final = trace(SOURCE, cfg)[-1][1]
    p = propagate(SOURCE, cfg)
    assert final.power("pd1") == pytest.approx(p.p_pd1, abs=1e-12)
    assert final.power("pd2") == pytest.approx(p.p_pd2, abs=1e-12)
    assert final.power("pd3") == pytest.approx(p.p_pd3, abs=1e-12)
    assert final.power("dump") == pytest.approx(p.p_lost, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 45), st.floats(-90, 90), st.floats(0, 2 * math.pi))
def test_trace_conserves_norm(alpha, phi, delta):
    cfg = replace(itf.calibrated_config().prepared_for(alpha), wp4_angle=phi, path_phase_delta=delta)
    for _, state in trace(SOURCE, cfg):
        assert state.norm2 == pytest.approx(1.0, abs=1e-10)


def test_trace_stage_support(ideal):
    cfg = replace(ideal.prepared_for(45.0), wp4_angle=45.0, path_phase_delta=math.pi / 2)
    stages = dict(trace(SOURCE, cfg))
    assert stages["PBS2"].support(1e-15) == {"armA", "armB"}
    assert "pd3" not in stages["WP4+PBS3"].support(1e-15)
    assert stages["PBS5+WP6+PBS6"].support(1e-15) == {"pd1"}


def test_psi_minus_matches_state_preparation(ideal):
    pair = make_states(27.0)
    cfg = ideal.prepared_for(27.0)
    assert itf.prepare(SOURCE, cfg).as_array() == pytest.approx(pair.psi_plus.as_array(), abs=1e-15)
    cfg = replace(cfg, wp3_inserted=True)
    assert itf.prepare(SOURCE, cfg).as_array() == pytest.approx(pair.psi_minus.as_array(), abs=1e-15)
