import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcpi.discriminator import (
    InsufficientOscillationsError,
    PowerLawFit,
    SweepRecord,
    Verdict,
    classify,
    extract_envelope,
    fit_power_law,
    read_sweep_csv,
    write_sweep_csv,
)
from rcpi.dicke import DickeState
from rcpi.shifts import rcpi_closed_desitter, rcpi_closed_minkowski


def desitter_sweep(L_grid, omega0_kappa, mu=0.1):
    return [
        SweepRecord(
            float(L),
            rcpi_closed_desitter(float(L), 1.0, omega0_kappa, mu, DickeState.S),
            rcpi_closed_desitter(float(L), 1.0, omega0_kappa, mu, DickeState.A),
        )
        for L in L_grid
    ]


def minkowski_sweep(L_grid, omega0, mu=0.1):
    return [
        SweepRecord(
            float(L),
            rcpi_closed_minkowski(float(L), omega0, mu, DickeState.S),
            rcpi_closed_minkowski(float(L), omega0, mu, DickeState.A),
        )
        for L in L_grid
    ]


class TestSweepRecord:
    def test_rejects_asymmetry_violation(self):
        with pytest.raises(ValueError):
            SweepRecord(1.0, 1e-4, 1e-4)

    def test_rejects_nonpositive_separation(self):
        with pytest.raises(ValueError):
            SweepRecord(0.0, 1e-4, -1e-4)


class TestExtractEnvelope:
    def test_synthetic_cosine_envelope(self):
        # |cos x| / x sampled densely in a window where the oscillation is
        # much faster than the envelope decay: maxima sit on 1/x to 0.1%.
        x = np.linspace(50.0, 500.0, 20000)
        recs = [SweepRecord(float(xi), float(np.cos(xi) / xi), float(-np.cos(xi) / xi)) for xi in x]
        env_L, env_v = extract_envelope(recs)
        assert len(env_L) > 100
        assert np.max(np.abs(env_v * env_L - 1.0)) < 1e-3

    def test_monotone_input_rejected(self):
        recs = [SweepRecord(float(x), 1.0 / x, -1.0 / x) for x in np.linspace(1.0, 10.0, 60)]
        with pytest.raises(InsufficientOscillationsError, match="insufficient oscillations"):
            extract_envelope(recs)

    def test_unsorted_input_rejected(self):
        recs = [SweepRecord(2.0, 1.0, -1.0), SweepRecord(1.0, -1.0, 1.0), SweepRecord(3.0, 1.0, -1.0)] * 3
        with pytest.raises(ValueError):
            extract_envelope(recs[:5])

    def test_desitter_far_envelope_matches_curved_law(self):
        # Fast oscillation (omega0 kappa = 10) so the product maxima sit on
        # the envelope: (mu^2 / 2 pi) kappa / L^2 within 1%.
        recs = desitter_sweep(np.geomspace(10.0, 1000.0, 4000), 10.0)
        env_L, env_v = extract_envelope(recs)
        mask = env_L >= 30.0
        far = (0.1**2 / (2.0 * math.pi)) / env_L[mask] ** 2
        assert np.max(np.abs(env_v[mask] - far) / far) < 0.01


class TestFitPowerLaw:
    def test_exact_inverse_square(self):
        L = np.geomspace(1.0, 100.0, 40)
        fit = fit_power_law(L, 3.7 / L**2)
        assert fit.exponent == pytest.approx(2.0, abs=1e-10)
        assert fit.amplitude == pytest.approx(3.7, rel=1e-10)
        assert fit.residual_rms < 1e-12

    def test_exact_inverse_linear(self):
        L = np.geomspace(1.0, 100.0, 40)
        fit = fit_power_law(L, 0.2 / L)
        assert fit.exponent == pytest.approx(1.0, abs=1e-10)

    def test_desitter_far_exponent(self):
        recs = desitter_sweep(np.geomspace(30.0, 1000.0, 3000), 10.0)
        env_L, env_v = extract_envelope(recs)
        fit = fit_power_law(env_L, env_v, (30.0, 1000.0))
        assert 1.95 <= fit.exponent <= 2.05

    def test_needs_four_points(self):
        with pytest.raises(ValueError):
            fit_power_law(np.array([1.0, 2.0, 3.0]), np.array([1.0, 0.5, 0.3]))

    def test_rejects_nonpositive_values(self):
        with pytest.raises(ValueError):
            fit_power_law(np.array([1.0, 2.0, 3.0, 4.0]), np.array([1.0, 0.5, 0.0, 0.3]))


class TestClassify:
    def test_threshold_rule(self):
        fit = PowerLawFit(2.01, 1.0, 1e-4, (10.0, 100.0), 8)
        assert classify(fit).verdict is Verdict.DESITTER_FAR
        fit = PowerLawFit(1.00, 1.0, 1e-4, (10.0, 100.0), 8)
        assert classify(fit).verdict is Verdict.FLAT_OR_THERMAL
        fit = PowerLawFit(1.5, 1.0, 1e-4, (10.0, 100.0), 8)
        assert classify(fit).verdict is Verdict.INDETERMINATE

    def test_minkowski_sweep_any_frequency(self):
        for omega0 in (0.5, 1.0, 2.0):
            recs = minkowski_sweep(np.geomspace(10.0 / omega0, 100.0 / omega0, 2500), omega0)
            env_L, env_v = extract_envelope(recs)
            fit = fit_power_law(env_L, env_v)
            assert 0.98 <= fit.exponent <= 1.02
            assert classify(fit).verdict is Verdict.FLAT_OR_THERMAL

    def test_crossover_is_indeterminate(self):
        recs = desitter_sweep(np.geomspace(0.3, 10.0, 4000), 10.0)
        env_L, env_v = extract_envelope(recs)
        fit = fit_power_law(env_L, env_v)
        assert classify(fit).verdict is Verdict.INDETERMINATE

    def test_near_only_desitter_sweep_reads_flat(self):
        # Below the curvature scale the curved sweep is indistinguishable
        # from the flat law, and the verdict must say so.
        recs = desitter_sweep(np.geomspace(0.001, 0.1, 4000), 200.0)
        env_L, env_v = extract_envelope(recs)
        fit = fit_power_law(env_L, env_v)
        assert classify(fit).verdict is Verdict.FLAT_OR_THERMAL

    def test_reference_length_rescaling_invariance(self):
        # Rescaling the reference length multiplies L and kappa and divides
        # omega0 by the same factor; the fitted exponent and verdict must not
        # move (only L/kappa and omega0*kappa matter).
        def run(kap, omega0, L_lo, L_hi):
            L = np.geomspace(L_lo, L_hi, 3000)
            recs = [
                SweepRecord(
                    float(Li),
                    rcpi_closed_desitter(float(Li), kap, omega0, 0.1, DickeState.S),
                    rcpi_closed_desitter(float(Li), kap, omega0, 0.1, DickeState.A),
                )
                for Li in L
            ]
            env_L, env_v = extract_envelope(recs)
            return classify(fit_power_law(env_L, env_v))

        base = run(1.0, 10.0, 30.0, 1000.0)
        rescaled = run(2.0, 5.0, 60.0, 2000.0)
        assert rescaled.verdict is base.verdict is Verdict.DESITTER_FAR
        assert rescaled.fit.exponent == pytest.approx(base.fit.exponent, abs=1e-6)

    @given(st.floats(min_value=1e-6, max_value=1e6))
    @settings(max_examples=25, deadline=None)
    def test_scale_invariance(self, scale):
        recs = minkowski_sweep(np.geomspace(10.0, 100.0, 1500), 1.0)
        scaled = [SweepRecord(r.L, scale * r.delta_E_S, scale * r.delta_E_A) for r in recs]
        env_L, env_v = extract_envelope(recs)
        env_Ls, env_vs = extract_envelope(scaled)
        fit = fit_power_law(env_L, env_v)
        fit_s = fit_power_law(env_Ls, env_vs)
        assert fit_s.exponent == pytest.approx(fit.exponent, abs=1e-9)
        assert classify(fit_s).verdict is classify(fit).verdict


class TestCsvInterface:
    def test_round_trip(self):
        recs = minkowski_sweep(np.geomspace(5.0, 50.0, 40), 1.0)
        buf = io.StringIO()
        write_sweep_csv(buf, recs)
        buf.seek(0)
        back = read_sweep_csv(buf)
        assert len(back) == len(recs)
        assert all(a == b for a, b in zip(back, recs))

    def test_bad_header_rejected(self):
        buf = io.StringIO("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="columns"):
            read_sweep_csv(buf)

    def test_bad_row_reports_line_number(self):
        buf = io.StringIO("L,dE_S,dE_A\n1.0,-0.1,0.1\n2.0,nope,0.05\n")
        with pytest.raises(ValueError, match="row 3"):
            read_sweep_csv(buf)

    def test_verdict_json_schema(self):
        recs = minkowski_sweep(np.geomspace(10.0, 100.0, 1500), 1.0)
        env_L, env_v = extract_envelope(recs)
        result = classify(fit_power_law(env_L, env_v))
        doc = json.loads(result.to_json())
        assert set(doc) == {"exponent", "amplitude", "residual_rms", "window", "verdict", "notes"}
        assert doc["verdict"] == "FlatOrThermal"
