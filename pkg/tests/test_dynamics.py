import math

import numpy as np
import pytest

from qregsim import (
    ExplicitCoupling,
    ExplicitDispersion,
    ModelParams,
    RegisterShape,
    RelaxationFitError,
    TimeGrid,
    UniformCoupling,
    binary_entropy_bits,
    build_h1,
    decoherence_function,
    diagonalize,
    entropy,
    evolve,
    expm,
    expm_evolve,
    fidelity,
    fit_relaxation_time,
    initial_amplitudes,
    m_superposition,
    momentum_state,
    reduce_state,
    related_entropies,
    run_time_series,
    series_to_csv,
    symmetric_state,
)

# frozen oracle: -0.75*log2(0.75) - 0.25*log2(0.25)
ENTROPY_AT_THREE_QUARTERS = 0.8112781244591328


def jc_params(g=0.05):
    return ModelParams(
        RegisterShape(1, 1), UniformCoupling(g), dispersion=ExplicitDispersion([1.0])
    )


class TestInitialAmplitudes:
    def test_embedding(self):
        shape = RegisterShape(2, 3)
        c0 = initial_amplitudes(symmetric_state(2), shape)
        assert np.allclose(c0[:2], 1 / math.sqrt(2))
        assert np.all(c0[2:] == 0)
        c0 = initial_amplitudes(m_superposition(4, 2), RegisterShape(4, 5))
        assert np.allclose(c0[:4], [1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0])

    def test_rejects_unnormalized_or_wrong_size(self):
        shape = RegisterShape(2, 3)
        with pytest.raises(ValueError):
            initial_amplitudes(np.array([1.0, 1.0]), shape)
        with pytest.raises(ValueError):
            initial_amplitudes(symmetric_state(3), shape)


class TestEvolve:
    def test_time_zero_is_identity(self):
        params = jc_params()
        sd = diagonalize(build_h1(params))
        c0 = initial_amplitudes(symmetric_state(1), params.shape)
        assert np.max(np.abs(evolve(sd, c0, 0.0) - c0)) < 1e-12

    def test_eigenvector_acquires_pure_phase(self):
        params = ModelParams(RegisterShape(2, 4), UniformCoupling(0.07))
        sd = diagonalize(build_h1(params))
        v = sd.eigenvectors[:, 2]
        ct = evolve(sd, v, 3.7)
        expect = np.exp(-1j * sd.eigenvalues[2] * 3.7) * v
        assert np.max(np.abs(ct - expect)) < 1e-12

    def test_jc_rabi_oscillation(self):
        # oracle: resonant two-level closed form |C_spin|^2 = cos^2(gt)
        g = 0.05
        params = jc_params(g)
        sd = diagonalize(build_h1(params))
        c0 = initial_amplitudes(symmetric_state(1), params.shape)
        for t in (0.0, math.pi / (4 * g), math.pi / (2 * g)):
            ct = evolve(sd, c0, t)
            assert abs(abs(ct[0]) ** 2 - math.cos(g * t) ** 2) < 1e-10

    def test_norm_conserved(self):
        rng = np.random.default_rng(3)
        params = ModelParams(
            RegisterShape(2, 6), ExplicitCoupling(0.1 * rng.standard_normal((6, 2)))
        )
        sd = diagonalize(build_h1(params))
        for _ in range(25):
            c0 = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            c0 /= np.linalg.norm(c0)
            for t in (1.0, 10.0, 100.0, 1000.0):
                assert abs(np.linalg.norm(evolve(sd, c0, t)) - 1.0) < 1e-10

    def test_phases_compose(self):
        params = ModelParams(RegisterShape(2, 5), UniformCoupling(0.04))
        sd = diagonalize(build_h1(params))
        c0 = initial_amplitudes(momentum_state(2, 1), params.shape)
        lhs = evolve(sd, evolve(sd, c0, 5.0), 8.5)
        rhs = evolve(sd, c0, 13.5)
        assert np.linalg.norm(lhs - rhs) < 1e-9

    def test_matches_matrix_exponential_oracle(self):
        rng = np.random.default_rng(14)
        params = ModelParams(
            RegisterShape(2, 3), ExplicitCoupling(rng.uniform(-0.1, 0.1, (3, 2)))
        )
        h = build_h1(params)
        sd = diagonalize(h)
        c0 = initial_amplitudes(symmetric_state(2), params.shape)
        for t in (1.0, 10.0, 100.0):
            diff = evolve(sd, c0, t) - expm_evolve(h, c0, t)
            assert np.linalg.norm(diff) < 1e-8


class TestMatrixExponential:
    def test_diagonal(self):
        a = np.diag([0.3, -1.2 + 0.5j])
        assert np.max(np.abs(expm(a) - np.diag(np.exp(np.diag(a))))) < 1e-14

    def test_rotation_closed_form(self):
        theta = 1.234
        a = np.array([[0.0, theta], [-theta, 0.0]])
        expect = np.array(
            [[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]]
        )
        assert np.max(np.abs(expm(a) - expect)) < 1e-14

    def test_unitarity_at_long_times(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((6, 6))
        h = a + a.T
        u = expm(-1j * 500.0 * h)
        assert np.max(np.abs(u @ u.conj().T - np.eye(6))) < 1e-10


class TestReduceAndObservables:
    def test_initial_state_keeps_excitation(self):
        c0 = initial_amplitudes(symmetric_state(3), RegisterShape(3, 4))
        rs = reduce_state(c0, 3)
        assert rs.p1 == pytest.approx(1.0, abs=1e-12)
        assert rs.p0 == 0.0

    def test_fully_leaked_state(self):
        c = np.zeros(5, dtype=complex)
        c[3] = 1.0
        rs = reduce_state(c, 2)
        assert rs.p1 == 0.0
        assert rs.p0 == pytest.approx(1.0, abs=1e-12)
        assert np.all(rs.spin_amplitudes == 0)

    def test_probabilities_sum_to_one_over_random_states(self):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
            c /= np.linalg.norm(c)
            rs = reduce_state(c, 4)
            assert abs(rs.p0 + rs.p1 - 1.0) < 1e-12
            assert abs(rs.p1 - np.linalg.norm(rs.spin_amplitudes) ** 2) < 1e-12

    def test_fidelity_identities(self):
        shape = RegisterShape(2, 3)
        c0 = initial_amplitudes(symmetric_state(2), shape)
        assert fidelity(c0, c0, 2) == pytest.approx(1.0, abs=1e-12)
        leaked = np.zeros(5, dtype=complex)
        leaked[4] = 1.0
        assert fidelity(c0, leaked, 2) == 0.0
        assert decoherence_function(c0, c0, 2) == pytest.approx(1.0, abs=1e-12)

    def test_fidelity_equals_decoherence_modulus_squared(self):
        rng = np.random.default_rng(21)
        c0 = initial_amplitudes(symmetric_state(3), RegisterShape(3, 5))
        for _ in range(50):
            ct = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            ct /= np.linalg.norm(ct)
            d = decoherence_function(c0, ct, 3)
            assert abs(fidelity(c0, ct, 3) - abs(d) ** 2) < 1e-12

    def test_global_phase_invariance(self):
        params = ModelParams(RegisterShape(2, 8), UniformCoupling(0.05))
        sd = diagonalize(build_h1(params))
        prep = symmetric_state(2)
        for phase in (1.0, 1j, np.exp(0.7j)):
            c0 = initial_amplitudes(phase * prep, params.shape)
            ct = evolve(sd, c0, 4.2)
            base = initial_amplitudes(prep, params.shape)
            assert fidelity(c0, ct, 2) == pytest.approx(
                fidelity(base, evolve(sd, base, 4.2), 2), abs=1e-12
            )

    def test_entropy_values(self):
        assert entropy(reduce_state(np.array([1.0, 0.0]), 1)) == 0.0
        rs = reduce_state(np.array([math.sqrt(0.5), math.sqrt(0.5)]), 1)
        assert entropy(rs) == pytest.approx(1.0, abs=1e-12)
        rs = reduce_state(np.array([math.sqrt(0.75), math.sqrt(0.25)]), 1)
        assert entropy(rs) == pytest.approx(ENTROPY_AT_THREE_QUARTERS, abs=1e-12)
        assert binary_entropy_bits(0.0) == 0.0
        assert binary_entropy_bits(1.0) == 0.0

    def test_related_entropies_sign_convention(self):
        rs = reduce_state(np.array([1.0, 0.0]), 1)
        assert related_entropies(rs) == (0.0, 0.0, 0.0)
        rs = reduce_state(np.array([math.sqrt(0.5), math.sqrt(0.5)]), 1)
        s_b, s_cond, s_mut = related_entropies(rs)
        assert s_b == pytest.approx(1.0, abs=1e-12)
        assert s_cond == pytest.approx(-1.0, abs=1e-12)
        assert s_mut == pytest.approx(-2.0, abs=1e-12)
        assert s_mut == pytest.approx(2 * s_cond, abs=1e-15)


class TestRunTimeSeries:
    def test_first_record_is_pristine(self):
        params = ModelParams(RegisterShape(2, 10), UniformCoupling(0.02))
        series = run_time_series(params, symmetric_state(2), TimeGrid(10.0, 21))
        first = next(series.records())
        assert first.t == 0.0
        assert first.fidelity == pytest.approx(1.0, abs=1e-12)
        assert first.entropy_bits == pytest.approx(0.0, abs=1e-12)
        assert first.p1 == pytest.approx(1.0, abs=1e-12)

    def test_norm_and_consistency_along_the_grid(self):
        params = ModelParams(RegisterShape(3, 12), UniformCoupling(0.03))
        series = run_time_series(params, m_superposition(3, 2), TimeGrid(50.0, 301))
        assert np.max(np.abs(series.p0 + series.p1 - 1.0)) < 1e-10
        assert np.all((series.p0 >= 0) & (series.p0 <= 1))
        assert np.all((series.p1 >= 0) & (series.p1 <= 1))
        d_sq = series.d_re**2 + series.d_im**2
        assert np.max(np.abs(series.fidelity - d_sq)) < 1e-12
        assert np.all(series.entropy_bits >= 0.0)
        assert np.all(series.entropy_bits <= 1.0 + 1e-12)

    def test_chunking_does_not_change_results(self, monkeypatch):
        import qregsim.dynamics as dyn

        params = ModelParams(RegisterShape(2, 9), UniformCoupling(0.04))
        full = run_time_series(params, symmetric_state(2), TimeGrid(20.0, 257))
        monkeypatch.setattr(dyn, "_EVAL_CHUNK", 16)
        chunked = run_time_series(params, symmetric_state(2), TimeGrid(20.0, 257))
        # BLAS rounding may differ between chunk shapes; physics must not
        assert np.allclose(full.fidelity, chunked.fidelity, atol=1e-13, rtol=0)
        assert np.allclose(full.p0, chunked.p0, atol=1e-13, rtol=0)

    def test_complex_couplings_conserve_probability(self):
        rng = np.random.default_rng(33)
        g = 0.05 * (rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3)))
        params = ModelParams(RegisterShape(3, 8), ExplicitCoupling(g))
        series = run_time_series(params, symmetric_state(3), TimeGrid(40.0, 401))
        assert np.max(np.abs(series.p0 + series.p1 - 1.0)) < 1e-10
        assert np.max(series.fidelity) <= 1.0

    def test_dfs_preparation_is_frozen(self):
        params = ModelParams(RegisterShape(2, 50), UniformCoupling(0.01))
        series = run_time_series(params, momentum_state(2, 1), TimeGrid(500.0, 501))
        assert np.max(np.abs(series.fidelity - 1.0)) < 1e-8
        assert np.max(series.entropy_bits) < 1e-8

    def test_bell_mixture_long_time_state(self):
        # late-window register state: p1 -> |c_a|^2 with amplitudes along the
        # dark state, fidelity -> (1 - |c_s|^2)^2; the window sits after the
        # decay completes but before the first bath recurrence at t = N_b
        cs, ca = 0.6, 0.8
        prep = cs * symmetric_state(2) + ca * momentum_state(2, 1)
        params = ModelParams(RegisterShape(2, 200), UniformCoupling(0.01))
        series = run_time_series(params, prep, TimeGrid(180.0, 1801))
        assert series.late_fidelity_mean == pytest.approx((1 - cs**2) ** 2, abs=0.05)
        assert series.p1[-1] == pytest.approx(ca**2, abs=0.05)

        sd = diagonalize(build_h1(params))
        c_late = evolve(sd, initial_amplitudes(prep, params.shape), 150.0)
        rs = reduce_state(c_late, 2)
        dark = momentum_state(2, 1)
        overlap = abs(np.vdot(dark, rs.spin_amplitudes)) ** 2 / rs.p1
        assert overlap > 0.95

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 10)
        with pytest.raises(ValueError):
            TimeGrid(10.0, 1)


class TestCsv:
    def test_schema_and_determinism(self):
        params = ModelParams(RegisterShape(2, 6), UniformCoupling(0.02))
        series = run_time_series(params, symmetric_state(2), TimeGrid(5.0, 11))
        text = series_to_csv(series)
        lines = text.splitlines()
        assert lines[0] == "t,fidelity,entropy_bits,p0,p1,d_re,d_im"
        assert len(lines) == 12
        assert text.endswith("\n")
        again = series_to_csv(
            run_time_series(params, symmetric_state(2), TimeGrid(5.0, 11))
        )
        assert text == again

    def test_full_precision_round_trip(self):
        params = ModelParams(RegisterShape(2, 6), UniformCoupling(0.02))
        series = run_time_series(params, symmetric_state(2), TimeGrid(5.0, 11))
        text = series_to_csv(series)
        parsed = np.genfromtxt(text.splitlines(), delimiter=",", skip_header=1)
        assert np.array_equal(parsed[:, 1], series.fidelity)
        assert np.array_equal(parsed[:, 3], series.p0)


class TestRelaxationFit:
    def test_pure_exponential_recovered_exactly(self):
        t = np.linspace(0, 60, 2001)
        fit = fit_relaxation_time(t, np.exp(-t / 7.5))
        assert fit.tau == pytest.approx(7.5, rel=1e-6)
        assert fit.plateau < 0.1

    def test_golden_rule_scaling_in_coupling(self):
        taus = {}
        for g in (0.01, 0.02):
            params = ModelParams(RegisterShape(2, 200), UniformCoupling(g))
            series = run_time_series(params, symmetric_state(2), TimeGrid(100.0, 4001))
            taus[g] = fit_relaxation_time(series.times, series.fidelity).tau
        assert taus[0.01] / taus[0.02] == pytest.approx(4.0, rel=0.1)
        # absolute scale: 1 / (N * N_b * g0^2)
        assert taus[0.01] == pytest.approx(25.0, rel=0.1)

    def test_plateaued_decay_uses_early_window(self):
        cs = ca = 1 / math.sqrt(2)
        prep = cs * symmetric_state(2) + ca * momentum_state(2, 1)
        params = ModelParams(RegisterShape(2, 200), UniformCoupling(0.01))
        series = run_time_series(params, prep, TimeGrid(400.0, 8001))
        fit = fit_relaxation_time(series.times, series.fidelity)
        assert fit.plateau > 0.1
        assert fit.tau * abs(cs) ** 2 == pytest.approx(25.0, rel=0.1)

    def test_strong_coupling_is_reported_as_oscillatory(self):
        params = ModelParams(RegisterShape(2, 200), UniformCoupling(0.5))
        series = run_time_series(params, symmetric_state(2), TimeGrid(50.0, 2001))
        with pytest.raises(RelaxationFitError, match="oscillatory"):
            fit_relaxation_time(series.times, series.fidelity)

    def test_undecayed_curve_has_no_window(self):
        t = np.linspace(0, 10, 101)
        with pytest.raises(RelaxationFitError):
            fit_relaxation_time(t, np.full_like(t, 0.99))
