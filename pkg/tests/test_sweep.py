"""Sweep engine: grids, extrema, distance asymmetry, and the 1982 reconstruction."""

import math

import numpy as np
import pytest

from bellsim import (
    STANDARD_QUAD,
    StationConfig,
    SweepSpec,
    SweepVariable,
    ValidationError,
    aspect_point,
    find_extrema,
    run_sweep,
    series_extrema,
    sync_fraction,
)
from bellsim.sweep import MONTE_CARLO, SweepError

ROUND_TRIP = 43e-9
NODE = 1.0 / ROUND_TRIP  # ~23.2558 MHz spacing of the in-sync maxima
SQRT2 = math.sqrt(2)


def common_sweep(points=1201, engines=("closed_form",), **kw):
    return SweepSpec(
        variable=SweepVariable.FREQUENCY_COMMON,
        start=0.0,
        stop=100e6,
        num_points=points,
        engines=tuple(engines),
        **kw,
    )


class TestSpecValidation:
    def test_bad_range(self):
        with pytest.raises(ValidationError):
            SweepSpec(SweepVariable.F_DIRECT, 1.0, 0.0)

    def test_too_few_points(self):
        with pytest.raises(ValidationError):
            SweepSpec(SweepVariable.F_DIRECT, 0.0, 1.0, num_points=1)

    def test_unknown_engine(self):
        with pytest.raises(ValidationError):
            SweepSpec(SweepVariable.F_DIRECT, 0.0, 1.0, engines=("quantum_annealer",))

    def test_mc_needs_pairs(self):
        with pytest.raises(ValidationError):
            SweepSpec(
                SweepVariable.F_DIRECT, 0.0, 1.0,
                engines=(MONTE_CARLO,), mc_pairs_per_point=0,
            )


class TestClosedFormSweep:
    def test_values_at_landmark_frequencies(self):
        series = run_sweep(common_sweep())
        xs = np.array([p.x for p in series.points])
        ys = np.array([p.s_prime for p in series.points])
        # row nearest the first in-sync node carries (almost) the quantum value
        i = int(np.argmin(np.abs(xs - NODE)))
        assert ys[i] == pytest.approx(0.207, abs=1e-3)
        # the 46.2 MHz point follows from f = 0.9732 exactly
        j = int(np.argmin(np.abs(xs - 46.2e6)))
        f = sync_fraction(xs[j], ROUND_TRIP)
        assert ys[j] == pytest.approx(-0.5 + f / SQRT2, abs=1e-12)

    def test_exact_node_values(self):
        spec = common_sweep()
        from bellsim import mix_fractions, s_prime_fc

        for n in (1, 2, 3):
            f = sync_fraction(n * NODE, ROUND_TRIP)
            assert s_prime_fc(spec.quad, mix_fractions(f, f)) == pytest.approx(
                0.20710678118654746, abs=1e-12
            )
            f0 = sync_fraction((n - 0.5) * NODE, ROUND_TRIP)
            assert s_prime_fc(spec.quad, mix_fractions(f0, f0)) == pytest.approx(
                -0.5, abs=1e-7
            )

    def test_extrema_locations(self):
        series = run_sweep(common_sweep())
        step = 100e6 / 1200
        maxima = [e for e in series_extrema(series, "s_prime") if e.kind == "max"]
        minima = [e for e in series_extrema(series, "s_prime") if e.kind == "min"]
        expected_max = [n * NODE for n in (1, 2, 3, 4)]
        expected_min = [(n + 0.5) * NODE for n in (0, 1, 2, 3)]
        assert len(maxima) == len(expected_max)
        assert len(minima) == len(expected_min)
        for e, x0 in zip(maxima, expected_max):
            assert abs(e.x - x0) <= step
        for e, x0 in zip(minima, expected_min):
            assert abs(e.x - x0) <= step
        # maxima spacing ~ c/(2d)
        gaps = np.diff([e.x for e in maxima])
        assert np.allclose(gaps, NODE, atol=step)

    def test_series_is_periodic_in_frequency(self):
        # sample S'(nu) and S'(nu + 1/T) on a commensurate grid
        spec = common_sweep(points=241)
        series = run_sweep(spec)
        xs = [p.x for p in series.points]
        ys = [p.s_prime for p in series.points]
        from bellsim import mix_fractions, s_prime_fc

        for x, y in zip(xs[:100], ys[:100]):
            f = sync_fraction(x + NODE, ROUND_TRIP)
            shifted = s_prime_fc(spec.quad, mix_fractions(f, f))
            assert abs(shifted - y) <= 1e-9

    def test_value_ranges(self):
        rng = np.random.default_rng(44)
        for _ in range(5):
            lo = rng.uniform(0, 50e6)
            spec = SweepSpec(
                SweepVariable.FREQUENCY_COMMON, lo, lo + rng.uniform(10e6, 50e6),
                num_points=301,
            )
            for p in run_sweep(spec).points:
                assert -0.5 - 1e-12 <= p.s_prime <= 0.20710678118654746 + 1e-12
                assert -1e-12 <= p.s_chsh <= 2 * SQRT2 + 1e-12

    def test_f_direct_constant_series_has_no_extrema(self):
        spec = SweepSpec(SweepVariable.F_DIRECT, 0.0, 1.0, num_points=51)
        series = run_sweep(spec)
        assert [p.s_prime for p in series.points][:3] != [series.points[0].s_prime] * 3
        constant = find_extrema([0.0, 1.0, 2.0, 3.0], [0.3, 0.3, 0.3, 0.3])
        assert constant == []

    def test_f_direct_is_linear(self):
        spec = SweepSpec(SweepVariable.F_DIRECT, 0.0, 1.0, num_points=11)
        series = run_sweep(spec)
        for p in series.points:
            assert p.s_prime == pytest.approx(-0.5 + p.x / SQRT2, abs=1e-12)
            assert p.s_chsh == pytest.approx(2 * SQRT2 * p.x, abs=1e-12)

    def test_reference_lines(self):
        series = run_sweep(common_sweep(points=11))
        ref = series.reference
        assert ref.quantum_s_prime == pytest.approx(0.20710678118654746, abs=1e-12)
        assert ref.semiclassical_s_prime == pytest.approx(-0.14644660940672627, abs=1e-12)
        assert ref.quantum_s == pytest.approx(2 * SQRT2, abs=1e-12)
        assert ref.semiclassical_s == pytest.approx(SQRT2, abs=1e-12)
        assert (ref.lhv_s_prime_min, ref.lhv_s_prime_max, ref.lhv_s_max) == (-1.0, 0.0, 2.0)


class TestFindExtrema:
    def test_needs_three_points(self):
        with pytest.raises(ValidationError):
            find_extrema([0.0, 1.0], [0.0, 1.0])

    def test_plateau_counts_once(self):
        xs = list(range(7))
        ys = [0, 1, 1, 1, 0, -1, 0]
        found = find_extrema(xs, ys)
        assert [(e.x, e.kind) for e in found] == [(2, "max"), (5, "min")]


class TestDistanceAsymmetry:
    def base_spec(self, weights, start=1e6, stop=100e6, points=601):
        bob = StationConfig(STANDARD_QUAD.b, STANDARD_QUAD.b_alt, 0.0)
        return SweepSpec(
            SweepVariable.DISTANCE_RATIO, start, stop, num_points=points,
            bob=bob, station_weights=weights,
        )

    def test_all_weight_on_bob_gives_full_amplitude(self):
        # fine grid over one full oscillation so the grid lands near the nodes
        series = run_sweep(self.base_spec((0.0, 1.0), 20e6, 36e6, 1601))
        values = [p.s_prime for p in series.points]
        assert max(values) == pytest.approx(0.20710678118654746, abs=1e-3)
        assert min(values) == pytest.approx(-0.5, abs=1e-3)

    def test_all_weight_on_fixed_alice_gives_constant_series(self):
        series = run_sweep(self.base_spec((1.0, 0.0)))
        values = [p.s_prime for p in series.points]
        assert max(values) - min(values) <= 1e-12
        assert values[0] == pytest.approx(0.20710678118654746, abs=1e-12)
        assert series_extrema(series, "s_prime") == []

    def test_amplitude_grows_as_alice_weight_shrinks(self):
        amplitudes = []
        for w_alice in (0.8, 0.5, 0.2, 0.0):
            series = run_sweep(self.base_spec((w_alice, 1.0 - w_alice)))
            values = [p.s_prime for p in series.points]
            amplitudes.append(max(values) - min(values))
        assert amplitudes == sorted(amplitudes)

    def test_default_weights_follow_round_trips(self):
        # Alice far (big round trip) -> most texture weight on Bob
        alice = StationConfig.fixed(STANDARD_QUAD.a, round_trip_time=9 * ROUND_TRIP)
        bob = StationConfig(STANDARD_QUAD.b, STANDARD_QUAD.b_alt, 0.0, round_trip_time=ROUND_TRIP)
        spec = SweepSpec(
            SweepVariable.DISTANCE_RATIO, 1e6, 50e6, num_points=11, alice=alice, bob=bob
        )
        assert spec.resolved_weights() == pytest.approx((0.1, 0.9), abs=1e-12)

    def test_extrema_follow_bob_round_trip(self):
        bob = StationConfig(
            STANDARD_QUAD.b, STANDARD_QUAD.b_alt, 0.0, round_trip_time=2 * ROUND_TRIP
        )
        spec = SweepSpec(
            SweepVariable.DISTANCE_RATIO, 1e6, 50e6, num_points=601,
            bob=bob, station_weights=(0.0, 1.0),
        )
        maxima = [e for e in series_extrema(run_sweep(spec), "s_prime") if e.kind == "max"]
        spacing = np.diff([e.x for e in maxima])
        step = (50e6 - 1e6) / 600
        assert np.allclose(spacing, 1.0 / (2 * ROUND_TRIP), atol=2 * step)


class TestMonteCarloSweep:
    def test_estimates_agree_with_closed_forms(self):
        spec = SweepSpec(
            SweepVariable.FREQUENCY_COMMON, 10e6, 40e6, num_points=4,
            engines=("closed_form", MONTE_CARLO), mc_pairs_per_point=150_000, seed=202,
        )
        series = run_sweep(spec)
        for p in series.points:
            assert p.mc_s_prime is not None and p.mc_s_chsh is not None
            assert p.mc_s_prime.agrees_with(p.s_prime)
            assert p.mc_s_chsh.agrees_with(p.s_chsh)

    def test_f_direct_monte_carlo(self):
        spec = SweepSpec(
            SweepVariable.F_DIRECT, 0.2, 0.8, num_points=3,
            engines=(MONTE_CARLO,), mc_pairs_per_point=120_000, seed=203,
        )
        series = run_sweep(spec)
        for p in series.points:
            assert p.mc_s_prime.agrees_with(p.s_prime)

    def test_distance_ratio_monte_carlo(self):
        spec = SweepSpec(
            SweepVariable.DISTANCE_RATIO, 10e6, 30e6, num_points=2,
            engines=(MONTE_CARLO,), mc_pairs_per_point=120_000, seed=204,
            station_weights=(0.3, 0.7),
        )
        series = run_sweep(spec)
        for p in series.points:
            assert p.mc_s_prime.agrees_with(p.s_prime)
            assert p.mc_s_chsh.agrees_with(p.s_chsh)

    def test_failure_reports_offending_x(self):
        spec = SweepSpec(
            SweepVariable.FREQUENCY_COMMON, 10e6, 20e6, num_points=2,
            engines=(MONTE_CARLO,), mc_pairs_per_point=2, seed=205,
        )
        with pytest.raises(SweepError, match="10000000"):
            run_sweep(spec)


class TestAspectPoint:
    def test_exact_chain(self):
        report = aspect_point()
        assert report.exact.fractions.f_alice == pytest.approx(0.9732, abs=1e-4)
        assert report.exact.fractions.f_bob == pytest.approx(0.8376, abs=1e-4)
        assert report.exact.fractions.f == pytest.approx(0.9054, abs=1e-4)
        assert report.exact.s_prime == pytest.approx(-0.5 + 0.9054 / SQRT2, abs=1e-4)
        assert report.exact.s_chsh == pytest.approx(2 * SQRT2 * 0.9054, abs=1e-3)

    def test_reported_chain_reproduces_headline_numbers(self):
        report = aspect_point()
        assert report.reported.fractions.f == pytest.approx(0.90, abs=1e-12)
        assert report.reported.fractions.f_prime == pytest.approx(0.07, abs=1e-12)
        assert report.reported.s_prime == pytest.approx(0.136, abs=5e-4)
        assert report.reported.s_chsh == pytest.approx(2 * SQRT2 * 0.90, abs=1e-12)

    def test_comparison_against_recorded_value(self):
        report = aspect_point()
        assert report.measured_s_prime == 0.101
        assert report.measured_s_prime_error == 0.020
        d = report.as_dict()
        assert d["reported_minus_measured"] == pytest.approx(0.035, abs=5e-4)
