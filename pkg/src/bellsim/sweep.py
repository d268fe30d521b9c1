"""Parameter sweeps over switching frequency, sync fraction and distance split.

The central prediction being mapped: with both stations switching at a
common frequency nu against a fixed round trip T, the Bell quantities follow
the triangle wave of the in-sync fraction, so S'(nu) oscillates between the
quantum ceiling (-1/2 + 1/sqrt(2) ~ 0.207 at nu = n/T) and the fully
out-of-sync floor (-1/2 at nu = (n + 1/2)/T), while S runs from 2*sqrt(2)
down to 0.  Sweeps evaluate the closed forms and can attach Monte Carlo
estimates from the timeline engine at every point.

The ``distance_ratio`` variable realizes the asymmetric-distance protocol:
Alice's polarizer is fixed (one run per required setting), Bob switches at
the swept frequency, and the texture weight of each station follows from the
configured distances (nearer polarizer textures more strongly,
w = other_distance / total by default).  With all weight on Bob the
oscillation has full amplitude; with all weight on fixed Alice the series is
constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .choice import (
    ASPECT_FREQUENCY_ALICE,
    ASPECT_FREQUENCY_BOB,
    ASPECT_ROUND_TRIP,
    EQUAL_WEIGHTS,
    ChoiceQuad,
    STANDARD_QUAD,
    StationConfig,
    SyncFractions,
    mix_fractions,
    s_chsh_fc,
    s_chsh_fixed,
    s_chsh_mixture,
    s_prime_fc,
    s_prime_fixed,
    s_prime_mixture,
    sync_fraction,
)
from .models import Model, ValidationError
from .montecarlo import (
    EstimateWithError,
    RngSpec,
    Trials,
    estimate_s_chsh,
    estimate_s_prime,
    run_choice_trials,
    run_timeline,
)

DEFAULT_SEED = 123456789

#: Recorded single-channel Bell value of the 1982 experiment.
ASPECT_1982_S_PRIME_MEASURED = 0.101
ASPECT_1982_S_PRIME_ERROR = 0.020
#: Per-station sync fractions as reported for the 1982 experiment (two digits).
ASPECT_1982_REPORTED_F_ALICE = 0.97
ASPECT_1982_REPORTED_F_BOB = 0.83


class SweepError(RuntimeError):
    """A sweep point failed; the message reports the offending x."""


class SweepVariable(str, Enum):
    FREQUENCY_COMMON = "frequency_common"
    FREQUENCY_ALICE_ONLY = "frequency_alice_only"
    F_DIRECT = "f_direct"
    DISTANCE_RATIO = "distance_ratio"


CLOSED_FORM = "closed_form"
MONTE_CARLO = "monte_carlo"


def _default_alice() -> StationConfig:
    return StationConfig(
        STANDARD_QUAD.a, STANDARD_QUAD.a_alt, ASPECT_FREQUENCY_ALICE
    )


def _default_bob() -> StationConfig:
    return StationConfig(STANDARD_QUAD.b, STANDARD_QUAD.b_alt, ASPECT_FREQUENCY_BOB)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep, over which grid, and with which engines."""

    variable: SweepVariable
    start: float
    stop: float
    num_points: int = 1201
    quad: ChoiceQuad = STANDARD_QUAD
    alice: StationConfig = field(default_factory=_default_alice)
    bob: StationConfig = field(default_factory=_default_bob)
    engines: tuple[str, ...] = (CLOSED_FORM,)
    mc_pairs_per_point: int = 200_000
    mc_duration: float = 1e-3
    station_weights: tuple[float, float] | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not self.start < self.stop:
            raise ValidationError("sweep range must have start < stop")
        if self.num_points < 2:
            raise ValidationError("sweep needs at least two points")
        for e in self.engines:
            if e not in (CLOSED_FORM, MONTE_CARLO):
                raise ValidationError(f"unknown engine {e!r}")
        if MONTE_CARLO in self.engines and self.mc_pairs_per_point < 1:
            raise ValidationError("monte_carlo engine needs mc_pairs_per_point >= 1")

    def grid(self) -> list[float]:
        step = (self.stop - self.start) / (self.num_points - 1)
        return [self.start + i * step for i in range(self.num_points)]

    def resolved_weights(self) -> tuple[float, float]:
        """Texture weight split between the stations.

        Explicit weights win; otherwise the distance-ratio protocol divides
        weight by closeness (w_alice = T_bob / (T_alice + T_bob)) and every
        other mode uses the symmetric split.
        """
        if self.station_weights is not None:
            return self.station_weights
        if self.variable is SweepVariable.DISTANCE_RATIO:
            total = self.alice.round_trip_time + self.bob.round_trip_time
            return (self.bob.round_trip_time / total, self.alice.round_trip_time / total)
        return EQUAL_WEIGHTS


@dataclass(frozen=True)
class ReferenceLines:
    """Fixed-model values for the sweep's quad, plus the LHV bounds."""

    quantum_s_prime: float
    quantum_s: float
    semiclassical_s_prime: float
    semiclassical_s: float
    lhv_s_prime_min: float = -1.0
    lhv_s_prime_max: float = 0.0
    lhv_s_max: float = 2.0

    @classmethod
    def for_quad(cls, quad: ChoiceQuad) -> "ReferenceLines":
        return cls(
            quantum_s_prime=s_prime_fixed(Model.QUANTUM, quad),
            quantum_s=s_chsh_fixed(Model.QUANTUM, quad),
            semiclassical_s_prime=s_prime_fixed(Model.SEMI_CLASSICAL, quad),
            semiclassical_s=s_chsh_fixed(Model.SEMI_CLASSICAL, quad),
        )


@dataclass(frozen=True)
class SweepPoint:
    x: float
    f_alice: float
    f_bob: float
    s_prime: float
    s_chsh: float
    mc_s_prime: EstimateWithError | None = None
    mc_s_chsh: EstimateWithError | None = None


@dataclass(frozen=True)
class SweepSeries:
    spec: SweepSpec
    points: tuple[SweepPoint, ...]
    reference: ReferenceLines


def _fractions_at(spec: SweepSpec, x: float) -> SyncFractions:
    if spec.variable is SweepVariable.FREQUENCY_COMMON:
        return mix_fractions(
            sync_fraction(x, spec.alice.round_trip_time),
            sync_fraction(x, spec.bob.round_trip_time),
        )
    if spec.variable is SweepVariable.FREQUENCY_ALICE_ONLY:
        return mix_fractions(
            sync_fraction(x, spec.alice.round_trip_time), spec.bob.sync_fraction()
        )
    if spec.variable is SweepVariable.F_DIRECT:
        if not 0.0 <= x <= 1.0:
            raise ValidationError(f"f value {x!r} outside [0, 1]")
        return mix_fractions(x, x)
    if spec.variable is SweepVariable.DISTANCE_RATIO:
        # Alice is fixed, hence always in sync; Bob switches at x.
        return mix_fractions(1.0, sync_fraction(x, spec.bob.round_trip_time))
    raise ValidationError(f"unknown sweep variable {spec.variable!r}")


def _closed_form_values(
    spec: SweepSpec, sf: SyncFractions, weights: tuple[float, float]
) -> tuple[float, float]:
    if weights == EQUAL_WEIGHTS:
        return s_prime_fc(spec.quad, sf), s_chsh_fc(spec.quad, sf)
    return (
        s_prime_mixture(spec.quad, sf, weights),
        s_chsh_mixture(spec.quad, sf, weights),
    )


def _mc_values(
    spec: SweepSpec,
    sf: SyncFractions,
    weights: tuple[float, float],
    x: float,
    index: int,
) -> tuple[EstimateWithError, EstimateWithError]:
    n = spec.mc_pairs_per_point
    quad = spec.quad

    if spec.variable is SweepVariable.F_DIRECT:
        main = run_choice_trials(quad, sf, n, RngSpec(spec.seed, index * 8 + 1), station_weights=weights)
        alice_only = run_choice_trials(
            quad, sf, n, RngSpec(spec.seed, index * 8 + 2), station_weights=weights, pbs=(True, False)
        )
        bob_only = run_choice_trials(
            quad, sf, n, RngSpec(spec.seed, index * 8 + 3), station_weights=weights, pbs=(False, True)
        )
        s_p = estimate_s_prime(main, alice_only, bob_only, quad)
        s_c = estimate_s_chsh(main, quad)
        return s_p, s_c

    if spec.variable is SweepVariable.DISTANCE_RATIO:
        bob_cfg = replace(spec.bob, switch_frequency=x)
        parts = []
        for setting, sid in ((quad.a, 1), (quad.a_alt, 2)):
            alice_cfg = StationConfig.fixed(setting, spec.alice.round_trip_time)
            parts.append(
                run_timeline(
                    alice_cfg, bob_cfg, n // 2 + 1, spec.mc_duration,
                    RngSpec(spec.seed, index * 8 + sid), station_weights=weights,
                )
            )
        main = Trials.concat(parts)
        alice_only = run_timeline(
            StationConfig.fixed(quad.a_alt, spec.alice.round_trip_time), bob_cfg,
            n // 2 + 1, spec.mc_duration, RngSpec(spec.seed, index * 8 + 3),
            station_weights=weights, pbs=(True, False),
        )
        bob_only = run_timeline(
            StationConfig.fixed(quad.a, spec.alice.round_trip_time), bob_cfg,
            n // 2 + 1, spec.mc_duration, RngSpec(spec.seed, index * 8 + 4),
            station_weights=weights, pbs=(False, True),
        )
        return (
            estimate_s_prime(main, alice_only, bob_only, quad),
            estimate_s_chsh(main, quad),
        )

    # frequency modes: both stations run their square waves
    nu_a = x if spec.variable in (
        SweepVariable.FREQUENCY_COMMON, SweepVariable.FREQUENCY_ALICE_ONLY
    ) else spec.alice.switch_frequency
    nu_b = x if spec.variable is SweepVariable.FREQUENCY_COMMON else spec.bob.switch_frequency
    if nu_a == 0.0 or nu_b == 0.0:
        # a non-switching station never shows its alternate setting in one
        # run; the per-trial choice sampler stands in for the separate
        # fixed-setting runs a real experiment would take
        main = run_choice_trials(quad, sf, n, RngSpec(spec.seed, index * 8 + 1),
                                 station_weights=weights)
        alice_only = run_choice_trials(quad, sf, n, RngSpec(spec.seed, index * 8 + 2),
                                       station_weights=weights, pbs=(True, False))
        bob_only = run_choice_trials(quad, sf, n, RngSpec(spec.seed, index * 8 + 3),
                                     station_weights=weights, pbs=(False, True))
        return (
            estimate_s_prime(main, alice_only, bob_only, quad),
            estimate_s_chsh(main, quad),
        )
    alice_cfg = replace(spec.alice, switch_frequency=nu_a)
    bob_cfg = replace(spec.bob, switch_frequency=nu_b)
    if (
        alice_cfg.switch_frequency == bob_cfg.switch_frequency
        and alice_cfg.switch_phase == bob_cfg.switch_phase
    ):
        # phase-locked identical waves never populate the mixed setting
        # pairs; a quarter-period offset realizes all four channels without
        # changing either station's sync fraction
        bob_cfg = replace(bob_cfg, switch_phase=bob_cfg.switch_phase + math.pi / 2)
    main = run_timeline(
        alice_cfg, bob_cfg, n, spec.mc_duration,
        RngSpec(spec.seed, index * 8 + 1), station_weights=weights,
    )
    alice_only = run_timeline(
        alice_cfg, bob_cfg, n, spec.mc_duration,
        RngSpec(spec.seed, index * 8 + 2), station_weights=weights, pbs=(True, False),
    )
    bob_only = run_timeline(
        alice_cfg, bob_cfg, n, spec.mc_duration,
        RngSpec(spec.seed, index * 8 + 3), station_weights=weights, pbs=(False, True),
    )
    return (
        estimate_s_prime(main, alice_only, bob_only, quad),
        estimate_s_chsh(main, quad),
    )


def run_sweep(spec: SweepSpec) -> SweepSeries:
    """Evaluate the sweep; Monte Carlo failures abort with the offending x."""
    weights = spec.resolved_weights()
    points = []
    for i, x in enumerate(spec.grid()):
        sf = _fractions_at(spec, x)
        s_p, s_c = _closed_form_values(spec, sf, weights)
        mc_p = mc_c = None
        if MONTE_CARLO in spec.engines:
            try:
                mc_p, mc_c = _mc_values(spec, sf, weights, x, i)
            except Exception as exc:
                raise SweepError(
                    f"monte carlo failed at {spec.variable.value} = {x!r}: {exc}"
                ) from exc
        points.append(
            SweepPoint(x, sf.f_alice, sf.f_bob, s_p, s_c, mc_p, mc_c)
        )
    return SweepSeries(spec, tuple(points), ReferenceLines.for_quad(spec.quad))


@dataclass(frozen=True)
class Extremum:
    x: float
    value: float
    kind: str  # "max" | "min"


def find_extrema(xs: list[float], ys: list[float], atol: float = 1e-9) -> list[Extremum]:
    """Interior local extrema by discrete comparison, plateau-aware.

    Values within ``atol`` count as equal, so float-level wiggle in an
    analytically constant series is a single plateau.  A run of equal values
    counts once, located at its middle sample; runs touching either boundary
    are not classified, and a constant series has no extrema.
    """
    if len(xs) != len(ys):
        raise ValidationError("x and y lengths differ")
    if len(xs) < 3:
        raise ValidationError("need at least three points")
    runs: list[tuple[int, int, float]] = []
    start = 0
    for i in range(1, len(ys) + 1):
        if i == len(ys) or abs(ys[i] - ys[start]) > atol:
            runs.append((start, i - 1, ys[start]))
            start = i
    out = []
    for k in range(1, len(runs) - 1):
        lo, hi, y = runs[k]
        prev_y = runs[k - 1][2]
        next_y = runs[k + 1][2]
        mid = (lo + hi) // 2
        if y > prev_y + atol and y > next_y + atol:
            out.append(Extremum(xs[mid], y, "max"))
        elif y < prev_y - atol and y < next_y - atol:
            out.append(Extremum(xs[mid], y, "min"))
    return out


def series_extrema(series: SweepSeries, which: str = "s_prime") -> list[Extremum]:
    """Extrema of one field of a sweep series."""
    xs = [p.x for p in series.points]
    ys = [getattr(p, which) for p in series.points]
    return find_extrema(xs, ys)


@dataclass(frozen=True)
class AspectChain:
    """One reconstruction of the 1982 figures from a pair of sync fractions."""

    fractions: SyncFractions
    s_prime: float
    s_chsh: float


def _chain(sf: SyncFractions) -> AspectChain:
    return AspectChain(sf, s_prime_fc(STANDARD_QUAD, sf), s_chsh_fc(STANDARD_QUAD, sf))


@dataclass(frozen=True)
class AspectReport:
    """Predicted Bell values for the 1982 parameters vs the recorded result.

    ``exact`` evaluates the square-wave sync fractions at full precision;
    ``reported`` chains the two-digit fractions as they were reported for
    the experiment (0.97 and 0.83), which is where the familiar headline
    S' = 0.136 comes from.
    """

    exact: AspectChain
    reported: AspectChain
    measured_s_prime: float = ASPECT_1982_S_PRIME_MEASURED
    measured_s_prime_error: float = ASPECT_1982_S_PRIME_ERROR

    def as_dict(self) -> dict:
        return {
            "f_alice": self.exact.fractions.f_alice,
            "f_bob": self.exact.fractions.f_bob,
            "f": self.exact.fractions.f,
            "f_prime": self.exact.fractions.f_prime,
            "s_prime": self.exact.s_prime,
            "s_chsh": self.exact.s_chsh,
            "reported_f_alice": self.reported.fractions.f_alice,
            "reported_f_bob": self.reported.fractions.f_bob,
            "reported_f": self.reported.fractions.f,
            "reported_f_prime": self.reported.fractions.f_prime,
            "reported_s_prime": self.reported.s_prime,
            "reported_s_chsh": self.reported.s_chsh,
            "measured_s_prime": self.measured_s_prime,
            "measured_s_prime_error": self.measured_s_prime_error,
            "reported_minus_measured": self.reported.s_prime - self.measured_s_prime,
        }


def aspect_point() -> AspectReport:
    """Reconstruct the 1982 configuration: 46.2 / 48.4 MHz over a 43 ns round trip."""
    exact = _chain(
        mix_fractions(
            sync_fraction(ASPECT_FREQUENCY_ALICE, ASPECT_ROUND_TRIP),
            sync_fraction(ASPECT_FREQUENCY_BOB, ASPECT_ROUND_TRIP),
        )
    )
    reported = _chain(
        mix_fractions(ASPECT_1982_REPORTED_F_ALICE, ASPECT_1982_REPORTED_F_BOB)
    )
    return AspectReport(exact=exact, reported=reported)


def aspect_stations(quad: ChoiceQuad = STANDARD_QUAD) -> tuple[StationConfig, StationConfig]:
    """Station configurations matching the 1982 parameters."""
    alice = StationConfig(quad.a, quad.a_alt, ASPECT_FREQUENCY_ALICE)
    bob = StationConfig(quad.b, quad.b_alt, ASPECT_FREQUENCY_BOB)
    return alice, bob
