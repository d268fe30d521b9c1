"""Switching-synchronization algebra for Bell tests with setting choice.

When a station switches its polarizer between two settings during photon
flight, the texture imprinted on the source can lag the setting actually used
for the measurement.  Writing f_A for the fraction of time Alice's
texture-epoch setting equals her measurement setting (f_B for Bob), the
effective hidden-angle distribution for a measured pair is a four-way convex
combination of two-station texture mixtures.  With

    f  = (f_A + f_B) / 2        f' = (f_A - f_B) / 2

the measured correlation splits into in-sync, out-of-sync and unbalanced
parts,

    E = f * cos(2(a-b)) + (1-f) * E_os(a,b; a',b') + f' * E_ub(a,b; a',b'),

and the same decomposition holds for the both-click probability n(a, b) used
by the single-channel Bell quantity S'.  All closed forms here are exact
finite trigonometric expressions; each one is cross-checked against the atom
expansion of its mixture in the test suite.

Sign conventions for the two Bell quantities, at measured settings drawn from
the quad (a, b, a', b'):

    S  = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|        LHV bound |S| <= 2
    S' = n(a,b) - n(a,b') + n(a',b) + n(a',b') - 1      LHV bound -1 <= S' <= 0

The two subtracted singles terms of S' are 1/2 each for every mixture built
here (the atom pairs at s and s - pi/2 average Malus's law to 1/2); the Monte
Carlo engine estimates them instead of assuming them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .models import (
    HvMixture,
    Model,
    ValidationError,
    coincidence_mixture,
    corr,
    corr_mixture,
    corr_qm,
    normalize_angle,
    texture_mixture,
)

SQRT2 = math.sqrt(2.0)

#: Round trip time (texture out, photon back) in the 1982 reference setup.
ASPECT_ROUND_TRIP = 43e-9
ASPECT_FREQUENCY_ALICE = 46.2e6
ASPECT_FREQUENCY_BOB = 48.4e6


@dataclass(frozen=True)
class ChoiceQuad:
    """The four candidate settings: Alice picks a or a_alt, Bob b or b_alt."""

    a: float
    b: float
    a_alt: float
    b_alt: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "a_alt", "b_alt"):
            object.__setattr__(self, name, normalize_angle(getattr(self, name)))

    def bell_terms(self) -> tuple[tuple["ChoiceQuad", float], ...]:
        """The four measured-pair arrangements entering S and S', with signs.

        Each term treats its own (a, b) as the measured pair and carries the
        other two settings as the alternates a station may have shown to the
        texture.
        """
        a, b, aa, bb = self.a, self.b, self.a_alt, self.b_alt
        return (
            (ChoiceQuad(a, b, aa, bb), 1.0),
            (ChoiceQuad(a, bb, aa, b), -1.0),
            (ChoiceQuad(aa, b, a, bb), 1.0),
            (ChoiceQuad(aa, bb, a, b), 1.0),
        )


#: The S-optimal configuration used throughout: (0, pi/8, pi/4, 3pi/8).
STANDARD_QUAD = ChoiceQuad(0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8)


@dataclass(frozen=True)
class StationConfig:
    """One observer's settings, switching behavior and source distance.

    ``switch_frequency`` is the square-wave frequency in Hz; 0 means the
    setting is fixed at ``setting_1``.  ``switch_phase`` is in radians within
    one switching period.  ``round_trip_time`` is 2d/v for source-detector
    distance d (texture travels out, the photon travels back).  ``switching``
    selects the periodic square wave or fully random choice per epoch.
    """

    setting_1: float
    setting_2: float
    switch_frequency: float = 0.0
    switch_phase: float = 0.0
    round_trip_time: float = ASPECT_ROUND_TRIP
    switching: str = "periodic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "setting_1", normalize_angle(self.setting_1))
        object.__setattr__(self, "setting_2", normalize_angle(self.setting_2))
        if self.switch_frequency < 0.0:
            raise ValidationError("switch_frequency must be >= 0")
        if self.round_trip_time <= 0.0:
            raise ValidationError("round_trip_time must be > 0")
        if self.switching not in ("periodic", "random"):
            raise ValidationError(f"unknown switching mode {self.switching!r}")

    @classmethod
    def fixed(cls, setting: float, round_trip_time: float = ASPECT_ROUND_TRIP) -> "StationConfig":
        return cls(setting, setting, 0.0, 0.0, round_trip_time)

    @classmethod
    def random_choice(
        cls, setting_1: float, setting_2: float, round_trip_time: float = ASPECT_ROUND_TRIP
    ) -> "StationConfig":
        return cls(setting_1, setting_2, 0.0, 0.0, round_trip_time, switching="random")

    @property
    def settings(self) -> tuple[float, float]:
        return (self.setting_1, self.setting_2)

    def sync_fraction(self) -> float:
        """Fraction of time the texture-epoch setting matches the measured one."""
        if self.switching == "random":
            return 0.5
        return sync_fraction(self.switch_frequency, self.round_trip_time)


def sync_fraction(frequency: float, round_trip_time: float) -> float:
    """In-sync fraction for 50%-duty square-wave switching.

    (1/pi) * arccos(cos(2*pi*(T*nu - 1/2))) for round trip T and frequency
    nu: a triangle wave in T*nu that is 1 whenever the round trip holds an
    integer number of switching periods and 0 at half-integers.  A station
    that never switches (nu = 0) is always in sync.
    """
    if round_trip_time <= 0.0:
        raise ValidationError("round_trip_time must be > 0")
    if frequency < 0.0:
        raise ValidationError("frequency must be >= 0")
    if frequency == 0.0:
        return 1.0
    x = round_trip_time * frequency
    return math.acos(math.cos(2.0 * math.pi * (x - 0.5))) / math.pi


@dataclass(frozen=True)
class SyncFractions:
    """Per-station in-sync fractions and their mixed forms f, f'."""

    f_alice: float
    f_bob: float

    def __post_init__(self) -> None:
        for v in (self.f_alice, self.f_bob):
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"sync fraction {v!r} outside [0, 1]")

    @property
    def f(self) -> float:
        return (self.f_alice + self.f_bob) / 2.0

    @property
    def f_prime(self) -> float:
        return (self.f_alice - self.f_bob) / 2.0


def mix_fractions(f_alice: float, f_bob: float) -> SyncFractions:
    """Combine per-station sync fractions into f = mean, f' = half-difference."""
    return SyncFractions(float(f_alice), float(f_bob))


def fractions_for(alice: StationConfig, bob: StationConfig) -> SyncFractions:
    """Sync fractions implied by two station configurations."""
    return SyncFractions(alice.sync_fraction(), bob.sync_fraction())


EQUAL_WEIGHTS = (0.5, 0.5)


def q_fc(
    quad: ChoiceQuad,
    sf: SyncFractions,
    station_weights: tuple[float, float] = EQUAL_WEIGHTS,
) -> HvMixture:
    """Hidden-angle mixture for measured pair (quad.a, quad.b) under choice.

    Convex combination of the four two-station texture mixtures, weighted by
    the probabilities that each station's texture-epoch setting was the
    measured one (f) or its alternate (1 - f).  Atoms are kept per term
    (16 for distinct settings); use ``.merged()`` for the collapsed form.
    """
    fa, fb = sf.f_alice, sf.f_bob
    parts = (
        (fa * fb, (quad.a, quad.b)),
        (fa * (1.0 - fb), (quad.a, quad.b_alt)),
        ((1.0 - fa) * fb, (quad.a_alt, quad.b)),
        ((1.0 - fa) * (1.0 - fb), (quad.a_alt, quad.b_alt)),
    )
    atoms: list[tuple[float, float]] = []
    for p, settings in parts:
        sub = texture_mixture(settings, station_weights)
        atoms.extend((angle, p * w) for angle, w in sub.atoms)
    return HvMixture(tuple(atoms))


def corr_os(a: float, b: float, a_alt: float, b_alt: float) -> float:
    """Out-of-sync correlation: measured (a, b), texture from (a_alt, b_alt).

    (1/2) * {cos(2(a-b)) + cos(2(a+b-a'-b')) * cos(2(a'-b'))}; equals the
    atom sum of the (a_alt, b_alt) texture mixture.
    """
    return 0.5 * (
        math.cos(2.0 * (a - b))
        + math.cos(2.0 * (a + b - a_alt - b_alt)) * math.cos(2.0 * (a_alt - b_alt))
    )


def corr_ub(a: float, b: float, a_alt: float, b_alt: float) -> float:
    """Unbalanced correlation term, active only when f_A != f_B.

    (1/2) * sin(2(a'+b'-a-b)) * sin(2(a'-b')); equals the difference of the
    mixed-epoch atom sums (a, b_alt) minus (a_alt, b).
    """
    return 0.5 * math.sin(2.0 * (a_alt + b_alt - a - b)) * math.sin(2.0 * (a_alt - b_alt))


def corr_fc(quad: ChoiceQuad, sf: SyncFractions) -> float:
    """Measured correlation under setting choice (equal station weights).

    f * E_is + (1-f) * E_os + f' * E_ub; identical to the atom expansion
    corr_mixture(a, b, q_fc(quad, sf)).
    """
    return (
        sf.f * corr_qm(quad.a, quad.b)
        + (1.0 - sf.f) * corr_os(quad.a, quad.b, quad.a_alt, quad.b_alt)
        + sf.f_prime * corr_ub(quad.a, quad.b, quad.a_alt, quad.b_alt)
    )


def s_chsh_fc(quad: ChoiceQuad, sf: SyncFractions) -> float:
    """Bell S under setting choice; equals 2*sqrt(2)*f at the standard quad."""
    total = 0.0
    for term, sign in quad.bell_terms():
        total += sign * corr_fc(term, sf)
    return abs(total)


def s_chsh_fixed(model: Model, quad: ChoiceQuad) -> float:
    """Bell S for a fixed-settings model (no switching)."""
    total = 0.0
    for term, sign in quad.bell_terms():
        total += sign * corr(model, term.a, term.b)
    return abs(total)


def s_chsh_mixture(
    quad: ChoiceQuad,
    sf: SyncFractions,
    station_weights: tuple[float, float] = EQUAL_WEIGHTS,
) -> float:
    """Bell S from the mixture expansion; supports unequal station weights."""
    total = 0.0
    for term, sign in quad.bell_terms():
        total += sign * corr_mixture(term.a, term.b, q_fc(term, sf, station_weights))
    return abs(total)


# --- single-channel (both-click) probabilities n(a, b) ---------------------


def _other_setting(measured: float, first: float, second: float) -> float:
    """The station's alternate setting given the measured one."""
    measured = normalize_angle(measured)
    if math.isclose(measured, first, rel_tol=0.0, abs_tol=1e-12):
        return second
    if math.isclose(measured, second, rel_tol=0.0, abs_tol=1e-12):
        return first
    raise ValidationError(f"measured setting {measured!r} is not in the quad")


def n_qm(a: float, b: float) -> float:
    """Quantum both-click probability cos^2(a - b)/2 (also texture, in sync)."""
    c = math.cos(a - b)
    return c * c / 2.0


def n_sc(a: float, b: float) -> float:
    """Semiclassical both-click probability (2 + cos(2(a - b)))/8."""
    return (2.0 + math.cos(2.0 * (a - b))) / 8.0


def n_os(a: float, b: float, a_alt: float, b_alt: float) -> float:
    """Out-of-sync both-click probability (texture from the alternates)."""
    return (
        2.0
        + math.cos(2.0 * (a - b))
        + math.cos(2.0 * (a + b - a_alt - b_alt)) * math.cos(2.0 * (a_alt - b_alt))
    ) / 8.0


def n_ub(a: float, b: float, a_alt: float, b_alt: float) -> float:
    """Unbalanced both-click term."""
    return math.sin(2.0 * (a_alt + b_alt - a - b)) * math.sin(2.0 * (a_alt - b_alt)) / 8.0


def n_fc(quad: ChoiceQuad, sf: SyncFractions) -> float:
    """Both-click probability under setting choice (equal station weights)."""
    return (
        sf.f * n_qm(quad.a, quad.b)
        + (1.0 - sf.f) * n_os(quad.a, quad.b, quad.a_alt, quad.b_alt)
        + sf.f_prime * n_ub(quad.a, quad.b, quad.a_alt, quad.b_alt)
    )


def coincidence_prob(
    model_or_sf: Model | SyncFractions,
    a: float,
    b: float,
    quad: ChoiceQuad | None = None,
) -> float:
    """Both-click probability n(a, b) for a model or for choice fractions.

    Pass a ``Model`` for the fixed-settings closed forms (quantum and
    texture-in-sync share cos^2(a-b)/2), or ``SyncFractions`` plus the full
    quad for the choice decomposition.
    """
    if isinstance(model_or_sf, SyncFractions):
        if quad is None:
            raise ValidationError("choice fractions require the full quad")
        a_alt = _other_setting(a, quad.a, quad.a_alt)
        b_alt = _other_setting(b, quad.b, quad.b_alt)
        return n_fc(ChoiceQuad(a, b, a_alt, b_alt), model_or_sf)
    if model_or_sf in (Model.QUANTUM, Model.TEXTURE):
        return n_qm(a, b)
    if model_or_sf is Model.SEMI_CLASSICAL:
        return n_sc(a, b)
    raise ValidationError(f"no both-click closed form for {model_or_sf!r}")


def s_prime(
    n_values: tuple[float, float, float, float],
    singles: tuple[float, float] = (0.5, 0.5),
) -> float:
    """Assemble S' from the four both-click probabilities and the singles terms.

    n_values are n(a,b), n(a,b'), n(a',b), n(a',b') in that order; the
    combination is n1 - n2 + n3 + n4 - singles_A - singles_B.
    """
    for v in (*n_values, *singles):
        if not -1e-12 <= v <= 1.0 + 1e-12:
            raise ValidationError(f"probability {v!r} outside [0, 1]")
    n1, n2, n3, n4 = n_values
    return n1 - n2 + n3 + n4 - singles[0] - singles[1]


def s_prime_fixed(model: Model, quad: ChoiceQuad) -> float:
    """S' for a fixed-settings model."""
    return s_prime(
        (
            coincidence_prob(model, quad.a, quad.b),
            coincidence_prob(model, quad.a, quad.b_alt),
            coincidence_prob(model, quad.a_alt, quad.b),
            coincidence_prob(model, quad.a_alt, quad.b_alt),
        )
    )


def s_prime_fc(quad: ChoiceQuad, sf: SyncFractions) -> float:
    """S' under setting choice, assembled from the four rotated n terms."""
    values = []
    for term, _ in quad.bell_terms():
        values.append(n_fc(term, sf))
    return s_prime(tuple(values))


def s_prime_fc_closed(f: float) -> float:
    """S' at the standard quad as a function of f alone: -1/2 + f/sqrt(2)."""
    if not 0.0 <= f <= 1.0:
        raise ValidationError(f"f {f!r} outside [0, 1]")
    return -0.5 + f / SQRT2


def s_prime_mixture(
    quad: ChoiceQuad,
    sf: SyncFractions,
    station_weights: tuple[float, float] = EQUAL_WEIGHTS,
) -> float:
    """S' from the mixture expansion; supports unequal station weights."""
    values = []
    for term, _ in quad.bell_terms():
        values.append(coincidence_mixture(term.a, term.b, q_fc(term, sf, station_weights)))
    return s_prime(tuple(values))
