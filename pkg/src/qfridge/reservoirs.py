"""Reservoir specifications, filter masks, thermal rates, and unit entry.

The engine runs in natural units hbar = k_B = 1 with the cold transition
frequency as the default scale.  Physical inputs convert at the boundary:

    omega[natural] = 2*pi * f[GHz] * 1e9 / unit_scale
    T[natural]     = (k_B / hbar) * T[K] / unit_scale

with ``unit_scale`` the angular frequency (rad/s) of one natural unit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import expm1
from typing import Mapping

from .spectrum import (
    QUBITS,
    SystemParams,
    TransitionChannel,
    _FREQ_OFFSET,
    channel_frequency,
)

__all__ = [
    "HBAR",
    "KB",
    "ReservoirSpec",
    "ReservoirSet",
    "FilterConfig",
    "BackgroundSpec",
    "ChannelRates",
    "CycleMatch",
    "MarkovValidityWarning",
    "mean_photon_number",
    "channel_rates",
    "background_rates",
    "select_channels",
    "cycle_match_check",
    "markov_validity_report",
    "natural_from_ghz",
    "ghz_from_natural",
    "natural_from_kelvin",
    "kelvin_from_natural",
    "REVIVAL_FILTER",
    "HIGH_EFFICIENCY_FILTER",
    "COOLING_FILTERS",
]

_TWO_PI = 6.283185307179586476925287

# SI defining constants (CODATA, exact): h = 6.62607015e-34 J s,
# k_B = 1.380649e-23 J/K; hbar carries only the float error of the division.
HBAR = 6.626_070_15e-34 / _TWO_PI  # J s
KB = 1.380_649e-23                 # J / K


def natural_from_ghz(f_ghz: float, unit_scale: float) -> float:
    """Angular frequency in natural units from an ordinary frequency in GHz."""
    return _TWO_PI * f_ghz * 1e9 / unit_scale


def ghz_from_natural(omega: float, unit_scale: float) -> float:
    return omega * unit_scale / (_TWO_PI * 1e9)


def natural_from_kelvin(t_kelvin: float, unit_scale: float) -> float:
    """Temperature in natural frequency units from kelvin."""
    return (KB / HBAR) * t_kelvin / unit_scale


def kelvin_from_natural(temperature: float, unit_scale: float) -> float:
    return temperature * unit_scale * HBAR / KB


class MarkovValidityWarning(UserWarning):
    """Decay rates are not small against the channel frequency gaps, so the
    secular/Markov treatment is strained (the engine still runs)."""


def mean_photon_number(omega: float, temperature: float) -> float:
    """Bose occupation n = 1 / (exp(omega / T) - 1); zero in vacuum (T = 0).

    Only positive frequencies are meaningful here; the negative-frequency
    weights enter the dynamics through the operator structure instead.
    """
    if omega <= 0:
        raise ValueError(f"mean_photon_number needs omega > 0, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = omega / temperature
    if x > 700.0:  # exp would overflow; occupation is zero to double precision
        return 0.0
    return 1.0 / expm1(x)


@dataclass(frozen=True)
class ReservoirSpec:
    """One engineered reservoir: its qubit, temperature, and decay rate.

    ``gamma_overrides`` maps channel index -> rate for spectral densities
    that are not flat; by default every channel of the qubit uses ``gamma``.
    """

    qubit: str
    temperature: float
    gamma: float
    gamma_overrides: Mapping[int, float] | None = None

    def __post_init__(self):
        if self.qubit not in QUBITS:
            raise ValueError(f"unknown qubit {self.qubit!r}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    def gamma_for(self, index: int) -> float:
        if self.gamma_overrides and index in self.gamma_overrides:
            return self.gamma_overrides[index]
        return self.gamma


@dataclass(frozen=True)
class ReservoirSet:
    """The three engineered reservoirs keyed H, R, C."""

    hot: ReservoirSpec
    room: ReservoirSpec
    cold: ReservoirSpec

    def __post_init__(self):
        for spec, qubit in ((self.hot, "H"), (self.room, "R"), (self.cold, "C")):
            if spec.qubit != qubit:
                raise ValueError(f"{qubit} slot holds reservoir for {spec.qubit}")

    def __getitem__(self, qubit: str) -> ReservoirSpec:
        return {"H": self.hot, "R": self.room, "C": self.cold}[qubit]

    @property
    def temperatures(self) -> dict[str, float]:
        return {q: self[q].temperature for q in QUBITS}

    @classmethod
    def from_temperatures(
        cls,
        params: SystemParams,
        t_h: float,
        t_r: float,
        t_c: float,
        gamma: float | None = None,
    ) -> "ReservoirSet":
        """Uniform-rate reservoirs; the rate defaults to ``params.gamma``."""
        g = params.gamma if gamma is None else gamma
        return cls(
            hot=ReservoirSpec("H", t_h, g),
            room=ReservoirSpec("R", t_r, g),
            cold=ReservoirSpec("C", t_c, g),
        )


@dataclass(frozen=True)
class FilterConfig:
    """Which channel indices each engineered reservoir keeps.

    Filtering is a hard mask: a dropped channel contributes no dissipator at
    all.  An empty set disconnects that qubit from its engineered reservoir.
    """

    kept_h: frozenset[int] = frozenset((1, 2, 3))
    kept_r: frozenset[int] = frozenset((1, 2, 3))
    kept_c: frozenset[int] = frozenset((1, 2, 3))

    def __post_init__(self):
        for field in ("kept_h", "kept_r", "kept_c"):
            kept = frozenset(getattr(self, field))
            if not kept <= {1, 2, 3}:
                raise ValueError(f"{field} has unknown channel indices {set(kept)}")
            object.__setattr__(self, field, kept)

    def kept_for(self, qubit: str) -> frozenset[int]:
        return {"H": self.kept_h, "R": self.kept_r, "C": self.kept_c}[qubit]

    def keeps(self, qubit: str, index: int) -> bool:
        return index in self.kept_for(qubit)

    @property
    def kept_keys(self) -> list[tuple[str, int]]:
        return [(q, j) for q in QUBITS for j in sorted(self.kept_for(q))]

    @classmethod
    def single(cls, h: int, r: int, c: int) -> "FilterConfig":
        """Keep exactly one channel per qubit."""
        return cls(frozenset((h,)), frozenset((r,)), frozenset((c,)))

    @classmethod
    def all_channels(cls) -> "FilterConfig":
        return cls()

    @classmethod
    def nothing(cls) -> "FilterConfig":
        return cls(frozenset(), frozenset(), frozenset())

    def __str__(self) -> str:
        def part(q, kept):
            return q + ("".join(str(j) for j in sorted(kept)) or "-")
        return "+".join(part(q, self.kept_for(q)) for q in QUBITS)


#: Single-channel mask that revives cooling at reduced efficiency
#: (frequency ratio (w_C - g) / (w_H + g)).
REVIVAL_FILTER = FilterConfig.single(3, 2, 1)

#: Single-channel mask with efficiency above the unfiltered machine
#: (frequency ratio (w_C + g) / (w_H - g)).
HIGH_EFFICIENCY_FILTER = FilterConfig.single(2, 2, 2)

#: All six single-channel masks that can cool the cold reservoir: the first
#: three share the revival frequency ratio family, the last three the
#: high-efficiency family.  Every one is cycle-matched.
COOLING_FILTERS = (
    FilterConfig.single(3, 2, 1),
    FilterConfig.single(1, 1, 1),
    FilterConfig.single(3, 3, 3),
    FilterConfig.single(2, 2, 2),
    FilterConfig.single(1, 3, 2),
    FilterConfig.single(2, 1, 3),
)


@dataclass(frozen=True)
class BackgroundSpec:
    """Always-on background reservoir coupled through all nine channels."""

    mode: str = "none"  # none | vacuum | thermal
    temperature: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        if self.mode not in ("none", "vacuum", "thermal"):
            raise ValueError(f"unknown background mode {self.mode!r}")
        if self.mode == "thermal":
            if self.temperature is None or not self.temperature > 0:
                raise ValueError("thermal background requires temperature > 0")
        if self.mode != "none" and (self.gamma is None or self.gamma <= 0):
            raise ValueError(f"{self.mode} background requires gamma > 0")

    @property
    def active(self) -> bool:
        return self.mode != "none"

    @property
    def effective_temperature(self) -> float:
        return self.temperature if self.mode == "thermal" else 0.0

    @classmethod
    def none(cls) -> "BackgroundSpec":
        return cls()

    @classmethod
    def vacuum(cls, gamma: float) -> "BackgroundSpec":
        return cls(mode="vacuum", gamma=gamma)

    @classmethod
    def thermal(cls, temperature: float, gamma: float) -> "BackgroundSpec":
        return cls(mode="thermal", temperature=temperature, gamma=gamma)


@dataclass(frozen=True)
class ChannelRates:
    """Absorption/emission rates of one channel against one bath.

    ``j_minus`` is stored as the literal float sum ``j_plus + gamma``, so
    the decomposition into occupation and bare decay rate is exact; for
    T > 0 detailed balance ``j_minus / j_plus = exp(omega / T)`` holds to
    rounding.
    """

    qubit: str
    index: int
    j_plus: float
    j_minus: float
    gamma: float

    def __post_init__(self):
        if self.j_minus != self.j_plus + self.gamma:
            raise ValueError("j_minus must be the exact float sum j_plus + gamma")


def _make_rates(channel: TransitionChannel, gamma: float, temperature: float) -> ChannelRates:
    j_plus = gamma * mean_photon_number(channel.frequency, temperature)
    return ChannelRates(channel.qubit, channel.index, j_plus, j_plus + gamma, gamma)


def channel_rates(channel: TransitionChannel, reservoir: ReservoirSpec) -> ChannelRates:
    """Thermal rates j+ = gamma n(omega), j- = gamma (1 + n(omega))."""
    if channel.qubit != reservoir.qubit:
        raise ValueError(
            f"channel {channel} belongs to qubit {channel.qubit}, "
            f"reservoir couples to {reservoir.qubit}"
        )
    return _make_rates(channel, reservoir.gamma_for(channel.index),
                       reservoir.temperature)


def background_rates(channel: TransitionChannel, background: BackgroundSpec) -> ChannelRates:
    """Rates of one channel against the background bath (all channels couple)."""
    if not background.active:
        raise ValueError("background mode 'none' has no rates")
    return _make_rates(channel, background.gamma, background.effective_temperature)


def select_channels(
    channels: list[TransitionChannel], filt: FilterConfig
) -> list[TransitionChannel]:
    """The kept channels, in input order; dropped channels carry no dissipator."""
    if len(channels) != 9:
        raise ValueError(f"expected the complete 9-channel list, got {len(channels)}")
    return [ch for ch in channels if filt.keeps(ch.qubit, ch.index)]


@dataclass(frozen=True)
class CycleMatch:
    """Outcome of the kept-frequency closure diagnostic."""

    status: str  # matched | mismatched | not-applicable
    detail: str

    @property
    def matched(self) -> bool:
        return self.status == "matched"


def cycle_match_check(filt: FilterConfig) -> CycleMatch:
    """Check whether the three kept channels form a closed energy cycle.

    Applicable only to single-channel masks; matched means the kept R
    frequency equals the kept H frequency plus the kept C frequency exactly.
    Since every channel frequency is its qubit frequency plus a multiple of
    g, the check reduces to integer arithmetic on those multiples and is
    parameter-free.
    """
    kept = {q: filt.kept_for(q) for q in QUBITS}
    if any(len(k) != 1 for k in kept.values()):
        counts = ", ".join(f"{q}:{len(kept[q])}" for q in QUBITS)
        return CycleMatch("not-applicable", f"needs one kept channel per qubit ({counts})")
    jh, jr, jc = (next(iter(kept[q])) for q in QUBITS)
    dh = _FREQ_OFFSET[("H", jh)]
    dr = _FREQ_OFFSET[("R", jr)]
    dc = _FREQ_OFFSET[("C", jc)]
    # w_R + dr*g  vs  (w_H + dh*g) + (w_C + dc*g); w_R = w_H + w_C always.
    if dr == dh + dc:
        return CycleMatch("matched", f"H{jh} + C{jc} closes onto R{jr}")
    return CycleMatch(
        "mismatched",
        f"kept frequencies differ by {dr - dh - dc:+d} g from closure",
    )


def markov_validity_report(
    params: SystemParams,
    keys: list[tuple[str, int]],
    gamma_max: float,
) -> str | None:
    """Return a warning message when the largest decay rate is not small
    against the minimum pairwise gap of the participating channel
    frequencies, else None.  Callers decide whether to warn; nothing fails.
    """
    if len(keys) < 2:
        return None
    freqs = sorted(channel_frequency(params, q, j) for q, j in keys)
    min_gap = min(b - a for a, b in zip(freqs, freqs[1:]))
    if gamma_max >= 0.1 * min_gap:
        return (
            f"gamma = {gamma_max:.4g} is not small against the minimum "
            f"channel-frequency gap {min_gap:.4g}; the Markov/secular "
            f"treatment is strained"
        )
    return None


def warn_if_markov_strained(
    params: SystemParams,
    keys: list[tuple[str, int]],
    gamma_max: float,
) -> None:
    msg = markov_validity_report(params, keys, gamma_max)
    if msg is not None:
        warnings.warn(msg, MarkovValidityWarning, stacklevel=2)
