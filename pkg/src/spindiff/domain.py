"""Shared value types: material parameters, dot geometry, pulse sequences
and measured/simulated time series.

All types are plain immutable values; validation is explicit
(``validate_material``) or happens where a value is consumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvariantViolation


class Helicity(Enum):
    """Polarization state of an optical pulse."""

    SIGMA_PLUS = "sigma+"
    SIGMA_MINUS = "sigma-"
    LINEAR = "linear"
    NONE = "none"

    @property
    def is_circular(self) -> bool:
        return self in (Helicity.SIGMA_PLUS, Helicity.SIGMA_MINUS)

    @property
    def sign(self) -> int:
        """+1 for sigma+, -1 for sigma-; anything else has no sign."""
        if self is Helicity.SIGMA_PLUS:
            return 1
        if self is Helicity.SIGMA_MINUS:
            return -1
        raise ValueError(f"{self} carries no polarization sign")


@dataclass(frozen=True)
class MaterialParams:
    """Hyperfine constants (ueV), nuclear spins, g-factor magnitudes and
    external field (T) of the host material.

    Defaults are the GaAs values; the g-factor magnitudes have no defaults
    and stay ``None`` unless supplied, because Zeeman-splitting output is
    impossible without them.
    """

    a_ga: float = 42.0
    a_as: float = 46.0
    i_ga: float = 1.5
    i_as: float = 1.5
    g_e_abs: float | None = None
    g_h_abs: float | None = None
    b_ext: float = 2.0


def validate_material(m: MaterialParams) -> MaterialParams:
    """Check all MaterialParams invariants; return ``m`` unchanged if valid.

    Raises InvariantViolation naming the first violated invariant.
    """
    if not (m.a_ga > 0):
        raise InvariantViolation("NonPositiveHyperfineConstant", f"a_ga = {m.a_ga}")
    if not (m.a_as > 0):
        raise InvariantViolation("NonPositiveHyperfineConstant", f"a_as = {m.a_as}")
    if not (m.i_ga > 0):
        raise InvariantViolation("NonPositiveNuclearSpin", f"i_ga = {m.i_ga}")
    if not (m.i_as > 0):
        raise InvariantViolation("NonPositiveNuclearSpin", f"i_as = {m.i_as}")
    if m.b_ext < 0:
        raise InvariantViolation("NegativeField", f"b_ext = {m.b_ext}")
    if m.g_e_abs is not None and m.g_e_abs < 0:
        raise InvariantViolation("NegativeGFactor", f"g_e_abs = {m.g_e_abs}")
    if m.g_h_abs is not None and m.g_h_abs < 0:
        raise InvariantViolation("NegativeGFactor", f"g_h_abs = {m.g_h_abs}")
    return m


@dataclass(frozen=True)
class DotGeometry:
    """Disk-shaped dot: radius and height in nm, mid-plane at ``z_center``."""

    radius: float = 10.0
    height: float = 5.0
    z_center: float = 0.0

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvariantViolation("NonPositiveRadius", f"radius = {self.radius}")
        if not (self.height > 0):
            raise InvariantViolation("NonPositiveHeight", f"height = {self.height}")


class SegmentKind(Enum):
    ERASE = "erase"
    PUMP = "pump"
    DARK = "dark"
    PROBE = "probe"


@dataclass(frozen=True)
class PulseSegment:
    """One segment of an optical pulse sequence.

    Erase and probe pulses are linearly polarized, dark periods carry no
    light; only the pump helicity is free.
    """

    kind: SegmentKind
    duration: float
    helicity: Helicity = Helicity.NONE

    def __post_init__(self):
        if self.duration < 0:
            raise InvariantViolation("NegativeDuration",
                                     f"{self.kind.value} duration = {self.duration}")
        if self.kind in (SegmentKind.ERASE, SegmentKind.PROBE):
            if self.helicity is not Helicity.LINEAR:
                raise InvariantViolation(
                    "WrongSegmentHelicity",
                    f"{self.kind.value} segments must be linearly polarized")
        if self.kind is SegmentKind.DARK and self.helicity is not Helicity.NONE:
            raise InvariantViolation("WrongSegmentHelicity",
                                     "dark segments carry no light")


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple[PulseSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise InvariantViolation("EmptySequence", "a pulse sequence needs >= 1 segment")

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)


def paper_decay_sequence(t_dark: float, t_pump: float = 10.0,
                         t_erase: float = 10.0, t_probe: float = 0.1,
                         pump_helicity: Helicity = Helicity.SIGMA_PLUS) -> PulseSequence:
    """The standard pump-probe decay protocol: linear erase, circular pump,
    dark delay, short linear probe readout."""
    return PulseSequence(segments=(
        PulseSegment(SegmentKind.ERASE, t_erase, Helicity.LINEAR),
        PulseSegment(SegmentKind.PUMP, t_pump, pump_helicity),
        PulseSegment(SegmentKind.DARK, t_dark, Helicity.NONE),
        PulseSegment(SegmentKind.PROBE, t_probe, Helicity.LINEAR),
    ))


class YKind(Enum):
    """What the y column of a series means."""

    DOT_AVERAGE = "dot_average"
    ZEEMAN_SPLITTING_UEV = "zeeman_splitting_uev"


@dataclass(frozen=True)
class DecaySeries:
    """Time-stamped observable samples, measured or simulated.

    ``t`` is strictly increasing; ``metadata`` holds free-form labels
    (helicity, pump power, field, ...).
    """

    t: np.ndarray
    y: np.ndarray
    y_kind: YKind = YKind.DOT_AVERAGE
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)
        if t.ndim != 1 or t.size == 0 or y.shape != t.shape:
            raise InvariantViolation("BadSeriesShape",
                                     f"t shape {t.shape}, y shape {y.shape}")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise InvariantViolation("NonMonotonicTime",
                                     "sample times must be strictly increasing")

    def __len__(self) -> int:
        return int(self.t.size)
