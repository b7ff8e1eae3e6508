"""Projectile source waves, the outgoing Green function, and channel kinematics.

Atomic units throughout: the projectile of mass M (electron masses) carries
wavenumber k (bohr^-1); after depositing excitation energy dE into the atoms
the open-channel wavenumber is

    k' = sqrt(k^2 - 2 M dE),

and channels with negative radicand are closed and flagged, never silently
evaluated. The spherical source e^{ikR}/R is kept at unit numerator: it is
not square-integrable, so only amplitude ratios are ever reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .atomic import s_state_energy

__all__ = [
    "ALPHA_PARTICLE_MASS",
    "Channel",
    "ClosedChannelError",
    "Geometry",
    "Kinematics",
    "Source",
    "source_value",
    "outgoing_green",
    "channel_wavenumber",
]

ALPHA_PARTICLE_MASS = 7294.3  # electron masses
_SUPPORTED_LABELS = (0, 1, 2)  # label j <-> (j+1)s state


class ClosedChannelError(ValueError):
    """An excitation channel is energetically forbidden at the given k."""

    def __init__(self, channel: "Channel"):
        super().__init__(
            f"channel (j1={channel.j1}, j2={channel.j2}) is closed at "
            f"k={channel.source_wavenumber:g}; threshold k_min="
            f"{channel.threshold:.6g} bohr^-1"
        )
        self.channel = channel


def label_energy(j: int) -> float:
    """Eigenvalue of the state labeled j (j = 0 is the ground state)."""
    if j not in _SUPPORTED_LABELS:
        raise ValueError(f"unsupported state label {j}; supported: {_SUPPORTED_LABELS}")
    return s_state_energy(j + 1)


@dataclass(frozen=True)
class Channel:
    """One excitation pair (j1, j2) with its outgoing wavenumber.

    ``wavenumber`` is None when the channel is closed; ``threshold`` is the
    smallest source wavenumber that opens it.
    """

    j1: int
    j2: int
    source_wavenumber: float
    wavenumber: float | None
    threshold: float

    @property
    def is_open(self) -> bool:
        return self.wavenumber is not None

    @property
    def elasticity(self) -> float:
        """(k - k') / k, small when the collision is almost elastic."""
        if not self.is_open:
            raise ClosedChannelError(self)
        return (self.source_wavenumber - self.wavenumber) / self.source_wavenumber

    def require_open(self) -> float:
        if not self.is_open:
            raise ClosedChannelError(self)
        return self.wavenumber


@dataclass(frozen=True)
class Kinematics:
    """Projectile mass, source wavenumber, and the channel table.

    The default mass is the physical projectile mass; scaled-mass runs
    (M ~ 10-50) open excitation thresholds at desk-scale wavenumbers where
    direct quadrature is affordable.
    """

    wavenumber: float
    alpha_mass: float = ALPHA_PARTICLE_MASS

    def __post_init__(self):
        if self.wavenumber <= 0:
            raise ValueError("source wavenumber must be positive")
        if self.alpha_mass <= 0:
            raise ValueError("projectile mass must be positive")

    def excitation_energy(self, j1: int, j2: int) -> float:
        """Energy taken from the projectile by exciting to (j1, j2)."""
        e0 = label_energy(0)
        return (label_energy(j1) - e0) + (label_energy(j2) - e0)

    def channel(self, j1: int, j2: int) -> Channel:
        de = self.excitation_energy(j1, j2)
        k2 = self.wavenumber**2 - 2.0 * self.alpha_mass * de
        threshold = math.sqrt(max(2.0 * self.alpha_mass * de, 0.0))
        kprime = math.sqrt(k2) if k2 > 0.0 else None
        return Channel(
            j1=j1,
            j2=j2,
            source_wavenumber=self.wavenumber,
            wavenumber=kprime,
            threshold=threshold,
        )

    @cached_property
    def channel_table(self) -> dict[tuple[int, int], Channel]:
        """All supported excitation pairs and their wavenumbers."""
        return {
            (j1, j2): self.channel(j1, j2)
            for j1 in _SUPPORTED_LABELS
            for j2 in _SUPPORTED_LABELS
        }


def channel_wavenumber(kin: Kinematics, j1: int, j2: int) -> Channel:
    """Channel wavenumber for the excitation pair, as an explicit flag object."""
    return kin.channel(j1, j2)


@dataclass(frozen=True)
class Geometry:
    """Source at the origin and two atoms at a1, a2 with |a1| < |a2|."""

    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self):
        a1 = np.asarray(self.a1, dtype=float).reshape(3)
        a2 = np.asarray(self.a2, dtype=float).reshape(3)
        n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
        if n1 == 0.0 or n2 == 0.0:
            raise ValueError("atom positions must be nonzero")
        if not n1 < n2:
            raise ValueError("geometry requires |a1| < |a2|")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def a1_norm(self) -> float:
        return float(np.linalg.norm(self.a1))

    @property
    def a2_norm(self) -> float:
        return float(np.linalg.norm(self.a2))

    @property
    def separation(self) -> float:
        return float(np.linalg.norm(self.a2 - self.a1))

    @property
    def axis_12(self) -> np.ndarray:
        """Unit vector from atom 1 to atom 2."""
        return (self.a2 - self.a1) / self.separation

    def rotated(self, rot: np.ndarray) -> "Geometry":
        return Geometry(a1=rot @ self.a1, a2=rot @ self.a2)


@dataclass(frozen=True)
class Source:
    """Projectile source wave: spherical from the origin, or a plane wave."""

    kind: str  # "spherical" | "plane"
    wavenumber: float
    direction: np.ndarray | None = None
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.kind not in ("spherical", "plane"):
            raise ValueError("source kind must be 'spherical' or 'plane'")
        if self.wavenumber <= 0:
            raise ValueError("source wavenumber must be positive")
        if self.kind == "plane":
            if self.direction is None:
                raise ValueError("plane-wave source needs a direction")
            d = np.asarray(self.direction, dtype=float).reshape(3)
            n = np.linalg.norm(d)
            if n == 0.0:
                raise ValueError("plane-wave direction must be nonzero")
            object.__setattr__(self, "direction", d / n)
        if self.amplitude == 0:
            raise ValueError("source amplitude must be nonzero")

    @classmethod
    def spherical(cls, k: float, amplitude: complex = 1.0) -> "Source":
        return cls(kind="spherical", wavenumber=k, amplitude=amplitude)

    @classmethod
    def plane(cls, k: float, direction, amplitude: complex = 1.0) -> "Source":
        return cls(kind="plane", wavenumber=k, direction=direction, amplitude=amplitude)

    def value(self, points: np.ndarray) -> np.ndarray:
        return source_value(self, points)


def source_value(s: Source, points: np.ndarray) -> np.ndarray:
    """Complex source amplitude at one point (3,) or many (N, 3)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if s.kind == "spherical":
        r = np.linalg.norm(pts, axis=1)
        if np.any(r == 0.0):
            raise ValueError("spherical source is singular at the origin")
        out = s.amplitude * np.exp(1j * s.wavenumber * r) / r
    else:
        phase = s.wavenumber * (pts @ s.direction)
        out = s.amplitude * np.exp(1j * phase)
    return out[0] if single else out


def outgoing_green(R, Rp, kc: float) -> np.ndarray:
    """Outgoing free propagator e^{+i kc |R - R'|} / |R - R'|.

    The + sign is the physical choice for waves diverging from the source
    region; coincident points are rejected.
    """
    R = np.asarray(R, dtype=float)
    Rp = np.asarray(Rp, dtype=float)
    diff = np.atleast_2d(R) - np.atleast_2d(Rp)
    dist = np.linalg.norm(diff, axis=1)
    if np.any(dist == 0.0):
        raise ValueError("Green function evaluated at coincident points")
    out = np.exp(1j * kc * dist) / dist
    single = R.ndim == 1 and Rp.ndim == 1
    return complex(out[0]) if single else out
