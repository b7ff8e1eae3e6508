"""Born-series excitation fields and far-field angular powers.

Channel fields f_{j1 j2}(R) are the projectile-coordinate coefficients of
the three-body wavefunction expanded over products of atomic eigenstates.
Order 0 is the bare source times both ground states. At order 1 exactly one
atom can be excited: the field for channel (j1 != 0, 0) solves

    (1/(2M) lap + E - E_j1 - E_0) f = src(R) V_{j1 0}(R - a1),

whose outgoing solution is the Green convolution

    f(R) = -(M / 2 pi) int dy src(y + a1) V_{j1 0}(y) G+(R - a1 - y; k'),

with G+(x; k) = e^{ik|x|}/|x| (the -M/2pi constant is fixed by
(lap + k^2) G+ = -4 pi delta; any homogeneous addition would describe
projectiles fired at already-excited atoms and is set to zero). Requesting
order 1 with both labels nonzero returns the canonical zero field: one
interaction cannot excite two atoms.

Far from the atom the field factorizes into an outgoing wave from a1 times a
direction-dependent amplitude I(u). Two evaluation paths are provided:
direct quadrature of the amplitude integral, and the factorized form

    I(u) = -(M / 2 pi) (e^{ik|a1|}/|a1|) V_tilde_{j1 0}(k' u - k a1_hat)

obtained by linearizing |y + a1| about a1 (plane sources replace the
spherical prefactor by e^{ik p.a1} and a1_hat by p_hat). Because V_tilde
peaks at zero momentum transfer, |I| is largest where k' u is closest to
k a1_hat: a narrow cone around the outward source-atom axis.

At order 2 the driving term for double excitation is

    K2(R) = f_{j1 0}(R) V_{0 j2}(R - a2) + f_{0 j2}(R) V_{j1 0}(R - a1),

and the reported observable is the far-field angular power
P2 = int dOmega |A2(u)|^2 of its Green convolution. The position-space
norm of the outgoing second-order field diverges (the states are not
square-integrable), so P2 - finite, and carrying the same geometry
dependence - is the probability proxy; every reported number is a ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .atomic import RadialPotential, eigenstate, transition_potential
from .cubature import (
    AccuracyError,
    CubatureResult,
    CubatureSpec,
    integrate_ball,
    integrate_ball_fourier,
)
from .spherical import DirectionGrid
from .waves import Geometry, Kinematics, Source

__all__ = [
    "AngularField",
    "ChannelField",
    "ExcitationPower",
    "SecondOrderSource",
    "first_order_field",
    "first_order_far_amplitude",
    "far_field_amplitude",
    "cone_half_width",
    "half_width_from_profile",
    "second_order_source",
    "second_order_far_amplitude",
    "double_excitation_probability",
    "plane_wave_double_excitation",
]

TWO_PI = 2.0 * math.pi
DEFAULT_BALL_RADIUS = 15.0  # bohr; covers every supported overlap density
FAR_FIELD_FACTOR = 10.0  # |a| must exceed this times the atom support radius


def pair_potential(ja: int, jb: int) -> RadialPotential:
    """Transition potential between the states labeled ja and jb."""
    return transition_potential(eigenstate(ja + 1), eigenstate(jb + 1))


def _perp_unit(axis: np.ndarray) -> np.ndarray:
    trial = np.array([1.0, 0.0, 0.0])
    if abs(axis @ trial) > 0.9:
        trial = np.array([0.0, 1.0, 0.0])
    v = trial - (trial @ axis) * axis
    return v / np.linalg.norm(v)


def _check_far_field(norm: float, pot: RadialPotential, what: str) -> None:
    if norm < FAR_FIELD_FACTOR * pot.support_radius:
        raise ValueError(
            f"far-field factorization invalid: {what} = {norm:g} bohr is below "
            f"{FAR_FIELD_FACTOR:g} x atom support radius "
            f"({pot.support_radius:g} bohr)"
        )


def _amplitude_scale(
    pot: RadialPotential,
    atom_pos: np.ndarray,
    kin: Kinematics,
    source: Source,
    kprime: float,
) -> float:
    """Peak magnitude of the amplitude integral (without the M/2pi factor).

    Anchors absolute error floors so that directions where the oscillatory
    integral cancels to a tiny residue are not over-refined: accuracy there
    is meaningful only relative to the peak of the same amplitude.
    """
    k = source.wavenumber
    q_min = max(abs(k - kprime), 1e-3)
    pot.ensure_fourier_range(k + kprime + 2.0)
    peak = abs(pot.fourier(q_min)) * abs(source.amplitude)
    if source.kind == "spherical":
        peak /= float(np.linalg.norm(atom_pos))
    return peak


# ---------------------------------------------------------------------------
# channel fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChannelField:
    """A coefficient field f_{j1 j2}(R) with its evaluation strategy."""

    order: int
    j1: int
    j2: int
    strategy: str  # "direct" | "far-field-factorized" | "zero"
    wavenumber: float | None
    _evaluator: Callable[[np.ndarray], tuple[np.ndarray, float]] = field(repr=False)

    def values(self, points: np.ndarray) -> tuple[np.ndarray, float]:
        """Field values at (N, 3) points, plus the worst relative error."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self._evaluator(pts)

    def __call__(self, point: np.ndarray) -> complex:
        vals, _ = self.values(np.asarray(point, dtype=float).reshape(1, 3))
        return complex(vals[0])


def _zero_field(j1: int, j2: int, kprime: float | None) -> ChannelField:
    def _eval(pts: np.ndarray):
        return np.zeros(pts.shape[0], dtype=complex), 0.0

    return ChannelField(
        order=1, j1=j1, j2=j2, strategy="zero", wavenumber=kprime, _evaluator=_eval
    )


def first_order_field(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    *,
    strategy: str = "direct",
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-6,
    max_cells: int = 600_000,
) -> ChannelField:
    """First-order field for a single-excitation channel.

    Exactly one of j1, j2 must be nonzero for a nontrivial field; requesting
    both nonzero returns the canonical zero field (a single interaction
    cannot excite both atoms). The driving potential lives in a ball of
    ``ball_radius`` around the excited atom; the source singularity must lie
    outside that ball.
    """
    if j1 == 0 and j2 == 0:
        raise ValueError("elastic channel distortion is not modeled")
    channel = kin.channel(j1, j2)
    if j1 != 0 and j2 != 0:
        return _zero_field(j1, j2, channel.wavenumber)
    kprime = channel.require_open()

    j, atom_pos = (j1, geometry.a1) if j1 != 0 else (j2, geometry.a2)
    pot = pair_potential(j, 0)
    mass = kin.alpha_mass

    if strategy == "far-field-factorized":
        _check_far_field(float(np.linalg.norm(atom_pos)), pot, "|atom position|")
        table = _FactorizedAmplitude(pot, atom_pos, kin, source, kprime)

        def _eval_far(pts: np.ndarray):
            rel = pts - atom_pos
            dist = np.linalg.norm(rel, axis=1)
            if np.any(dist == 0.0):
                raise ValueError("far-field form is singular at the atom position")
            u = rel / dist[:, None]
            amp = table(u)
            return amp * np.exp(1j * kprime * dist) / dist, table.error

        return ChannelField(
            order=1,
            j1=j1,
            j2=j2,
            strategy=strategy,
            wavenumber=kprime,
            _evaluator=_eval_far,
        )

    if strategy != "direct":
        raise ValueError(f"unknown evaluation strategy {strategy!r}")
    if source.kind == "spherical" and np.linalg.norm(atom_pos) <= ball_radius:
        raise ValueError("source singularity would fall inside the quadrature ball")

    hint = source.wavenumber + kprime
    fast_v = pot.tabulated_value()
    abs_floor = rel_tol * _amplitude_scale(pot, atom_pos, kin, source, kprime)

    def _eval_direct(pts: np.ndarray):
        out = np.empty(pts.shape[0], dtype=complex)
        worst = 0.0
        for i, R in enumerate(pts):
            y0 = R - atom_pos
            inside = np.linalg.norm(y0) < ball_radius
            spec = CubatureSpec(
                center=np.zeros(3),
                radius=ball_radius,
                rel_tol=rel_tol,
                abs_tol=abs_floor,
                max_cells=max_cells,
                wavenumber_hint=hint,
                singular_point=y0 if inside else None,
            )

            def integrand(y, _R=R):
                src = source.value(y + atom_pos)
                v = fast_v(np.linalg.norm(y, axis=1))
                rel = _R - atom_pos - y
                dist = np.linalg.norm(rel, axis=1)
                return src * v * np.exp(1j * kprime * dist) / dist

            res = integrate_ball(integrand, spec).require_converged()
            out[i] = -(mass / TWO_PI) * res.value
            worst = max(worst, res.rel_error)
        return out, worst

    return ChannelField(
        order=1,
        j1=j1,
        j2=j2,
        strategy=strategy,
        wavenumber=kprime,
        _evaluator=_eval_direct,
    )


# ---------------------------------------------------------------------------
# far-field amplitudes
# ---------------------------------------------------------------------------


class _FactorizedAmplitude:
    """I(u) from the momentum-space potential (Born factorization)."""

    def __init__(
        self,
        pot: RadialPotential,
        atom_pos: np.ndarray,
        kin: Kinematics,
        source: Source,
        kprime: float,
    ):
        self.pot = pot
        self.kprime = kprime
        k = source.wavenumber
        if source.kind == "spherical":
            norm = float(np.linalg.norm(atom_pos))
            self.incident = k * atom_pos / norm
            self.prefactor = (
                -(kin.alpha_mass / TWO_PI)
                * source.amplitude
                * np.exp(1j * k * norm)
                / norm
            )
        else:
            self.incident = k * source.direction
            self.prefactor = (
                -(kin.alpha_mass / TWO_PI)
                * source.amplitude
                * np.exp(1j * k * (source.direction @ atom_pos))
            )
        pot.ensure_fourier_range(k + kprime + 2.0)
        self.error = pot.fourier_table_error()

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(u)
        q = np.linalg.norm(self.kprime * u - self.incident, axis=1)
        return self.prefactor * self.pot.fourier(q)


@dataclass(frozen=True)
class AngularField:
    """Far-field amplitude sampled on a direction grid."""

    grid: DirectionGrid
    amplitude: np.ndarray
    wavenumber: float
    axis: np.ndarray | None = None
    error_estimate: float = 0.0

    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def power(self) -> float:
        """Angular power int |A(u)|^2 dOmega (>= 0 by construction)."""
        return float(self.grid.integrate(self.intensity()))

    def peak_direction(self) -> np.ndarray:
        return self.grid.vectors[int(np.argmax(np.abs(self.amplitude)))]


def far_field_amplitude(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    directions: np.ndarray,
    *,
    strategy: str = "factorized",
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-5,
) -> tuple[np.ndarray, float]:
    """First-order far amplitude I(u) at the given unit vectors.

    The direct path is the validation oracle: one shared ball decomposition
    of the source-times-potential envelope, Fourier-phased per direction;
    its error (and ``rel_tol``) is judged against the amplitude peak, since
    off-cone directions are tiny oscillatory residues. The factorized path
    reads the tabulated momentum-space potential (fast, the default).
    """
    if (j1 != 0) == (j2 != 0):
        raise ValueError("far amplitude needs exactly one excited atom")
    kprime = kin.channel(j1, j2).require_open()
    j, atom_pos = (j1, geometry.a1) if j1 != 0 else (j2, geometry.a2)
    pot = pair_potential(j, 0)
    _check_far_field(float(np.linalg.norm(atom_pos)), pot, "|atom position|")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))

    if strategy == "factorized":
        table = _FactorizedAmplitude(pot, atom_pos, kin, source, kprime)
        return table(directions), table.error

    if strategy != "direct":
        raise ValueError(f"unknown evaluation strategy {strategy!r}")

    # the direct amplitude is a ball Fourier transform of src * V: the
    # envelope is evaluated once and only the direction phase varies
    mass = kin.alpha_mass
    fast_v = pot.tabulated_value()
    scale = _amplitude_scale(pot, atom_pos, kin, source, kprime)
    spec = CubatureSpec(
        center=np.zeros(3),
        radius=ball_radius,
        rel_tol=rel_tol,
        abs_tol=rel_tol * scale,
        wavenumber_hint=source.wavenumber + kprime,
    )

    def envelope(y):
        return source.value(y + atom_pos) * fast_v(np.linalg.norm(y, axis=1))

    vals, errs, converged = integrate_ball_fourier(envelope, spec, kprime, directions)
    if not converged:
        raise AccuracyError(
            CubatureResult(
                value=complex(vals[np.argmax(np.abs(vals))]),
                error=float(errs.max()),
                converged=False,
                cells=0,
                evaluations=0,
            )
        )
    worst = float(errs.max() / max(np.max(np.abs(vals)), 1e-300))
    return -(mass / TWO_PI) * vals, worst


def first_order_far_amplitude(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    grid: DirectionGrid,
    *,
    strategy: str = "factorized",
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-6,
) -> AngularField:
    """First-order far amplitude sampled on a full direction grid."""
    amp, err = far_field_amplitude(
        j1,
        j2,
        geometry,
        kin,
        source,
        grid.vectors,
        strategy=strategy,
        ball_radius=ball_radius,
        rel_tol=rel_tol,
    )
    if source.kind == "spherical":
        atom_pos = geometry.a1 if j1 != 0 else geometry.a2
        axis = atom_pos / np.linalg.norm(atom_pos)
    else:
        axis = source.direction
    kprime = kin.channel(j1, j2).require_open()
    return AngularField(
        grid=grid, amplitude=amp, wavenumber=kprime, axis=axis, error_estimate=err
    )


# ---------------------------------------------------------------------------
# cone geometry
# ---------------------------------------------------------------------------


def half_width_from_profile(
    thetas: np.ndarray, intensities: np.ndarray
) -> float | None:
    """Half-maximum angle of a cone profile; None when there is no cone.

    Walks outward from the peak sample toward larger angles and linearly
    interpolates the first crossing of half the peak intensity. Profiles
    that never fall below half maximum, or only beyond 90 degrees, are
    flagged as "no cone" (None).
    """
    thetas = np.asarray(thetas, dtype=float)
    intensities = np.asarray(intensities, dtype=float)
    order = np.argsort(thetas, kind="stable")
    th, p = thetas[order], intensities[order]
    peak_idx = int(np.argmax(p))
    half = 0.5 * p[peak_idx]
    for i in range(peak_idx + 1, len(th)):
        if p[i] < half:
            # ties broken toward smaller theta by taking the first crossing
            frac = (p[i - 1] - half) / (p[i - 1] - p[i])
            width = th[i - 1] + frac * (th[i] - th[i - 1])
            return float(width) if width < 0.5 * math.pi else None
    return None


def cone_half_width(af: AngularField) -> float | None:
    """Half-maximum angle of |I|^2 about the field's symmetry axis."""
    axis = af.axis if af.axis is not None else np.array([0.0, 0.0, 1.0])
    cosang = np.clip(af.grid.vectors @ axis, -1.0, 1.0)
    return half_width_from_profile(np.arccos(cosang), af.intensity())


# ---------------------------------------------------------------------------
# second order
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondOrderSource:
    """K2(R) split into its two excitation-order contributions.

    ``via_atom1`` is f_{j1 0}(R) V_{0 j2}(R - a2): atom 1 excited first,
    its outgoing wave driving atom 2. ``via_atom2`` is the mirror path.
    """

    via_atom1: complex
    via_atom2: complex
    error: float

    @property
    def total(self) -> complex:
        return self.via_atom1 + self.via_atom2

    @property
    def minor_share(self) -> float:
        """|via_atom2| / (|via_atom1| + |via_atom2|)."""
        denom = abs(self.via_atom1) + abs(self.via_atom2)
        return abs(self.via_atom2) / denom if denom > 0 else 0.0


def second_order_source(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    R: np.ndarray,
    *,
    strategy: str = "direct",
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-5,
) -> SecondOrderSource:
    """Driving term of the double-excitation channel at one point."""
    if j1 == 0 or j2 == 0:
        raise ValueError("double excitation needs both labels nonzero")
    R = np.asarray(R, dtype=float).reshape(3)
    f1 = first_order_field(
        j1, 0, geometry, kin, source,
        strategy=strategy, ball_radius=ball_radius, rel_tol=rel_tol,
    )
    f2 = first_order_field(
        0, j2, geometry, kin, source,
        strategy=strategy, ball_radius=ball_radius, rel_tol=rel_tol,
    )
    pot1 = pair_potential(j1, 0)
    pot2 = pair_potential(0, j2)
    d1 = float(np.linalg.norm(R - geometry.a1))
    d2 = float(np.linalg.norm(R - geometry.a2))
    v1, e1 = f1.values(R[None, :])
    v2, e2 = f2.values(R[None, :])
    term1 = complex(v1[0]) * float(pot2.value(d2))
    term2 = complex(v2[0]) * float(pot1.value(d1))
    return SecondOrderSource(via_atom1=term1, via_atom2=term2, error=max(e1, e2))


class _AxialAmplitudeTable:
    """Direct-quadrature I(u) interpolated over the polar angle from an axis."""

    def __init__(
        self,
        j1: int,
        j2: int,
        geometry: Geometry,
        kin: Kinematics,
        source: Source,
        axis: np.ndarray,
        theta_lo: float,
        theta_hi: float,
        *,
        n_nodes: int = 25,
        ball_radius: float,
        rel_tol: float,
    ):
        self.axis = axis
        perp = _perp_unit(axis)
        thetas = np.linspace(theta_lo, theta_hi, n_nodes)
        dirs = (
            np.cos(thetas)[:, None] * axis[None, :]
            + np.sin(thetas)[:, None] * perp[None, :]
        )
        vals, err = far_field_amplitude(
            j1, j2, geometry, kin, source, dirs,
            strategy="direct", ball_radius=ball_radius, rel_tol=rel_tol,
        )
        self.error = err
        self._spline = CubicSpline(thetas, vals)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        theta = np.arccos(np.clip(np.atleast_2d(u) @ self.axis, -1.0, 1.0))
        return self._spline(theta)


def second_order_far_amplitude(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    directions: np.ndarray,
    *,
    strategy: str = "factorized",
    include_minor_term: bool = False,
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-5,
) -> tuple[np.ndarray, np.ndarray]:
    """Far-field amplitude A2(u) of the double-excitation channel.

    Factorized path: the dominant chain treats atom 1's outgoing wave as a
    local plane wave at atom 2, so A2 factorizes into I1(axis_12) times the
    momentum-space potential of atom 2 (the mirror chain is available with
    ``include_minor_term``). Direct path: Green-convolves K2 over balls
    around both atoms, with the first-order amplitudes taken from
    direct-quadrature tables; both chains are always kept. The direct path
    is only affordable in scaled-mass mode.

    Returns (amplitudes, absolute error estimates) per direction.
    """
    if j1 == 0 or j2 == 0:
        raise ValueError("double excitation needs both labels nonzero")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    k = kin.wavenumber
    k1 = kin.channel(j1, 0).require_open()
    k2 = kin.channel(0, j2).require_open()
    kpp = kin.channel(j1, j2).require_open()
    pot1 = pair_potential(j1, 0)
    pot2 = pair_potential(0, j2)
    d = geometry.separation
    _check_far_field(d, pot2, "|a2 - a1|")
    axis12 = geometry.axis_12
    mass = kin.alpha_mass

    if strategy == "factorized":
        amp1 = _FactorizedAmplitude(pot1, geometry.a1, kin, source, k1)
        i1 = complex(amp1(axis12[None, :])[0])
        pot2.ensure_fourier_range(kpp + k2 + 2.0)
        q2 = np.linalg.norm(kpp * directions - k2 * axis12[None, :], axis=1)
        chain = (
            -(mass / TWO_PI)
            * i1
            * (np.exp(1j * k1 * d) / d)
            * np.exp(-1j * kpp * (directions @ geometry.a2))
            * pot2.fourier(q2)
        )
        err = np.abs(chain) * (amp1.error + pot2.fourier_table_error())
        if include_minor_term:
            amp2 = _FactorizedAmplitude(pot2, geometry.a2, kin, source, k2)
            i2 = complex(amp2((-axis12)[None, :])[0])
            pot1.ensure_fourier_range(kpp + k1 + 2.0)
            q1 = np.linalg.norm(kpp * directions + k1 * axis12[None, :], axis=1)
            minor = (
                -(mass / TWO_PI)
                * i2
                * (np.exp(1j * k2 * d) / d)
                * np.exp(-1j * kpp * (directions @ geometry.a1))
                * pot1.fourier(q1)
            )
            err = err + np.abs(minor) * (amp2.error + pot1.fourier_table_error())
            chain = chain + minor
        return chain, err

    if strategy != "direct":
        raise ValueError(f"unknown evaluation strategy {strategy!r}")

    # direct: outgoing-Green convolution of K2 over balls at both atoms
    spread = math.asin(min(ball_radius / d, 1.0)) + 0.15
    if source.kind == "spherical":
        axis1 = geometry.a1 / geometry.a1_norm
        axis2 = geometry.a2 / geometry.a2_norm
    else:
        axis1 = axis2 = source.direction
    theta_c1 = math.acos(np.clip(axis12 @ axis1, -1.0, 1.0))
    theta_c2 = math.acos(np.clip(-axis12 @ axis2, -1.0, 1.0))
    table1 = _AxialAmplitudeTable(
        j1, 0, geometry, kin, source, axis1,
        max(0.0, theta_c1 - spread), min(math.pi, theta_c1 + spread),
        ball_radius=ball_radius, rel_tol=rel_tol,
    )
    table2 = _AxialAmplitudeTable(
        0, j2, geometry, kin, source, axis2,
        max(0.0, theta_c2 - spread), min(math.pi, theta_c2 + spread),
        ball_radius=ball_radius, rel_tol=rel_tol,
    )

    def envelope_at(atom_pos, other_pos, kprime, table, pot):
        fast_v = pot.tabulated_value()

        def g(Rp):
            rel = Rp - other_pos
            dist = np.linalg.norm(rel, axis=1)
            u = rel / dist[:, None]
            falloff = np.exp(1j * kprime * dist) / dist
            v = fast_v(np.linalg.norm(Rp - atom_pos, axis=1))
            return table(u) * falloff * v

        return g

    out = np.zeros(directions.shape[0], dtype=complex)
    err = np.zeros(directions.shape[0])
    for atom_pos, other_pos, kprime, table, pot in (
        (geometry.a2, geometry.a1, k1, table1, pot2),
        (geometry.a1, geometry.a2, k2, table2, pot1),
    ):
        spec = CubatureSpec(
            center=atom_pos,
            radius=ball_radius,
            rel_tol=rel_tol,
            wavenumber_hint=kprime + kpp,
        )
        vals, errs, _ = integrate_ball_fourier(
            envelope_at(atom_pos, other_pos, kprime, table, pot),
            spec,
            kpp,
            directions,
        )
        out += -(mass / TWO_PI) * vals
        err += (mass / TWO_PI) * errs
    return out, err


@dataclass(frozen=True)
class ExcitationPower:
    """Angular power of a double-excitation channel, with diagnostics."""

    value: float
    error: float
    strategy: str
    minor_share: float | None = None

    @property
    def rel_error(self) -> float:
        return self.error / self.value if self.value > 0 else math.inf


def double_excitation_probability(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    source: Source,
    grid: DirectionGrid,
    *,
    strategy: str = "factorized",
    include_minor_term: bool = False,
    ball_radius: float = DEFAULT_BALL_RADIUS,
    rel_tol: float = 1e-5,
) -> ExcitationPower:
    """Far-field angular power P2 of the double-excitation channel.

    Relative units: the non-normalizable source makes only ratios of P2
    across geometries meaningful.
    """
    amps, errs = second_order_far_amplitude(
        j1, j2, geometry, kin, source, grid.vectors,
        strategy=strategy,
        include_minor_term=include_minor_term,
        ball_radius=ball_radius,
        rel_tol=rel_tol,
    )
    p2 = float(grid.integrate(np.abs(amps) ** 2))
    # error estimate: linearized propagation of per-direction amplitude errors
    p2_err = float(grid.integrate(2.0 * np.abs(amps) * errs))
    minor_share = None
    if include_minor_term or strategy == "direct":
        major, _ = second_order_far_amplitude(
            j1, j2, geometry, kin, source, grid.vectors,
            strategy="factorized",
            include_minor_term=False,
            ball_radius=ball_radius,
            rel_tol=rel_tol,
        )
        p_major = float(grid.integrate(np.abs(major) ** 2))
        minor_share = abs(p2 - p_major) / p2 if p2 > 0 else 0.0
    return ExcitationPower(
        value=p2, error=p2_err, strategy=strategy, minor_share=minor_share
    )


def plane_wave_double_excitation(
    j1: int,
    j2: int,
    geometry: Geometry,
    kin: Kinematics,
    p_hat: np.ndarray,
    grid: DirectionGrid,
    **kwargs,
) -> ExcitationPower:
    """Double-excitation power for a plane-wave source along p_hat."""
    source = Source.plane(kin.wavenumber, p_hat)
    return double_excitation_probability(
        j1, j2, geometry, kin, source, grid, **kwargs
    )
