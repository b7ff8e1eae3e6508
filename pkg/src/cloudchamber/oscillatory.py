"""Radial Fourier transforms and the stationary-phase direction.

``radial_fourier`` evaluates the 3D Fourier transform of a spherically
symmetric potential through its radial sine transform,

    V_tilde(q) = (4 pi / q) int_0^inf r sin(q r) V(r) dr,

using QUADPACK's oscillatory rule for the sine factor. A c/r Coulomb tail
(diagonal potentials) is split off and transformed analytically,
int (c/r) e^{-iq.y} dy = 4 pi c / q^2, so the numerical part always sees an
exponentially decaying integrand. For tail-free potentials the q -> 0 limit
is the plain moment 4 pi int r^2 V(r) dr.

``stationary_direction`` returns the unit vector of the selected atom
position: the axis on which the far-field phase is stationary, i.e. the
predicted cone axis.

The Monte-Carlo estimators below are validation oracles, deliberately
independent of the QUADPACK path. Plain 3D sampling loses all statistical
power once q exceeds a few inverse atomic radii (the integral is a ~1e-5
residue of an O(1) oscillatory cancellation, so the sample budget would have
to grow like the square of that ratio); ``monte_carlo_fourier_rotated``
removes the cancellation exactly by Cauchy-rotating the radial contour to
r = (1 + i) x, which is legitimate because the closed-form potentials are
entire and decay in the sector.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

__all__ = [
    "radial_fourier",
    "stationary_direction",
    "monte_carlo_potential_value",
    "monte_carlo_fourier_3d",
    "monte_carlo_fourier_rotated",
]

FOUR_PI = 4.0 * math.pi
_R_MAX = 90.0  # integrands below decay at least like exp(-2r/3)
_QUAD_KW = dict(limit=800, epsabs=1e-13, epsrel=1e-11)


def radial_fourier(potential, q: float) -> float:
    """Momentum-space potential at a single q >= 0 (hartree * bohr^3)."""
    q = float(q)
    if q < 0:
        raise ValueError("wavenumber must be nonnegative")
    tail = getattr(potential, "coulomb_tail", 0.0)
    if q == 0.0:
        if tail != 0.0:
            raise ValueError("Coulomb tail makes the q = 0 transform divergent")
        moment, _ = integrate.quad(
            lambda r: r * r * potential.value(r), 0.0, _R_MAX, **_QUAD_KW
        )
        return FOUR_PI * moment

    def envelope(r):
        # r V(r) minus its limit at infinity, always exponentially decaying
        return r * potential.value(r) - tail

    osc, _ = integrate.quad(envelope, 0.0, _R_MAX, weight="sin", wvar=q, **_QUAD_KW)
    return (FOUR_PI / q) * (osc + tail / q)


def stationary_direction(geometry, atom) -> np.ndarray:
    """Unit vector of atom 1 or atom 2: the predicted far-field cone axis."""
    if atom in (1, "first"):
        a = geometry.a1
    elif atom in (2, "second"):
        a = geometry.a2
    else:
        raise ValueError("atom must be 1/'first' or 2/'second'")
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise ValueError("atom position must be nonzero")
    return np.asarray(a, dtype=float) / norm


# ---------------------------------------------------------------------------
# Monte-Carlo oracles
# ---------------------------------------------------------------------------


def _sample_ball_points(rng, rate: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Points with density rate^3 e^{-rate r} / (8 pi) and that density."""
    r = rng.gamma(shape=3.0, scale=1.0 / rate, size=n)
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    pts = r[:, None] * v
    density = rate**3 * np.exp(-rate * r) / (8.0 * math.pi)
    return pts, density


def monte_carlo_potential_value(
    potential, r: float, n_samples: int = 4_000_000, seed: int = 0
) -> tuple[float, float]:
    """Plain 3D Monte-Carlo of V(x) = -2 int rho(y)/|x - y| dy at |x| = r.

    Returns (estimate, standard error). Importance-samples y with the
    overlap density's own decay rate, so the exponential factors cancel
    inside the estimator.
    """
    rng = np.random.default_rng(seed)
    beta = potential.beta
    coeffs = potential.density_coeffs
    pts, density = _sample_ball_points(rng, beta, n_samples)
    x = np.array([0.0, 0.0, float(r)])
    dist = np.linalg.norm(pts - x, axis=1)
    rad = np.linalg.norm(pts, axis=1)
    rho = np.polynomial.polynomial.polyval(rad, coeffs) * np.exp(-beta * rad)
    samples = -2.0 * rho / (dist * density)
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n_samples))


def monte_carlo_fourier_3d(
    potential, q: float, n_samples: int = 30_000_000, seed: int = 0
) -> tuple[float, float]:
    """Plain 3D Monte-Carlo of int V(y) e^{-i q.y} dy (real part by symmetry).

    The Coulomb tail is removed analytically; the remainder is sampled in
    full 3D with the phase factor cos(q . y). Only useful while q is small
    enough that the oscillatory cancellation stays within the sample budget.
    """
    q = float(q)
    if q <= 0.0:
        raise ValueError("Monte-Carlo transform requires q > 0")
    rng = np.random.default_rng(seed)
    tail = getattr(potential, "coulomb_tail", 0.0)
    beta = potential.beta
    pts, density = _sample_ball_points(rng, beta, n_samples)
    rad = np.linalg.norm(pts, axis=1)
    w = potential.value(rad)
    if tail != 0.0:
        w = w - tail / rad
    samples = w * np.cos(q * pts[:, 2]) / density
    analytic = FOUR_PI * tail / q**2
    return (
        float(samples.mean()) + analytic,
        float(samples.std(ddof=1) / math.sqrt(n_samples)),
    )


def monte_carlo_fourier_rotated(
    potential, q: float, n_samples: int = 2_000_000, seed: int = 0
) -> tuple[float, float]:
    """Contour-rotated Monte-Carlo transform, usable at any q > 0.

    Writes V_tilde(q) = (4 pi / q) [ Im int_0^inf h(r) e^{iqr} dr + tail/q ]
    with h(r) = r V(r) - tail, rotates the contour to r = (1 + i) x, and
    importance-samples x ~ Exp(q + beta/2). Relative variance is then
    roughly q-independent.
    """
    q = float(q)
    if q <= 0.0:
        raise ValueError("Monte-Carlo transform requires q > 0")
    rng = np.random.default_rng(seed)
    tail = getattr(potential, "coulomb_tail", 0.0)
    beta = potential.beta
    lam = q + 0.5 * beta
    x = rng.exponential(1.0 / lam, size=n_samples)
    z = (1.0 + 1.0j) * x
    h = z * _complex_value(potential, z) - tail
    # (1+i) h((1+i)x) e^{iqx - qx} / (lam e^{-lam x})
    samples = np.imag((1.0 + 1.0j) * h * np.exp(((lam - q) + 1j * q) * x)) / lam
    est = samples.mean()
    stderr = samples.std(ddof=1) / math.sqrt(n_samples)
    scale = FOUR_PI / q
    return scale * (est + tail / q), abs(scale) * stderr


def _complex_value(potential, z: np.ndarray) -> np.ndarray:
    """Closed-form potential continued to complex radius.

    Same incomplete-gamma partial sums as the real evaluation, written with
    T_n(x) = e^{-x} sum_{l<=n} x^l / l! which is entire in x.
    """
    c = potential.density_coeffs
    b = potential.beta
    x = b * z
    inner = np.zeros_like(z, dtype=complex)
    outer = np.zeros_like(z, dtype=complex)
    for m, cm in enumerate(c):
        inner += cm * (math.factorial(m + 2) / b ** (m + 3)) * (
            1.0 - _truncated_exp(x, m + 2)
        )
        outer += cm * (math.factorial(m + 1) / b ** (m + 2)) * _truncated_exp(x, m + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(z != 0.0, inner / np.where(z != 0.0, z, 1.0), 0.0)
    return -2.0 * FOUR_PI * (ratio + outer)


def _truncated_exp(x: np.ndarray, n: int) -> np.ndarray:
    """e^{-x} * sum_{l=0}^{n} x^l / l! for complex x."""
    acc = np.ones_like(x, dtype=complex)
    term = np.ones_like(x, dtype=complex)
    for l in range(1, n + 1):
        term = term * x / l
        acc = acc + term
    return np.exp(-x) * acc
