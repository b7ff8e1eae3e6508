"""Adaptive cubature over balls for highly oscillatory complex integrands.

The ball is parameterized in spherical coordinates (t, theta, phi) around a
reference point: radius r = t * rho(theta, phi) with t in [0, 1], where rho
is the distance from the reference point to the ball surface. When an
integrable 1/|x - x0| singularity is declared, the reference point is x0 and
the r^2 Jacobian cancels the singularity exactly; otherwise the reference
point is the ball center and rho is constant.

Cells are sized by the oscillation wavenumber hint: the initial partition
slices the parameter box so that the phase change across any cell axis stays
below 2 pi * GL_HI / points_per_wavelength, which guarantees at least
``points_per_wavelength`` quadrature points per oscillation wavelength with
the tensor Gauss-Legendre rule used per cell (outer shells get more angular
cells than inner ones, where arcs are shorter). A lower-order rule on the
same cells supplies the error estimate, and the worst cells are then halved
dyadically along their largest phase extent until the requested relative
tolerance is met or the cell budget runs out.

Determinism contract: cells are created, evaluated, and summed in a fixed
order that depends only on the spec, so repeated runs are bit-identical.

Integrand contract: ``f`` receives an (N, 3) array of points and returns N
complex values. It is never called exactly at the declared singular point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CubatureSpec",
    "CubatureResult",
    "integrate_ball",
    "integrate_ball_fourier",
    "AccuracyError",
]

GL_HI = 8  # points per axis in the main rule
GL_LO = 5  # points per axis in the error rule
_EVAL_CHUNK = 2048  # cells per vectorized evaluation batch


class AccuracyError(RuntimeError):
    """Raised by callers that refuse to proceed with a non-converged result."""

    def __init__(self, result: "CubatureResult"):
        super().__init__(
            f"cubature failed to converge: value={result.value}, "
            f"abs error estimate={result.error:.3e}, cells={result.cells}"
        )
        self.result = result


def _tensor_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor GL nodes on [0,1]^3 and weights normalized to sum to 1."""
    x, w = np.polynomial.legendre.leggauss(n)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    nodes = np.stack(
        [a.ravel() for a in np.meshgrid(x, x, x, indexing="ij")], axis=-1
    )
    weights = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    return nodes, weights


_NODES_HI, _WEIGHTS_HI = _tensor_rule(GL_HI)
_NODES_LO, _WEIGHTS_LO = _tensor_rule(GL_LO)
_NODES_ALL = np.concatenate([_NODES_HI, _NODES_LO], axis=0)
_N_HI = _NODES_HI.shape[0]


@dataclass(frozen=True)
class CubatureSpec:
    """Region and accuracy contract for one ball integral.

    ``wavenumber_hint`` is the largest phase gradient (bohr^-1) expected in
    the integrand; it drives the initial subdivision. ``singular_point``
    declares at most one integrable 1/|x - x0| singularity strictly inside
    the ball.
    """

    center: np.ndarray
    radius: float
    rel_tol: float = 1e-6
    abs_tol: float = 0.0
    max_cells: int = 600_000
    wavenumber_hint: float = 0.0
    singular_point: np.ndarray | None = None
    points_per_wavelength: float = 6.0

    def __post_init__(self):
        object.__setattr__(
            self, "center", np.asarray(self.center, dtype=float).reshape(3)
        )
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")
        if not 0.0 < self.rel_tol <= 0.1:
            raise ValueError("relative tolerance must lie in (0, 0.1]")
        if not 2.0 <= self.points_per_wavelength <= GL_HI:
            raise ValueError(f"points per wavelength must lie in [2, {GL_HI}]")
        if self.singular_point is not None:
            x0 = np.asarray(self.singular_point, dtype=float).reshape(3)
            if np.linalg.norm(x0 - self.center) >= self.radius:
                raise ValueError("declared singular point must lie inside the ball")
            object.__setattr__(self, "singular_point", x0)


@dataclass
class CubatureResult:
    """Value, absolute error estimate, and convergence bookkeeping."""

    value: complex
    error: float
    converged: bool
    cells: int
    evaluations: int

    @property
    def rel_error(self) -> float:
        mag = abs(self.value)
        return self.error / mag if mag > 0 else math.inf

    def require_converged(self) -> "CubatureResult":
        if not self.converged:
            raise AccuracyError(self)
        return self


class _BallTransform:
    """Maps the (t, theta, phi) parameter box onto the ball."""

    def __init__(self, spec: CubatureSpec):
        self.x0 = (
            spec.singular_point if spec.singular_point is not None else spec.center
        )
        self.d = self.x0 - spec.center
        self.dnorm = float(np.linalg.norm(self.d))
        self.radius = spec.radius
        self.rho_bound = spec.radius + self.dnorm
        self.offcenter = self.dnorm > 1e-14 * spec.radius

    def rho(self, nhat: np.ndarray) -> np.ndarray:
        """Distance from x0 to the sphere surface along each unit direction."""
        if not self.offcenter:
            return np.full(nhat.shape[:-1], self.radius)
        dn = nhat @ self.d
        return -dn + np.sqrt(dn * dn + self.radius**2 - self.dnorm**2)


def _phase_budget(spec: CubatureSpec) -> float:
    return 2.0 * math.pi * GL_HI / spec.points_per_wavelength


def _initial_cells(spec: CubatureSpec, tr: _BallTransform):
    """Phase-keyed shell partition of the (t, theta, phi) box.

    Radial shells are uniform in t; each shell gets enough theta bands for
    its outer radius, and each band enough phi cells for its outer arc.
    Cell order (shell, band, phi) is deterministic.
    """
    kappa = float(spec.wavenumber_hint)
    budget = _phase_budget(spec)
    rho_b = tr.rho_bound
    two_pi = 2.0 * math.pi

    if kappa <= 0.0:
        lo = np.array([[0.0, 0.0, 0.0]])
        hi = np.array([[1.0, math.pi, two_pi]])
        return lo, hi

    n_t = max(1, math.ceil(kappa * rho_b / budget))
    lo_list: list[np.ndarray] = []
    hi_list: list[np.ndarray] = []
    for it in range(n_t):
        t0, t1 = it / n_t, (it + 1) / n_t
        r_hi = t1 * rho_b
        n_th = max(1, math.ceil(kappa * r_hi * math.pi / budget))
        for ith in range(n_th):
            th0, th1 = ith * math.pi / n_th, (ith + 1) * math.pi / n_th
            sin_max = (
                1.0
                if th0 < 0.5 * math.pi < th1
                else max(math.sin(th0), math.sin(th1))
            )
            n_ph = max(1, math.ceil(kappa * r_hi * sin_max * two_pi / budget))
            ph = np.linspace(0.0, two_pi, n_ph + 1)
            lo_band = np.column_stack(
                [np.full(n_ph, t0), np.full(n_ph, th0), ph[:-1]]
            )
            hi_band = np.column_stack(
                [np.full(n_ph, t1), np.full(n_ph, th1), ph[1:]]
            )
            lo_list.append(lo_band)
            hi_list.append(hi_band)
    return np.concatenate(lo_list), np.concatenate(hi_list)


def _phase_extents(lo: np.ndarray, hi: np.ndarray, kappa: float, rho_bound: float):
    """Per-axis phase change bounds for cells [lo, hi] in (t, theta, phi)."""
    r_hi = hi[:, 0] * rho_bound
    s_lo, s_hi = np.sin(lo[:, 1]), np.sin(hi[:, 1])
    crosses = (lo[:, 1] < 0.5 * math.pi) & (hi[:, 1] > 0.5 * math.pi)
    sin_max = np.where(crosses, 1.0, np.maximum(s_lo, s_hi))
    scale = max(kappa, 1e-3)  # keep an ordering even with no oscillation
    return np.stack(
        [
            scale * rho_bound * (hi[:, 0] - lo[:, 0]),
            scale * np.maximum(r_hi, 1e-3 * rho_bound) * (hi[:, 1] - lo[:, 1]),
            scale
            * np.maximum(r_hi, 1e-3 * rho_bound)
            * sin_max
            * (hi[:, 2] - lo[:, 2]),
        ],
        axis=-1,
    )


def _split_cells(lo: np.ndarray, hi: np.ndarray, axis: np.ndarray):
    """Halve each cell along its chosen axis; children keep creation order."""
    mid = 0.5 * (lo + hi)
    lo_a, hi_a = lo.copy(), hi.copy()
    lo_b, hi_b = lo.copy(), hi.copy()
    rows = np.arange(lo.shape[0])
    hi_a[rows, axis] = mid[rows, axis]
    lo_b[rows, axis] = mid[rows, axis]
    return np.concatenate([lo_a, lo_b]), np.concatenate([hi_a, hi_b])


def _cell_geometry(clo: np.ndarray, chi: np.ndarray, tr: _BallTransform):
    """Physical nodes and Jacobian weights for a chunk of parameter cells."""
    span = chi - clo
    pts = clo[:, None, :] + span[:, None, :] * _NODES_ALL[None, :, :]
    t = pts[..., 0]
    theta = pts[..., 1]
    phi = pts[..., 2]
    st = np.sin(theta)
    nhat = np.empty(pts.shape)
    nhat[..., 0] = st * np.cos(phi)
    nhat[..., 1] = st * np.sin(phi)
    nhat[..., 2] = np.cos(theta)
    rho = tr.rho(nhat)
    xyz = tr.x0[None, None, :] + (t * rho)[..., None] * nhat
    jac = rho**3 * t * t * st
    vol = span.prod(axis=1)
    return xyz, jac, vol


def _evaluate_cells(f, lo, hi, tr: _BallTransform):
    """Main-rule and error-rule integrals for a batch of parameter cells."""
    n_cells = lo.shape[0]
    vals_hi = np.empty(n_cells, dtype=complex)
    vals_lo = np.empty(n_cells, dtype=complex)
    n_eval = 0
    for start in range(0, n_cells, _EVAL_CHUNK):
        sl = slice(start, min(start + _EVAL_CHUNK, n_cells))
        xyz, jac, vol = _cell_geometry(lo[sl], hi[sl], tr)
        fv = np.asarray(f(xyz.reshape(-1, 3))).reshape(jac.shape)
        integ = fv * jac
        vals_hi[sl] = vol * (integ[:, :_N_HI] @ _WEIGHTS_HI)
        vals_lo[sl] = vol * (integ[:, _N_HI:] @ _WEIGHTS_LO)
        n_eval += integ.size
    return vals_hi, vals_lo, n_eval


def integrate_ball(f, spec: CubatureSpec) -> CubatureResult:
    """Integrate a complex field over a ball.

    On failure to meet the tolerance within the cell budget the best
    estimate is returned with ``converged=False`` (no exception).
    """
    tr = _BallTransform(spec)
    kappa = float(spec.wavenumber_hint)
    lo, hi = _initial_cells(spec, tr)
    vals_hi, vals_lo, n_eval = _evaluate_cells(f, lo, hi, tr)
    errs = np.abs(vals_hi - vals_lo)

    max_rounds = 60
    for _ in range(max_rounds):
        total = vals_hi.sum()
        total_err = errs.sum()
        tol = max(spec.rel_tol * abs(total), spec.abs_tol, 1e-300)
        if total_err <= tol or lo.shape[0] >= spec.max_cells:
            break
        # split the worst cells: at least one, at most 10% of the population
        n_split = max(1, lo.shape[0] // 10)
        order = np.lexsort((np.arange(errs.size), -errs))
        split_idx = np.sort(order[:n_split])
        keep = np.ones(errs.size, dtype=bool)
        keep[split_idx] = False
        ext = _phase_extents(lo[split_idx], hi[split_idx], kappa, tr.rho_bound)
        new_lo, new_hi = _split_cells(lo[split_idx], hi[split_idx], ext.argmax(axis=1))
        nv_hi, nv_lo, ne = _evaluate_cells(f, new_lo, new_hi, tr)
        n_eval += ne
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals_hi = np.concatenate([vals_hi[keep], nv_hi])
        vals_lo = np.concatenate([vals_lo[keep], nv_lo])
        errs = np.concatenate([errs[keep], np.abs(nv_hi - nv_lo)])

    total = vals_hi.sum()
    total_err = float(errs.sum())
    converged = total_err <= max(spec.rel_tol * abs(total), spec.abs_tol, 1e-300)
    return CubatureResult(
        value=complex(total),
        error=total_err,
        converged=bool(converged),
        cells=int(lo.shape[0]),
        evaluations=int(n_eval),
    )


def integrate_ball_fourier(
    f, spec: CubatureSpec, k_out: float, directions: np.ndarray
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Evaluate int f(x) exp(-i k_out u.x) dx for many unit vectors u at once.

    The envelope ``f`` is evaluated once per node on a fixed decomposition
    (``wavenumber_hint`` must already include k_out); only the direction
    phase is recomputed per u. Returns (values, error estimates, converged):
    no adaptive refinement is attempted, so ``converged`` reports whether the
    hi/lo-rule error stayed within ``rel_tol`` for every direction.
    """
    tr = _BallTransform(spec)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    n_dir = directions.shape[0]
    lo, hi = _initial_cells(spec, tr)
    vals_hi = np.zeros(n_dir, dtype=complex)
    vals_lo = np.zeros(n_dir, dtype=complex)
    err_acc = np.zeros(n_dir)
    n_cells = lo.shape[0]
    for start in range(0, n_cells, _EVAL_CHUNK):
        sl = slice(start, min(start + _EVAL_CHUNK, n_cells))
        xyz, jac, vol = _cell_geometry(lo[sl], hi[sl], tr)
        fv = np.asarray(f(xyz.reshape(-1, 3))).reshape(jac.shape)
        integ = fv * jac  # (C, nodes)
        for idx in range(n_dir):
            phase = np.exp(
                (-1j * k_out) * (xyz @ directions[idx])
            )  # (C, nodes)
            cells_hi = vol * ((integ[:, :_N_HI] * phase[:, :_N_HI]) @ _WEIGHTS_HI)
            cells_lo = vol * ((integ[:, _N_HI:] * phase[:, _N_HI:]) @ _WEIGHTS_LO)
            vals_hi[idx] += cells_hi.sum()
            vals_lo[idx] += cells_lo.sum()
            err_acc[idx] += np.abs(cells_hi - cells_lo).sum()
    # amplitudes span many orders across directions: errors are judged
    # against the largest amplitude (plus any caller-supplied abs floor)
    scale = max(float(np.max(np.abs(vals_hi))), 1e-300)
    converged = bool(np.all(err_acc <= max(spec.rel_tol * scale, spec.abs_tol)))
    return vals_hi, err_acc, converged
