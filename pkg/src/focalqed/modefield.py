"""
Vacuum-fluctuation density near the focus of a spherical mirror.

Directions are unit vectors Omega on the hemisphere theta in [0, pi/2]
(theta measured from +z, the mirror axis).  A plane wave along Omega that
belongs to the mirror cap (theta < alpha) interferes with its retro-reflected
partner, giving the normalized density

    D(k, r) = 3 int_hemi dOmega/(4 pi) [1 - (d.Omega)^2]
                  [1 - rho(theta) cos(2 (k R + k Omega.r))].

The prefactor 3 (rather than 3/2) makes D = 1 in free space for every dipole
orientation.  Positive Omega.r lengthens the round trip, i.e. the mirror
vertex lies on the -z side of the focus.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

MAX_GRID = 8192
MAX_DISPLACEMENT = 100.0  # wavelengths


class ResolutionWarning(UserWarning):
    """Angular grid too coarse for the phase oscillations being integrated."""


@dataclass(frozen=True)
class MirrorGeometry:
    """Spherical mirror seen from its focus.

    a     : phase radius k0 R (radians)
    alpha : half-aperture in (0, pi/2]; NA = sin(alpha)
    rho   : amplitude reflectivity on the cap, in [0, 1]
    """
    a: float
    alpha: float = math.pi / 2
    rho: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0):
            raise ValueError(f"a = k0 R must be finite and >= 0, got {self.a}")
        if not (0.0 < self.alpha <= math.pi / 2 + 1e-15):
            raise ValueError(f"alpha must lie in (0, pi/2], got {self.alpha}")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")

    @property
    def na(self):
        return math.sin(self.alpha)

    @classmethod
    def from_na(cls, a, na, rho=1.0):
        if not (0.0 < na <= 1.0):
            raise ValueError(f"NA must lie in (0, 1], got {na}")
        return cls(a=a, alpha=math.asin(na), rho=rho)


@dataclass(frozen=True)
class DipoleOrientation:
    d_hat: tuple

    def __post_init__(self):
        v = np.asarray(self.d_hat, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValueError("dipole orientation must be a finite 3-vector")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"dipole orientation must be a unit vector, |d| = {np.linalg.norm(v)}")
        object.__setattr__(self, "d_hat", tuple(float(c) for c in v))

    @classmethod
    def along(cls, v):
        """Normalize an arbitrary nonzero vector."""
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0 or not np.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(tuple(v / n))

    @property
    def vector(self):
        return np.asarray(self.d_hat)


@dataclass(frozen=True)
class Displacement:
    """Atom position relative to the focus, in wavelengths."""
    r: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        v = np.asarray(self.r, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValueError("displacement must be a finite 3-vector")
        if np.linalg.norm(v) > MAX_DISPLACEMENT:
            raise ValueError(f"|r| > {MAX_DISPLACEMENT} wavelengths is outside the far-field model")
        object.__setattr__(self, "r", tuple(float(c) for c in v))

    @property
    def vector(self):
        return np.asarray(self.r)

    @property
    def phase(self):
        """k0 r as a 3-vector (radians)."""
        return 2.0 * math.pi * self.vector

    @property
    def on_axis(self):
        return self.r[0] == 0.0 and self.r[1] == 0.0


FOCUS = Displacement()


@dataclass(frozen=True, eq=False)
class AngularGrid:
    """Product rule over a polar cap: Gauss-Legendre in cos(theta) times the
    trapezoid rule in phi.  Weights sum to the solid angle of the cap (2 pi
    for the hemisphere)."""
    n_theta: int
    n_phi: int
    cos_min: float = 0.0
    u: np.ndarray = field(init=False, repr=False)
    u_weights: np.ndarray = field(init=False, repr=False)
    phi: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        half = 0.5 * (1.0 - self.cos_min)
        object.__setattr__(self, "u", self.cos_min + half * (x + 1.0))
        object.__setattr__(self, "u_weights", half * w)
        object.__setattr__(self, "phi", 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi)

    @property
    def theta(self):
        return np.arccos(self.u)

    @property
    def nodes(self):
        """(theta, phi) of every node, flattened theta-major."""
        t, p = np.meshgrid(self.theta, self.phi, indexing="ij")
        return t.ravel(), p.ravel()

    @property
    def weights(self):
        return np.outer(self.u_weights, np.full(self.n_phi, 2.0 * math.pi / self.n_phi)).ravel()

    @property
    def directions(self):
        """Unit vectors of every node, shape (n_theta * n_phi, 3)."""
        s = np.sqrt(1.0 - self.u**2)
        x = np.outer(s, np.cos(self.phi)).ravel()
        y = np.outer(s, np.sin(self.phi)).ravel()
        z = np.repeat(self.u, self.n_phi)
        return np.stack([x, y, z], axis=-1)

    def cap(self, alpha):
        """Same node counts restricted to theta in [0, alpha]."""
        return AngularGrid(self.n_theta, self.n_phi, cos_min=max(0.0, math.cos(alpha)))

    def integrate(self, values):
        values = np.asarray(values)
        return np.tensordot(values, self.weights, axes=([-1], [0]))


def make_grid(n_theta, n_phi):
    """Hemisphere quadrature grid (theta in [0, pi/2])."""
    for name, n in (("n_theta", n_theta), ("n_phi", n_phi)):
        if int(n) != n or n < 8:
            raise ValueError(f"{name} must be an integer >= 8, got {n}")
        if n > MAX_GRID:
            raise ValueError(f"{name} = {n} exceeds the limit {MAX_GRID}")
    return AngularGrid(int(n_theta), int(n_phi))


DEFAULT_GRID = (160, 320)


def default_grid():
    return make_grid(*DEFAULT_GRID)


# ---------------------------------------------------------------------------

def _polarization_weight(d, dirs):
    # 1 - (d . Omega)^2
    return 1.0 - (dirs @ d) ** 2


def _axial_polarization_weight(d, u):
    # phi-average of 1 - (d . Omega)^2 at fixed cos(theta) = u
    dz2 = d[2] ** 2
    return 1.0 - dz2 * u**2 - 0.5 * (1.0 - dz2) * (1.0 - u**2)


def _check_resolution(grid, k_over_k0, r):
    need = 8.0 * k_over_k0 * np.linalg.norm(r, axis=-1).max(initial=0.0)
    need_phi = 8.0 * k_over_k0 * np.linalg.norm(r[..., :2], axis=-1).max(initial=0.0)
    if grid.n_theta < need or (need_phi > 0 and grid.n_phi < 2 * need_phi):
        warnings.warn(
            f"grid ({grid.n_theta} x {grid.n_phi}) under-resolves the phase "
            f"oscillations for k|r| up to {k_over_k0 * np.linalg.norm(r, axis=-1).max():.3g} wavelengths",
            ResolutionWarning, stacklevel=3)


def _interference(kind, k_over_k0, r, geom, dipole, grid):
    """3 int_cap dOmega/(4 pi) [1 - (d.Omega)^2] trig(2 (k R + k Omega.r)) for
    an array of displacements r (shape (n, 3), wavelengths)."""
    trig = np.cos if kind == "cos" else np.sin
    cap = grid.cap(geom.alpha)
    d = dipole.vector
    base = k_over_k0 * geom.a
    kr = 2.0 * math.pi * k_over_k0 * r
    if np.all(r[:, :2] == 0.0):
        pol = _axial_polarization_weight(d, cap.u)
        phase = 2.0 * (base + np.outer(kr[:, 2], cap.u))
        return 1.5 * (trig(phase) * pol) @ cap.u_weights
    dirs = cap.directions
    pol = _polarization_weight(d, dirs)
    w = cap.weights * pol * (3.0 / (4.0 * math.pi))
    out = np.empty(len(r))
    chunk = max(1, 2_000_000 // dirs.shape[0])
    for i in range(0, len(r), chunk):
        phase = 2.0 * (base + kr[i:i + chunk] @ dirs.T)
        out[i:i + chunk] = trig(phase) @ w
    return out


def free_density(dipole, grid):
    """3 int_hemi dOmega/(4 pi) [1 - (d.Omega)^2]; equals 1 for every d."""
    pol = _polarization_weight(dipole.vector, grid.directions)
    return 3.0 / (4.0 * math.pi) * grid.integrate(pol)


def cap_factor(geom, dipole):
    """Closed form of s = 3 int_cap dOmega/(4 pi) [1 - (d.Omega)^2].

    At the focus D = 1 - rho s cos(2 k0 R), so s is the single-sided
    modulation depth of the decay rate.
    """
    d = dipole.vector
    c = max(0.0, math.cos(geom.alpha))
    dz2 = d[2] ** 2
    perp2 = 1.0 - dz2
    cap = 1.0 - c
    z2 = (1.0 - c**3) / 3.0  # int_c^1 u^2 du
    proj = dz2 * z2 + 0.5 * perp2 * (cap - z2)
    return 1.5 * (cap - proj)


def vacuum_density_many(k_over_k0, rs, geom, dipole, grid=None):
    """vacuum_density for an array of displacements (shape (n, 3), wavelengths)."""
    grid = grid or default_grid()
    k_over_k0 = float(k_over_k0)
    if k_over_k0 <= 0:
        raise ValueError("k/k0 must be positive")
    rs = np.atleast_2d(np.asarray(rs, dtype=float))
    _check_resolution(grid, k_over_k0, rs)
    free = free_density(dipole, grid)
    if geom.rho == 0.0:
        return np.full(len(rs), free)
    return free - geom.rho * _interference("cos", k_over_k0, rs, geom, dipole, grid)


def vacuum_density(k_over_k0, r, geom, dipole, grid=None):
    """Normalized vacuum density D(k, r) seen by a linear dipole.

    Parameters
    ----------
    k_over_k0 : float
        Mode wavenumber in units of the transition wavenumber.
    r : Displacement
    geom : MirrorGeometry
    dipole : DipoleOrientation
    grid : AngularGrid, optional
        Hemisphere grid from `make_grid`; its node counts are reused on the
        mirror cap so the step in reflectivity at theta = alpha is exact.

    Returns
    -------
    float
        1 in free space, between 1 - rho s and 1 + rho s at the focus.
    """
    return float(vacuum_density_many(k_over_k0, [r.vector], geom, dipole, grid)[0])


def shift_density_many(k_over_k0, rs, geom, dipole, grid=None):
    """3 int_cap dOmega/(4 pi) [1 - (d.Omega)^2] rho sin(2 (k R + k Omega.r))."""
    grid = grid or default_grid()
    rs = np.atleast_2d(np.asarray(rs, dtype=float))
    _check_resolution(grid, float(k_over_k0), rs)
    if geom.rho == 0.0:
        return np.zeros(len(rs))
    return geom.rho * _interference("sin", float(k_over_k0), rs, geom, dipole, grid)


SCAN_DIRECTIONS = {"axial": (0.0, 0.0, 1.0), "transverse": (1.0, 0.0, 0.0)}


def density_scan(geom, dipole, direction, r_max_wavelengths, steps, grid=None):
    """Sample D(k0, r) along a ray from the focus.

    Returns an array of shape (steps, 2) holding (r in wavelengths, D).
    """
    if direction not in SCAN_DIRECTIONS:
        raise ValueError(f"direction must be one of {sorted(SCAN_DIRECTIONS)}, got {direction!r}")
    if int(steps) != steps or steps < 2:
        raise ValueError("steps must be an integer >= 2")
    if not (0 < r_max_wavelengths <= MAX_DISPLACEMENT):
        raise ValueError(f"r_max must lie in (0, {MAX_DISPLACEMENT}]")
    r = np.linspace(0.0, r_max_wavelengths, int(steps))
    rs = np.outer(r, SCAN_DIRECTIONS[direction])
    return np.column_stack([r, vacuum_density_many(1.0, rs, geom, dipole, grid)])
