"""
Special functions: spherical Bessel/Hankel functions, associated Legendre
functions, spherical harmonics, vector multipole fields and the cosine/sine
integrals.

Spherical harmonics follow the Condon-Shortley phase convention,

    Y_lm(theta, phi) = N_lm P_l^m(cos theta) exp(i m phi),
    Y_l,-m = (-1)^m conj(Y_lm).

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

L_MAX_SUPPORTED = 500


class MultipoleKind(enum.Enum):
    TM = "TM"
    TE = "TE"


@dataclass(frozen=True)
class SphericalIndex:
    l: int
    m: int = 0

    def __post_init__(self):
        if self.l < 0:
            raise ValueError(f"l must be nonnegative, got {self.l}")
        if abs(self.m) > self.l:
            raise IndexError(f"|m| > l for (l={self.l}, m={self.m})")


def _check_order(l):
    if int(l) != l or l < 0:
        raise ValueError(f"order must be a nonnegative integer, got {l}")
    if l > L_MAX_SUPPORTED:
        raise ValueError(f"order {l} exceeds supported maximum {L_MAX_SUPPORTED}")
    return int(l)


def _check_index(l, m):
    l = _check_order(l)
    if int(m) != m or abs(m) > l:
        raise IndexError(f"invalid (l, m) = ({l}, {m}); need |m| <= l")
    return l, int(m)


# ---------------------------------------------------------------------------
# spherical Bessel functions

def sph_bessel_j_all(lmax, x):
    """j_l(x) for every l = 0..lmax.

    Forward recurrence is used for l <= x, where it is stable; above the
    turning point the ratios j_l/j_{l-1} come from a backward (Miller)
    continued-fraction recurrence and are chained up from the last forward
    value.

    Parameters
    ----------
    lmax : int
    x : float or ndarray, must be >= 0

    Returns
    -------
    ndarray of shape (lmax + 1,) + shape(x)
    """
    lmax = _check_order(lmax)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(~np.isfinite(x)):
        raise ValueError("sph_bessel_j requires finite x >= 0")
    shape = x.shape
    x = np.atleast_1d(x).ravel()
    out = np.zeros((lmax + 1, x.size))

    zero = x == 0.0
    xs = np.where(zero, 1.0, x)

    fwd = np.empty_like(out)
    with np.errstate(over="ignore", invalid="ignore"):
        fwd[0] = np.sin(xs) / xs
        if lmax >= 1:
            fwd[1] = np.sin(xs) / xs**2 - np.cos(xs) / xs
        for l in range(1, lmax):
            fwd[l + 1] = (2 * l + 1) / xs * fwd[l] - fwd[l - 1]

    # ratio r_l = j_l / j_{l-1}, from 1/r_l = (2l+1)/x - r_{l+1}
    nstart = max(lmax, int(np.max(xs))) + 60
    nstart += int(2 * np.max(xs) ** (1.0 / 3.0))
    ratio = np.zeros_like(out)
    r = np.zeros_like(xs)
    for l in range(nstart, 0, -1):
        r = xs / ((2 * l + 1) - xs * r)
        if l <= lmax:
            ratio[l] = r

    lstar = np.floor(xs)
    out[0] = fwd[0]
    for l in range(1, lmax + 1):
        out[l] = np.where(l <= lstar, fwd[l], out[l - 1] * ratio[l])

    out[:, zero] = 0.0
    out[0, zero] = 1.0
    return out.reshape((lmax + 1,) + shape)


def sph_bessel_j(l, x):
    """Spherical Bessel function of the first kind, j_l(x), for x >= 0."""
    l = _check_order(l)
    return sph_bessel_j_all(l, x)[l]


def sph_bessel_y_all(lmax, x):
    """y_l(x) for l = 0..lmax by forward recurrence (stable for y)."""
    lmax = _check_order(lmax)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("sph_bessel_y requires x > 0")
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = -np.cos(x) / x
    if lmax >= 1:
        out[1] = -np.cos(x) / x**2 - np.sin(x) / x
    with np.errstate(over="ignore"):
        for l in range(1, lmax):
            out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    return out


def sph_bessel_y(l, x):
    l = _check_order(l)
    return sph_bessel_y_all(l, x)[l]


def sph_hankel1(l, x):
    """Spherical Hankel function h_l^(1)(x) = j_l(x) + i y_l(x), x > 0."""
    l = _check_order(l)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("sph_hankel1 is singular at x = 0; need x > 0")
    return sph_bessel_j(l, x) + 1j * sph_bessel_y(l, x)


def riccati_derivative_all(lmax, x, radial="regular"):
    """(1/x) d/dx [x f_l(x)] = f_{l-1}(x) - l f_l(x) / x for l = 0..lmax.

    `radial` selects f = j ("regular") or f = h^(1) ("outgoing").
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("riccati derivative needs x > 0")
    f = _radial_all(lmax + 1, x, radial)
    out = np.empty((lmax + 1,) + x.shape, dtype=f.dtype)
    # l = 0 has no f_{-1} term: (x j_0)' = cos x, (x h_0)' = e^{ix}
    if radial == "regular":
        out[0] = np.cos(x) / x
    else:
        out[0] = np.exp(1j * x) / x
    ls = np.arange(1, lmax + 1).reshape((-1,) + (1,) * x.ndim)
    out[1:] = f[:-2] - ls * f[1:-1] / x
    return out


def _radial_all(lmax, x, radial):
    if radial == "regular":
        return sph_bessel_j_all(lmax, x)
    if radial == "outgoing":
        return sph_bessel_j_all(lmax, x) + 1j * sph_bessel_y_all(lmax, x)
    raise ValueError(f"radial must be 'regular' or 'outgoing', got {radial!r}")


# ---------------------------------------------------------------------------
# Legendre functions and spherical harmonics

def legendre_normalized_all(lmax, m, u, over_sin=False):
    """N_lm P_l^m(u) for l = |m|..lmax (rows l < |m| are zero), m >= 0.

    N_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), Condon-Shortley phase included.
    The three-term recurrence is run on the normalized functions so it stays
    finite up to l = 500.  With ``over_sin`` the result is divided by
    sqrt(1 - u^2) (m >= 1 only), which stays finite on the poles.
    """
    if m < 0:
        raise ValueError("legendre_normalized_all takes m >= 0")
    u = np.asarray(u, dtype=float)
    out = np.zeros((lmax + 1,) + u.shape)
    if m > lmax:
        return out
    s = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    if over_sin and m < 1:
        raise ValueError("over_sin needs m >= 1")
    pmm = np.full(u.shape, 1.0 / math.sqrt(4.0 * math.pi))
    for k in range(1, m + 1):
        fac = 1.0 if (over_sin and k == 1) else s
        pmm = -math.sqrt((2 * k + 1) / (2.0 * k)) * fac * pmm
    out[m] = pmm
    if m + 1 <= lmax:
        out[m + 1] = math.sqrt(2 * m + 3) * u * pmm
    for l in range(m + 2, lmax + 1):
        a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = math.sqrt(((l - 1) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1.0))
        out[l] = a * (u * out[l - 1] - b * out[l - 2])
    return out


def _norm_factor(l, m):
    # N_lm for m >= 0, via log-gamma to survive l ~ 500
    return math.exp(0.5 * (math.log((2 * l + 1) / (4 * math.pi))
                           + math.lgamma(l - m + 1) - math.lgamma(l + m + 1)))


def assoc_legendre(l, m, u):
    """Associated Legendre function P_l^m(u), Condon-Shortley phase.

    Negative m uses P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
    """
    l, m = _check_index(l, m)
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) > 1.0):
        raise ValueError("assoc_legendre needs u in [-1, 1]")
    am = abs(m)
    p = legendre_normalized_all(l, am, u)[l] / _norm_factor(l, am)
    if m < 0:
        p = p * (-1) ** am * math.exp(math.lgamma(l - am + 1) - math.lgamma(l + am + 1))
    return p


def sph_harm(l, m, theta, phi):
    """Orthonormal spherical harmonic Y_lm(theta, phi)."""
    l, m = _check_index(l, m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    y = legendre_normalized_all(l, am, np.cos(theta))[l] * np.exp(1j * am * phi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


def sph_harm_dtheta(l, m, theta, phi):
    """d Y_lm / d theta, from
    dY_lm/dtheta = m cot(theta) Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_l,m+1.

    Evaluated through the equivalent form that is regular on the poles,
    dY_lm/dtheta = (1/2)[sqrt((l-m)(l+m+1)) e^{-i phi} Y_l,m+1
                        - sqrt((l+m)(l-m+1)) e^{i phi} Y_l,m-1].
    """
    l, m = _check_index(l, m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
    if m + 1 <= l:
        out = out + 0.5 * math.sqrt((l - m) * (l + m + 1)) * np.exp(-1j * phi) * sph_harm(l, m + 1, theta, phi)
    if m - 1 >= -l:
        out = out - 0.5 * math.sqrt((l + m) * (l - m + 1)) * np.exp(1j * phi) * sph_harm(l, m - 1, theta, phi)
    return out


def vector_harmonic(l, m, theta, phi):
    """Tangential components (X_theta, X_phi) of X_lm = L Y_lm / sqrt(l(l+1)).

    X_theta = -m Y_lm / (sqrt(l(l+1)) sin theta), X_phi = -i dY_lm/dtheta / sqrt(l(l+1)).
    """
    l, m = _check_index(l, m)
    if l == 0:
        raise ValueError("vector harmonics need l >= 1")
    theta = np.asarray(theta, dtype=float)
    norm = math.sqrt(l * (l + 1))
    x_phi = -1j * sph_harm_dtheta(l, m, theta, phi) / norm
    x_theta = -m * _y_over_sin(l, m, theta, phi) / norm
    return x_theta, x_phi


def _y_over_sin(l, m, theta, phi):
    # Y_lm / sin(theta), regular on the poles; only ever multiplied by m
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    if m == 0:
        return np.zeros(theta.shape, dtype=complex)
    am = abs(m)
    y = legendre_normalized_all(l, am, np.cos(theta), over_sin=True)[l] * np.exp(1j * am * phi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


# ---------------------------------------------------------------------------
# vector multipole fields

def multipole_field(kind, idx, radial, k, r, theta, phi):
    """Electric field of a (TM or TE) multipole in spherical components.

    TM: e = g_l(kr) X_lm (purely tangential).
    TE: e = -(1/k) curl(f_l(kr) X_lm), i.e.

        e_r     = -i sqrt(l(l+1)) f_l Y_lm / (kr)
        e_theta = -i [(1/kr) d/dr (r f_l)] dY_lm/dtheta / sqrt(l(l+1))
        e_phi   =  m [(1/kr) d/dr (r f_l)] Y_lm / (sin(theta) sqrt(l(l+1)))

    The overall phase is fixed by e_r = -i sqrt(l(l+1)) f Y / kr; the
    tangential parts then follow from div e = 0.

    Parameters
    ----------
    kind : MultipoleKind
    idx : SphericalIndex with l >= 1
    radial : "regular" (j_l) or "outgoing" (h_l^(1))
    k : float, wavenumber
    r, theta, phi : float or ndarray, r > 0

    Returns
    -------
    ndarray of shape (3,) + broadcast shape, components (e_r, e_theta, e_phi)
    """
    kind = MultipoleKind(kind)
    l, m = idx.l, idx.m
    if l < 1:
        raise ValueError("vector multipoles have no l = 0 mode")
    r, theta, phi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, theta, phi)))
    if np.any(r <= 0):
        raise ValueError("multipole_field rejects r <= 0; take the small-argument limit in the caller")
    x = k * r
    f = _radial_all(l, x, radial)[l]
    norm = math.sqrt(l * (l + 1))
    y = sph_harm(l, m, theta, phi)
    dy = sph_harm_dtheta(l, m, theta, phi)
    out = np.zeros((3,) + r.shape, dtype=complex)
    if kind is MultipoleKind.TM:
        out[1] = -m * f * _y_over_sin(l, m, theta, phi) / norm
        out[2] = -1j * f * dy / norm
    else:
        dr = riccati_derivative_all(l, x, radial)[l]
        out[0] = -1j * norm * f * y / x
        out[1] = -1j * dr * dy / norm
        out[2] = m * dr * _y_over_sin(l, m, theta, phi) / norm
    return out


# ---------------------------------------------------------------------------
# cosine / sine integrals

def sin_int(x):
    """Si(x) = int_0^x sin(t)/t dt."""
    x = np.asarray(x, dtype=float)
    return sici(x)[0]


def cos_int(x):
    """Ci(x) = gamma + log(x) + int_0^x (cos t - 1)/t dt, x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("cos_int is defined for x > 0 only")
    return sici(x)[1]


def aux_g(z):
    """Auxiliary function g(z) = -Ci(z) cos z + (pi/2 - Si(z)) sin z.

    Positive and decreasing for z > 0, with g(z) ~ 1/z^2 for large z.
    For z > 64 the asymptotic series (error below e^-z) replaces the
    cancelling combination of Ci and Si.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("aux_g needs z > 0")
    out = np.empty_like(z)
    small = z <= 64.0
    if np.any(small):
        zs = z[small]
        si, ci = sici(zs)
        out[small] = -ci * np.cos(zs) + (0.5 * np.pi - si) * np.sin(zs)
    if np.any(~small):
        zl = z[~small]
        # g(z) ~ sum_k (-1)^k (2k+1)! / z^(2k+2), truncated at its smallest term
        inv2 = 1.0 / (zl * zl)
        term = inv2.copy()
        total = term.copy()
        for k in range(1, 40):
            nxt = -term * (2 * k) * (2 * k + 1) * inv2
            if np.all(np.abs(nxt) >= np.abs(term)):
                break
            term = np.where(np.abs(nxt) < np.abs(term), nxt, 0.0)
            total = total + term
        out[~small] = total
    return out
