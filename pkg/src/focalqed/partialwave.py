"""
Partial-wave (spherical mode) description of the field near the focus.

Coefficients b_lm of the incoming free-space vacuum modes are mapped onto
the coefficients c_lm of the field inside the mirror sphere.  Because the
hemisphere breaks parity, the map couples l values of opposite parity
through the hemisphere overlap integrals I_{l',l,m}.

The module also carries the brute-force mode-sum density used to check
the closed-form angular integrals in `modefield`.
"""
from __future__ import annotations

import functools
import math
import warnings
from typing import NamedTuple

import numpy as np

from .specfun import legendre_normalized_all, sph_bessel_j_all

TAIL_TOLERANCE = 1e-10


class TruncationWarning(UserWarning):
    """Partial-wave sum truncated before its terms became negligible."""


class PartialWaveSet:
    """Dense complex coefficients indexed by (l, m), 0 <= l <= l_max, |m| <= l.

    Storage is flat with index l*l + l + m, so there are exactly
    (l_max + 1)**2 entries.  Instances are read-only.
    """

    def __init__(self, l_max, coeffs=None):
        if int(l_max) != l_max or l_max < 1:
            raise ValueError(f"l_max must be a positive integer, got {l_max}")
        self.l_max = int(l_max)
        n = (self.l_max + 1) ** 2
        if coeffs is None:
            data = np.zeros(n, dtype=complex)
        else:
            data = np.array(coeffs, dtype=complex).ravel()
            if data.size != n:
                raise ValueError(f"expected {n} coefficients for l_max = {l_max}, got {data.size}")
        data.setflags(write=False)
        self._c = data

    @staticmethod
    def index(l, m):
        return l * l + l + m

    def _check(self, l, m):
        if not (0 <= l <= self.l_max) or abs(m) > l:
            raise IndexError(f"(l, m) = ({l}, {m}) outside l_max = {self.l_max}")

    def __getitem__(self, lm):
        l, m = lm
        self._check(l, m)
        return self._c[self.index(l, m)]

    @property
    def coeffs(self):
        return self._c

    def sector(self, m):
        """Coefficients b_{l,m} for l = 0..l_max (zero where l < |m|)."""
        out = np.zeros(self.l_max + 1, dtype=complex)
        for l in range(abs(m), self.l_max + 1):
            out[l] = self._c[self.index(l, m)]
        return out

    @classmethod
    def from_sectors(cls, l_max, sectors):
        data = np.zeros((l_max + 1) ** 2, dtype=complex)
        for m, vals in sectors.items():
            for l in range(abs(m), l_max + 1):
                data[cls.index(l, m)] = vals[l]
        return cls(l_max, data)

    @classmethod
    def unit(cls, l_max, l, m=0):
        data = np.zeros((l_max + 1) ** 2, dtype=complex)
        obj = cls(l_max, data)
        obj._check(l, m)
        data[cls.index(l, m)] = 1.0
        return cls(l_max, data)

    def __repr__(self):
        return f"PartialWaveSet(l_max={self.l_max})"


# ---------------------------------------------------------------------------
# free-space addition sums

def _sum_terms(kr, l_max):
    if kr <= 0:
        raise ValueError("kr must be positive")
    if int(l_max) != l_max or l_max < 1:
        raise ValueError("l_max must be a positive integer")
    l = np.arange(int(l_max) + 1)
    j = sph_bessel_j_all(int(l_max) + 1, kr)
    terms = l * (l + 1) * (2 * l + 1) * (j[:-1] / kr) ** 2
    # first omitted term is a tail estimate; the terms fall off faster than
    # geometrically once l > kr
    tail = (l_max + 1) * (l_max + 2) * (2 * l_max + 3) * (j[-1] / kr) ** 2
    if tail > TAIL_TOLERANCE:
        warnings.warn(f"partial-wave sum at kr = {kr} truncated at l_max = {l_max}; "
                      f"tail estimate {tail:.2e}", TruncationWarning, stacklevel=3)
    return l, terms


def addition_sum(kr, l_max):
    """sum_{l=1}^{l_max} l(l+1)(2l+1) j_l(kr)^2 / (kr)^2, which tends to 2/3."""
    _, terms = _sum_terms(kr, l_max)
    return float(math.fsum(terms[1:]))


def parity_sum(kr, parity, l_max):
    """The even-l or odd-l part of `addition_sum`."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    l, terms = _sum_terms(kr, l_max)
    want = 0 if parity == "even" else 1
    sel = (l % 2 == want) & (l >= 1)
    return float(math.fsum(terms[sel]))


def parity_integral(kr, parity, n=None):
    """Angular-integral form of `parity_sum`:

        odd  l:  int_0^{pi/2} sin^3(t) cos^2(kr cos t) dt
        even l:  int_0^{pi/2} sin^3(t) sin^2(kr cos t) dt

    Unit prefactor; as kr -> 0 the odd branch tends to 2/3 (only l = 1
    survives) and the even branch to 0.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    n = n or int(2 * kr) + 40
    x, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (x + 1.0)
    w = 0.5 * w
    trig = np.cos if parity == "odd" else np.sin
    # dt sin^3 t = du (1 - u^2) with u = cos t
    return float(np.sum(w * (1.0 - u * u) * trig(kr * u) ** 2))


# ---------------------------------------------------------------------------
# hemisphere overlaps

@functools.lru_cache(maxsize=64)
def _overlap_matrix(l_max, m, order):
    # J[l', l] = int_{upper hemisphere} Y_lm conj(Y_l'm) dOmega
    x, w = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (x + 1.0)
    w = 0.5 * w
    p = legendre_normalized_all(l_max, abs(m), u)
    mat = 2.0 * math.pi * (p * w) @ p.T
    mat.setflags(write=False)
    return mat


def overlap_matrix(l_max, m):
    """Raw hemisphere overlaps J[l', l] = int_hemi Y_lm conj(Y_l'm) dOmega,
    for l, l' = 0..l_max (zero where l < |m|).  Gauss-Legendre in cos(theta)
    of order 2 l_max + 8; the phi integral is done analytically."""
    return _overlap_matrix(int(l_max), abs(int(m)), 2 * int(l_max) + 8)


def _parity_sign(l_prime, l):
    # (-1)^((l + l' + 1) / 2), defined for l + l' odd
    return -1.0 if ((l + l_prime + 1) // 2) % 2 else 1.0


def overlap_sign_matrix(l_max):
    l = np.arange(l_max + 1)
    s = l[:, None] + l[None, :]
    odd = s % 2 == 1
    sign = np.where(((s + 1) // 2) % 2 == 1, -1.0, 1.0)
    return np.where(odd, sign, 0.0)


def hemisphere_overlap(l_prime, l, m, order=None):
    """int_hemi Y_lm conj(Y_l'm) dOmega over theta in [0, pi/2]."""
    if abs(m) > min(l, l_prime):
        raise IndexError("need |m| <= min(l, l')")
    lm = max(l, l_prime)
    order = order or 2 * lm + 8
    return float(_overlap_matrix(lm, abs(m), order)[l_prime, l])


def overlap_I(l_prime, l, m, order=None):
    """I_{l',l,m} = (-1)^((l+l'+1)/2) int_hemi Y_lm conj(Y_l'm) dOmega, l + l' odd."""
    if (l + l_prime) % 2 == 0:
        raise ValueError("I_{l',l,m} is only defined for l + l' odd")
    return _parity_sign(l_prime, l) * hemisphere_overlap(l_prime, l, m, order)


def hemisphere_map_matrix(l_max, m, a):
    """Matrix M with c_{l',m} = sum_l M[l', l] b_{l,m} for the full hemisphere.

        even l':  c = e^{ia} cos(a) (b_{l'} - 2i sum_{odd l}  b_l I_{l',l,m})
        odd  l':  c = i e^{ia} sin(a) (b_{l'} + 2i sum_{even l} b_l I_{l',l,m})

    The cross terms carry the factor 2 that comes from projecting the
    reflected pattern, which lives on one hemisphere only, back onto the
    full-sphere harmonics.
    """
    cross = overlap_sign_matrix(l_max) * overlap_matrix(l_max, m)
    l = np.arange(l_max + 1)
    even = l % 2 == 0
    pref = np.where(even, np.exp(1j * a) * math.cos(a), 1j * np.exp(1j * a) * math.sin(a))
    sgn = np.where(even, -2j, 2j)
    mat = sgn[:, None] * cross
    mat[np.diag_indices(l_max + 1)] = 1.0
    mat = pref[:, None] * mat
    if m:
        mat[: abs(m), :] = 0.0
        mat[:, : abs(m)] = 0.0
    return mat


def hemisphere_map(b, a, l_max=None):
    """Map free-space vacuum amplitudes b_lm to the field coefficients c_lm
    inside a full hemispherical mirror of phase radius a = k0 R."""
    if l_max is not None and l_max != b.l_max:
        raise ValueError(f"coefficient set has l_max = {b.l_max}, map configured for {l_max}")
    sectors = {}
    for m in range(-b.l_max, b.l_max + 1):
        bm = b.sector(m)
        if not np.any(bm):
            sectors[m] = bm
            continue
        sectors[m] = hemisphere_map_matrix(b.l_max, m, a) @ bm
    return PartialWaveSet.from_sectors(b.l_max, sectors)


# ---------------------------------------------------------------------------
# plane-wave (far-field) amplitudes

def _series(b, parity, theta, phi):
    # sum over l of the given parity of b_lm i^l Y_lm(theta, phi)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    u = np.cos(theta)
    l = np.arange(b.l_max + 1)
    keep = (l % 2 == 0) if parity == "even" else (l % 2 == 1)
    phase = (1j) ** l * keep
    out = np.zeros(theta.shape, dtype=complex)
    for am in range(b.l_max + 1):
        p = legendre_normalized_all(b.l_max, am, u)
        for m in ((am,) if am == 0 else (am, -am)):
            coef = b.sector(m) * phase
            if not np.any(coef):
                continue
            radial = np.tensordot(coef, p, axes=(0, 0))
            if m < 0:
                radial = radial * (-1) ** am
            out += radial * np.exp(1j * m * phi)
    return out


class ScatteringAmplitudes(NamedTuple):
    f_even: np.ndarray
    f_odd: np.ndarray
    f_in: np.ndarray
    f_out: np.ndarray


def amplitudes_at(b, theta, phi):
    f_e = _series(b, "even", theta, phi)
    f_o = _series(b, "odd", theta, phi)
    return ScatteringAmplitudes(f_e, f_o, 0.5j * (f_o - f_e), 0.5j * (f_o + f_e))


def parity_amplitudes(b, grid):
    """Even/odd and incoming/outgoing far-field amplitudes on the grid nodes.

    f^{e/o}(Omega) = sum_{m, even/odd l} b_lm i^l Y_lm(Omega),
    f_in = (i/2)(f_o - f_e), f_out = (i/2)(f_o + f_e).
    """
    theta, phi = grid.nodes
    return amplitudes_at(b, theta, phi)


def antipodal_nodes(grid):
    theta, phi = grid.nodes
    return math.pi - theta, np.mod(phi + math.pi, 2.0 * math.pi)


def parity_residual(b, grid):
    """max over the grid of |f_out(Omega) + f_in(-Omega)|; zero by the Gouy relation."""
    here = parity_amplitudes(b, grid)
    there = amplitudes_at(b, *antipodal_nodes(grid))
    return float(np.max(np.abs(here.f_out + there.f_in)))


def transmission_pattern(theta, alpha):
    """T(theta): 0 on the mirror cap theta < alpha, 1 on the open part."""
    return np.where(np.asarray(theta) < alpha, 0.0, 1.0)


def region_amplitudes(b, a, alpha, grid):
    """Far-field amplitudes g^{e/o} inside the mirror, from the incoming f_in:

        g_o = i [T (1 - P) + 2i (1 - T) e^{ia} sin a] f_in
        g_e = i [T (1 + P) - 2 (1 - T) e^{ia} cos a] f_in

    with (P f)(Omega) = -f(-Omega).  alpha = 0 means no mirror.
    Returns (g_even, g_odd, f_in) on the grid nodes.
    """
    theta, _ = grid.nodes
    t = transmission_pattern(theta, alpha)
    f_in = parity_amplitudes(b, grid).f_in
    p_f_in = -amplitudes_at(b, *antipodal_nodes(grid)).f_in
    g_o = 1j * (t * (f_in - p_f_in) + 2j * (1 - t) * np.exp(1j * a) * math.sin(a) * f_in)
    g_e = 1j * (t * (f_in + p_f_in) - 2 * (1 - t) * np.exp(1j * a) * math.cos(a) * f_in)
    return g_e, g_o, f_in


def flux_balance(b, a, alpha, grid):
    """(int_hemi |g_e|^2 + |g_o|^2, 4 int_hemi |f_in|^2) for one coefficient set."""
    g_e, g_o, f_in = region_amplitudes(b, a, alpha, grid)
    lhs = grid.integrate(np.abs(g_e) ** 2 + np.abs(g_o) ** 2)
    rhs = 4.0 * grid.integrate(np.abs(f_in) ** 2)
    return float(lhs), float(rhs)


# ---------------------------------------------------------------------------
# brute-force mode-sum density

def default_l_max(kr_max):
    return int(math.ceil(kr_max)) + 40


def _radial_field_on_axis(l_max, z):
    """e_r of unit-coefficient TE modes (l, m = 0) at the point z (wavelengths)
    on the axis, l = 0..l_max.  The l = 0 row is zero (no vector monopole)."""
    kr = 2.0 * math.pi * abs(z)
    l = np.arange(l_max + 1)
    # Y_l0 on the axis: sqrt((2l+1)/4pi) at theta = 0, times (-1)^l at theta = pi
    y = np.sqrt((2 * l + 1) / (4 * math.pi)) * (np.where(l % 2, -1.0, 1.0) if z < 0 else 1.0)
    if kr == 0.0:
        j_over = np.zeros(l_max + 1)
        j_over[1] = 1.0 / 3.0
    else:
        j_over = sph_bessel_j_all(l_max, kr) / kr
    return -1j * np.sqrt(l * (l + 1)) * j_over * y


def oracle_density(geom, z, l_max=None, k_over_k0=1.0):
    """Vacuum density for a radial dipole on the mirror axis, by mode sum.

    Every unit vacuum mode b is pushed through `hemisphere_map`, the radial
    field of the resulting TE coefficients is evaluated on the axis, and the
    squared magnitudes are summed and divided by the same sum without the
    mirror.

    Only TE modes with m = 0 have a radial field on the axis.  Their
    tangential far-field pattern n x X_l0 is proportional to
    dY_l0/dtheta = sqrt(l(l+1)) e^{-i phi} Y_l1, so their hemisphere
    overlaps are those of the scalar m = 1 sector; this also removes l = 0
    automatically.

    Parameters
    ----------
    geom : MirrorGeometry with alpha = pi/2 and rho = 1, or None for free space
    z : float
        Signed displacement along the axis in wavelengths, in the same
        convention as `modefield.vacuum_density` (Displacement((0, 0, z))).
    l_max : int, optional
        Mode cutoff; defaults to ceil(k0 |z|) + 40.
    """
    if geom is not None:
        if abs(geom.alpha - math.pi / 2) > 1e-12:
            raise ValueError("the mode-sum oracle covers the full hemisphere only")
        if geom.rho != 1.0:
            raise ValueError("the mode-sum oracle covers a perfect mirror only")
    kz = 2.0 * math.pi * k_over_k0 * z
    if l_max is None:
        l_max = default_l_max(abs(kz))
    if l_max < abs(kz) + 40:
        warnings.warn(f"l_max = {l_max} is below k|z| + 40 = {abs(kz) + 40:.1f}",
                      TruncationWarning, stacklevel=2)
    # the overlaps integrate over theta < pi/2, which is where the mirror sits
    # in this picture; modefield puts the vertex on -z instead
    field = _radial_field_on_axis(l_max, -z * k_over_k0)
    free = float(np.sum(np.abs(field) ** 2))
    if geom is None:
        mat = np.eye(l_max + 1)
        mat[0, 0] = 0.0
    else:
        mat = hemisphere_map_matrix(l_max, 1, k_over_k0 * geom.a)
    # column l0 holds c for the unit vacuum mode b = e_{l0}
    total = np.sum(np.abs(field @ mat) ** 2)
    return float(total / free)
