"""One-dimensional mirror model.

The atom sits at z = 0 in front of a perfect mirror at z = -R and couples
only to the standing-wave modes along the mirror axis.  All outputs are
ratios to the free-space 1D decay rate, so the quantization length and the
beam cross-section never appear.
"""
import math

import numpy as np


def _check_phase(a):
    a = np.asarray(a, dtype=float)
    if np.any(a < 0) or np.any(~np.isfinite(a)):
        raise ValueError("phase distance a = k0 R must be finite and >= 0")
    return a


def phase_from_wavelengths(r_over_lambda):
    """a = k0 R = 2 pi R / lambda."""
    return 2.0 * math.pi * np.asarray(r_over_lambda, dtype=float)


def mode_intensity_1d(k_over_k0, z_in_wavelengths, a):
    """|e_k(z)|^2 normalized to unit spatial average.

    With e_k(z) proportional to exp(ikz) - exp(-2ikR) exp(-ikz) this is
    1 - cos(2(kR + kz)).  `a` is k0 R and `z_in_wavelengths` is z / lambda0.
    """
    k = np.asarray(k_over_k0, dtype=float)
    if np.any(k <= 0):
        raise ValueError("k/k0 must be positive")
    a = _check_phase(a)
    kz = k * 2.0 * math.pi * np.asarray(z_in_wavelengths, dtype=float)
    kr = k * a
    if np.any(kz < -kr - 1e-12 * np.maximum(1.0, kr)):
        raise ValueError("z lies behind the mirror (z < -R)")
    return 1.0 - np.cos(2.0 * (kr + kz))


def gamma_1d(a):
    """Decay rate at the atom, gamma / gamma_FS = 1 - cos(2 k0 R)."""
    a = _check_phase(a)
    return 1.0 - np.cos(2.0 * a)


def shift_1d(a):
    """Excited-state shift at the atom, Delta_e / gamma_FS = sin(2 k0 R)."""
    a = _check_phase(a)
    return np.sin(2.0 * a)
