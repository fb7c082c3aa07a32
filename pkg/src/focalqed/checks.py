"""
Self-check suite: every module invariant evaluated once, with the measured
deviation next to its tolerance.  Used by ``focalqed check``.
"""
from __future__ import annotations

import math
import time
import warnings

import numpy as np
from scipy.special import spherical_jn

from . import __version__
from .mirror1d import gamma_1d, shift_1d
from .modefield import (FOCUS, AngularGrid, DipoleOrientation, Displacement,
                        MirrorGeometry, cap_factor, density_scan, make_grid,
                        vacuum_density)
from .observables import (BARIUM_CLAIMED_HZ, BARIUM_EXAMPLE, BARIUM_NOTE,
                          CasimirParams, casimir_decomposition,
                          casimir_physical, casimir_polder_shift,
                          casimir_scaling, decay_rate, excited_shift,
                          lamb_direct, loglog_slope, plane_mirror_shift)
from .partialwave import (PartialWaveSet, addition_sum, flux_balance,
                          oracle_density, parity_integral, parity_residual,
                          parity_sum)
from .specfun import sph_bessel_j_all

SEED = 20240611


def _random_set(rng, l_max, parity=None):
    n = (l_max + 1) ** 2
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    if parity is not None:
        l = np.floor(np.sqrt(np.arange(n))).astype(int)
        c[l % 2 != (0 if parity == "even" else 1)] = 0.0
    return PartialWaveSet(l_max, c)


def check_bessel():
    x = np.array([0.1, 1.0, 7.5, 40.0, 200.0])
    dev = 0.0
    for xi in x:
        ours = sph_bessel_j_all(300, xi)
        ref = spherical_jn(np.arange(301), xi)
        scale = np.maximum(np.abs(ref), 1e-300)
        ok = np.abs(ref) > 1e-280
        dev = max(dev, float(np.max(np.abs(ours[ok] - ref[ok]) / scale[ok])))
    return dev, 1e-10


def check_free_space():
    rng = np.random.default_rng(SEED)
    grid = make_grid(64, 128)
    dev = 0.0
    for _ in range(20):
        d = DipoleOrientation.along(rng.normal(size=3))
        r = rng.normal(size=3)
        r = Displacement(tuple(r / np.linalg.norm(r) * rng.uniform(0, 5)))
        dev = max(dev, abs(vacuum_density(1.0, r, MirrorGeometry(rng.uniform(1, 100), rho=0.0), d, grid) - 1.0))
    return dev, 1e-10


def check_1d_limits():
    n = np.arange(1, 50)
    dev = max(np.max(np.abs(gamma_1d(n * math.pi))), np.max(np.abs(gamma_1d(math.pi / 2) - 2)),
              np.max(np.abs(shift_1d(n * math.pi / 2))))
    return float(dev), 1e-12


def check_addition_sum():
    return max(abs(addition_sum(kr, int(kr) + 40) - 2 / 3) for kr in (0.1, 1, 5, 20, 40)), 1e-10


def check_parity_split():
    dev = 0.0
    for kr in (0.1, 1, 5, 20, 40):
        lm = int(kr) + 40
        total = addition_sum(kr, lm)
        dev = max(dev, abs(parity_sum(kr, "even", lm) + parity_sum(kr, "odd", lm) - total))
    return dev, 1e-12


def check_parity_integral():
    dev = 0.0
    for kr in (0.5, 3.0, 12.0):
        for parity in ("even", "odd"):
            dev = max(dev, abs(parity_sum(kr, parity, int(kr) + 40) - parity_integral(kr, parity)))
    return dev, 1e-10


def check_hemisphere():
    dev = 0.0
    for d in ((1, 0, 0), (0, 0, 1), (0.6, 0, 0.8)):
        d = DipoleOrientation(d)
        node, anti = MirrorGeometry(20 * math.pi), MirrorGeometry(20.5 * math.pi)
        dev = max(dev, decay_rate(FOCUS, node, d), abs(excited_shift(FOCUS, node, d)),
                  abs(decay_rate(FOCUS, anti, d) - 2.0))
    return dev, 1e-8


def check_na04():
    d = DipoleOrientation((1, 0, 0))
    node = MirrorGeometry.from_na(20 * math.pi, 0.4)
    anti = MirrorGeometry.from_na(20.5 * math.pi, 0.4)
    p2p = decay_rate(FOCUS, anti, d) - decay_rate(FOCUS, node, d)
    return abs(p2p - 2 * cap_factor(node, d)), 1e-10, {"peak_to_peak": p2p, "single_sided": cap_factor(node, d)}


def check_shift_amplitude():
    d = DipoleOrientation((0, 1, 0))
    a = 20 * math.pi + 0.37
    geom = MirrorGeometry.from_na(a, 0.7)
    s = cap_factor(geom, d)
    dev = max(abs(decay_rate(FOCUS, geom, d) - (1 - s * math.cos(2 * a))),
              abs(excited_shift(FOCUS, geom, d) - s * math.sin(2 * a)))
    return dev, 1e-10


def check_gouy():
    rng = np.random.default_rng(SEED)
    grid = AngularGrid(24, 48, cos_min=-1.0)
    return max(parity_residual(_random_set(rng, 12), grid) for _ in range(3)), 1e-10


def check_flux():
    rng = np.random.default_rng(SEED)
    grid = AngularGrid(48, 96, cos_min=-1.0)
    dev = 0.0
    a = 20 * math.pi + 0.3
    for alpha in (math.pi / 2, 0.0, math.asin(0.6)):
        for parity in ("even", "odd"):
            lhs, rhs = flux_balance(_random_set(rng, 12, parity), a, alpha, grid)
            dev = max(dev, abs(lhs - rhs) / rhs)
    return dev, 1e-8


def check_oracle():
    d = DipoleOrientation((0, 0, 1))
    dev = 0.0
    for a in (20 * math.pi, 20.5 * math.pi, 20 * math.pi + 0.4):
        geom = MirrorGeometry(a)
        for z in (-2.0, -0.7, 0.0, 0.3, 1.1, 2.0):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                o = oracle_density(geom, z, l_max=150)
            dev = max(dev, abs(o - vacuum_density(1.0, Displacement((0, 0, z)), geom, d)))
    return dev, 1e-2


def check_casimir_identity():
    rng = np.random.default_rng(SEED)
    dev = 0.0
    for _ in range(10):
        p = CasimirParams(rng.uniform(10 * math.pi, 200 * math.pi), 10 ** rng.uniform(2, 4))
        direct = lamb_direct(p)
        dev = max(dev, abs(math.fsum(casimir_decomposition(p, verify=False)) - direct) / abs(direct))
    return dev, 1e-6


def check_cutoff_independence():
    a = 50 * math.pi
    return abs(casimir_decomposition(CasimirParams(a, 1e3), verify=False).delta_cp
               - casimir_decomposition(CasimirParams(a, 2e3), verify=False).delta_cp), 1e-6


def check_scaling():
    a = math.pi * np.array([10, 20, 50, 100, 200, 500, 1000])
    slope = casimir_scaling(a)
    plane = loglog_slope(a, plane_mirror_shift(a))
    return max(abs(slope + 2.0), abs(plane + 4.0)), 0.05, {"slope_delta_cp": slope, "slope_plane_mirror": plane}


def check_barium():
    hz = casimir_physical(*BARIUM_EXAMPLE.values())
    a = 2 * math.pi * BARIUM_EXAMPLE["radius_m"] / (BARIUM_EXAMPLE["lambda_nm"] * 1e-9)
    ref = BARIUM_EXAMPLE["gamma_hz"] * float(casimir_polder_shift(a))
    return abs(hz - ref) / ref, 1e-12, {"shift_hz": hz, "claimed_hz": BARIUM_CLAIMED_HZ, "note": BARIUM_NOTE}


def check_fig3_volume():
    geom = MirrorGeometry(20 * math.pi)
    d = DipoleOrientation((1, 0, 0))
    worst = 0.0
    for direction in ("axial", "transverse"):
        scan = density_scan(geom, d, direction, 0.05, 6)
        worst = max(worst, float(np.max(scan[:, 1])))
    return worst, 0.1


CHECKS = {
    "bessel_vs_scipy": check_bessel,
    "free_space_recovery": check_free_space,
    "mirror1d_limits": check_1d_limits,
    "addition_sum_two_thirds": check_addition_sum,
    "parity_split_sum": check_parity_split,
    "parity_split_integral": check_parity_integral,
    "hemisphere_node_antinode": check_hemisphere,
    "na04_modulation_vs_cap_closed_form": check_na04,
    "focus_affine_structure": check_shift_amplitude,
    "gouy_parity_relation": check_gouy,
    "lossless_flux_identity": check_flux,
    "oracle_vs_angular_integral": check_oracle,
    "casimir_decomposition_identity": check_casimir_identity,
    "casimir_cutoff_independence": check_cutoff_independence,
    "casimir_scaling_slopes": check_scaling,
    "barium_emission": check_barium,
    "node_volume_suppression": check_fig3_volume,
}


def run_check(verbosity=0, names=None):
    """Run the suite; returns a JSON-serializable report."""
    results = []
    for name, fn in CHECKS.items():
        if names and name not in names:
            continue
        t0 = time.perf_counter()
        entry = {"name": name}
        try:
            out = fn()
            measured, tol = float(out[0]), float(out[1])
            entry.update(measured=measured, tolerance=tol, passed=bool(measured <= tol))
            if len(out) > 2:
                entry["details"] = out[2]
        except Exception as exc:  # reported, not raised
            entry.update(passed=False, error=f"{type(exc).__name__}: {exc}")
        if verbosity:
            entry["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(entry)
    return {"artifact": "focalqed", "version": __version__,
            "passed": all(r["passed"] for r in results), "checks": results}
