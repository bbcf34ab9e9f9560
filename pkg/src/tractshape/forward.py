"""Direct problem: spectral function G, Jost function F, and pressure fields.

Everything here reduces to the regular solution evaluated at the lips.  With
phi = psi_regular, z the lip impedance, and primes denoting x-derivatives,

    G(k) = phi(k, ell) [ (r'(ell)/r(ell)) z(k) - ik ] - phi'(k, ell) z(k)

is entire in k, vanishes only at k = 0 on the axes, and its reciprocal scales
the lip pressure:

    P(k, ell) = -(i k c mu / (pi r(0) r(ell))) z(k) / G(k).

The Jost function F(k) = -i e^{ik ell} (ik phi(k, ell) - phi'(k, ell)) is the
quantity handed to the layer-stripping inversion.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from tractshape.impedance import ImpedanceModel, z_eval
from tractshape.profiles import PhysicalConstants, RadiusProfile, endpoint_data
from tractshape.waves import (
    g_solution,
    regular_at_lips,
    regular_solution,
    sine_solution,
    wronskian,
)

__all__ = [
    "SpectralCurve",
    "PoleError",
    "G_eval",
    "jost_function",
    "pressure",
    "lip_pressure",
    "volume_velocity",
    "sweep",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_magnitude_csv",
    "read_magnitude_csv",
]

SWEEP_QUANTITIES = ("G", "F", "P_lips", "absP_lips", "phi_ell", "phi_prime_ell")

#: |G(k)| below this multiple of max(1, |k|) is treated as a pressure pole.
POLE_THRESHOLD = 1e-12


class PoleError(ArithmeticError):
    """Pressure requested at (numerically) a zero of the spectral function."""


@dataclass(frozen=True)
class SpectralCurve:
    """A complex-valued quantity tabulated over a real wavenumber grid."""

    k: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self) -> None:
        k = np.asarray(self.k, dtype=float)
        if k.ndim != 1 or k.size < 2 or np.any(np.diff(k) <= 0):
            raise ValueError("k grid must be 1-d and strictly increasing")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "values", np.asarray(self.values))
        self.k.flags.writeable = False
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return self.k.size


def _phi_at_lips(k, profile, rtol, atol):
    arr = np.asarray(k, dtype=complex)
    if arr.ndim == 0:
        wf = regular_solution(complex(k), profile, rtol=rtol, atol=atol)
        return wf.at(profile.ell)
    return regular_at_lips(arr, profile, rtol=rtol, atol=atol)


def G_eval(k, profile: RadiusProfile, model: ImpedanceModel, rtol=1e-11, atol=1e-12):
    """The spectral function G(k); scalar or array k, real or complex."""
    _, _, r_ell, r_ell_p = endpoint_data(profile)
    phi, dphi = _phi_at_lips(k, profile, rtol, atol)
    z = z_eval(k, model)
    return phi * ((r_ell_p / r_ell) * z - 1j * np.asarray(k, dtype=complex)) - dphi * z


def jost_function(k, profile: RadiusProfile, rtol=1e-11, atol=1e-12):
    """F(k) = -i e^{ik ell} (ik phi(k, ell) - phi'(k, ell)).

    Independent of the lip load; F(-k*) = -F(k)*, so F is purely imaginary
    on the imaginary axis and F(k) ~ k + i*gamma for large real k.
    """
    kc = np.asarray(k, dtype=complex)
    phi, dphi = _phi_at_lips(k, profile, rtol, atol)
    return -1j * np.exp(1j * kc * profile.ell) * (1j * kc * phi - dphi)


def _pole_guard(G, k) -> None:
    bad = np.abs(G) < POLE_THRESHOLD * np.maximum(1.0, np.abs(k))
    if np.any(bad):
        kb = np.asarray(k, dtype=complex).ravel()[np.argmax(np.atleast_1d(bad))]
        raise PoleError(f"pressure pole: spectral function vanishes near k = {kb}")


def lip_pressure(
    k,
    profile: RadiusProfile,
    model: ImpedanceModel,
    constants: PhysicalConstants = PhysicalConstants(),
    rtol=1e-11,
    atol=1e-12,
):
    """Pressure at the lips, P(k, ell); poles are reported, not returned."""
    r0, _, r_ell, _ = endpoint_data(profile)
    G = G_eval(k, profile, model, rtol=rtol, atol=atol)
    _pole_guard(G, k)
    kc = np.asarray(k, dtype=complex)
    scale = constants.c * constants.mu / (np.pi * r0 * r_ell)
    return -1j * kc * scale * z_eval(k, model) / G


def pressure(
    k,
    x,
    profile: RadiusProfile,
    model: ImpedanceModel,
    constants: PhysicalConstants = PhysicalConstants(),
    rtol=1e-11,
    atol=1e-12,
):
    """Interior pressure P(k, x) for scalar k; x may be scalar or array."""
    k = complex(k)
    r0, r0p, _, _ = endpoint_data(profile)
    g = g_solution(k, profile, model, rtol=rtol, atol=atol)
    g0, dg0 = g.at(0.0)
    G = dg0 - (r0p / r0) * g0  # wronskian [phi; g] evaluated at the glottis
    _pole_guard(G, k)
    phi = regular_solution(k, profile, rtol=rtol, atol=atol)
    S = sine_solution(k, profile, rtol=rtol, atol=atol)
    pv, _ = phi.at(x)
    sv, _ = S.at(x)
    r = profile.radius(x)
    return -(1j * k * constants.c * constants.mu / (np.pi * r0 * r)) * (
        (g0 / G) * pv + sv
    )


def volume_velocity(
    k,
    x,
    profile: RadiusProfile,
    model: ImpedanceModel,
    constants: PhysicalConstants = PhysicalConstants(),
    rtol=1e-11,
    atol=1e-12,
):
    """Volume velocity V(k, x), from the x-derivative of the pressure field.

    V = -pi r^2 P' / (ik c mu), written out so the physical constants cancel:
    V = (r/r0)(g0 phi'/G + S') - (r'/r0)(g0 phi/G + S).  Normalized to
    V(k, 0) = 1 by construction.
    """
    k = complex(k)
    if k == 0:
        raise ValueError("volume velocity is defined for k != 0")
    r0, r0p, _, _ = endpoint_data(profile)
    g = g_solution(k, profile, model, rtol=rtol, atol=atol)
    g0, dg0 = g.at(0.0)
    G = dg0 - (r0p / r0) * g0
    _pole_guard(G, k)
    phi = regular_solution(k, profile, rtol=rtol, atol=atol)
    S = sine_solution(k, profile, rtol=rtol, atol=atol)
    pv, dpv = phi.at(x)
    sv, dsv = S.at(x)
    r = profile.radius(x)
    rp = profile.radius_prime(x)
    return (r / r0) * ((g0 / G) * dpv + dsv) - (rp / r0) * ((g0 / G) * pv + sv)


def sweep(
    quantity: str,
    k_grid,
    profile: RadiusProfile,
    model: ImpedanceModel,
    constants: PhysicalConstants = PhysicalConstants(),
    rtol=1e-11,
    atol=1e-12,
) -> SpectralCurve:
    """Tabulate one spectral quantity over a real, increasing k grid."""
    if quantity not in SWEEP_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; expected {SWEEP_QUANTITIES}")
    k = np.asarray(k_grid, dtype=float)
    r0, _, r_ell, r_ell_p = endpoint_data(profile)
    phi, dphi = regular_at_lips(k, profile, rtol=rtol, atol=atol)

    if quantity == "phi_ell":
        vals = phi
    elif quantity == "phi_prime_ell":
        vals = dphi
    elif quantity == "F":
        vals = -1j * np.exp(1j * k * profile.ell) * (1j * k * phi - dphi)
    else:
        z = z_eval(k, model)
        G = phi * ((r_ell_p / r_ell) * z - 1j * k) - dphi * z
        if quantity == "G":
            vals = G
        else:
            _pole_guard(G, k)
            P = -1j * k * constants.c * constants.mu / (np.pi * r0 * r_ell) * z / G
            vals = np.abs(P) if quantity == "absP_lips" else P
    return SpectralCurve(k=k, values=vals, label=quantity)


# ---------------------------------------------------------------------------
# CSV formats: spectrum files 'k,re,im', magnitude files 'k,abs'
# ---------------------------------------------------------------------------

_G = "%.15g"


def write_spectrum_csv(curve: SpectralCurve, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "re", "im"])
        vals = np.asarray(curve.values, dtype=complex)
        for kk, v in zip(curve.k, vals):
            writer.writerow([_G % kk, _G % v.real, _G % v.imag])


def read_spectrum_csv(path: str | Path, label: str = "") -> SpectralCurve:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["k", "re", "im"]:
        raise ValueError(f"{path}: expected header 'k,re,im'")
    data = np.array([[float(a), float(b), float(c)] for a, b, c in rows[1:]])
    return SpectralCurve(
        k=data[:, 0], values=data[:, 1] + 1j * data[:, 2], label=label or str(path)
    )


def write_magnitude_csv(curve: SpectralCurve, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "abs"])
        for kk, v in zip(curve.k, np.abs(curve.values)):
            writer.writerow([_G % kk, _G % v])


def read_magnitude_csv(path: str | Path, label: str = "") -> SpectralCurve:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["k", "abs"]:
        raise ValueError(f"{path}: expected header 'k,abs'")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return SpectralCurve(k=data[:, 0], values=data[:, 1], label=label or str(path))
