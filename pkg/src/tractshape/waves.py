"""Particular solutions of the transformed wave equation at complex wavenumber.

The pressure equation in the tube maps, via psi = r * P, to

    -psi''(k, x) + q(x) psi(k, x) = k^2 psi(k, x),      q = r''/r,

on [0, ell].  Four anchored solutions are used throughout:

* ``regular``    psi(k, 0) = 1,       psi'(k, 0) = r'(0)/r(0)
* ``sine``       psi(k, 0) = 0,       psi'(k, 0) = 1
* ``jost``       psi(k, ell) = e^{ik ell},  psi'(k, ell) = ik e^{ik ell}
* ``impedance``  psi(k, ell) = z(k),  psi'(k, ell) = (r'(ell)/r(ell)) z(k) - ik

Each is obtained with an adaptive high-order Runge-Kutta integrator; the
jost solution is integrated in the exponentially reduced variable
m = e^{-ikx} psi so that nothing overflows off the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from tractshape.impedance import ImpedanceModel, z_eval
from tractshape.profiles import RadiusProfile, endpoint_data

__all__ = [
    "WaveFunction",
    "regular_solution",
    "sine_solution",
    "jost_solution",
    "g_solution",
    "wronskian",
    "regular_at_lips",
    "impedance_at_glottis",
]

DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-12

#: |Im k| * ell beyond which e^{ik x} overflows somewhere on [0, ell].
_OVERFLOW_EXPONENT = 690.0

KINDS = ("regular", "sine", "jost", "impedance")


class IntegrationError(RuntimeError):
    """Raised when the wave-equation integrator fails or would overflow."""


@dataclass(frozen=True)
class WaveFunction:
    """One anchored solution, evaluable anywhere on [0, ell].

    ``at(x)`` returns the pair (psi, psi') for scalar or array x.  For the
    jost kind the stored dense solution is the reduced variable and the
    plane-wave factor is reapplied on evaluation.
    """

    k: complex
    kind: str
    profile: RadiusProfile
    _sol: object = field(repr=False, compare=False)
    _reduced: bool = field(default=False, repr=False, compare=False)

    def at(self, x):
        x_arr = np.asarray(x, dtype=float)
        pts = np.atleast_1d(x_arr).ravel()
        vals = self._sol(pts)
        m, dm = vals[0], vals[1]
        if self._reduced:
            phase = np.exp(1j * self.k * pts)
            psi = phase * m
            dpsi = phase * (dm + 1j * self.k * m)
        else:
            psi, dpsi = m, dm
        if x_arr.ndim:
            return psi.reshape(x_arr.shape), dpsi.reshape(x_arr.shape)
        return complex(psi[0]), complex(dpsi[0])

    def on_grid(self, n: int = 257):
        """(x, psi, psi') tabulated on a uniform n-point grid."""
        x = np.linspace(0.0, self.profile.ell, n)
        psi, dpsi = self.at(x)
        return x, psi, dpsi


def _check_exponent(k: complex, ell: float) -> None:
    if abs(np.imag(k)) * ell > _OVERFLOW_EXPONENT:
        raise IntegrationError(
            f"|Im k| * ell = {abs(np.imag(k)) * ell:.3g} overflows e^(ik x) on [0, ell]"
        )


def _integrate(profile, k, y0, x_from, x_to, rtol, atol, reduced=False):
    k = complex(k)
    k2 = k * k

    if reduced:
        def rhs(x, y):
            return [y[1], profile.potential(x) * y[0] - 2j * k * y[1]]
    else:
        def rhs(x, y):
            return [y[1], (profile.potential(x) - k2) * y[0]]

    sol = solve_ivp(
        rhs,
        (x_from, x_to),
        np.asarray(y0, dtype=complex),
        method="DOP853",
        dense_output=True,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"integration failed at k = {k}: {sol.message}")
    return sol.sol


def regular_solution(
    k, profile: RadiusProfile, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL
) -> WaveFunction:
    """Solution anchored at the glottis with psi(0) = 1, psi'(0) = r'(0)/r(0)."""
    _check_exponent(k, profile.ell)
    r0, r0p, _, _ = endpoint_data(profile)
    sol = _integrate(profile, k, [1.0, r0p / r0], 0.0, profile.ell, rtol, atol)
    return WaveFunction(k=complex(k), kind="regular", profile=profile, _sol=sol)


def sine_solution(
    k, profile: RadiusProfile, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL
) -> WaveFunction:
    """Solution anchored at the glottis with psi(0) = 0, psi'(0) = 1."""
    _check_exponent(k, profile.ell)
    sol = _integrate(profile, k, [0.0, 1.0], 0.0, profile.ell, rtol, atol)
    return WaveFunction(k=complex(k), kind="sine", profile=profile, _sol=sol)


def jost_solution(
    k, profile: RadiusProfile, rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL
) -> WaveFunction:
    """Plane-wave-anchored solution, psi(ell) = e^{ik ell}, psi'(ell) = ik e^{ik ell}.

    Integrated backward in the reduced variable m = e^{-ikx} psi, which is
    O(1) in the upper half plane, so the anchor never overflows; evaluation
    reapplies the plane-wave factor.
    """
    _check_exponent(k, profile.ell)
    sol = _integrate(profile, k, [1.0, 0.0], profile.ell, 0.0, rtol, atol, reduced=True)
    return WaveFunction(
        k=complex(k), kind="jost", profile=profile, _sol=sol, _reduced=True
    )


def g_solution(
    k,
    profile: RadiusProfile,
    model: ImpedanceModel,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> WaveFunction:
    """Solution carrying the lip radiation load, anchored at x = ell.

    psi(ell) = z(k) and psi'(ell) = (r'(ell)/r(ell)) z(k) - ik, integrated
    backward to the glottis.
    """
    _check_exponent(k, profile.ell)
    _, _, r_ell, r_ell_p = endpoint_data(profile)
    zk = z_eval(complex(k), model)
    y0 = [zk, (r_ell_p / r_ell) * zk - 1j * complex(k)]
    sol = _integrate(profile, k, y0, profile.ell, 0.0, rtol, atol)
    return WaveFunction(k=complex(k), kind="impedance", profile=profile, _sol=sol)


def wronskian(psi: WaveFunction, phi: WaveFunction, x) -> complex:
    """psi * phi' - psi' * phi at x; constant in x for solutions at equal k."""
    if psi.k != phi.k:
        raise ValueError(f"wavenumber mismatch: {psi.k} vs {phi.k}")
    if psi.profile != phi.profile:
        raise ValueError("wronskian of solutions on different profiles")
    a, da = psi.at(x)
    b, db = phi.at(x)
    return a * db - da * b


# ---------------------------------------------------------------------------
# Stacked sweeps: all wavenumbers integrated as one system
# ---------------------------------------------------------------------------


def _sweep(profile, k_array, y0_of_k, x_from, x_to, rtol, atol):
    k = np.asarray(k_array, dtype=complex).ravel()
    n = k.size
    k2 = k * k
    y0 = np.concatenate(y0_of_k(k))

    def rhs(x, y):
        out = np.empty_like(y)
        out[:n] = y[n:]
        out[n:] = (profile.potential(x) - k2) * y[:n]
        return out

    sol = solve_ivp(
        rhs, (x_from, x_to), y0, method="DOP853", rtol=rtol, atol=atol
    )
    if not sol.success:
        raise IntegrationError(f"stacked sweep failed: {sol.message}")
    yf = sol.y[:, -1]
    return yf[:n], yf[n:]


def regular_at_lips(
    k_array,
    profile: RadiusProfile,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
):
    """(psi(k, ell), psi'(k, ell)) of the regular solution over a k grid.

    All wavenumbers are integrated simultaneously as one stacked system;
    this is the workhorse behind every spectral sweep.
    """
    r0, r0p, _, _ = endpoint_data(profile)

    def y0(k):
        return np.full_like(k, 1.0 + 0j), np.full_like(k, r0p / r0 + 0j)

    psi, dpsi = _sweep(profile, k_array, y0, 0.0, profile.ell, rtol, atol)
    shape = np.shape(k_array)
    return psi.reshape(shape), dpsi.reshape(shape)


def impedance_at_glottis(
    k_array,
    profile: RadiusProfile,
    model: ImpedanceModel,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
):
    """(g(k, 0), g'(k, 0)) of the radiation-load solution over a k grid."""
    _, _, r_ell, r_ell_p = endpoint_data(profile)

    def y0(k):
        zk = np.atleast_1d(z_eval(k, model))
        return zk, (r_ell_p / r_ell) * zk - 1j * k

    psi, dpsi = _sweep(profile, k_array, y0, profile.ell, 0.0, rtol, atol)
    shape = np.shape(k_array)
    return psi.reshape(shape), dpsi.reshape(shape)
