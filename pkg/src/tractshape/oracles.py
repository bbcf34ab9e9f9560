"""Closed-form reference values for the three analytic tube families.

Each family with q expressible in closed form admits an explicit spectral
function; these serve as independent ground truth for the ODE-based forward
solver and for the zero search.  A third, family-agnostic route assembles the
same quantity from the closed-form plane-wave solution via a 2x2 matching
matrix, giving three mutually independent computation paths.
"""

from __future__ import annotations

import numpy as np

from tractshape.impedance import ImpedanceModel, z_eval
from tractshape.profiles import RadiusProfile, endpoint_data

__all__ = [
    "oracle_G_uniform",
    "oracle_G_linear",
    "oracle_G_quadratic",
    "oracle_G_jost_matrix",
    "oracle_G",
    "oracle_z_imaginary",
    "closed_form_jost_at_glottis",
]

#: below this |k| the displayed formulas lose digits to cancellation and the
#: linear-in-k limit G = -i (r_ell/r0) k is used instead
SMALL_K = 1e-3


def _model_for(r_ell: float, model: ImpedanceModel | None) -> ImpedanceModel:
    if model is None:
        return ImpedanceModel(r_ell=r_ell)
    if abs(model.r_ell - r_ell) > 1e-12 * max(1.0, r_ell):
        raise ValueError(
            f"impedance model lip radius {model.r_ell} != profile lip radius {r_ell}"
        )
    return model


def oracle_G_uniform(k, r0: float, ell: float, model: ImpedanceModel | None = None):
    """G(k) = -ik cos(k ell) + k z(k) sin(k ell) for the constant-radius tube."""
    model = _model_for(r0, model)
    kc = np.asarray(k, dtype=complex)
    z = z_eval(kc, model)
    out = -1j * kc * np.cos(kc * ell) + kc * z * np.sin(kc * ell)
    return out if out.ndim else complex(out)


def oracle_G_linear(
    k, r0: float, r0p: float, ell: float, model: ImpedanceModel | None = None
):
    """Closed-form G for r(x) = r0 + r0p * x."""
    r_ell = r0 + ell * r0p
    if r_ell <= 0:
        raise ValueError("linear profile leaves the admissible class: r(ell) <= 0")
    model = _model_for(r_ell, model)
    kc = np.asarray(k, dtype=complex)
    z = z_eval(kc, model)
    small = np.abs(kc) < SMALL_K
    ks = np.where(small, 1.0, kc)  # avoid 0/0; small entries overwritten below
    q1 = -(r0p - 1j * ks * r0) * (ks * ell * r0p * (z - 1) + ks * r0 * (z - 1) - 1j * z * r0p)
    q2 = -(r0p + 1j * ks * r0) * (ks * ell * r0p * (z + 1) + ks * r0 * (z + 1) + 1j * z * r0p)
    out = (np.exp(-1j * ks * ell) * q1 + np.exp(1j * ks * ell) * q2) / (
        2.0 * ks * r0 * (r0 + ell * r0p)
    )
    out = np.where(small, -1j * (r_ell / r0) * kc, out)
    return out if out.ndim else complex(out)


def oracle_G_quadratic(
    k, r0: float, r0p: float, ell: float, model: ImpedanceModel | None = None
):
    """Closed-form G for r(x) = (a x + b)^2 with a = r0p/(2 sqrt(r0)), b = sqrt(r0)."""
    b = np.sqrt(r0)
    a = r0p / (2.0 * b)
    if a * ell + b <= 0:
        raise ValueError("quadratic profile leaves the admissible class")
    r_ell = (a * ell + b) ** 2
    model = _model_for(r_ell, model)
    kc = np.asarray(k, dtype=complex)
    z = z_eval(kc, model)
    small = np.abs(kc) < SMALL_K
    ks = np.where(small, 1.0, kc)
    p = r0p
    q3 = -24.0 * z * ell * r0**2 * p**2 - 12.0 * z * ell**2 * r0 * p**3
    q4 = 32.0 * r0**4 + 32.0 * ell * r0**3 * p + 8.0 * ell**2 * r0**2 * p**2
    q5 = 24.0 * z * r0**2 * p**2 + 12.0 * z * ell * r0 * p**3 - 6.0 * z * ell**2 * p**4
    q6 = 32.0 * r0**3 * p + 40.0 * ell * r0**2 * p**2 + 12.0 * ell**2 * r0 * p**3
    q7 = 32.0 * z * r0**4 + 32.0 * z * ell * r0**3 * p + 8.0 * z * ell**2 * r0**2 * p**2
    q1 = (
        -18j * ks * z * ell * p**4
        - ks**2 * (12.0 * ell * r0 * p**3 + 6.0 * ell**2 * p**4)
        + 1j * ks**3 * q3
        + ks**4 * q4
    )
    q2 = (
        18j * z * p**4
        + ks * (12.0 * r0 * p**3 + 6.0 * ell * p**4)
        + 1j * ks**2 * q5
        + ks**3 * q6
        + 1j * ks**4 * q7
    )
    out = (q1 * np.cos(ks * ell) + q2 * np.sin(ks * ell)) / (
        8j * ks**3 * r0**2 * (2.0 * r0 + ell * p) ** 2
    )
    out = np.where(small, -1j * (r_ell / r0) * kc, out)
    return out if out.ndim else complex(out)


def oracle_G(k, profile: RadiusProfile, model: ImpedanceModel | None = None):
    """Dispatch to the closed form matching the profile family."""
    if profile.family == "uniform":
        return oracle_G_uniform(k, profile.r0, profile.ell, model)
    if profile.family == "linear":
        return oracle_G_linear(k, profile.r0, profile.r0_prime, profile.ell, model)
    if profile.family == "quadratic":
        return oracle_G_quadratic(k, profile.r0, profile.r0_prime, profile.ell, model)
    raise ValueError(f"no closed form for family {profile.family!r}")


def closed_form_jost_at_glottis(k, profile: RadiusProfile):
    """(f(k, 0), f'(k, 0)) of the plane-wave-anchored solution, closed form.

    For zero-potential families f(k, x) = e^{ikx}.  For the quadratic family
    the two basis solutions are e^{+/- ikx} (1 + i a / (+/- k (a x + b)))
    and the anchored combination is solved from a 2x2 system at x = ell.
    """
    kc = np.asarray(k, dtype=complex)
    if profile.family in ("uniform", "linear"):
        one = np.ones_like(kc)
        out = (one, 1j * kc * one)
        return out if kc.ndim else (complex(out[0]), complex(out[1]))
    if profile.family != "quadratic":
        raise ValueError(f"no closed-form plane-wave solution for {profile.family!r}")

    b = np.sqrt(profile.r0)
    a = profile.r0_prime / (2.0 * b)
    ell = profile.ell

    def m(kk, x):
        return 1.0 + 1j * a / (kk * (a * x + b))

    def dm(kk, x):
        return -1j * a**2 / (kk * (a * x + b) ** 2)

    # basis u+/-(x) = e^{+/- ikx} m(+/-k, x); match the plane-wave anchor at ell
    up_l = np.exp(1j * kc * ell) * m(kc, ell)
    um_l = np.exp(-1j * kc * ell) * m(-kc, ell)
    dup_l = np.exp(1j * kc * ell) * (1j * kc * m(kc, ell) + dm(kc, ell))
    dum_l = np.exp(-1j * kc * ell) * (-1j * kc * m(-kc, ell) + dm(-kc, ell))
    rhs1 = np.exp(1j * kc * ell)
    rhs2 = 1j * kc * np.exp(1j * kc * ell)
    det = up_l * dum_l - um_l * dup_l
    alpha = (rhs1 * dum_l - um_l * rhs2) / det
    beta = (up_l * rhs2 - rhs1 * dup_l) / det

    f0 = alpha * m(kc, 0.0) + beta * m(-kc, 0.0)
    df0 = alpha * (1j * kc * m(kc, 0.0) + dm(kc, 0.0)) + beta * (
        -1j * kc * m(-kc, 0.0) + dm(-kc, 0.0)
    )
    if kc.ndim:
        return f0, df0
    return complex(f0), complex(df0)


def oracle_G_jost_matrix(k, profile: RadiusProfile, model: ImpedanceModel | None = None):
    """G via the 2x2 plane-wave matching route.

    Writes the radiation-load solution as a combination of f(k, x) and
    f(-k, x), solves for its glottis values from the lip anchor, and takes
    the boundary Wronskian there.  Independent of both the ODE route and the
    per-family displayed formulas.
    """
    r0, r0p, r_ell, r_ell_p = endpoint_data(profile)
    model = _model_for(r_ell, model)
    kc = np.asarray(k, dtype=complex)
    if np.any(np.abs(kc) < 1e-12):
        raise ValueError("plane-wave matching matrix is singular at k = 0")
    ell = profile.ell
    z = z_eval(kc, model)

    fp0, dfp0 = closed_form_jost_at_glottis(kc, profile)
    fm0, dfm0 = closed_form_jost_at_glottis(-kc, profile)

    # [e^{ikl}, e^{-ikl}; ik e^{ikl}, -ik e^{-ikl}]^(-1) [z; (r'/r) z - ik]
    det = -2j * kc
    b1 = z
    b2 = (r_ell_p / r_ell) * z - 1j * kc
    c1 = (-1j * kc * np.exp(-1j * kc * ell) * b1 - np.exp(-1j * kc * ell) * b2) / det
    c2 = (-1j * kc * np.exp(1j * kc * ell) * b1 + np.exp(1j * kc * ell) * b2) / det

    g0 = fp0 * c1 + fm0 * c2
    dg0 = dfp0 * c1 + dfm0 * c2
    out = (-r0p / r0) * g0 + dg0
    return out if np.asarray(out).ndim else complex(out)


def oracle_z_imaginary(kappa, r_ell: float, n: int = 400):
    """z on the imaginary axis by direct quadrature.

    z(i kappa) = 1 - (4/pi) * int_0^1 e^{2 kappa r_ell t} sqrt(1 - t^2) dt,
    computed after t = sin(theta) (which removes the endpoint square-root
    singularity) with Gauss-Legendre quadrature.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n)
    theta = 0.25 * np.pi * (nodes + 1.0)
    wts = 0.25 * np.pi * weights
    kap = np.asarray(kappa, dtype=float)
    integrand = np.exp(2.0 * kap[..., None] * r_ell * np.sin(theta)) * np.cos(theta) ** 2
    out = 1.0 - (4.0 / np.pi) * np.sum(wts * integrand, axis=-1)
    return out if out.ndim else float(out)
