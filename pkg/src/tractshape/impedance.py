"""Radiation load at the lip opening: the flat-baffle piston impedance.

The lip boundary condition uses the normalized radiation impedance of a
vibrating piston set in an infinite plane baffle,

    z(k) = 1 - J1(2 k r_ell)/(k r_ell) + i H1(2 k r_ell)/(k r_ell),

an entire function of the wavenumber k, where J1 is the Bessel function and
H1 the Struve function of order one.  Only order one is provided, but for
complex argument and in both the power-series and large-argument regimes,
which is what the forward solver and the zero search need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ImpedanceModel",
    "bessel_j1",
    "bessel_y1",
    "struve_h1",
    "z_eval",
    "z_asymptotic",
]

#: |w| above which the alternating power series have lost too many digits
#: and evaluation moves to the large-argument (Hankel-type) expansions.
SERIES_SWITCH_W = 16.0

#: |Im w| beyond which exp(|Im w|) would overflow double precision.
OVERFLOW_IMAG_W = 650.0

_EULER_GAMMA = 0.5772156649015328606


class SpecialFunctionOverflow(OverflowError):
    """Argument so far off the real axis that exp(|Im w|) overflows."""


@dataclass(frozen=True)
class ImpedanceModel:
    """Lip radiation model parameters.

    r_ell is the lip radius in cm.  series_terms caps the power-series
    length; switch_radius is the |k * r_ell| threshold above which the
    truncated large-k form :func:`z_asymptotic` is considered valid.
    """

    r_ell: float
    series_terms: int = 64
    switch_radius: float = 12.0

    def __post_init__(self) -> None:
        if not self.r_ell > 0:
            raise ValueError(f"lip radius must be positive, got {self.r_ell}")
        if self.series_terms < 8:
            raise ValueError("series_terms must be at least 8")


def _check_overflow(w: np.ndarray) -> None:
    if np.any(np.abs(w.imag) > OVERFLOW_IMAG_W):
        worst = np.max(np.abs(w.imag))
        raise SpecialFunctionOverflow(
            f"|Im w| = {worst:.3g} exceeds {OVERFLOW_IMAG_W}; exp(|Im w|) overflows"
        )


def _as_complex_array(w) -> tuple[np.ndarray, bool]:
    arr = np.asarray(w, dtype=complex)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr), scalar


# ---------------------------------------------------------------------------
# Power series (small |w|)
# ---------------------------------------------------------------------------


def _j1_series(w: np.ndarray, max_terms: int) -> np.ndarray:
    # J1(w) = sum_j (-1)^j (w/2)^(2j+1) / (j! (j+1)!)
    u = -((w / 2.0) ** 2)
    term = w / 2.0
    total = term.copy()
    for j in range(1, max_terms):
        term = term * u / (j * (j + 1))
        total += term
        if np.all(np.abs(term) <= 1e-18 * (1.0 + np.abs(total))):
            break
    return total

def _j1c_series(w: np.ndarray, max_terms: int) -> np.ndarray:
    # 1 - 2 J1(w)/w, summed directly so the leading cancellation is exact:
    # = sum_{j>=1} (-1)^(j+1) (w/2)^(2j) / (j! (j+1)!)
    u = (w / 2.0) ** 2
    term = u / 2.0
    total = term.copy()
    for j in range(1, max_terms):
        term = -term * u / ((j + 1) * (j + 2))
        total += term
        if np.all(np.abs(term) <= 1e-18 * (1.0 + np.abs(total))):
            break
    return total


def _h1r_series(w: np.ndarray, max_terms: int) -> np.ndarray:
    # 2 H1(w)/w = sum_j (-1)^j (w/2)^(2j+1) * 2 / (Gamma(j+3/2) Gamma(j+5/2))
    # leading term 4 w / (3 pi)
    u = (w / 2.0) ** 2
    term = (4.0 / (3.0 * np.pi)) * w
    total = term.copy()
    for j in range(1, max_terms):
        term = -term * u / ((j + 0.5) * (j + 1.5))
        total += term
        if np.all(np.abs(term) <= 1e-18 * (1.0 + np.abs(total))):
            break
    return total


def _y1_series(w: np.ndarray, max_terms: int) -> np.ndarray:
    # Y1(z) = (2/pi) ln(z/2) J1(z) - 2/(pi z)
    #         - (z/(2 pi)) sum_k (psi(k+1)+psi(k+2)) (-z^2/4)^k / (k! (k+1)!)
    j1 = _j1_series(w, max_terms)
    u = -((w / 2.0) ** 2)
    psi_sum = -2.0 * _EULER_GAMMA + 1.0  # psi(1) + psi(2)
    term = np.ones_like(w)
    total = psi_sum * term
    for kk in range(1, max_terms):
        term = term * u / (kk * (kk + 1))
        psi_sum += 1.0 / kk + 1.0 / (kk + 1)
        contrib = psi_sum * term
        total += contrib
        if np.all(np.abs(contrib) <= 1e-18 * (1.0 + np.abs(total))):
            break
    return (2.0 / np.pi) * np.log(w / 2.0) * j1 - 2.0 / (np.pi * w) - w / (2.0 * np.pi) * total


# ---------------------------------------------------------------------------
# Large-argument (Hankel-type) expansions, Re w >= 0
# ---------------------------------------------------------------------------


def _hankel_sums(w: np.ndarray, max_terms: int = 40) -> tuple[np.ndarray, np.ndarray]:
    # S(+/-)(w) = sum_m (+/- i)^m a_m / w^m with a_m the order-one Hankel
    # coefficients; truncated at the smallest term.
    s_plus = np.ones_like(w)
    s_minus = np.ones_like(w)
    coeff = np.ones_like(w)
    prev_mag = np.full(w.shape, np.inf)
    alive = np.ones(w.shape, dtype=bool)
    for m in range(1, max_terms):
        coeff = coeff * (4.0 - (2 * m - 1) ** 2) / (8.0 * m * w)
        mag = np.abs(coeff)
        alive &= mag < prev_mag
        if not np.any(alive):
            break
        prev_mag = np.where(alive, mag, prev_mag)
        ipow = 1j**m
        s_plus = np.where(alive, s_plus + ipow * coeff, s_plus)
        s_minus = np.where(alive, s_minus + np.conj(ipow) * coeff, s_minus)
    return s_plus, s_minus


def _j1_y1_asymptotic(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Valid for Re w >= 0. chi = w - 3 pi / 4.
    s_plus, s_minus = _hankel_sums(w)
    amp = np.sqrt(2.0 / (np.pi * w))
    chi = w - 0.75 * np.pi
    h1 = amp * np.exp(1j * chi) * s_plus   # first-kind Hankel
    h2 = amp * np.exp(-1j * chi) * s_minus  # second-kind Hankel
    j1 = 0.5 * (h1 + h2)
    y1 = (h1 - h2) / 2j
    return j1, y1


def _struve_tail(w: np.ndarray, max_terms: int = 40) -> np.ndarray:
    # H1(w) - Y1(w) ~ (1/pi) sum_m s_m, s_0 = 2, s_(m+1) = s_m (1-4m^2)/w^2;
    # an asymptotic series, truncated at its smallest term.
    term = np.full(w.shape, 2.0 + 0j)
    total = term.copy()
    prev_mag = np.abs(term)
    alive = np.ones(w.shape, dtype=bool)
    w2 = w * w
    for m in range(max_terms):
        term = term * (1.0 - 4.0 * m * m) / w2
        mag = np.abs(term)
        alive &= mag < prev_mag
        if not np.any(alive):
            break
        prev_mag = np.where(alive, mag, prev_mag)
        total = np.where(alive, total + term, total)
    return total / np.pi


# ---------------------------------------------------------------------------
# Public special functions
# ---------------------------------------------------------------------------


def bessel_j1(w, max_terms: int = 60):
    """Bessel function of order one for complex argument.

    Power series for |w| <= 16, Hankel-type asymptotics beyond; relative
    accuracy is about 1e-10 or better through |w| = 50.
    """
    arr, scalar = _as_complex_array(w)
    _check_overflow(arr)
    out = np.empty_like(arr)
    flip = arr.real < 0
    work = np.where(flip, -arr, arr)  # J1 is odd
    small = np.abs(work) <= SERIES_SWITCH_W
    if np.any(small):
        out[small] = _j1_series(work[small], max_terms)
    if np.any(~small):
        out[~small] = _j1_y1_asymptotic(work[~small])[0]
    out = np.where(flip, -out, out)
    return complex(out[0]) if scalar else out.reshape(np.shape(w))


def bessel_y1(w, max_terms: int = 60):
    """Bessel function of the second kind, order one, for Re w > 0.

    Ascending series with the logarithmic term for |w| <= 16, Hankel-type
    asymptotics beyond.  The principal branch of the logarithm is used, so
    arguments on the negative real axis are rejected.
    """
    arr, scalar = _as_complex_array(w)
    _check_overflow(arr)
    if np.any((arr.real < 0) & (arr.imag == 0)):
        raise ValueError("Y1 is evaluated on the principal branch; Re w >= 0 required")
    out = np.empty_like(arr)
    small = np.abs(arr) <= SERIES_SWITCH_W
    if np.any(small):
        out[small] = _y1_series(arr[small], max_terms)
    if np.any(~small):
        out[~small] = _j1_y1_asymptotic(arr[~small])[1]
    return complex(out[0]) if scalar else out.reshape(np.shape(w))


def struve_h1(w, max_terms: int = 60):
    """Struve function of order one for complex argument.

    Power series for |w| <= 16; for larger arguments the descending series
    around 2/pi plus the Bessel Y1 term.  H1 is even, so the left half plane
    is folded onto the right.
    """
    arr, scalar = _as_complex_array(w)
    _check_overflow(arr)
    work = np.where(arr.real < 0, -arr, arr)  # H1 is even
    out = np.empty_like(arr)
    small = np.abs(work) <= SERIES_SWITCH_W
    if np.any(small):
        ws = work[small]
        out[small] = 0.5 * ws * _h1r_series(ws, max_terms)
    if np.any(~small):
        wb = work[~small]
        out[~small] = _j1_y1_asymptotic(wb)[1] + _struve_tail(wb)
    return complex(out[0]) if scalar else out.reshape(np.shape(w))


# ---------------------------------------------------------------------------
# The normalized lip impedance
# ---------------------------------------------------------------------------


def z_eval(k, model: ImpedanceModel):
    """Normalized lip impedance z(k), entire in k.

    Evaluated as z = [1 - 2 J1(w)/w] + i [2 H1(w)/w] with w = 2 k r_ell; the
    bracketed combinations are summed in forms free of leading-order
    cancellation, so small k (where z has its simple zero) is exact.  Accepts
    scalars or arrays.
    """
    arr, scalar = _as_complex_array(k)
    w = 2.0 * arr * model.r_ell
    _check_overflow(w)
    out = np.empty_like(w)

    tiny = np.abs(w) < 1e-8
    if np.any(tiny):
        wt = w[tiny]
        # leading terms of the entire series: z = i 4w/(3 pi) + w^2/8 + O(w^3)
        out[tiny] = 1j * (4.0 / (3.0 * np.pi)) * wt + wt * wt / 8.0

    rest = ~tiny
    if np.any(rest):
        wr = w[rest]
        neg = wr.real < 0
        fold = np.where(neg, -wr, wr)
        j1c = np.empty_like(fold)
        h1r = np.empty_like(fold)
        small = np.abs(fold) <= SERIES_SWITCH_W
        if np.any(small):
            ws = fold[small]
            j1c[small] = _j1c_series(ws, model.series_terms)
            h1r[small] = _h1r_series(ws, model.series_terms)
        if np.any(~small):
            wb = fold[~small]
            j1, y1 = _j1_y1_asymptotic(wb)
            h1 = y1 + _struve_tail(wb)
            j1c[~small] = 1.0 - 2.0 * j1 / wb
            h1r[~small] = 2.0 * h1 / wb
        # folding flips the sign of H1(w)/w (H1 even) but not of J1(w)/w
        out[rest] = j1c + 1j * np.where(neg, -h1r, h1r)

    return complex(out[0]) if scalar else out.reshape(np.shape(k))


def z_asymptotic(k, model: ImpedanceModel):
    """Truncated large-k impedance 1 + (1/(k r_ell)) [2i/pi + B(k r_ell)].

    B(v) = (1-i) exp(-2 i v) / sqrt(2 pi v).  The truncation keeps the first
    Hankel corrections inside B and the next algebraic term, which is what it
    takes to meet the 1e-6 seam agreement with :func:`z_eval` at
    |k r_ell| = switch_radius.  Raises ValueError below the switch radius.
    """
    arr, scalar = _as_complex_array(k)
    v = arr * model.r_ell
    if np.any(np.abs(v) < model.switch_radius):
        raise ValueError(
            f"z_asymptotic called below |k r_ell| = {model.switch_radius}"
        )
    w = 2.0 * v
    _check_overflow(w)
    b = (1.0 - 1j) * np.exp(-1j * w) / np.sqrt(np.pi * w)
    hankel = 1.0 - 3j / (8.0 * w) + 15.0 / (128.0 * w**2) + 105j / (1024.0 * w**3)
    bracket = 2j / np.pi + b * hankel + 2j / (np.pi * w**2) - 6j / (np.pi * w**4)
    out = 1.0 + bracket / v
    return complex(out[0]) if scalar else out.reshape(np.shape(k))
