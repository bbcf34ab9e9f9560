"""Tube geometry: admissible radius profiles and the associated wave potential.

A profile describes the tract radius r(x) in cm on [0, ell], measured from the
glottis (x = 0) to the lips (x = ell).  Admissible profiles are positive, have
a continuous first derivative, and an integrable second derivative; these are
exactly the conditions under which the pressure equation in the tube can be
mapped to a one-dimensional wave equation with potential q(x) = r''(x)/r(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

#: Speed of sound in the tract at body temperature, cm/s.
SOUND_SPEED_CM_S = 3.5e4
#: Air density in the tract at body temperature, g/cm^3.
AIR_DENSITY_G_CM3 = 1.14e-3

FAMILIES = ("uniform", "linear", "quadratic", "sampled")

#: Coarsest sample set from which r'' can still be estimated by a spline.
MIN_SAMPLED_NODES = 8

#: Nodes of the default working grid on [0, ell].
DEFAULT_GRID_N = 1024

#: Grid density used to certify positivity of r(x).
_VALIDATION_N = 4096


class ProfileError(ValueError):
    """Raised when parameters do not describe an admissible profile."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Acoustic medium constants.

    c is the sound speed in cm/s and mu the air density in g/cm^3; the
    defaults are the body-temperature values for air.
    """

    c: float = SOUND_SPEED_CM_S
    mu: float = AIR_DENSITY_G_CM3

    def __post_init__(self) -> None:
        if not (self.c > 0 and self.mu > 0):
            raise ValueError("sound speed and density must be positive")

    def wavenumber(self, freq_hz: float) -> float:
        """Angular wavenumber k = 2*pi*nu/c in rad/cm for a frequency in Hz."""
        return 2.0 * np.pi * freq_hz / self.c


@dataclass(frozen=True)
class RadiusProfile:
    """A validated radius profile r(x) on [0, ell].

    Closed-form families:

    * ``uniform``:   r(x) = r0
    * ``linear``:    r(x) = r0 + r0_prime * x
    * ``quadratic``: r(x) = (a*x + b)^2 with a = r0_prime/(2*sqrt(r0)),
      b = sqrt(r0), so that r(0) = r0 and r'(0) = r0_prime
    * ``sampled``:   cubic-spline interpolant of (x, r) samples

    Use :func:`make_profile` to construct; it validates admissibility and
    derives endpoint data.
    """

    ell: float
    family: str
    r0: float
    r0_prime: float = 0.0
    samples: tuple[tuple[float, float], ...] | None = field(default=None, repr=False)

    @cached_property
    def _spline(self) -> CubicSpline:
        xs = np.array([p[0] for p in self.samples])
        rs = np.array([p[1] for p in self.samples])
        return CubicSpline(xs, rs)

    @property
    def r_ell(self) -> float:
        """Radius at the lips, r(ell)."""
        return float(self.radius(self.ell))

    @property
    def r_ell_prime(self) -> float:
        """Radius slope at the lips, r'(ell)."""
        return float(self.radius_prime(self.ell))

    def _quadratic_ab(self) -> tuple[float, float]:
        b = np.sqrt(self.r0)
        a = self.r0_prime / (2.0 * b)
        return a, b

    def radius(self, x):
        """r(x); accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        if self.family == "uniform":
            out = np.full_like(x, self.r0)
        elif self.family == "linear":
            out = self.r0 + self.r0_prime * x
        elif self.family == "quadratic":
            a, b = self._quadratic_ab()
            out = (a * x + b) ** 2
        else:
            out = self._spline(x)
        return out if out.ndim else float(out)

    def radius_prime(self, x):
        """r'(x); accepts scalars or arrays."""
        x = np.asarray(x, dtype=float)
        if self.family == "uniform":
            out = np.zeros_like(x)
        elif self.family == "linear":
            out = np.full_like(x, self.r0_prime)
        elif self.family == "quadratic":
            a, b = self._quadratic_ab()
            out = 2.0 * a * (a * x + b)
        else:
            out = self._spline(x, 1)
        return out if out.ndim else float(out)

    def potential(self, x):
        """The wave potential q(x) = r''(x)/r(x) in 1/cm^2."""
        x = np.asarray(x, dtype=float)
        if self.family in ("uniform", "linear"):
            out = np.zeros_like(x)
        elif self.family == "quadratic":
            a, b = self._quadratic_ab()
            out = 2.0 * a**2 / (a * x + b) ** 2
        else:
            out = self._spline(x, 2) / self._spline(x)
        return out if out.ndim else float(out)

    def potential_integral(self) -> float:
        """Integral of q over [0, ell].

        Closed forms where available; a dense trapezoid rule otherwise.
        """
        if self.family in ("uniform", "linear"):
            return 0.0
        if self.family == "quadratic":
            a, b = self._quadratic_ab()
            # int 2 a^2/(a x + b)^2 dx = 2 a^2 ell / (b (a ell + b))
            return 2.0 * a**2 * self.ell / (b * (a * self.ell + b))
        x = np.linspace(0.0, self.ell, 8193)
        return float(np.trapezoid(self.potential(x), x))


@dataclass(frozen=True)
class Potential:
    """q(x) tabulated on a grid, with a closed-form tag where one exists."""

    x: np.ndarray
    values: np.ndarray
    closed_form: str | None = None

    def __post_init__(self) -> None:
        self.x.flags.writeable = False
        self.values.flags.writeable = False


def _one_sided_derivative(xs: np.ndarray, rs: np.ndarray, at_start: bool) -> float:
    # Second-order three-point one-sided difference on a nonuniform grid.
    if at_start:
        x0, x1, x2 = xs[0], xs[1], xs[2]
        f0, f1, f2 = rs[0], rs[1], rs[2]
    else:
        x0, x1, x2 = xs[-1], xs[-2], xs[-3]
        f0, f1, f2 = rs[-1], rs[-2], rs[-3]
    h1 = x1 - x0
    h2 = x2 - x0
    # derivative at x0 of the quadratic through the three points
    return float(
        f0 * (-(h1 + h2) / (h1 * h2))
        + f1 * (h2 / (h1 * (h2 - h1)))
        + f2 * (-h1 / (h2 * (h2 - h1)))
    )


def make_profile(
    family: str,
    ell: float,
    r0: float | None = None,
    r0_prime: float = 0.0,
    samples=None,
) -> RadiusProfile:
    """Build and validate a radius profile.

    For the sampled family, ``samples`` is a sequence of (x, r) pairs covering
    [0, ell]; r0 and r0_prime are then derived from the data and must not be
    given.  Raises :class:`ProfileError` if the resulting r(x) is not positive
    on all of [0, ell] or the parameters are inconsistent.
    """
    if family not in FAMILIES:
        raise ProfileError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not np.isfinite(ell) or ell <= 0:
        raise ProfileError(f"tube length must be positive, got {ell}")

    if family == "sampled":
        if samples is None:
            raise ProfileError("sampled family requires (x, r) samples")
        if r0 is not None:
            raise ProfileError("r0 is derived from the data for sampled profiles")
        pts = sorted((float(x), float(r)) for x, r in samples)
        xs = np.array([p[0] for p in pts])
        rs = np.array([p[1] for p in pts])
        if len(pts) < MIN_SAMPLED_NODES:
            raise ProfileError(
                f"need at least {MIN_SAMPLED_NODES} samples to estimate r''"
            )
        if np.any(np.diff(xs) <= 0):
            raise ProfileError("sample abscissae must be strictly increasing")
        if abs(xs[0]) > 1e-12 or abs(xs[-1] - ell) > 1e-9 * max(1.0, ell):
            raise ProfileError("samples must span [0, ell]")
        profile = RadiusProfile(
            ell=float(ell),
            family="sampled",
            r0=float(rs[0]),
            r0_prime=_one_sided_derivative(xs, rs, at_start=True),
            samples=tuple(pts),
        )
    else:
        if samples is not None:
            raise ProfileError(f"{family} family takes no samples")
        if r0 is None:
            raise ProfileError("r0 is required for closed-form families")
        if family == "uniform" and r0_prime != 0.0:
            raise ProfileError("uniform family has r0_prime = 0")
        profile = RadiusProfile(
            ell=float(ell), family=family, r0=float(r0), r0_prime=float(r0_prime)
        )

    _validate(profile)
    return profile


def _validate(profile: RadiusProfile) -> None:
    if not np.isfinite(profile.r0) or profile.r0 <= 0:
        raise ProfileError(f"r(0) must be positive, got {profile.r0}")
    x = np.linspace(0.0, profile.ell, _VALIDATION_N)
    r = np.asarray(profile.radius(x))
    if not np.all(np.isfinite(r)):
        raise ProfileError("radius is not finite on [0, ell]")
    if np.min(r) <= 0:
        i = int(np.argmin(r))
        raise ProfileError(
            f"radius is not positive on [0, ell]: r({x[i]:.6g}) = {r[i]:.6g}"
        )
    for endpoint in (0.0, profile.ell):
        if not np.isfinite(profile.radius_prime(endpoint)):
            raise ProfileError(f"r' is not finite at x = {endpoint}")


def endpoint_data(profile: RadiusProfile) -> tuple[float, float, float, float]:
    """(r(0), r'(0), r(ell), r'(ell)) for a validated profile.

    For sampled profiles the derivatives come from second-order one-sided
    differences of the raw samples, not from the spline.
    """
    if profile.family == "sampled":
        xs = np.array([p[0] for p in profile.samples])
        rs = np.array([p[1] for p in profile.samples])
        return (
            float(rs[0]),
            _one_sided_derivative(xs, rs, at_start=True),
            float(rs[-1]),
            _one_sided_derivative(xs, rs, at_start=False),
        )
    return profile.r0, profile.r0_prime, profile.r_ell, profile.r_ell_prime


def potential_of(profile: RadiusProfile, n: int = DEFAULT_GRID_N) -> Potential:
    """Tabulate q(x) = r''/r on an n-node uniform working grid."""
    if profile.family == "sampled" and len(profile.samples) < MIN_SAMPLED_NODES:
        raise ProfileError("sampled profile too coarse to estimate r''")
    x = np.linspace(0.0, profile.ell, n)
    q = np.asarray(profile.potential(x), dtype=float)
    closed = None
    if profile.family in ("uniform", "linear"):
        closed = "zero"
    elif profile.family == "quadratic":
        closed = "2a^2/(ax+b)^2"
    return Potential(x=x, values=q, closed_form=closed)


def gamma_constant(profile: RadiusProfile) -> float:
    """The boundary-plus-mean-potential constant r'(0)/r(0) + (1/2) int q.

    This constant controls the large-k drift of the regular solution at the
    lips and is one of the scalars recovered during inversion.
    """
    r0, r0p, _, _ = endpoint_data(profile)
    return r0p / r0 + 0.5 * profile.potential_integral()


# ---------------------------------------------------------------------------
# Profile file format (line oriented, LF):
#   profile v1
#   ell <float>
#   family uniform|linear|quadratic|sampled
#   r0 <float>
#   r0p <float>          (optional; required for linear/quadratic)
#   n <int>              (sampled only)
#   <x> <r>              (n lines, sampled only)
# Floats are written with 17 significant digits.
# ---------------------------------------------------------------------------

_FMT = "%.17g"


def write_profile(profile: RadiusProfile, path: str | Path) -> None:
    """Write a profile file."""
    lines = [
        "profile v1",
        f"ell {_FMT % profile.ell}",
        f"family {profile.family}",
        f"r0 {_FMT % profile.r0}",
    ]
    if profile.family != "uniform":
        lines.append(f"r0p {_FMT % profile.r0_prime}")
    if profile.family == "sampled":
        lines.append(f"n {len(profile.samples)}")
        lines.extend(f"{_FMT % x} {_FMT % r}" for x, r in profile.samples)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_profile(path: str | Path) -> RadiusProfile:
    """Parse a profile file and validate the result."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0].strip() != "profile v1":
        raise ProfileError(f"{path}: not a v1 profile file")
    fields: dict[str, str] = {}
    idx = 1
    while idx < len(lines):
        parts = lines[idx].split()
        if not parts:
            idx += 1
            continue
        key = parts[0]
        if key == "n":
            break
        if len(parts) != 2:
            raise ProfileError(f"{path}: malformed line {idx + 1}: {lines[idx]!r}")
        fields[key] = parts[1]
        idx += 1
    try:
        ell = float(fields["ell"])
        family = fields["family"]
        r0 = float(fields["r0"])
        r0p = float(fields.get("r0p", "0"))
    except (KeyError, ValueError) as exc:
        raise ProfileError(f"{path}: missing or malformed header field: {exc}") from exc

    if family == "sampled":
        if idx >= len(lines):
            raise ProfileError(f"{path}: sampled profile lacks an 'n' line")
        n = int(lines[idx].split()[1])
        rows = [ln.split() for ln in lines[idx + 1 : idx + 1 + n]]
        if len(rows) != n or any(len(row) != 2 for row in rows):
            raise ProfileError(f"{path}: expected {n} 'x r' sample lines")
        samples = [(float(a), float(b)) for a, b in rows]
        return make_profile("sampled", ell=ell, samples=samples)
    return make_profile(family, ell=ell, r0=r0, r0_prime=r0p)
