"""Complex zeros of the spectral function: location, density, canonical product.

The spectral function is entire of exponential type, vanishes only at the
origin on the axes, and its off-axis zeros come in pairs mirrored across the
imaginary axis.  The zeros in the open right half plane are what the
magnitude-only inversion routes consume; they are located here by
argument-principle counting over adaptively subdivided boxes followed by
Newton polishing, and assembled into the genus-one canonical product

    E(k) = -ik * prod_j (1 - k/k_j) e^{k/k_j} (1 + k/k_j*) e^{-k/k_j*}

over the catalogued first- and fourth-quadrant zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "ZeroCatalog",
    "HadamardFactor",
    "ZeroSearchError",
    "count_zeros_in_box",
    "find_zeros",
    "zero_density",
    "build_E",
    "write_zeros_csv",
    "read_zeros_csv",
]

#: zeros cannot sit ON either axis (the theory excludes the axes entirely),
#: but they can sit arbitrarily close; the search keeps a thin guard band so
#: the boundary walk never rides along an axis, and rejects candidates inside
#: it as phase noise.  The quadratic example tube has a genuine zero at
#: Im k ~ 5e-4, so the band must stay well below that.
AXIS_BAND = 1e-6

#: phase step threshold for the adaptive boundary walk
_MAX_PHASE_STEP = 0.5 * np.pi

_NEWTON_STEPS = 40


class ZeroSearchError(RuntimeError):
    """Raised when counting or refinement cannot be completed reliably."""


@dataclass(frozen=True)
class ZeroCatalog:
    """Located zeros in the first (Re > 0, Im > 0) and fourth (Re > 0, Im < 0)
    quadrants, each ordered by modulus, with multiplicities."""

    first_quadrant: tuple[complex, ...]
    fourth_quadrant: tuple[complex, ...]
    mult_first: tuple[int, ...]
    mult_fourth: tuple[int, ...]
    search_radius: float

    def __post_init__(self) -> None:
        for z in self.first_quadrant:
            if not (z.real > 0 and z.imag > 0):
                raise ValueError(f"{z} is not in the first quadrant")
        for z in self.fourth_quadrant:
            if not (z.real > 0 and z.imag < 0):
                raise ValueError(f"{z} is not in the fourth quadrant")

    def count_within(self, rho: float) -> int:
        """Zeros with positive real part and |k| <= rho, with multiplicity."""
        total = 0
        for zs, ms in (
            (self.first_quadrant, self.mult_first),
            (self.fourth_quadrant, self.mult_fourth),
        ):
            total += sum(m for z, m in zip(zs, ms) if abs(z) <= rho)
        return total


def _sorted_with_mult(zs: list[complex], ms: list[int]):
    order = np.argsort([abs(z) for z in zs])
    return (
        tuple(zs[i] for i in order),
        tuple(ms[i] for i in order),
    )


# ---------------------------------------------------------------------------
# Argument-principle counting
# ---------------------------------------------------------------------------


def _box_boundary(corners, n_per_side: int):
    lo, hi = corners
    x0, y0, x1, y1 = lo.real, lo.imag, hi.real, hi.imag
    t = np.linspace(0.0, 1.0, n_per_side, endpoint=False)
    bottom = x0 + t * (x1 - x0) + 1j * y0
    right = x1 + 1j * (y0 + t * (y1 - y0))
    top = x1 - t * (x1 - x0) + 1j * y1
    left = x0 + 1j * (y1 - t * (y1 - y0))
    pts = np.concatenate([bottom, right, top, left])
    return np.append(pts, pts[0])


def count_zeros_in_box(
    G,
    corners: tuple[complex, complex],
    n_per_side: int = 64,
    max_refinements: int = 24,
    max_retries: int = 4,
) -> int:
    """Number of zeros (with multiplicity) inside a rectangle.

    ``corners`` is (lower-left, upper-right).  The winding number of G around
    the boundary is accumulated from phase increments, inserting midpoints
    wherever a single increment reaches pi/2 so a 2*pi slip cannot occur.  If
    refinement stalls (a zero essentially on the boundary), the box is grown
    by a small random-free deterministic margin and recounted.
    """
    lo, hi = complex(corners[0]), complex(corners[1])
    if not (hi.real > lo.real and hi.imag > lo.imag):
        raise ValueError("corners must be (lower-left, upper-right)")

    pad = 0.0
    diag = abs(hi - lo)
    for attempt in range(max_retries):
        grow = pad * (1 + attempt)
        pts = _box_boundary((lo - grow * (1 + 1j), hi + grow * (1 + 1j)), n_per_side)
        vals = np.asarray(G(pts), dtype=complex)
        for _ in range(max_refinements):
            dphi = np.angle(vals[1:] / vals[:-1])
            bad = np.abs(dphi) >= _MAX_PHASE_STEP
            if not np.any(bad):
                total = float(np.sum(dphi))
                winding = total / (2.0 * np.pi)
                if abs(winding - round(winding)) > 0.05:
                    break  # inconsistent walk; retry with a grown box
                return int(round(winding))
            (idx,) = np.nonzero(bad)
            mids = 0.5 * (pts[idx] + pts[idx + 1])
            if np.min(np.abs(pts[idx + 1] - pts[idx])) < 1e-12 * max(1.0, diag):
                break  # zero pinned on the boundary; retry with a grown box
            mid_vals = np.asarray(G(mids), dtype=complex)
            pts = np.insert(pts, idx + 1, mids)
            vals = np.insert(vals, idx + 1, mid_vals)
        pad = max(pad, 1e-3 * max(1.0, diag))
    raise ZeroSearchError(
        f"boundary walk failed for box {corners} after {max_retries} retries"
    )


def _newton_polish(G, k0: complex, scale: float) -> complex:
    k = complex(k0)
    for _ in range(_NEWTON_STEPS):
        h = 1e-7 * (1.0 + abs(k))
        g = complex(G(k))
        dg = (complex(G(k + h)) - complex(G(k - h))) / (2.0 * h)
        if dg == 0:
            break
        step = g / dg
        k -= step
        if abs(step) < 1e-13 * (1.0 + abs(k)):
            break
    return k


def _in_box(k: complex, lo: complex, hi: complex, slack: float) -> bool:
    return (
        lo.real - slack <= k.real <= hi.real + slack
        and lo.imag - slack <= k.imag <= hi.imag + slack
    )


def _search_boxes(G, boxes, residual_tol, floor, found, mult):
    # Depth-first refinement: each box is either empty, polished (count 1),
    # or split in four; a box that reaches the size floor still holding n > 1
    # is recorded as one zero of multiplicity n.
    stack = list(boxes)
    while stack:
        lo, hi = stack.pop()
        n = count_zeros_in_box(G, (lo, hi))
        if n == 0:
            continue
        diag = abs(hi - lo)
        center = 0.5 * (lo + hi)
        if n == 1:
            k = _newton_polish(G, center, diag)
            resid = abs(complex(G(k)))
            if resid <= residual_tol * (1.0 + abs(k)) and _in_box(k, lo, hi, 0.05 * diag):
                found.append(k)
                mult.append(1)
                continue
            # Newton strayed or stalled: subdividing shrinks the basin
        if diag < floor:
            k = _newton_polish(G, center, diag)
            resid = abs(complex(G(k)))
            if resid > np.sqrt(residual_tol) * (1.0 + abs(k)) or not _in_box(
                k, lo, hi, 2.0 * diag
            ):
                raise ZeroSearchError(
                    f"no convergence in floor-size box ({lo}, {hi}):"
                    f" count {n}, residual {resid:.3g} at {k}"
                )
            found.append(k)
            mult.append(n)
            continue
        mid = 0.5 * (lo + hi)
        stack.extend(
            [
                (lo, mid),
                (complex(mid.real, lo.imag), complex(hi.real, mid.imag)),
                (complex(lo.real, mid.imag), complex(mid.real, hi.imag)),
                (mid, hi),
            ]
        )


def find_zeros(
    G,
    search_radius: float,
    quadrants: str = "both",
    box_size: float = 0.9,
    residual_tol: float = 1e-10,
    floor: float = 1e-5,
    im_max: float | None = None,
    axis_band: float = AXIS_BAND,
) -> ZeroCatalog:
    """Locate right-half-plane zeros of G with |k| <= search_radius.

    The quarter squares [band, R] x [+/-band, +/-R] are tiled with boxes of
    roughly ``box_size``; boxes wholly outside the search disk are skipped
    unless they straddle it.  Each nonempty box is subdivided until it holds
    one zero, which Newton then polishes to |G| <= residual_tol * (1 + |k|).
    ``im_max`` optionally caps the searched |Im k| (the zeros of spectral
    functions of finite tubes hug the real axis, so a cap speeds things up;
    the default searches the full quarter square).
    """
    if search_radius <= 0:
        raise ValueError("search_radius must be positive")
    R = float(search_radius)
    height = R if im_max is None else min(R, float(im_max))

    def quadrant_boxes(sign: int):
        nx = max(1, int(np.ceil((R - axis_band) / box_size)))
        ny = max(1, int(np.ceil((height - axis_band) / box_size)))
        xs = np.linspace(axis_band, R, nx + 1)
        ys = np.linspace(axis_band, height, ny + 1)
        boxes = []
        for i in range(nx):
            for j in range(ny):
                lo = complex(xs[i], ys[j])
                hi = complex(xs[i + 1], ys[j + 1])
                if abs(complex(xs[i], ys[j])) > R:
                    continue  # entirely outside the disk
                if sign < 0:
                    lo, hi = complex(xs[i], -ys[j + 1]), complex(xs[i + 1], -ys[j])
                boxes.append((lo, hi))
        return boxes

    first: list[complex] = []
    m1: list[int] = []
    fourth: list[complex] = []
    m4: list[int] = []
    if quadrants in ("both", "first"):
        _search_boxes(G, quadrant_boxes(+1), residual_tol, floor, first, m1)
    if quadrants in ("both", "fourth"):
        _search_boxes(G, quadrant_boxes(-1), residual_tol, floor, fourth, m4)

    def dedupe(zs, ms):
        out_z: list[complex] = []
        out_m: list[int] = []
        for z, m in zip(zs, ms):
            if min(abs(z.real), abs(z.imag)) < axis_band:
                continue
            for i, w in enumerate(out_z):
                if abs(z - w) < 1e-6 * (1.0 + abs(z)):
                    out_m[i] = max(out_m[i], m)
                    break
            else:
                out_z.append(z)
                out_m.append(m)
        return out_z, out_m

    first, m1 = dedupe(first, m1)
    fourth, m4 = dedupe(fourth, m4)
    fq, fm = _sorted_with_mult(first, m1)
    qq, qm = _sorted_with_mult(fourth, m4)
    return ZeroCatalog(
        first_quadrant=fq,
        fourth_quadrant=qq,
        mult_first=fm,
        mult_fourth=qm,
        search_radius=R,
    )


def zero_density(catalog: ZeroCatalog, rho: float) -> tuple[int, float]:
    """(zeros in the shell rho < |k| <= rho + 1, cumulative count ratio).

    The cumulative ratio n(rho)/rho tends to (r_ell + ell)/pi for spectral
    functions of admissible tubes; the shell count tends to the same limit.
    """
    if rho + 1.0 > catalog.search_radius + 1e-9:
        raise ValueError(
            f"need search_radius >= rho + 1 = {rho + 1}, have {catalog.search_radius}"
        )
    n_rho = catalog.count_within(rho)
    n_next = catalog.count_within(rho + 1.0)
    return n_next - n_rho, n_rho / rho


# ---------------------------------------------------------------------------
# Canonical product over the catalogue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HadamardFactor:
    """Evaluator for the genus-one canonical product over catalogued zeros.

    ``eval`` returns E(k); ``log_abs`` its log-modulus (safe against
    overflow); ``log_imag_axis`` the signed logarithm ln(E(i kappa)/kappa)
    + ln|kappa| evaluated without cancellation.  ``tail`` is the estimated
    quadratic-in-k coefficient lost to truncating the product at the search
    radius: ln|E_full(i kappa)| ~ log_imag_axis(kappa) + tail * kappa^2 and
    ln|E_full(k)| ~ log_abs(k) - tail * k^2 on the real axis.
    """

    catalog: ZeroCatalog
    _zeros: np.ndarray = field(repr=False, compare=False)
    _mults: np.ndarray = field(repr=False, compare=False)

    @property
    def tail(self) -> float:
        R = self.catalog.search_radius
        density = self.catalog.count_within(R) / R
        return density / R

    def _pair_logs(self, k) -> np.ndarray:
        # sum_j m_j * [log(1 - k/k_j) + k/k_j + log(1 + k/k_j*) - k/k_j*]
        kc = np.asarray(k, dtype=complex)[..., None]
        zj = self._zeros
        terms = (
            np.log(1.0 - kc / zj)
            + kc / zj
            + np.log(1.0 + kc / np.conj(zj))
            - kc / np.conj(zj)
        )
        return np.sum(self._mults * terms, axis=-1)

    def eval(self, k):
        """E(k) = -ik * (canonical product); scalar or array."""
        kc = np.asarray(k, dtype=complex)
        out = -1j * kc * np.exp(self._pair_logs(k))
        return out if out.ndim else complex(out)

    def log_abs(self, k, tail_corrected: bool = False):
        """ln |E(k)|; with ``tail_corrected`` the truncated-product bias is
        removed using the continuum tail estimate."""
        kc = np.asarray(k, dtype=complex)
        out = np.log(np.abs(kc)) + np.real(self._pair_logs(k))
        if tail_corrected:
            out = out - self.tail * np.real(kc * kc)
        return out if out.ndim else float(out)

    def log_imag_axis(self, kappa, tail_corrected: bool = False):
        """ln (E(i kappa) / sign(kappa)) for real kappa, summed as real terms.

        E(i kappa) = kappa * prod (1 + kappa^2/|k_j|^2)
        exp(2 kappa Im k_j / |k_j|^2), so the result is real with the sign of
        kappa handled by the caller via sign(E(i kappa)) = sign(kappa).
        """
        kap = np.asarray(kappa, dtype=float)[..., None]
        zj = self._zeros
        mod2 = np.abs(zj) ** 2
        terms = np.log1p(kap**2 / mod2) + 2.0 * kap * zj.imag / mod2
        out = np.log(np.abs(kap[..., 0])) + np.sum(self._mults * terms, axis=-1)
        if tail_corrected:
            out = out + self.tail * kap[..., 0] ** 2
        return out if out.ndim else float(out)


def build_E(catalog: ZeroCatalog) -> HadamardFactor:
    """Bundle the catalogue into a canonical-product evaluator."""
    zs = list(catalog.first_quadrant) + list(catalog.fourth_quadrant)
    ms = list(catalog.mult_first) + list(catalog.mult_fourth)
    if not zs:
        zs, ms = [], []
    return HadamardFactor(
        catalog=catalog,
        _zeros=np.asarray(zs, dtype=complex),
        _mults=np.asarray(ms, dtype=float),
    )


# ---------------------------------------------------------------------------
# Zeros file: 're,im,mult' rows, fourth quadrant after a '# quadrant-4' line
# ---------------------------------------------------------------------------


def write_zeros_csv(catalog: ZeroCatalog, path: str | Path) -> None:
    lines = ["re,im,mult"]
    for z, m in zip(catalog.first_quadrant, catalog.mult_first):
        lines.append(f"{z.real:.15g},{z.imag:.15g},{m}")
    lines.append("# quadrant-4")
    for z, m in zip(catalog.fourth_quadrant, catalog.mult_fourth):
        lines.append(f"{z.real:.15g},{z.imag:.15g},{m}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_zeros_csv(path: str | Path, search_radius: float | None = None) -> ZeroCatalog:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0].strip() != "re,im,mult":
        raise ValueError(f"{path}: expected header 're,im,mult'")
    first: list[complex] = []
    fourth: list[complex] = []
    m1: list[int] = []
    m4: list[int] = []
    target, mt = first, m1
    for ln in lines[1:]:
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("#"):
            if "quadrant-4" in ln:
                target, mt = fourth, m4
            continue
        a, b, c = ln.split(",")
        target.append(complex(float(a), float(b)))
        mt.append(int(c))
    radius = search_radius
    if radius is None:
        radius = max([abs(z) for z in first + fourth], default=1.0)
    fq, fm = _sorted_with_mult(first, m1)
    qq, qm = _sorted_with_mult(fourth, m4)
    return ZeroCatalog(
        first_quadrant=fq,
        fourth_quadrant=qq,
        mult_first=fm,
        mult_fourth=qm,
        search_radius=radius,
    )
