"""Eigenvalues of the Robin-type transcendental conditions, generalized
Fourier coefficients against the resulting trigonometric families, and
truncated evaluation of the exponentially damped correction series.

Two boundary kinds are supported on (0, l) with diffusivity k and Robin
coefficient nu:

* neumann_robin:    roots sigma of  k*sigma*tan(sigma*l) = nu,
  one per bracket (m*pi/l, (m+1/2)*pi/l), m = 0, 1, 2, ...
* dirichlet_robin:  roots sigma of  k*sigma = -nu*tan(sigma*l),
  one per bracket ((m-1/2)*pi/l, m*pi/l), m = 1, 2, ...

Roots are found in a reduced variable that stays away from the tangent
poles, which lets the defining-equation residual be evaluated to machine
precision even for large roots (evaluating tan(sigma*l) directly at
sigma*l ~ 150 cannot get below ~1e-12 in double precision):

* neumann_robin roots approach pi-multiples, so the variable is
  theta = sigma*l - m*pi and the equation is k*sigma*tan(theta) = nu.
* dirichlet_robin roots approach HALF-multiples, so the variable is
  phi = sigma*l - (m - 1/2)*pi and the equation, cleared of the cotangent,
  is k*sigma*sin(phi) = nu*cos(phi) (same zeros, no poles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polyalg import Poly1, trig_poly_integral

__all__ = [
    "EigenSystem",
    "ModalSeries",
    "SeriesValue",
    "eigenvalues",
    "fourier_coeffs",
    "evaluate_series",
    "evaluate_series_info",
]

KINDS = ("neumann_robin", "dirichlet_robin")


@dataclass(frozen=True)
class EigenSystem:
    """Increasing eigenvalue roots with their brackets and residuals.

    `indices[n]` is the bracket index m of root n (0-based for neumann_robin,
    1-based for dirichlet_robin); `offsets[n]` is the distance of sigma*l
    above the bracket's lower edge, in (0, pi/2): sigma*l = m*pi + offset
    (neumann_robin) or (m - 1/2)*pi + offset (dirichlet_robin).
    `residuals[n]` is the defining-equation residual evaluated in the reduced
    variable (for dirichlet_robin, of the pole-free form
    k*sigma*sin(offset) - nu*cos(offset)).
    """

    kind: str
    k: float
    nu: float
    l: float
    indices: tuple[int, ...]
    offsets: tuple[float, ...]
    roots: tuple[float, ...]
    residuals: tuple[float, ...]
    brackets: tuple[tuple[float, float], ...]

    @property
    def n_terms(self) -> int:
        return len(self.roots)

    def sin_at_l(self) -> np.ndarray:
        """sin(sigma_n * l) computed stably from the stored offsets."""
        m = np.asarray(self.indices)
        th = np.asarray(self.offsets)
        sign = np.where(m % 2 == 0, 1.0, -1.0)
        if self.kind == "neumann_robin":
            return sign * np.sin(th)
        return -sign * np.cos(th)

    def cos_at_l(self) -> np.ndarray:
        """cos(sigma_n * l) computed stably from the stored offsets."""
        m = np.asarray(self.indices)
        th = np.asarray(self.offsets)
        sign = np.where(m % 2 == 0, 1.0, -1.0)
        if self.kind == "neumann_robin":
            return sign * np.cos(th)
        return sign * np.sin(th)

    def norms(self) -> np.ndarray:
        """L2 norms squared of the trigonometric family over [0, l]:
        (nu*l + k*sin^2(sigma*l)) / (2*nu) for neumann_robin (cosines),
        (nu*l + k*cos^2(sigma*l)) / (2*nu) for dirichlet_robin (sines)."""
        if self.kind == "neumann_robin":
            trig_l = self.sin_at_l()
        else:
            trig_l = self.cos_at_l()
        return (self.nu * self.l + self.k * trig_l**2) / (2.0 * self.nu)


def _reduced_equation(kind: str, k: float, nu: float, l: float, m: int):
    # Returns (h, dh) in the offset variable on (0, pi/2); h is negative at 0
    # and increases through a single zero. Neither form touches a tan() pole:
    # the neumann_robin root keeps tan(theta) = nu*l/(k*sigma*l) small, and
    # the dirichlet_robin equation is cleared of its cotangent entirely.
    if kind == "neumann_robin":

        def h(th):
            return k * (m * math.pi + th) / l * math.tan(th) - nu

        def dh(th):
            c = math.cos(th)
            return k / l * math.tan(th) + k * (m * math.pi + th) / l / (c * c)

    else:
        base = (m - 0.5) * math.pi

        def h(ph):
            return k * (base + ph) / l * math.sin(ph) - nu * math.cos(ph)

        def dh(ph):
            s, c = math.sin(ph), math.cos(ph)
            return (k / l + nu) * s + k * (base + ph) / l * c

    return h, dh


def _find_root(kind: str, k: float, nu: float, l: float, m: int) -> tuple[float, float]:
    """Bisection to width 1e-10 then up to 5 safeguarded Newton steps in the
    reduced variable. Returns (theta, residual)."""
    h, dh = _reduced_equation(kind, k, nu, l, m)
    lo, hi = 0.0, math.pi / 2
    # h(0) = -nu < 0 and h > 0 at pi/2 for both kinds
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if h(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    th = 0.5 * (lo + hi)
    val = h(th)
    for _ in range(5):
        step = val / dh(th)
        cand = th - step
        if not (lo < cand < hi):
            break
        cval = h(cand)
        if abs(cval) >= abs(val):
            break
        th, val = cand, cval
    return th, abs(val)


def eigenvalues(kind: str, k: float, nu: float, l: float, n_max: int) -> EigenSystem:
    """First n_max roots of the boundary eigenvalue condition.

    Each bracket contains exactly one root for positive parameters, so the
    bisection cannot fail; Newton steps are rejected whenever they leave the
    bracket.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if k <= 0 or nu <= 0 or l <= 0:
        raise ValueError("k, nu, l must be positive")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    first = 0 if kind == "neumann_robin" else 1
    indices, offsets, roots, residuals, brackets = [], [], [], [], []
    for m in range(first, first + n_max):
        th, res = _find_root(kind, k, nu, l, m)
        if kind == "neumann_robin":
            sigma = (m * math.pi + th) / l
            brackets.append((m * math.pi / l, (m + 0.5) * math.pi / l))
        else:
            sigma = ((m - 0.5) * math.pi + th) / l
            brackets.append(((m - 0.5) * math.pi / l, m * math.pi / l))
        indices.append(m)
        offsets.append(th)
        roots.append(sigma)
        residuals.append(res)
    return EigenSystem(
        kind,
        float(k),
        float(nu),
        float(l),
        tuple(indices),
        tuple(offsets),
        tuple(roots),
        tuple(residuals),
        tuple(brackets),
    )


@dataclass(frozen=True)
class ModalSeries:
    """Truncated correction series sum_n amplitudes[n] * exp(-sigma_n^2 k t)
    * trig(sigma_n x), plus a constant offset."""

    eigen: EigenSystem
    amplitudes: tuple[float, ...]
    offset: float = 0.0
    trig: str = "cos"

    def __post_init__(self):
        if self.trig not in ("cos", "sin"):
            raise ValueError(f"trig must be 'cos' or 'sin', got {self.trig!r}")
        if len(self.amplitudes) != self.eigen.n_terms:
            raise ValueError("one amplitude per eigenvalue is required")
        object.__setattr__(self, "amplitudes", tuple(float(v) for v in self.amplitudes))

    @property
    def n_terms(self) -> int:
        return len(self.amplitudes)

    def term_bound(self, n: int, t: float) -> float:
        """Bound |amplitude_n * exp(-sigma_n^2 k t)| on term n at time t."""
        sig = self.eigen.roots[n]
        return abs(self.amplitudes[n]) * math.exp(-sig * sig * self.eigen.k * t)

    def grid(self, xs, ts, workers: int = 1) -> np.ndarray:
        """Full-sum evaluation on a tensor grid, shape (len(ts), len(xs)).

        All stored terms are summed (no tolerance truncation). Work proceeds
        in fixed 64-row blocks of ts whether or not threads are used, so the
        floating-point result is identical for every `workers` value; threads
        only spread the blocks.
        """
        xs = np.asarray(xs, dtype=float)
        ts = np.asarray(ts, dtype=float)
        sig = np.asarray(self.eigen.roots)
        amp = np.asarray(self.amplitudes)
        trig = np.cos if self.trig == "cos" else np.sin
        tmat = trig(np.outer(sig, xs))  # (n, nx)
        block = 64

        def rows(tchunk):
            decay = np.exp(-np.outer(tchunk, sig * sig * self.eigen.k))  # (nt, n)
            return (decay * amp) @ tmat + self.offset

        starts = range(0, ts.size, block)
        out = np.empty((ts.size, xs.size))
        if workers <= 1 or ts.size <= block:
            for s in starts:
                out[s : s + block] = rows(ts[s : s + block])
            return out
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(lambda s: rows(ts[s : s + block]), starts)
            for s, part in zip(starts, parts):
                out[s : s + block] = part
        return out


@dataclass(frozen=True)
class SeriesValue:
    """Evaluation result with the truncation side channel."""

    value: float
    terms_used: int
    tail_bound: float
    tail_verified: bool


def _beyond_stored_bound(series: ModalSeries, t: float) -> float:
    """Geometric bound on the tail past the stored terms, using the bracket
    lower edges sigma_n >= (first + n) * pi / l (shifted by -1/2 for the
    dirichlet_robin indexing) and the largest stored amplitude as envelope."""
    eig = series.eigen
    if not series.amplitudes:
        return 0.0
    env = max(abs(a) for a in series.amplitudes)
    if env == 0.0 or t <= 0.0:
        return 0.0 if env == 0.0 else math.inf
    base = math.pi / eig.l
    nxt = eig.indices[-1] + 1
    if eig.kind == "dirichlet_robin":
        lo = (nxt - 0.5) * base
        step = base
    else:
        lo = nxt * base
        step = base
    kt = eig.k * t
    first = math.exp(-lo * lo * kt)
    ratio = math.exp(-(2.0 * lo + step) * step * kt)
    if ratio >= 1.0:
        return math.inf
    return env * first / (1.0 - ratio)


def evaluate_series_info(
    series: ModalSeries, x: float, t: float, tol: float = 1e-10
) -> SeriesValue:
    """Evaluate with tolerance-driven truncation and report the side channel.

    For t > 0 the partial sum stops once the remaining stored terms plus the
    beyond-stored geometric bound fall below tol. At t = 0 the damping is
    gone, so all stored terms are summed and the tail cannot be certified
    unless the series is identically zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    eig = series.eigen
    n = series.n_terms
    trig = math.cos if series.trig == "cos" else math.sin
    if t <= 0.0:
        total = series.offset + sum(
            series.amplitudes[i] * trig(eig.roots[i] * x) for i in range(n)
        )
        verified = all(a == 0.0 for a in series.amplitudes)
        return SeriesValue(float(total), n, 0.0 if verified else math.inf, verified)
    weights = [series.term_bound(i, t) for i in range(n)]
    beyond = _beyond_stored_bound(series, t)
    # suffix[i] = sum of weights[i:] + beyond
    suffix = beyond
    cutoffs = [0.0] * (n + 1)
    cutoffs[n] = beyond
    for i in range(n - 1, -1, -1):
        suffix += weights[i]
        cutoffs[i] = suffix
    use = n
    for i in range(n + 1):
        if cutoffs[i] < tol:
            use = i
            break
    kt = eig.k * t
    total = series.offset
    for i in range(use):
        sig = eig.roots[i]
        total += series.amplitudes[i] * math.exp(-sig * sig * kt) * trig(sig * x)
    tail = cutoffs[use]
    return SeriesValue(float(total), use, tail, tail < tol)


def evaluate_series(series: ModalSeries, x: float, t: float, tol: float = 1e-10) -> float:
    """Truncated series value at a point; see evaluate_series_info for the
    truncation/verification side channel."""
    return evaluate_series_info(series, x, t, tol).value


def fourier_coeffs(eigen: EigenSystem, residual_initial: Poly1) -> np.ndarray:
    """Generalized Fourier amplitudes of a polynomial against the eigenbasis.

    neumann_robin:   b_n = 2*nu / (nu*l + k*sin^2(sigma_n l)) * int_0^l r(x) cos(sigma_n x) dx
    dirichlet_robin: b_n = 2*nu / (nu*l + k*cos^2(sigma_n l)) * int_0^l r(x) sin(sigma_n x) dx

    The integrals are exact (trig_poly_integral); sin/cos at the boundary are
    taken from the stable reduced offsets.
    """
    if residual_initial.coeffs and residual_initial.variable != "x":
        raise ValueError("residual_initial must be a polynomial in x")
    kind = "cos" if eigen.kind == "neumann_robin" else "sin"
    sin_l = eigen.sin_at_l()
    cos_l = eigen.cos_at_l()
    norms = eigen.norms()
    out = np.zeros(eigen.n_terms)
    coeffs = residual_initial.coeffs
    if not coeffs:
        return out
    for n, sigma in enumerate(eigen.roots):
        acc = 0.0
        for m, c in enumerate(coeffs):
            if c != 0.0:
                acc += c * trig_poly_integral(
                    m, sigma, eigen.l, kind, sin_l=float(sin_l[n]), cos_l=float(cos_l[n])
                )
        out[n] = acc / norms[n]
    return out
