"""Sum-of-Gaussians fitting of the normalized histogram.

A histogram with several modes is modelled as a sum of symmetric 1-D bell
curves a*exp(-(g-mu)^2/(2*sigma^2)). Initial parameters come from a
polynomial least-squares sketch of the histogram (peak positions, heights,
and distances to the surrounding minima/roots); batch gradient descent on
the squared-residual objective then refines them.

The fitted mixture additionally carries:
  * partition points: midpoints between consecutive centers, used later to
    cluster gray levels;
  * reaches: per-component integer intervals [c1, c2] where that component
    dominates every other one, found by scanning dominance between each
    pair of consecutive peaks (consecutive reaches share exactly their
    crossover endpoint and together tile [0, 255]);
  * a domain map assigning each gray level the smallest component index
    whose reach contains it.

The descent loop is JIT-compiled when numba is importable; a vectorized
numpy fallback implements the same update, clamp, and restart policy.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .histogram import NormalizedHistogram
from .imagio import LEVELS

A_MIN = 1e-6
A_MAX = 1.5
SIGMA_MIN = 0.5
SIGMA_MAX = 256.0
MU_MIN = 0.0
MU_MAX = float(LEVELS - 1)

_GRID = np.arange(LEVELS, dtype=float)

_POLY_DEGREES = (4, 6, 8, 10, 12)
_POLY_RMS_TARGET = 0.05
_FALLBACK_SIGMA = 32.0
_ROOT_IMAG_TOL = 1e-9

_DIVERGENCE_RUN = 20
_MAX_RESTARTS = 5

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - exercised only without numba
    _njit = None


@dataclass(frozen=True)
class Gaussian1D:
    """Symmetric bell curve: height a, center mu, spread sigma."""

    a: float
    mu: float
    sigma: float

    def __post_init__(self):
        if not (0.0 < self.a <= A_MAX):
            raise ValueError(f"height must lie in (0, {A_MAX}], got {self.a}")
        if not (MU_MIN <= self.mu <= MU_MAX):
            raise ValueError(f"center must lie in [{MU_MIN}, {MU_MAX}], got {self.mu}")
        if not (SIGMA_MIN <= self.sigma <= SIGMA_MAX):
            raise ValueError(
                f"sigma must lie in [{SIGMA_MIN}, {SIGMA_MAX}], got {self.sigma}"
            )


@dataclass(frozen=True)
class FitConfig:
    """Gradient-descent settings.

    rho is the learning rate of the update p_new = p_old - rho * dJ/dp.
    peak_ignore_ratio drops initial peaks smaller than that fraction of the
    tallest polynomial value.
    """

    rho: float = 0.04
    max_iters: int = 30000
    tol: float = 1e-9
    peak_ignore_ratio: float = 0.2

    def __post_init__(self):
        if self.rho <= 0 or self.tol <= 0 or self.max_iters < 0:
            raise ValueError("rho and tol must be positive, max_iters non-negative")
        if not (0.0 <= self.peak_ignore_ratio < 1.0):
            raise ValueError("peak_ignore_ratio must lie in [0, 1)")


@dataclass(frozen=True)
class MixtureFit:
    """Fitted sum of Gaussians with partition points and dominance reaches."""

    gaussians: list
    partition_points: list = field(default_factory=list)
    reaches: list = field(default_factory=list)
    final_objective: float = 0.0
    diverged: bool = False

    def __post_init__(self):
        if not self.gaussians:
            raise ValueError("a mixture needs at least one component")
        mus = [g.mu for g in self.gaussians]
        if any(b < a for a, b in zip(mus, mus[1:])):
            raise ValueError("components must be ordered by ascending center")

    @property
    def n_components(self) -> int:
        return len(self.gaussians)


def _as_series(h) -> np.ndarray:
    values = h.h if isinstance(h, NormalizedHistogram) else np.asarray(h, dtype=float)
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != LEVELS:
        raise ValueError(f"expected a {LEVELS}-value series, got {values.size}")
    return values


def _arrays(fit: MixtureFit):
    a = np.array([g.a for g in fit.gaussians], dtype=float)
    mu = np.array([g.mu for g in fit.gaussians], dtype=float)
    sg = np.array([g.sigma for g in fit.gaussians], dtype=float)
    return a, mu, sg


def _component_matrix(a, mu, sg, g):
    z = (np.asarray(g, dtype=float)[None, :] - mu[:, None]) / sg[:, None]
    return a[:, None] * np.exp(-0.5 * z * z)


def eval_mixture(fit: MixtureFit, g):
    """Evaluate the mixture sum at gray level(s) g (scalar or array)."""
    a, mu, sg = _arrays(fit)
    scalar = np.isscalar(g) or np.ndim(g) == 0
    gs = np.atleast_1d(np.asarray(g, dtype=float))
    total = _component_matrix(a, mu, sg, gs).sum(axis=0)
    return float(total[0]) if scalar else total


def component_values(fit: MixtureFit, g=None) -> np.ndarray:
    """Per-component values, shape (n_components, len(g)); g defaults to 0..255."""
    a, mu, sg = _arrays(fit)
    gs = _GRID if g is None else np.atleast_1d(np.asarray(g, dtype=float))
    return _component_matrix(a, mu, sg, gs)


def mixture_objective(fit: MixtureFit, h) -> float:
    """Half the summed squared residual between the mixture and the series."""
    target = _as_series(h)
    r = eval_mixture(fit, _GRID) - target
    return 0.5 * float(r @ r)


def _reach_bounds(a, mu, sg) -> list:
    """Crossover level between each pair of consecutive components.

    The dominance switch is searched on the integer levels between the two
    rounded centers; scanning only that band keeps every reach an interval
    even when unequal sigmas would make a full-range argmax disconnected.
    """
    bounds = []
    for i in range(len(mu) - 1):
        lo = int(np.floor(mu[i] + 0.5))
        hi = int(np.floor(mu[i + 1] + 0.5))
        lo = max(0, min(lo, LEVELS - 1))
        hi = max(lo, min(hi, LEVELS - 1))
        gs = np.arange(lo, hi + 1, dtype=float)
        zi = (gs - mu[i]) / sg[i]
        zj = (gs - mu[i + 1]) / sg[i + 1]
        fi = a[i] * np.exp(-0.5 * zi * zi)
        fj = a[i + 1] * np.exp(-0.5 * zj * zj)
        hits = np.flatnonzero(fj >= fi)
        if hits.size:
            b = lo + int(hits[0])
        else:
            b = int(np.floor(0.5 * (mu[i] + mu[i + 1]) + 0.5))
        if bounds:
            b = max(b, bounds[-1])
        bounds.append(b)
    return bounds


def _reach_intervals(a, mu, sg) -> list:
    if len(mu) == 1:
        return [(0, LEVELS - 1)]
    bounds = _reach_bounds(a, mu, sg)
    starts = [0] + bounds
    ends = bounds + [LEVELS - 1]
    return list(zip(starts, ends))


def _pack(a, mu, sg, objective: float, diverged: bool) -> MixtureFit:
    order = np.argsort(mu, kind="stable")
    a, mu, sg = a[order], mu[order], sg[order]
    gaussians = [
        Gaussian1D(float(a[i]), float(mu[i]), float(sg[i])) for i in range(len(a))
    ]
    partition = [0.5 * (mu[i] + mu[i + 1]) for i in range(len(mu) - 1)]
    reaches = _reach_intervals(a, mu, sg)
    return MixtureFit(gaussians, partition, reaches, float(objective), diverged)


def compute_reaches(fit: MixtureFit) -> MixtureFit:
    """Return a copy of the fit with dominance reaches recomputed."""
    a, mu, sg = _arrays(fit)
    return dataclasses.replace(fit, reaches=_reach_intervals(a, mu, sg))


def domain_of(fit: MixtureFit, g: int) -> int:
    """Smallest component index (0-based) whose reach contains g."""
    if not fit.reaches:
        raise ValueError("reaches have not been computed")
    ends = np.array([r[1] for r in fit.reaches[:-1]])
    return int(np.searchsorted(ends, g, side="left"))


def domain_map(fit: MixtureFit) -> np.ndarray:
    """Domain index for every gray level 0..255."""
    if not fit.reaches:
        raise ValueError("reaches have not been computed")
    ends = np.array([r[1] for r in fit.reaches[:-1]])
    return np.searchsorted(ends, np.arange(LEVELS), side="left")


def _polynomial_sketch(values: np.ndarray) -> Polynomial:
    for degree in _POLY_DEGREES:
        poly = Polynomial.fit(_GRID, values, degree)
        rms = float(np.sqrt(np.mean((poly(_GRID) - values) ** 2)))
        if rms < _POLY_RMS_TARGET:
            break
    return poly


def _real_in_range(roots: np.ndarray) -> np.ndarray:
    real = roots[np.abs(roots.imag) < _ROOT_IMAG_TOL].real
    return np.sort(real[(real >= 0.0) & (real <= MU_MAX)])


def _critical_points(poly: Polynomial):
    """(maxima, minima) positions of the polynomial inside [0, 255]."""
    crit = _real_in_range(poly.deriv().roots())
    if crit.size == 0:
        return crit, crit
    curvature = poly.deriv(2)(crit)
    return crit[curvature < 0], crit[curvature > 0]


def heuristic_init(h, cfg: FitConfig) -> MixtureFit:
    """Pick starting parameters from a polynomial sketch of the histogram.

    1. Fit polynomials of degree 4, 6, ... 12 and keep the first whose RMS
       residual drops below 0.05 (or the degree-12 one).
    2. Take its positive maxima (derivative roots with negative curvature),
       dropping peaks below peak_ignore_ratio times the global maximum.
    3. Per surviving peak: height and location seed a and mu; sigma is the
       distance to the nearest polynomial minimum or real root (floored at
       0.5).
    4. Partition points are the midpoints of consecutive centers.

    With no usable peaks, a single component at the histogram argmax with
    sigma 32 is used instead.
    """
    values = _as_series(h)
    if not np.any(values > 0):
        raise ValueError("cannot initialize from an all-zero histogram")
    poly = _polynomial_sketch(values)
    maxima, minima = _critical_points(poly)
    peaks = maxima[poly(maxima) > 0] if maxima.size else maxima
    if peaks.size:
        global_max = max(float(poly(_GRID).max()), float(poly(peaks).max()))
        peaks = peaks[poly(peaks) >= cfg.peak_ignore_ratio * global_max]
    if peaks.size == 0:
        top = int(np.argmax(values))
        a = np.array([min(max(float(values[top]), A_MIN), A_MAX)])
        mu = np.array([float(top)])
        sg = np.array([_FALLBACK_SIGMA])
    else:
        markers = np.concatenate((minima, _real_in_range(poly.roots())))
        a = np.clip(poly(peaks), A_MIN, A_MAX)
        mu = peaks.astype(float)
        if markers.size:
            dist = np.abs(mu[:, None] - markers[None, :]).min(axis=1)
        else:
            dist = np.full(mu.shape, _FALLBACK_SIGMA)
        sg = np.clip(dist, SIGMA_MIN, SIGMA_MAX)
    fit = _pack(a, mu, sg, 0.0, False)
    return dataclasses.replace(fit, final_objective=mixture_objective(fit, values))


def _descent_numpy(target, a_init, mu_init, sg_init, rho, max_iters, tol):
    """Vectorized batch gradient descent; see fit_mixture for the policy."""

    def state(a, mu, sg):
        d = _GRID[None, :] - mu[:, None]
        e = np.exp(-0.5 * (d / sg[:, None]) ** 2)
        f = a[:, None] * e
        r = f.sum(axis=0) - target
        return d, e, f, r, 0.5 * float(r @ r)

    a, mu, sg = a_init.copy(), mu_init.copy(), sg_init.copy()
    d, e, f, r, j_cur = state(a, mu, sg)
    best = (a.copy(), mu.copy(), sg.copy(), j_cur)
    grow = 0
    restarts = 0
    diverged = False
    for _ in range(max_iters):
        grad_a = e @ r
        w = f * d
        grad_mu = (w @ r) / (sg * sg)
        grad_sg = ((w * d) @ r) / (sg ** 3)
        a = np.clip(a - rho * grad_a, A_MIN, A_MAX)
        mu = np.clip(mu - rho * grad_mu, MU_MIN, MU_MAX)
        sg = np.clip(sg - rho * grad_sg, SIGMA_MIN, SIGMA_MAX)
        d, e, f, r, j_new = state(a, mu, sg)
        if j_new < best[3]:
            best = (a.copy(), mu.copy(), sg.copy(), j_new)
        if abs(j_new - j_cur) < tol and j_new <= best[3] + tol:
            break
        # a step counts toward divergence if it grew, or stalled above the
        # best objective seen (clamped blow-ups plateau instead of growing)
        if j_new > j_cur or (j_new >= j_cur and j_new > best[3]):
            grow += 1
        else:
            grow = 0
        j_cur = j_new
        if grow >= _DIVERGENCE_RUN:
            if restarts >= _MAX_RESTARTS:
                diverged = True
                break
            restarts += 1
            rho *= 0.5
            a, mu, sg = a_init.copy(), mu_init.copy(), sg_init.copy()
            d, e, f, r, j_cur = state(a, mu, sg)
            grow = 0
    return best[0], best[1], best[2], best[3], diverged


def _descent_loops(target, a_init, mu_init, sg_init, rho, max_iters, tol):
    # Same policy as _descent_numpy, written with plain loops for the JIT.
    n = a_init.size
    levels = target.size
    a = a_init.copy()
    mu = mu_init.copy()
    sg = sg_init.copy()
    e = np.empty((n, levels))
    r = np.empty(levels)

    def evaluate():
        for g in range(levels):
            r[g] = -target[g]
        for i in range(n):
            for g in range(levels):
                z = (g - mu[i]) / sg[i]
                eg = np.exp(-0.5 * z * z)
                e[i, g] = eg
                r[g] += a[i] * eg
        j = 0.0
        for g in range(levels):
            j += r[g] * r[g]
        return 0.5 * j

    j_cur = evaluate()
    best_a = a.copy()
    best_mu = mu.copy()
    best_sg = sg.copy()
    best_j = j_cur
    grow = 0
    restarts = 0
    diverged = False
    for _ in range(max_iters):
        for i in range(n):
            ai = a[i]
            mi = mu[i]
            si = sg[i]
            grad_a = 0.0
            grad_mu = 0.0
            grad_sg = 0.0
            for g in range(levels):
                d = g - mi
                eg = e[i, g]
                w = r[g] * ai * eg * d
                grad_a += r[g] * eg
                grad_mu += w
                grad_sg += w * d
            a[i] = min(max(ai - rho * grad_a, A_MIN), A_MAX)
            mu[i] = min(max(mi - rho * grad_mu / (si * si), MU_MIN), MU_MAX)
            sg[i] = min(max(si - rho * grad_sg / (si * si * si), SIGMA_MIN), SIGMA_MAX)
        j_new = evaluate()
        if j_new < best_j:
            best_j = j_new
            for i in range(n):
                best_a[i] = a[i]
                best_mu[i] = mu[i]
                best_sg[i] = sg[i]
        if abs(j_new - j_cur) < tol and j_new <= best_j + tol:
            break
        if j_new > j_cur or (j_new >= j_cur and j_new > best_j):
            grow += 1
        else:
            grow = 0
        j_cur = j_new
        if grow >= _DIVERGENCE_RUN:
            if restarts >= _MAX_RESTARTS:
                diverged = True
                break
            restarts += 1
            rho *= 0.5
            for i in range(n):
                a[i] = a_init[i]
                mu[i] = mu_init[i]
                sg[i] = sg_init[i]
            j_cur = evaluate()
            grow = 0
    return best_a, best_mu, best_sg, best_j, diverged


if _njit is not None:
    _descent_fast = _njit(cache=True)(_descent_loops)
else:  # pragma: no cover - exercised only without numba
    _descent_fast = None


def fit_mixture(h, init: MixtureFit, cfg: FitConfig) -> MixtureFit:
    """Refine mixture parameters by batch gradient descent.

    Each step updates every parameter by -rho times its gradient of the
    half-squared-residual objective, then clamps it back into the allowed
    box. If the objective grows for 20 consecutive steps the learning rate
    is halved and the parameters restart from init (at most 5 times); after
    that the best parameters seen so far are returned with diverged=True.
    The best-so-far parameters are also what a normal exit returns, so the
    reported objective never exceeds the initial one.
    """
    if not init.gaussians:
        raise ValueError("init must contain at least one component")
    target = _as_series(h)
    a0, mu0, sg0 = _arrays(init)
    if cfg.max_iters == 0:
        residual = _component_matrix(a0, mu0, sg0, _GRID).sum(axis=0) - target
        return _pack(a0, mu0, sg0, 0.5 * float(residual @ residual), False)
    descent = _descent_fast if _descent_fast is not None else _descent_numpy
    a, mu, sg, best_j, diverged = descent(
        np.ascontiguousarray(target),
        np.ascontiguousarray(a0),
        np.ascontiguousarray(mu0),
        np.ascontiguousarray(sg0),
        float(cfg.rho),
        int(cfg.max_iters),
        float(cfg.tol),
    )
    return _pack(np.asarray(a), np.asarray(mu), np.asarray(sg), float(best_j),
                 bool(diverged))
