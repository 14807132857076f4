import numpy as np
import pytest

from it2hspec.gaussfit import FitConfig, fit_mixture, heuristic_init
from it2hspec.imagio import GrayImage

GRID = np.arange(256, dtype=float)


@pytest.fixture(scope="session", autouse=True)
def warm_descent_kernel():
    """Load (or build) the JIT cache before any timed test runs."""
    h = np.exp(-0.5 * ((GRID - 128) / 20) ** 2)
    cfg = FitConfig(max_iters=5)
    fit_mixture(h, heuristic_init(h, cfg), cfg)


def gaussian_series(params):
    """Sum of (a, mu, sigma) bells evaluated on the 256-level grid."""
    total = np.zeros(256)
    for a, mu, sigma in params:
        total += a * np.exp(-0.5 * ((GRID - mu) / sigma) ** 2)
    return total


def sample_mixture_params(rng):
    """1-3 bell components with resolvable spacing.

    Heights in [0.4, 1] and sigmas in [10, 30]. Consecutive centers sit at
    least max(60, 2.4 * (sigma_i + sigma_j)) apart (the sum of two bells
    stops being bimodal around twice the average spread, so anything
    tighter has no recoverable second mode), and every center keeps
    max(20, 1.7 * sigma) clear of the gray-range ends so no component is
    half-truncated. Draws violating the placement are rejected.
    """
    k = int(rng.integers(1, 4))
    for _ in range(500):
        sigmas = rng.uniform(10.0, 30.0, k)
        margin = np.maximum(20.0, 1.7 * sigmas)
        gaps = [max(60.0, 2.4 * (sigmas[i] + sigmas[i + 1])) for i in range(k - 1)]
        lo, hi = margin[0], 255.0 - margin[-1]
        span = sum(gaps)
        if hi - lo - span <= 1.0:
            continue
        first = rng.uniform(lo, hi - span)
        mus = [first]
        for gap in gaps:
            mus.append(mus[-1] + gap + rng.uniform(0.0, 6.0))
        if mus[-1] <= hi:
            break
    else:
        raise RuntimeError("no feasible component placement")
    heights = rng.uniform(0.4, 1.0, k)
    return [(float(a), float(mu), float(s)) for a, mu, s in zip(heights, mus, sigmas)]


def population_image(rng, modes, size=128, bg_frac=0.0):
    """Image whose pixels come from Gaussian populations plus optional
    uniform background; modes is a list of (weight, mean, sigma)."""
    n = size * size
    total_w = sum(w for w, _, _ in modes)
    parts = []
    for w, mu, sigma in modes:
        count = int(n * (1.0 - bg_frac) * w / total_w)
        parts.append(rng.normal(mu, sigma, count))
    drawn = sum(p.size for p in parts)
    parts.append(rng.uniform(0, 255, n - drawn))
    px = np.concatenate(parts)
    rng.shuffle(px)
    return GrayImage(size, size, np.clip(px, 0, 255).astype(int))


def random_image(rng, size=128):
    return GrayImage(size, size, rng.integers(0, 256, size * size))


def low_contrast_corpus(rng, count=10, size=160):
    """Low-contrast images: all mass inside a narrow mid-gray band.

    Alternates unimodal and bimodal pixel populations around a common
    center, padded with a thin in-band uniform floor, so the dynamic range
    stays roughly a third of the full scale.
    """
    images = []
    for i in range(count):
        n = size * size
        center = rng.uniform(105, 150)
        if i % 2 == 0:
            modes = [(1.0, center, rng.uniform(11, 17))]
        else:
            off = rng.uniform(24, 34)
            modes = [
                (rng.uniform(0.45, 0.55), center - off, rng.uniform(8, 13)),
                (rng.uniform(0.45, 0.55), center + off, rng.uniform(8, 13)),
            ]
        total_w = sum(w for w, _, _ in modes)
        parts = [rng.normal(mu, sg, int(n * w / total_w)) for w, mu, sg in modes]
        drawn = np.concatenate(parts)
        floor = rng.uniform(center - 40, center + 40, n - drawn.size)
        px = np.concatenate([drawn, floor])
        rng.shuffle(px)
        images.append(GrayImage(size, size, np.clip(px, 0, 255).astype(int)))
    return images
