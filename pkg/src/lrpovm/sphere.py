"""Sampling and deterministic quadrature on the unit sphere.

Random directions, correlated direction pairs for the tomography models,
and the Gauss-Legendre machinery used by the exact estimators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

UNIT_NORM_TOL = 1e-12


@dataclass
class RngStream:
    """Reproducible random stream identified by (seed, stream index).

    Equal (seed, stream) always produces the identical sample sequence.
    Distinct stream indices give statistically independent streams, which
    is what the parallel estimators hand to their workers.  The stream
    index is a tuple so substreams can be nested without collisions.
    """

    seed: int
    stream: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(
        default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.stream, int):
            self.stream = (self.stream,)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence(
                entropy=self.seed, spawn_key=tuple(self.stream))
            self._gen = np.random.default_rng(seq)
        return self._gen

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.stream + (index,))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a numpy Generator, an int seed, or None."""
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def check_unit(v, name: str = "direction") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError(f"{name} is not unit length: {v!r}")
    return v


def sample_uniform_direction(rng, size: int | None = None) -> np.ndarray:
    """Uniform direction(s) on the unit sphere.

    Returns shape (3,) when size is None, else (size, 3).
    """
    gen = as_generator(rng)
    n = 1 if size is None else int(size)
    v = gen.standard_normal((n, 3))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    # A zero norm has probability ~1e-900; resample rather than divide by 0.
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        v[bad] = gen.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(v, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    v /= norms
    return v[0] if size is None else v


def orthonormal_frame(dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row orthonormal basis (e1, e2) of the plane normal to each row."""
    d = np.atleast_2d(np.asarray(dirs, dtype=float))
    helper = np.where(np.abs(d[:, 0:1]) < 0.9,
                      np.array([1.0, 0.0, 0.0]),
                      np.array([0.0, 1.0, 0.0]))
    e1 = np.cross(d, helper)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(d, e1)
    return e1, e2


def sample_pair(n_copies: int, rng, size: int | None = None
                ) -> tuple[np.ndarray, np.ndarray]:
    """Sample correlated direction pairs (A, B) for the N-copy tomography model.

    A is uniform on the sphere.  The opening variable u = (1 - A.B)/2 has
    density (N+1) u^N on [0, 1], sampled exactly by inverse CDF as
    u = U^(1/(N+1)); B is uniform in azimuth about A.  For large N this
    concentrates B antipodally to A.  n_copies = 0 is the degenerate
    extension with B uniform and independent of A, used by oracle tests.
    """
    n_copies = int(n_copies)
    if n_copies < 0:
        raise ValueError(f"n_copies must be >= 0, got {n_copies}")
    gen = as_generator(rng)
    n = 1 if size is None else int(size)
    a = sample_uniform_direction(gen, n)
    u = gen.random(n) ** (1.0 / (n_copies + 1))
    cos_t = 1.0 - 2.0 * u
    sin_t = np.sqrt(np.clip(1.0 - cos_t * cos_t, 0.0, None))
    chi = gen.random(n) * (2.0 * math.pi)
    e1, e2 = orthonormal_frame(a)
    b = (cos_t[:, None] * a
         + sin_t[:, None] * (np.cos(chi)[:, None] * e1
                             + np.sin(chi)[:, None] * e2))
    if size is None:
        return a[0], b[0]
    return a, b


def pair_density(n_copies: int, cos_angle) -> np.ndarray | float:
    """Normalized joint density of (A, B) at a given A.B, per unit area pair.

    Value is ((N+1)/(4 pi)^2) * ((1 - A.B)/2)^N; it integrates to 1 over
    the product of the two spheres.  The associated preselection weight
    (N+1)/2^N is bookkept separately by the models.
    """
    n_copies = int(n_copies)
    if n_copies < 0:
        raise ValueError(f"n_copies must be >= 0, got {n_copies}")
    c = np.asarray(cos_angle, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise ValueError("cos_angle outside [-1, 1]")
    c = np.clip(c, -1.0, 1.0)
    val = (n_copies + 1) / (16.0 * math.pi ** 2) \
        * ((1.0 - c) / 2.0) ** n_copies
    return float(val) if np.isscalar(cos_angle) else val


@lru_cache(maxsize=64)
def _leggauss(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def gauss_legendre(nodes: int, lo: float = -1.0, hi: float = 1.0
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    if nodes < 2:
        raise ValueError("need at least 2 nodes")
    x, w = _leggauss(int(nodes))
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def cap_overlap_quadrature(f, nodes: int = 64) -> float:
    """Gauss-Legendre estimate of the integral of f over cos(theta) in [-1, 1].

    f must accept an ndarray of abscissas; scalar-valued constants are
    broadcast.  Used for polar-cap overlap integrands, hence the name.
    """
    x, w = gauss_legendre(nodes)
    y = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    return float(np.dot(w, y))


def circle_arc_fraction(mean, amplitude, threshold) -> np.ndarray:
    """Fraction of the circle where mean + amplitude*cos(phi) > threshold.

    Computed analytically; all arguments broadcast.  Amplitude must be
    non-negative; a zero amplitude degenerates to the plain indicator.
    """
    mean = np.asarray(mean, dtype=float)
    amplitude = np.asarray(amplitude, dtype=float)
    threshold = np.asarray(threshold, dtype=float)
    safe = np.where(amplitude > 0.0, amplitude, 1.0)
    arg = np.clip((threshold - mean) / safe, -1.0, 1.0)
    frac = np.arccos(arg) / math.pi
    return np.where(amplitude > 0.0, frac, (mean > threshold).astype(float))
