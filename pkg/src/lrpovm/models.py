"""Local realistic joint-POVM models.

Every model emits, per run, a trit readout (+1, 0, -1) for each choice of
each party simultaneously, so the record carries all choice-conditioned
variables at once.  A 0 means no detection; for the trusted steering
models a Bob-side 0 marks an unregistered (discarded) event, while
Alice's zeros always stay in her averages.

Model kinds
-----------
simple-bell       random pick of one of two directions per party; the
                  picked readout follows the exact singlet statistics,
                  the other reads 0, giving 50% efficiency.
trusted-steering  M-choice pick model: Bob registers only on a pick
                  match, Alice's mismatches read 0 and are kept.
ncopy-steering    N singlet copies with the unanimity rule: a party
                  reports +-1 only when all copies agree.
ncopy-tomography  thresholded projections of a correlated direction pair
                  (A, B) drawn from the N-copy tomography density.
chaotic-ball      the N -> infinity limit: both parties threshold
                  projections of one shared uniformly random axis.
qubit-copies      two-time single-qubit readout served by two copies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quantum
from .sphere import as_generator, orthonormal_frame, \
    sample_uniform_direction

DEFAULT_SEED = 12345

KINDS = ("simple-bell", "trusted-steering", "ncopy-steering",
         "ncopy-tomography", "chaotic-ball", "qubit-copies")

# Preselection weight of the N-copy tomography construction, reported as
# metadata and never folded into the detection efficiency.
def preselection_weight(n_copies) -> float:
    if n_copies == math.inf:
        return 0.0
    n = int(n_copies)
    return (n + 1) / 2.0 ** n


@dataclass
class ModelConfig:
    """Immutable-by-convention model configuration.

    ``n_copies`` may be ``math.inf`` for the chaotic-ball limit.  The
    direction sets are (M, 3) arrays of unit rows; steering models default
    to the orthogonal triple for Bob and its antipodes for Alice, which is
    the perfectly correlated matched arrangement.
    """

    kind: str
    n_copies: float = 1
    q: float = 0.0
    m_choices: int = 3
    alice_directions: np.ndarray | None = None
    bob_directions: np.ndarray | None = None
    omega: float = 1.0
    t_a: float = 0.0
    t_b: float = 0.0
    seed: int = DEFAULT_SEED
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        if self.n_copies != math.inf:
            if self.n_copies < 1 or int(self.n_copies) != self.n_copies:
                raise ValueError(f"n_copies must be a positive integer or "
                                 f"inf, got {self.n_copies}")
            self.n_copies = int(self.n_copies)
        if self.kind == "simple-bell":
            if self.alice_directions is None:
                self.alice_directions = quantum.CHSH_ALICE
            if self.bob_directions is None:
                self.bob_directions = quantum.CHSH_BOB
        elif self.kind in ("trusted-steering", "ncopy-steering"):
            if self.m_choices < 2:
                raise ValueError("steering needs at least two choices")
            if self.bob_directions is None:
                self.bob_directions = quantum.STEERING_TRIPLE[:self.m_choices]
            if self.alice_directions is None:
                self.alice_directions = -np.asarray(self.bob_directions)
        elif self.kind in ("ncopy-tomography", "chaotic-ball"):
            if self.alice_directions is None:
                self.alice_directions = quantum.CHSH_ALICE
            if self.bob_directions is None:
                self.bob_directions = quantum.CHSH_BOB
        if self.alice_directions is not None:
            self.alice_directions = _unit_rows(self.alice_directions)
        if self.bob_directions is not None:
            self.bob_directions = _unit_rows(self.bob_directions)
        if self.kind in ("trusted-steering", "ncopy-steering"):
            if len(self.bob_directions) != self.m_choices:
                raise ValueError("m_choices must match the direction set")
        if self.kind == "chaotic-ball":
            self.n_copies = math.inf
        self.metadata.setdefault(
            "preselection_weight",
            preselection_weight(self.n_copies)
            if self.kind in ("ncopy-tomography", "chaotic-ball") else None)

    @property
    def is_tomography(self) -> bool:
        return self.kind in ("ncopy-tomography", "chaotic-ball")


def _unit_rows(dirs) -> np.ndarray:
    d = np.atleast_2d(np.asarray(dirs, dtype=float))
    norms = np.linalg.norm(d, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("direction rows must be unit vectors")
    return d


def tomography_config(kind: str = "bell", n_copies: float = 1,
                      q: float = 0.0, seed: int = DEFAULT_SEED) -> ModelConfig:
    """Tomography model preset for a Bell (CHSH angles) or steering (triple) run."""
    if kind == "bell":
        alice, bob = quantum.CHSH_ALICE, quantum.CHSH_BOB
    elif kind == "steering":
        alice, bob = quantum.STEERING_TRIPLE, quantum.STEERING_TRIPLE
    else:
        raise ValueError(f"kind must be 'bell' or 'steering', got {kind!r}")
    model = "chaotic-ball" if n_copies == math.inf else "ncopy-tomography"
    return ModelConfig(kind=model, n_copies=n_copies, q=q, seed=seed,
                       alice_directions=alice, bob_directions=bob)


@dataclass
class ReadoutBatch:
    """Vector of joint readouts: one trit per (sample, party choice)."""

    alice: np.ndarray  # (n, M_alice) int8
    bob: np.ndarray    # (n, M_bob) int8

    def __len__(self) -> int:
        return self.alice.shape[0]


@dataclass(frozen=True)
class JointReadout:
    """A single joint readout with all choice-conditioned trits.

    ``discarded`` is True when Bob registered no choice at all (for the
    unanimity model this is a failed agreement among his copies).
    """

    alice: tuple[int, ...]
    bob: tuple[int, ...]
    discarded: bool


def _first(batch: ReadoutBatch) -> JointReadout:
    alice = tuple(int(v) for v in batch.alice[0])
    bob = tuple(int(v) for v in batch.bob[0])
    return JointReadout(alice=alice, bob=bob, discarded=not any(bob))


def threshold_readout(projection: float, q: float) -> int:
    """Trit from a projection: +1 above +q, -1 below -q, else 0.

    The dead zone is the closed interval [-q, +q].
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"q must lie in [0, 1), got {q}")
    if projection > q:
        return 1
    if projection < -q:
        return -1
    return 0


def _threshold(projections: np.ndarray, q: float) -> np.ndarray:
    out = np.zeros(projections.shape, dtype=np.int8)
    out[projections > q] = 1
    out[projections < -q] = -1
    return out


def _correlation_table(alice_dirs, bob_dirs) -> np.ndarray:
    return -np.asarray(alice_dirs) @ np.asarray(bob_dirs).T


def _correlated_signs(corr: np.ndarray, gen: np.random.Generator
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Sample (xi, zeta) in {-1,+1}^2 with uniform marginals and E[xi*zeta]=corr."""
    n = corr.shape[0]
    xi = gen.integers(0, 2, n).astype(np.int8) * 2 - 1
    same = gen.random(n) < (1.0 + corr) / 2.0
    zeta = np.where(same, xi, -xi).astype(np.int8)
    return xi, zeta


def _scatter(n: int, m: int, picks: np.ndarray, values: np.ndarray
             ) -> np.ndarray:
    out = np.zeros((n, m), dtype=np.int8)
    out[np.arange(n), picks] = values
    return out


def simple_bell_batch(config: ModelConfig, rng, n: int) -> ReadoutBatch:
    """Pick-one-of-two model with exact singlet statistics on the match."""
    gen = as_generator(rng)
    table = _correlation_table(config.alice_directions, config.bob_directions)
    ma, mb = table.shape
    pick_a = gen.integers(0, ma, n)
    pick_b = gen.integers(0, mb, n)
    xi, zeta = _correlated_signs(table[pick_a, pick_b], gen)
    return ReadoutBatch(alice=_scatter(n, ma, pick_a, xi),
                        bob=_scatter(n, mb, pick_b, zeta))


def trusted_steering_batch(config: ModelConfig, rng, n: int) -> ReadoutBatch:
    """M-choice pick model; structurally identical to simple-bell sampling.

    The difference is bookkeeping: Bob's zeros are unregistered events the
    steering estimator drops, which is what suppresses the full
    correlation to 1/M while coincidences stay perfect.
    """
    return simple_bell_batch(config, rng, n)


def ncopy_steering_batch(config: ModelConfig, rng, n: int) -> ReadoutBatch:
    """Unanimity model over N singlet copies."""
    gen = as_generator(rng)
    table = _correlation_table(config.alice_directions, config.bob_directions)
    ma, mb = table.shape
    ncopies = int(config.n_copies)
    pick_a = gen.integers(0, ma, n)
    pick_b = gen.integers(0, mb, n)
    corr = table[pick_a, pick_b][:, None]
    xi = gen.integers(0, 2, (n, ncopies)).astype(np.int8) * 2 - 1
    same = gen.random((n, ncopies)) < (1.0 + corr) / 2.0
    zeta = np.where(same, xi, -xi).astype(np.int8)
    a_val = np.where(np.all(xi == xi[:, :1], axis=1), xi[:, 0], 0)
    b_val = np.where(np.all(zeta == zeta[:, :1], axis=1), zeta[:, 0], 0)
    return ReadoutBatch(alice=_scatter(n, ma, pick_a, a_val),
                        bob=_scatter(n, mb, pick_b, b_val))


def tomography_projections(config: ModelConfig, rng, n: int
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Projections of the sampled direction pair onto both parties' axes.

    For finite N the pair (A, B) follows the N-copy tomography density;
    the chaotic-ball limit shares one axis exactly (B = A).
    """
    gen = as_generator(rng)
    if config.n_copies == math.inf:
        a = sample_uniform_direction(gen, n)
        b = a
    else:
        a, b = _sample_pair_directions(int(config.n_copies), gen, n)
    return (a @ np.asarray(config.alice_directions).T,
            b @ np.asarray(config.bob_directions).T)


def _sample_pair_directions(n_copies: int, gen: np.random.Generator, n: int
                            ) -> tuple[np.ndarray, np.ndarray]:
    # Local re-implementation of sphere.sample_pair with a fixed draw order
    # so that the sweep estimators can couple all N through one uniform set.
    a = sample_uniform_direction(gen, n)
    u = gen.random(n) ** (1.0 / (n_copies + 1))
    cos_t = 1.0 - 2.0 * u
    sin_t = np.sqrt(np.clip(1.0 - cos_t * cos_t, 0.0, None))
    chi = gen.random(n) * (2.0 * math.pi)
    e1, e2 = orthonormal_frame(a)
    b = (cos_t[:, None] * a
         + sin_t[:, None] * (np.cos(chi)[:, None] * e1
                             + np.sin(chi)[:, None] * e2))
    return a, b


def tomography_batch(config: ModelConfig, rng, n: int) -> ReadoutBatch:
    proj_a, proj_b = tomography_projections(config, rng, n)
    return ReadoutBatch(alice=_threshold(proj_a, config.q),
                        bob=_threshold(proj_b, config.q))


_BATCH_SAMPLERS = {
    "simple-bell": simple_bell_batch,
    "trusted-steering": trusted_steering_batch,
    "ncopy-steering": ncopy_steering_batch,
    "ncopy-tomography": tomography_batch,
    "chaotic-ball": tomography_batch,
}


def sample_batch(config: ModelConfig, rng, n: int) -> ReadoutBatch:
    """Draw n joint readouts from the configured model."""
    try:
        sampler = _BATCH_SAMPLERS[config.kind]
    except KeyError:
        raise ValueError(f"model kind {config.kind!r} has no readout sampler")
    return sampler(config, rng, n)


# Convenience single-shot samplers -----------------------------------------

def simple_bell_sample(rng, alice_directions=None, bob_directions=None
                       ) -> JointReadout:
    config = ModelConfig(kind="simple-bell",
                         alice_directions=alice_directions,
                         bob_directions=bob_directions)
    return _first(simple_bell_batch(config, rng, 1))


def trusted_steering_sample(m_choices: int, directions, rng,
                            alice_directions=None) -> JointReadout:
    config = ModelConfig(kind="trusted-steering", m_choices=m_choices,
                         bob_directions=directions,
                         alice_directions=alice_directions)
    return _first(trusted_steering_batch(config, rng, 1))


def ncopy_steering_sample(n_copies: int, directions, rng,
                          alice_directions=None, m_choices=None) -> JointReadout:
    config = ModelConfig(kind="ncopy-steering", n_copies=n_copies,
                         m_choices=m_choices or len(np.atleast_2d(directions)),
                         bob_directions=directions,
                         alice_directions=alice_directions)
    return _first(ncopy_steering_batch(config, rng, 1))


def ncopy_tomography_sample(n_copies, q: float, rng,
                            alice_directions=None, bob_directions=None
                            ) -> JointReadout:
    kind = "chaotic-ball" if n_copies == math.inf else "ncopy-tomography"
    config = ModelConfig(kind=kind, n_copies=n_copies, q=q,
                         alice_directions=alice_directions,
                         bob_directions=bob_directions)
    return _first(tomography_batch(config, rng, 1))


def qubit_copies_joint(t_a: float, t_b: float, omega: float,
                       n_copies: int) -> np.ndarray:
    """Joint two-time readout distribution served by distinct qubit copies.

    Requires at least as many copies as readout times (two here).  The
    result is the undisturbed product p(beta) * p(gamma); it is computed
    by brute force on the copied register rather than asserted.
    """
    if n_copies < 2:
        raise ValueError("insufficient copies: need n_copies >= 2 readouts")
    return quantum.copies_joint_probability(t_a, t_b, omega, n_copies)


# Exact joint-readout distributions ----------------------------------------

def enumerate_pick_model(config: ModelConfig) -> np.ndarray:
    """Exact trit table for the pick models (simple-bell, trusted-steering).

    Returns probs[i, j, a, b] over every (Alice choice i, Bob choice j)
    reading pair, trit axes ordered (-1, 0, +1).
    """
    table = _correlation_table(config.alice_directions, config.bob_directions)
    ma, mb = table.shape
    probs = np.zeros((ma, mb, 3, 3))
    tr = {1: 2, 0: 1, -1: 0}
    for i in range(ma):
        for j in range(mb):
            for pick_a in range(ma):
                for pick_b in range(mb):
                    w = 1.0 / (ma * mb)
                    pm = quantum.singlet_pair_probabilities(
                        config.alice_directions[pick_a],
                        config.bob_directions[pick_b])
                    for (ia, xi) in ((0, 1), (1, -1)):
                        for (ib, zeta) in ((0, 1), (1, -1)):
                            a_val = xi if pick_a == i else 0
                            b_val = zeta if pick_b == j else 0
                            probs[i, j, tr[a_val], tr[b_val]] += w * pm[ia, ib]
    return probs


def enumerate_ncopy_steering(config: ModelConfig) -> np.ndarray:
    """Exact trit table for the unanimity model, via per-copy joint powers."""
    table = _correlation_table(config.alice_directions, config.bob_directions)
    ma, mb = table.shape
    ncopies = int(config.n_copies)
    probs = np.zeros((ma, mb, 3, 3))
    tr = {1: 2, 0: 1, -1: 0}
    half_pow = 0.5 ** ncopies
    for i in range(ma):
        for j in range(mb):
            for pick_a in range(ma):
                for pick_b in range(mb):
                    w = 1.0 / (ma * mb)
                    corr = table[pick_a, pick_b]
                    p = {(s, t): ((1.0 + s * t * corr) / 4.0) ** ncopies
                         for s in (1, -1) for t in (1, -1)}
                    cell = np.zeros((3, 3))
                    for s in (1, -1):
                        for t in (1, -1):
                            cell[tr[s], tr[t]] = p[(s, t)]
                    for s in (1, -1):
                        cell[tr[s], tr[0]] = half_pow - sum(
                            p[(s, t)] for t in (1, -1))
                    for t in (1, -1):
                        cell[tr[0], tr[t]] = half_pow - sum(
                            p[(s, t)] for s in (1, -1))
                    cell[tr[0], tr[0]] = (1.0 - 4.0 * half_pow
                                          + sum(p.values()))
                    # Map the unanimity outcome onto the reading pair (i, j).
                    out = np.zeros((3, 3))
                    if pick_a == i and pick_b == j:
                        out = cell
                    elif pick_a == i:
                        out[:, tr[0]] = cell.sum(axis=1)
                    elif pick_b == j:
                        out[tr[0], :] = cell.sum(axis=0)
                    else:
                        out[tr[0], tr[0]] = 1.0
                    probs[i, j] += w * out
    return probs
