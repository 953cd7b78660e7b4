"""Benchmark data generators and their error metrics.

Two tasks: equalisation of a dispersive nonlinear communication channel
(4-level symbols, metric = symbol error rate) and emulation of a 10th-order
nonlinear auto-regressive moving-average system (metric = normalised mean
square error).
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

__all__ = [
    "CHANNEL_GUARD",
    "CHANNEL_SYMBOLS",
    "CHANNEL_TAPS",
    "GenerationError",
    "TaskData",
    "TaskKind",
    "channel_distortion",
    "gen_channel",
    "gen_narma10",
    "linear_channel",
    "make_task",
    "narma_update",
    "nmse",
    "quantize_symbols",
    "ser",
]

log = logging.getLogger(__name__)


class TaskKind(str, Enum):
    CHANNEL_EQ = "channel"
    NARMA10 = "narma10"


class GenerationError(RuntimeError):
    """Data generation failed (e.g. persistent divergence of the target map)."""


@dataclass(frozen=True)
class TaskData:
    """Paired input/target sequences with a train/test split."""

    input: np.ndarray
    target: np.ndarray
    train_len: int
    test_len: int
    kind: TaskKind

    def __post_init__(self):
        if len(self.input) != len(self.target):
            raise ValueError(
                f"input/target length mismatch: {len(self.input)} vs {len(self.target)}"
            )
        if len(self.input) < self.train_len + self.test_len:
            raise ValueError(
                f"sequence length {len(self.input)} shorter than "
                f"train_len + test_len = {self.train_len + self.test_len}"
            )

    @property
    def train_input(self) -> np.ndarray:
        return self.input[: self.train_len]

    @property
    def train_target(self) -> np.ndarray:
        return self.target[: self.train_len]

    @property
    def test_input(self) -> np.ndarray:
        return self.input[self.train_len : self.train_len + self.test_len]

    @property
    def test_target(self) -> np.ndarray:
        return self.target[self.train_len : self.train_len + self.test_len]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u", "d"])
            for u, d in zip(self.input, self.target):
                writer.writerow([repr(float(u)), repr(float(d))])

    @classmethod
    def from_csv(cls, path, kind: TaskKind, train_len: int, test_len: int) -> "TaskData":
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return cls(data[:, 0], data[:, 1], train_len, test_len, kind)


# ---------------------------------------------------------------------------
# Channel equalisation

# Finite impulse response of the dispersive channel: coefficient t applies to
# the symbol 2 - t steps ahead of the output sample (two anticausal taps).
CHANNEL_TAPS = np.array(
    [0.08, -0.12, 1.0, 0.18, -0.1, 0.091, -0.05, 0.04, 0.03, 0.01]
)
CHANNEL_SYMBOLS = np.array([-3.0, -1.0, 1.0, 3.0])
# Samples at each edge contaminated by the zero padding of the tap window;
# generators draw this many extra symbols per edge and emit only clean ones.
CHANNEL_GUARD = 10
_SER_THRESHOLDS = np.array([-2.0, 0.0, 2.0])


def linear_channel(symbols: np.ndarray) -> np.ndarray:
    """Dispersive stage: q(n) = sum_t taps[t] * d(n + 2 - t), zero-padded."""
    d = np.asarray(symbols, dtype=float)
    return np.convolve(d, CHANNEL_TAPS, mode="full")[2 : 2 + len(d)]


def channel_distortion(q: np.ndarray) -> np.ndarray:
    """Memoryless amplifier stage: u = q + 0.036 q^2 - 0.011 q^3."""
    q = np.asarray(q, dtype=float)
    return q + 0.036 * q**2 - 0.011 * q**3


def _channel_from_symbols(symbols: np.ndarray, length: int, target_delay: int) -> tuple[np.ndarray, np.ndarray]:
    """Clean interior (u, d) of length ``length`` from a guarded symbol run."""
    q = linear_channel(symbols)
    u = channel_distortion(q)[CHANNEL_GUARD : CHANNEL_GUARD + length]
    lo = CHANNEL_GUARD - target_delay
    d = symbols[lo : lo + length]
    return u, d


def _add_noise(u: np.ndarray, rng: np.random.Generator, snr_db: float) -> np.ndarray:
    power = float(np.mean(u**2))
    sigma = np.sqrt(power / 10.0 ** (snr_db / 10.0))
    return u + rng.normal(0.0, sigma, len(u))


def gen_channel(
    rng: np.random.Generator,
    length: int,
    snr_db: float | None = None,
    *,
    train_len: int | None = None,
    test_len: int | None = None,
) -> TaskData:
    """Generate ``length`` usable channel samples.

    Symbols are drawn uniformly from the 4-level alphabet; the returned
    region is fully covered by real symbols on both sides, so every sample
    is valid for training and metrics. ``snr_db`` adds white Gaussian noise
    to the channel output (default: the channel is noiseless).
    """
    if length < 20:
        raise ValueError(f"length must cover the channel memory span (>= 20), got {length}")
    symbols = CHANNEL_SYMBOLS[rng.integers(0, 4, size=length + 2 * CHANNEL_GUARD)]
    u, d = _channel_from_symbols(symbols, length, target_delay=0)
    if snr_db is not None:
        u = _add_noise(u, rng, snr_db)
    if train_len is None:
        train_len = length
    if test_len is None:
        test_len = length - train_len
    return TaskData(u, d, train_len, test_len, TaskKind.CHANNEL_EQ)


# ---------------------------------------------------------------------------
# NARMA10

_NARMA_MAX_REGEN = 100


def narma_update(history: np.ndarray, u_now: float, u_lag: float) -> float:
    """One step of the order-10 target map from the last 10 outputs.

    ``history[-1]`` is the most recent output; ``u_lag`` is the input from
    9 steps before ``u_now``.
    """
    history = np.asarray(history, dtype=float)
    recent = history[-10:]
    return 0.3 * history[-1] + 0.05 * history[-1] * float(np.sum(recent)) + 1.5 * u_lag * u_now + 0.1


def _narma_series(u: np.ndarray) -> np.ndarray:
    """Run the target map over ``u`` with the first 10 outputs pinned to 0."""
    d = np.zeros(len(u))
    for n in range(9, len(u) - 1):
        d[n + 1] = (
            0.3 * d[n]
            + 0.05 * d[n] * np.sum(d[n - 9 : n + 1])
            + 1.5 * u[n - 9] * u[n]
            + 0.1
        )
    return d


def _draw_narma(draw_u, length: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw input/target pairs, regenerating whenever the map diverges."""
    for attempt in range(_NARMA_MAX_REGEN):
        u = draw_u()
        d = _narma_series(u)
        if np.all(np.abs(d) <= 1.0):
            if attempt:
                log.warning("narma10 generation needed %d regeneration(s)", attempt)
            return u, d
    raise GenerationError(
        f"narma10 target diverged in {_NARMA_MAX_REGEN} consecutive draws"
    )


def gen_narma10(
    rng: np.random.Generator,
    length: int,
    *,
    train_len: int | None = None,
    test_len: int | None = None,
) -> TaskData:
    """Generate a NARMA10 sequence: u i.i.d. uniform on [0, 0.5], d by the
    order-10 map. Sequences where any |d| exceeds 1 are discarded whole and
    redrawn."""
    if length < 10:
        raise ValueError(f"length must be >= 10, got {length}")
    u, d = _draw_narma(lambda: rng.uniform(0.0, 0.5, length), length)
    if train_len is None:
        train_len = length
    if test_len is None:
        test_len = length - train_len
    return TaskData(u, d, train_len, test_len, TaskKind.NARMA10)


# ---------------------------------------------------------------------------
# Split-stream construction used by the experiment harness

def make_task(
    kind: TaskKind,
    train_rng: np.random.Generator,
    test_rng: np.random.Generator,
    train_len: int,
    test_len: int,
    snr_db: float | None = None,
    target_delay: int = 0,
) -> TaskData:
    """Build one continuous task sequence whose train and test portions come
    from independent streams.

    The raw draws (symbols or inputs) are stitched before the task dynamics
    run, so the physics stays continuous across the split while the test
    portion can be resized or redrawn without touching the training data.
    """
    if train_len < 1 or test_len < 0:
        raise ValueError(f"bad split lengths: train_len={train_len}, test_len={test_len}")
    if kind is TaskKind.CHANNEL_EQ:
        if abs(target_delay) > CHANNEL_GUARD:
            raise ValueError(f"|target_delay| must be <= {CHANNEL_GUARD}, got {target_delay}")
        length = train_len + test_len
        sym_train = CHANNEL_SYMBOLS[train_rng.integers(0, 4, size=CHANNEL_GUARD + train_len)]
        sym_test = CHANNEL_SYMBOLS[test_rng.integers(0, 4, size=test_len + CHANNEL_GUARD)]
        symbols = np.concatenate([sym_train, sym_test])
        u, d = _channel_from_symbols(symbols, length, target_delay)
        if snr_db is not None:
            u = np.concatenate([
                _add_noise(u[:train_len], train_rng, snr_db),
                _add_noise(u[train_len:], test_rng, snr_db),
            ])
        return TaskData(u, d, train_len, test_len, TaskKind.CHANNEL_EQ)
    if kind is TaskKind.NARMA10:
        if target_delay:
            raise ValueError("target_delay only applies to the channel task")
        def draw():
            return np.concatenate([
                train_rng.uniform(0.0, 0.5, train_len),
                test_rng.uniform(0.0, 0.5, test_len),
            ])
        u, d = _draw_narma(draw, train_len + test_len)
        return TaskData(u, d, train_len, test_len, TaskKind.NARMA10)
    raise ValueError(f"unknown task kind: {kind}")


# ---------------------------------------------------------------------------
# Metrics

def quantize_symbols(y: np.ndarray) -> np.ndarray:
    """Nearest 4-level symbol; values exactly on a threshold round up."""
    y = np.asarray(y, dtype=float)
    return CHANNEL_SYMBOLS[np.searchsorted(_SER_THRESHOLDS, y, side="right")]


def ser(y: np.ndarray, d: np.ndarray, washout: int = 0) -> float:
    """Fraction of wrongly reconstructed symbols after the first ``washout``."""
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    if y.shape != d.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {d.shape}")
    if len(y) <= washout:
        raise ValueError(f"need more than washout={washout} samples, got {len(y)}")
    return float(np.mean(quantize_symbols(y[washout:]) != d[washout:]))


def nmse(y: np.ndarray, d: np.ndarray, washout: int = 0) -> float:
    """Mean squared error normalised by the target variance.

    0 is a perfect match; predicting the target mean scores 1.
    """
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    if y.shape != d.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {d.shape}")
    if len(y) <= washout:
        raise ValueError(f"need more than washout={washout} samples, got {len(y)}")
    y = y[washout:]
    d = d[washout:]
    variance = float(np.mean((d - np.mean(d)) ** 2))
    if variance == 0.0:
        raise ValueError("target variance is zero over the evaluated range; NMSE undefined")
    return float(np.mean((y - d) ** 2)) / variance
