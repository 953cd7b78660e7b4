"""Shared domain types, seeded randomness and input-mask generation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "ConfigError",
    "PhotodiodeFn",
    "ReadoutMode",
    "ReservoirConfig",
    "STREAM_MASK",
    "STREAM_TEST",
    "STREAM_TRAIN",
    "make_mask",
    "substream",
    "validate_config",
]

# Purpose tags for independent random sub-streams. Mask, training data and
# test data live on separate streams so that, for example, asking for a
# longer test split never perturbs the mask drawn for a given mask index.
STREAM_MASK = 0
STREAM_TRAIN = 1
STREAM_TEST = 2


class ReadoutMode(str, Enum):
    """How the output y(n) is formed from the reservoir states."""

    IDEAL_LINEAR = "ideal_linear"            # plain dot product w . x
    ANALOGUE_LINEAR = "analogue_linear"      # RC-filtered sum, linear detectors
    NONLINEAR_READOUT = "nonlinear_readout"  # saturating state sensor, linear summing detector
    NONLINEAR_OUTPUT = "nonlinear_output"    # linear state sensor, saturating summing detector


class PhotodiodeFn(str, Enum):
    """Saturation curve of a photodiode response."""

    IDENTITY = "identity"
    LOGISTIC = "logistic"
    HYPTAN = "hyptan"


class ConfigError(ValueError):
    """A ReservoirConfig field violates its allowed range or a mode coupling."""


@dataclass(frozen=True)
class ReservoirConfig:
    """All scalar parameters of one simulated machine.

    ``roundtrip_s`` is metadata only (the physical loop period); every
    computation in the simulator works in discrete steps and depends on the
    readout filter solely through ``rc_ratio``.
    """

    n_neurons: int = 50
    feedback_gain: float = 0.8
    input_gain: float = 0.2
    rc_ratio: float = 0.03
    mz_bias: float = 0.0
    dac_bits: int | None = None      # None = unquantized weight path
    dac_range: float = 2.0
    readout_mode: ReadoutMode = ReadoutMode.ANALOGUE_LINEAR
    photodiode_fn: PhotodiodeFn = PhotodiodeFn.IDENTITY
    seed: int = 42
    washout: int = 100               # test samples excluded from metrics
    growing_lag_kernel: bool = False  # alternative sign convention, see readout module
    roundtrip_s: float = 7.94e-6


def validate_config(cfg: ReservoirConfig) -> ReservoirConfig:
    """Return ``cfg`` unchanged if every invariant holds, else raise ConfigError."""
    if cfg.n_neurons < 1:
        raise ConfigError(f"n_neurons must be >= 1, got {cfg.n_neurons}")
    if not cfg.rc_ratio > 0:
        raise ConfigError(f"rc_ratio must be > 0, got {cfg.rc_ratio}")
    if not cfg.dac_range > 0:
        raise ConfigError(f"dac_range must be > 0, got {cfg.dac_range}")
    if not 0.0 <= cfg.feedback_gain <= 1.05:
        raise ConfigError(f"feedback_gain outside accepted range [0, 1.05]: {cfg.feedback_gain}")
    if not 0.0 <= cfg.input_gain <= 1.5:
        raise ConfigError(f"input_gain outside accepted range [0, 1.5]: {cfg.input_gain}")
    if cfg.dac_bits is not None and cfg.dac_bits < 1:
        raise ConfigError(f"dac_bits must be a positive integer or None, got {cfg.dac_bits}")
    if cfg.washout < 0:
        raise ConfigError(f"washout must be >= 0, got {cfg.washout}")
    if cfg.readout_mode is ReadoutMode.IDEAL_LINEAR and cfg.photodiode_fn is not PhotodiodeFn.IDENTITY:
        raise ConfigError(
            "readout_mode=ideal_linear requires photodiode_fn=identity, "
            f"got {cfg.photodiode_fn.value}"
        )
    return cfg


def substream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Deterministic generator for one (seed, purpose, index) triple.

    The same triple always yields the same stream; distinct triples yield
    independent streams. All randomness in the package flows through here.
    """
    entropy = [seed & 0xFFFFFFFFFFFFFFFF, purpose, index]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def make_mask(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw an input mask of ``n`` coefficients, i.i.d. uniform on [-1, 1]."""
    if n < 1:
        raise ValueError(f"mask length must be >= 1, got {n}")
    return rng.uniform(-1.0, 1.0, n)
