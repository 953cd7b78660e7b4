"""Output models: ideal linear, analogue RC-filtered, and saturating variants.

The analogue readout multiplies each state by its weight in a modulator and
sums the result in a low-pass RC filter. Sampling the capacitor once per
loop period turns that integral into a discrete double sum over neurons and
past loops, each term attenuated by how long ago it entered the filter:
state i at lag k carries weight exp(-rho * (N - 1 - i + N*k)) for 0-indexed
neurons, where rho is the ratio of the neuron duration to the filter time
constant. The table of these factors is precomputed once per configuration.

Weight imperfections are modelled on the applied signal only: uniform
mid-tread DAC quantisation followed by an additive modulator bias offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhotodiodeFn

__all__ = [
    "KernelTable",
    "analogue_output",
    "apply_dac",
    "apply_mz_bias",
    "dac_step",
    "default_lag_depth",
    "ideal_output",
    "make_kernel_table",
    "photodiode_response",
    "sense_states",
]

# Tail weight below which further lags are dropped from the RC sum.
TRUNCATION_TOL = 1e-12


def photodiode_response(x, fn: PhotodiodeFn) -> np.ndarray:
    """Elementwise detector response.

    logistic: 2 / (1 + exp(-2x)) - 1. hyptan: 0.6 * tanh(1.8 x). Both are
    odd, monotone saturation curves; identity is the ideal detector.
    """
    x = np.asarray(x, dtype=float)
    if fn is PhotodiodeFn.LOGISTIC:
        return 2.0 / (1.0 + np.exp(-2.0 * x)) - 1.0
    if fn is PhotodiodeFn.HYPTAN:
        return 0.6 * np.tanh(1.8 * x)
    return x.copy()


def sense_states(states, pd_readout: PhotodiodeFn) -> np.ndarray:
    """State values as seen by the training path (readout photodiode)."""
    return photodiode_response(states, pd_readout)


def ideal_output(states: np.ndarray, weights: np.ndarray) -> float:
    """Plain linear readout: sum_i w_i * x_i."""
    states = np.asarray(states, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if states.shape != weights.shape:
        raise ValueError(f"state/weight length mismatch: {states.shape} vs {weights.shape}")
    return float(np.dot(weights, states))


def dac_step(bits: int, full_scale: float) -> float:
    """Quantisation step of a ``bits``-bit converter spanning [-R, R]."""
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    if not full_scale > 0:
        raise ValueError(f"full_scale must be > 0, got {full_scale}")
    return 2.0 * full_scale / (2 ** bits)


def apply_dac(weights: np.ndarray, bits: int, full_scale: float) -> np.ndarray:
    """Uniform mid-tread quantisation with saturation at +/- full scale.

    Zero is always an exact level, so a zero weight passes through unchanged.
    """
    delta = dac_step(bits, full_scale)
    w = np.asarray(weights, dtype=float)
    return np.clip(delta * np.rint(w / delta), -full_scale, full_scale)


def apply_mz_bias(weights: np.ndarray, bias: float) -> np.ndarray:
    """Additive offset of an imperfectly biased readout modulator."""
    return np.asarray(weights, dtype=float) + bias


def default_lag_depth(rho: float, n_neurons: int) -> int:
    """Smallest lag count whose dropped tail falls below TRUNCATION_TOL."""
    if not rho > 0:
        raise ValueError(f"rho must be > 0, got {rho}")
    if n_neurons < 1:
        raise ValueError(f"n_neurons must be >= 1, got {n_neurons}")
    k = max(1, math.ceil(-math.log(TRUNCATION_TOL) / (rho * n_neurons)))
    while math.exp(-rho * n_neurons * k) >= TRUNCATION_TOL:
        k += 1
    return k


@dataclass(frozen=True)
class KernelTable:
    """Precomputed RC attenuation factors.

    ``factors[k, i]`` multiplies neuron i at lag k; it equals
    ``lag_decay[k] * neuron_decay[i]``. With the default sign convention all
    factors lie in (0, 1], shrink with lag and grow towards the most recent
    neuron. ``growing_lag=True`` selects the opposite lag sign, an
    unphysical variant that amplifies with lag; it is only constructed with
    the window truncated to the current loop (k_max = 0), where both
    conventions coincide.
    """

    rho: float
    n_neurons: int
    k_max: int
    neuron_decay: np.ndarray  # (n_neurons,)
    lag_decay: np.ndarray     # (k_max + 1,)
    factors: np.ndarray       # (k_max + 1, n_neurons)
    growing_lag: bool = False

    @property
    def window(self) -> int:
        """Number of lag rows the analogue sum consumes (k_max + 1)."""
        return self.k_max + 1

    def truncation_bound(self) -> float:
        """Upper bound on the relative weight of all dropped lags."""
        g = math.exp(-self.rho * self.n_neurons)
        return g ** self.k_max / (1.0 - g)


def make_kernel_table(
    rho: float,
    n_neurons: int,
    k_max: int | None = None,
    max_history: int | None = None,
    growing_lag: bool = False,
) -> KernelTable:
    """Build the attenuation table for one (rho, N) pair.

    ``k_max`` defaults to the smallest depth meeting TRUNCATION_TOL, capped
    at ``max_history`` when the caller only has that many rows available.
    """
    if growing_lag:
        k_max = 0
    elif k_max is None:
        k_max = default_lag_depth(rho, n_neurons)
    elif k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    if max_history is not None:
        k_max = min(k_max, max_history)
    idx = np.arange(n_neurons)
    neuron_decay = np.exp(-rho * (n_neurons - 1 - idx))
    sign = 1.0 if growing_lag else -1.0
    lag_decay = np.exp(sign * rho * n_neurons * np.arange(k_max + 1))
    factors = np.outer(lag_decay, neuron_decay)
    return KernelTable(rho, n_neurons, k_max, neuron_decay, lag_decay, factors, growing_lag)


def analogue_output(
    state_window: np.ndarray,
    weight_window: np.ndarray,
    table: KernelTable,
    pd_output: PhotodiodeFn = PhotodiodeFn.IDENTITY,
) -> float:
    """Sampled RC-filter output for one time step.

    ``state_window`` has shape (k_max + 1, N) with row k holding the states
    at lag k (row 0 = current step). ``weight_window`` holds the weights that
    were applied at each of those steps, same shape; a single (N,) vector is
    accepted for frozen weights. ``pd_output`` saturates the states before
    the weighted sum (the summing detector's response).
    """
    states = np.asarray(state_window, dtype=float)
    expected = (table.window, table.n_neurons)
    if states.shape != expected:
        raise ValueError(f"state window must have shape {expected}, got {states.shape}")
    weights = np.asarray(weight_window, dtype=float)
    if weights.shape == (table.n_neurons,):
        weights = np.broadcast_to(weights, expected)
    elif weights.shape != expected:
        raise ValueError(
            f"weight window must have shape {expected} or ({table.n_neurons},), "
            f"got {weights.shape}"
        )
    sensed = photodiode_response(states, pd_output)
    return table.rho * float(np.sum(weights * sensed * table.factors))
