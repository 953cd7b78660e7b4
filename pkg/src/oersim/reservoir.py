"""Ring-topology delay reservoir with a sine node nonlinearity.

The state update, for feedback gain a, input gain b and mask M, is

    x[0](n+1) = sin(a * x[N-1](n-1) + b * M[0] * u(n))
    x[i](n+1) = sin(a * x[i-1](n)   + b * M[i] * u(n)),   i >= 1.

Neuron 0 sees the last neuron one extra step late: in the physical delay
loop the wrapped-around signal only becomes available after the next round
trip has started. All runs start from rest (every state, including the
lagged term, is zero).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ReservoirConfig, validate_config

__all__ = ["ReservoirTrace", "run_reservoir", "step"]


@dataclass(frozen=True)
class ReservoirTrace:
    """Dense state history; entry (n, i) is neuron i after input n."""

    states: np.ndarray  # shape (timesteps, n_neurons)

    @property
    def timesteps(self) -> int:
        return self.states.shape[0]

    @property
    def n_neurons(self) -> int:
        return self.states.shape[1]

    def to_csv(self, path) -> None:
        """Debug export with header n,x_0,...,x_{N-1}."""
        n = self.n_neurons
        header = "n," + ",".join(f"x_{i}" for i in range(n))
        with_index = np.column_stack([np.arange(self.timesteps), self.states])
        np.savetxt(path, with_index, delimiter=",", header=header, comments="",
                   fmt=["%d"] + ["%.17g"] * n)


def step(
    prev_states: np.ndarray,
    prev_last_lagged: float,
    u: float,
    mask: np.ndarray,
    feedback_gain: float,
    input_gain: float,
) -> np.ndarray:
    """Advance the reservoir by one step.

    ``prev_states`` is x(n), ``prev_last_lagged`` is the last neuron one step
    earlier, x[N-1](n-1); returns x(n+1).
    """
    prev_states = np.asarray(prev_states, dtype=float)
    mask = np.asarray(mask, dtype=float)
    if prev_states.shape != mask.shape:
        raise ValueError(
            f"state/mask length mismatch: {prev_states.shape} vs {mask.shape}"
        )
    shifted = np.empty_like(prev_states)
    shifted[0] = prev_last_lagged
    shifted[1:] = prev_states[:-1]
    return np.sin(feedback_gain * shifted + input_gain * mask * u)


def run_reservoir(u_seq: np.ndarray, mask: np.ndarray, cfg: ReservoirConfig) -> ReservoirTrace:
    """Drive the reservoir over ``u_seq`` from rest and record every state."""
    validate_config(cfg)
    u = np.ascontiguousarray(u_seq, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("u_seq must be a non-empty 1-D sequence")
    mask = np.ascontiguousarray(mask, dtype=float)
    if mask.shape != (cfg.n_neurons,):
        raise ValueError(f"mask must have length n_neurons={cfg.n_neurons}, got {mask.shape}")
    states = _kernels.ring_trace(u, mask, cfg.feedback_gain, cfg.input_gain)
    return ReservoirTrace(states)
