"""Numba-compiled inner loops.

These are the streaming fast path behind the public API: the recurrences are
inherently sequential, so the per-step work is compiled instead of dispatched
through NumPy call overhead. The test suite pins every kernel against the
pure-NumPy reference operations, step by step.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PD_IDENTITY = 0
PD_LOGISTIC = 1
PD_HYPTAN = 2

MODE_IDEAL = 0
MODE_ANALOGUE = 1


@njit(cache=True, inline="always")
def _pd(x, kind):
    if kind == PD_LOGISTIC:
        return 2.0 / (1.0 + np.exp(-2.0 * x)) - 1.0
    if kind == PD_HYPTAN:
        return 0.6 * np.tanh(1.8 * x)
    return x


@njit(cache=True)
def ring_trace(u, mask, feedback_gain, input_gain):
    """Run the ring reservoir over ``u`` from rest; row t holds the state
    reached after injecting u[t]."""
    steps = u.size
    n = mask.size
    out = np.empty((steps, n))
    prev = np.zeros(n)
    x_lag = 0.0  # last neuron, one step behind prev
    for t in range(steps):
        out[t, 0] = np.sin(feedback_gain * x_lag + input_gain * mask[0] * u[t])
        for i in range(1, n):
            out[t, i] = np.sin(feedback_gain * prev[i - 1] + input_gain * mask[i] * u[t])
        x_lag = prev[n - 1]
        prev = out[t]
    return out


@njit(cache=True)
def train_eval(
    u,
    d,
    mask,
    feedback_gain,
    input_gain,
    rho,
    neuron_decay,
    lag_decay,
    mode,
    pd_out,
    pd_sense,
    dac_step,
    dac_range,
    mz_bias,
    lam_seq,
    train_len,
    eval_start,
    eval_stop,
    w0,
    diverge_limit,
):
    """One continuous pass: adapt the weights for t < train_len, then keep
    running with them frozen; collect outputs over [eval_start, eval_stop).

    Signal path per step: raw weights -> DAC quantisation (when dac_step > 0)
    -> modulator bias -> output. The weight update always uses the degraded
    output. Returns (weights, squared-error log, collected outputs, step at
    which a weight left [-diverge_limit, diverge_limit], or -1).
    """
    n = mask.size
    lags = lag_decay.size
    steps = u.size
    x = np.zeros(n)
    x_new = np.zeros(n)
    x_lag = 0.0
    w = w0.copy()
    w_app = np.zeros(n)
    c_hist = np.zeros(lags)
    err_log = np.zeros(train_len)
    n_eval = eval_stop - eval_start
    if n_eval < 0:
        n_eval = 0
    y_eval = np.zeros(n_eval)
    diverged_at = -1

    for t in range(steps):
        x_new[0] = np.sin(feedback_gain * x_lag + input_gain * mask[0] * u[t])
        for i in range(1, n):
            x_new[i] = np.sin(feedback_gain * x[i - 1] + input_gain * mask[i] * u[t])
        x_lag = x[n - 1]
        for i in range(n):
            x[i] = x_new[i]

        for j in range(n):
            wj = w[j]
            if dac_step > 0.0:
                wj = dac_step * np.rint(wj / dac_step)
                if wj > dac_range:
                    wj = dac_range
                elif wj < -dac_range:
                    wj = -dac_range
            w_app[j] = wj + mz_bias

        if mode == MODE_IDEAL:
            y = 0.0
            for j in range(n):
                y += w_app[j] * x[j]
        else:
            c = 0.0
            for j in range(n):
                c += w_app[j] * _pd(x[j], pd_out) * neuron_decay[j]
            pos = t % lags
            c_hist[pos] = c
            y = 0.0
            for k in range(lags):
                idx = pos - k
                if idx < 0:
                    idx += lags
                y += c_hist[idx] * lag_decay[k]
            y *= rho

        if eval_start <= t and t < eval_stop:
            y_eval[t - eval_start] = y

        if t < train_len:
            e = d[t] - y
            err_log[t] = e * e
            lam = lam_seq[t]
            ok = True
            for j in range(n):
                wj = w[j] + lam * e * _pd(x[j], pd_sense)
                w[j] = wj
                if not (np.abs(wj) <= diverge_limit):
                    ok = False
            if not ok:
                diverged_at = t
                break

    return w, err_log, y_eval, diverged_at
