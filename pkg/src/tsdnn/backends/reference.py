"""Pure-NumPy kernels, API-identical to the compiled extension.

Used automatically whenever the extension is unavailable (or forced via
``TSDNN_BACKEND=python``).  Same math, same conventions; floating-point
results may differ from the compiled path at rounding level because of
summation order.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter


def mlp_forward(X, weights, shifts):
    """Batch forward pass; see the compiled twin for conventions."""
    H = np.asarray(X, dtype=np.float64)
    L = len(weights)
    for i in range(L - 1):
        Z = H @ weights[i].T - shifts[i]
        H = np.maximum(Z, 0.0)
    return (H @ weights[L - 1].T).ravel()


def mlp_loss_grad(X, y, weights, shifts, lam, masks=None):
    """Penalized loss and exact parameter (sub)gradient.

    loss = mean((y - yhat)^2) + lam * sum_i |W_i|_1; shifts unpenalized;
    sign(0) taken as 0.  ``masks`` are per-hidden-layer multiplicative
    dropout masks of shape (n, width).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    L = len(weights)

    acts = [X]
    pre_pos = []
    H = X
    for i in range(L - 1):
        Z = H @ weights[i].T - shifts[i]
        pos = (Z > 0.0).astype(np.float64)
        H = np.maximum(Z, 0.0)
        if masks is not None:
            H = H * masks[i]
        pre_pos.append(pos)
        acts.append(H)
    yhat = (H @ weights[L - 1].T).ravel()

    resid = yhat - y
    loss = float(np.mean(resid**2))
    delta = (2.0 / n) * resid

    grad_w = [np.zeros_like(w) for w in weights]
    grad_v = [np.zeros(w.shape[0]) for w in weights]
    grad_w[L - 1][0, :] = delta @ acts[L - 1]

    D = np.outer(delta, weights[L - 1][0, :])
    for i in range(L - 2, -1, -1):
        D = D * pre_pos[i]
        if masks is not None:
            D = D * masks[i]
        grad_w[i][:, :] = D.T @ acts[i]
        grad_v[i][:] = -D.sum(axis=0)
        if i > 0:
            D = D @ weights[i]

    for i in range(L):
        loss += lam * float(np.abs(weights[i]).sum())
        grad_w[i] += lam * np.sign(weights[i])
    return loss, grad_w, grad_v


def ar_path(coeffs, eps, burn_in):
    """Linear AR(p) recursion via an IIR filter; zero initial history."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if coeffs.size == 0:
        x = eps.copy()
    else:
        x = lfilter([1.0], np.concatenate(([1.0], -coeffs)), eps)
    m = x - eps
    return x[burn_in:], m[burn_in:]


def nonlinear_ar_path(kind, eps, burn_in, x0=0.0):
    """Nonlinear AR(1) recursion; kind 0 uses 0.5*sqrt(|x|), kind 1 uses 0.5*|x|."""
    eps = np.asarray(eps, dtype=np.float64)
    total = eps.shape[0]
    x = np.empty(total)
    m = np.empty(total)
    prev = x0
    for t in range(total):
        g = 0.5 * np.sqrt(abs(prev)) if kind == 0 else 0.5 * abs(prev)
        m[t] = g
        x[t] = g + eps[t]
        prev = x[t]
    return x[burn_in:], m[burn_in:]


def var1_path(rho, eps, burn_in):
    """4-dim VAR(1) with rho on the superdiagonal, zero initial state."""
    eps = np.asarray(eps, dtype=np.float64)
    total = eps.shape[0]
    x = np.empty((total, 4))
    state = np.zeros(4)
    for t in range(total):
        nxt = eps[t].copy()
        nxt[:3] += rho * state[1:]
        state = nxt
        x[t] = state
    return x[burn_in:]
