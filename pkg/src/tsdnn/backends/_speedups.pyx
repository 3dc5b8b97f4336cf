# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: batched MLP forward/backward and sequential AR recursions.

Mirrors the API of :mod:`tsdnn.backends.reference`; the package selects one of
the two at import time.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef void _matmul_nt(const double[:, ::1] A, const double[:, ::1] B, double[:, ::1] out) noexcept nogil:
    # out = A @ B.T, A: (n, k), B: (m, k), out: (n, m)
    cdef Py_ssize_t n = A.shape[0], k = A.shape[1], m = B.shape[0]
    cdef Py_ssize_t i, j, l
    cdef const double *a
    cdef const double *b
    cdef double *o
    cdef double acc
    for i in range(n):
        a = &A[i, 0]
        o = &out[i, 0]
        for j in range(m):
            b = &B[j, 0]
            acc = 0.0
            for l in range(k):
                acc += a[l] * b[l]
            o[j] = acc


cdef void _matmul_nn(const double[:, ::1] A, const double[:, ::1] B, double[:, ::1] out) noexcept nogil:
    # out = A @ B, A: (n, m), B: (m, k), out: (n, k)
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1], k = B.shape[1]
    cdef Py_ssize_t i, j, l
    cdef const double *b
    cdef double *o
    cdef double a
    for i in range(n):
        o = &out[i, 0]
        for l in range(k):
            o[l] = 0.0
        for j in range(m):
            a = A[i, j]
            b = &B[j, 0]
            for l in range(k):
                o[l] += a * b[l]


cdef void _accum_tn(const double[:, ::1] D, const double[:, ::1] H, double[:, ::1] out) noexcept nogil:
    # out = D.T @ H, D: (n, m), H: (n, k), out: (m, k)
    cdef Py_ssize_t n = D.shape[0], m = D.shape[1], k = H.shape[1]
    cdef Py_ssize_t i, j, l
    cdef const double *h
    cdef double *o
    cdef double d
    for j in range(m):
        o = &out[j, 0]
        for l in range(k):
            o[l] = 0.0
    for i in range(n):
        h = &H[i, 0]
        for j in range(m):
            d = D[i, j]
            o = &out[j, 0]
            for l in range(k):
                o[l] += d * h[l]


cdef inline const double[:, ::1] _as_c2d(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


cdef inline const double[::1] _as_c1d(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def mlp_forward(X, weights, shifts):
    """Batch forward pass through the shifted-ReLU network.

    X is (n, p0); weights[i] has shape (p_{i+1}, p_i); shifts[i] length
    p_{i+1}.  Hidden layers apply max(z - v, 0); the output layer is a pure
    linear map (its shift vector is ignored).  Returns predictions (n,).
    """
    cdef Py_ssize_t L = len(weights)
    cdef Py_ssize_t n = X.shape[0]
    Hnp = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] H
    cdef const double[:, ::1] W
    cdef const double[::1] v
    cdef double[:, ::1] Z
    cdef Py_ssize_t li, i, j, m
    for li in range(L):
        H = Hnp
        W = _as_c2d(weights[li])
        m = W.shape[0]
        Znp = np.empty((n, m), dtype=np.float64)
        Z = Znp
        _matmul_nt(H, W, Z)
        if li < L - 1:
            v = _as_c1d(shifts[li])
            with nogil:
                for i in range(n):
                    for j in range(m):
                        Z[i, j] = Z[i, j] - v[j]
                        if Z[i, j] < 0.0:
                            Z[i, j] = 0.0
        Hnp = Znp
    return Hnp.reshape(n)


def mlp_loss_grad(X, y, weights, shifts, double lam, masks=None):
    """Penalized loss and its exact (sub)gradient for the network parameters.

    loss = mean((y - yhat)^2) + lam * sum_i |W_i|_1.  Shifts are not
    penalized; the L1 subgradient at 0 is 0.  ``masks``, when given, holds one
    (n, p_{i+1}) multiplicative dropout mask per hidden layer, applied to the
    post-activation values (and accounted for in the gradient).

    Returns (loss, [dW_i], [dv_i]); dv for the output layer is zero.
    """
    cdef Py_ssize_t L = len(weights)
    cdef Py_ssize_t n = X.shape[0]
    cdef const double[:, ::1] W, M, Hc, Dc
    cdef const double[::1] yv
    cdef double[:, ::1] Z, P, D, GW, Dnext
    cdef double[::1] GV, yh, dl
    cdef Py_ssize_t li, i, j, k, m
    cdef double acc, loss, resid, w

    Xc = np.ascontiguousarray(X, dtype=np.float64)
    yv = _as_c1d(y)

    # forward, keeping per-layer activations (mask already applied)
    acts = [Xc]           # H_0 .. H_{L-1} as ndarrays
    pre_pos = []          # strict-positivity indicator per hidden pre-activation
    Hnp = Xc
    for li in range(L - 1):
        Hc = Hnp
        W = _as_c2d(weights[li])
        v = _as_c1d(shifts[li])
        m = W.shape[0]
        Znp = np.empty((n, m), dtype=np.float64)
        Z = Znp
        _matmul_nt(Hc, W, Z)
        Pnp = np.empty((n, m), dtype=np.float64)
        P = Pnp
        with nogil:
            for i in range(n):
                for j in range(m):
                    Z[i, j] = Z[i, j] - v[j]
                    if Z[i, j] > 0.0:
                        P[i, j] = 1.0
                    else:
                        P[i, j] = 0.0
                        Z[i, j] = 0.0
        if masks is not None:
            M = _as_c2d(masks[li])
            with nogil:
                for i in range(n):
                    for j in range(m):
                        Z[i, j] = Z[i, j] * M[i, j]
        pre_pos.append(Pnp)
        acts.append(Znp)
        Hnp = Znp

    W = _as_c2d(weights[L - 1])
    Hc = np.ascontiguousarray(acts[L - 1])
    yhat = np.empty(n, dtype=np.float64)
    yh = yhat
    with nogil:
        for i in range(n):
            acc = 0.0
            for k in range(W.shape[1]):
                acc += W[0, k] * Hc[i, k]
            yh[i] = acc

    grad_w = [np.zeros((np.asarray(weights[li]).shape[0], np.asarray(weights[li]).shape[1])) for li in range(L)]
    grad_v = [np.zeros(np.asarray(weights[li]).shape[0]) for li in range(L)]
    delta = np.empty(n, dtype=np.float64)
    dl = delta
    loss = 0.0
    with nogil:
        for i in range(n):
            resid = yh[i] - yv[i]
            loss += resid * resid
            dl[i] = 2.0 * resid / n
    loss = loss / n

    # output-layer gradient and first back-propagated delta
    GW = grad_w[L - 1]
    with nogil:
        for k in range(W.shape[1]):
            acc = 0.0
            for i in range(n):
                acc += dl[i] * Hc[i, k]
            GW[0, k] = acc

    Dnp = np.empty((n, W.shape[1]), dtype=np.float64)
    D = Dnp
    with nogil:
        for i in range(n):
            for k in range(W.shape[1]):
                D[i, k] = dl[i] * W[0, k]

    for li in range(L - 2, -1, -1):
        P = pre_pos[li]
        D = Dnp
        m = D.shape[1]
        if masks is not None:
            M = _as_c2d(masks[li])
            with nogil:
                for i in range(n):
                    for j in range(m):
                        D[i, j] = D[i, j] * P[i, j] * M[i, j]
        else:
            with nogil:
                for i in range(n):
                    for j in range(m):
                        D[i, j] = D[i, j] * P[i, j]
        Dc = Dnp
        Hc = np.ascontiguousarray(acts[li])
        GW = grad_w[li]
        _accum_tn(Dc, Hc, GW)
        GV = grad_v[li]
        with nogil:
            for j in range(m):
                acc = 0.0
                for i in range(n):
                    acc += Dc[i, j]
                GV[j] = -acc
        if li > 0:
            W = _as_c2d(weights[li])
            Dnext_np = np.empty((n, W.shape[1]), dtype=np.float64)
            Dnext = Dnext_np
            _matmul_nn(Dc, W, Dnext)
            Dnp = Dnext_np

    # L1 penalty on weight matrices only
    for li in range(L):
        W = _as_c2d(weights[li])
        GW = grad_w[li]
        with nogil:
            for i in range(W.shape[0]):
                for j in range(W.shape[1]):
                    w = W[i, j]
                    loss += lam * fabs(w)
                    if w > 0.0:
                        GW[i, j] += lam
                    elif w < 0.0:
                        GW[i, j] -= lam
    return loss, grad_w, grad_v


def ar_path(coeffs, eps, Py_ssize_t burn_in):
    """Linear AR(p) recursion x_t = sum_j c_j x_{t-1-j} + eps_t from zero history.

    Returns (series, cond_mean) with the first ``burn_in`` steps discarded;
    cond_mean is the conditional-mean part x_t - eps_t.
    """
    cdef const double[::1] c = _as_c1d(coeffs)
    cdef const double[::1] e = _as_c1d(eps)
    cdef Py_ssize_t total = e.shape[0], p = c.shape[0]
    cdef Py_ssize_t t, j
    cdef double acc
    x_np = np.empty(total, dtype=np.float64)
    m_np = np.empty(total, dtype=np.float64)
    cdef double[::1] x = x_np
    cdef double[::1] m = m_np
    with nogil:
        for t in range(total):
            acc = 0.0
            for j in range(p):
                if t - 1 - j >= 0:
                    acc += c[j] * x[t - 1 - j]
            m[t] = acc
            x[t] = acc + e[t]
    return x_np[burn_in:], m_np[burn_in:]


def nonlinear_ar_path(int kind, eps, Py_ssize_t burn_in, double x0=0.0):
    """Nonlinear AR(1) recursion x_t = g(x_{t-1}) + eps_t.

    kind 0: g(x) = 0.5*sqrt(|x|); kind 1: g(x) = 0.5*|x|.  Starts from x0,
    discards ``burn_in`` steps, returns (series, cond_mean).
    """
    cdef const double[::1] e = _as_c1d(eps)
    cdef Py_ssize_t total = e.shape[0]
    cdef Py_ssize_t t
    cdef double prev = x0, g
    x_np = np.empty(total, dtype=np.float64)
    m_np = np.empty(total, dtype=np.float64)
    cdef double[::1] x = x_np
    cdef double[::1] m = m_np
    with nogil:
        for t in range(total):
            if kind == 0:
                g = 0.5 * sqrt(fabs(prev))
            else:
                g = 0.5 * fabs(prev)
            m[t] = g
            x[t] = g + e[t]
            prev = x[t]
    return x_np[burn_in:], m_np[burn_in:]


def var1_path(double rho, eps, Py_ssize_t burn_in):
    """4-dimensional VAR(1) with rho on the superdiagonal, zero initial state.

    ``eps`` is (burn_in + n, 4); returns the final n states as an (n, 4) array.
    """
    cdef const double[:, ::1] e = _as_c2d(eps)
    cdef Py_ssize_t total = e.shape[0]
    cdef Py_ssize_t t
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0
    cdef double n0, n1, n2
    x_np = np.empty((total, 4), dtype=np.float64)
    cdef double[:, ::1] x = x_np
    with nogil:
        for t in range(total):
            n0 = rho * s1 + e[t, 0]
            n1 = rho * s2 + e[t, 1]
            n2 = rho * s3 + e[t, 2]
            s3 = e[t, 3]
            s0 = n0
            s1 = n1
            s2 = n2
            x[t, 0] = s0
            x[t, 1] = s1
            x[t, 2] = s2
            x[t, 3] = s3
    return x_np[burn_in:]
