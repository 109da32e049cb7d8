# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Fused LSTM gate kernels.

Same contracts as declfix/nnet/_kernels_py.py; see that file for the math.
The fusion removes the dozen temporaries numpy allocates per step, which is
where training spends its time at small batch sizes.
"""

import numpy as np

from libc.math cimport exp, tanh


cdef inline double _sig(double z) nogil:
    cdef double e
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    e = exp(z)
    return e / (1.0 + e)


def lstm_gates_forward(double[:, ::1] zf, double[:, ::1] zg,
                       double[:, ::1] zc, double[:, ::1] zo,
                       double[:, ::1] s_prev, bint candidate_tanh):
    cdef Py_ssize_t rows = zf.shape[0]
    cdef Py_ssize_t cols = zf.shape[1]
    f_arr = np.empty((rows, cols), dtype=np.float64)
    g_arr = np.empty((rows, cols), dtype=np.float64)
    c_arr = np.empty((rows, cols), dtype=np.float64)
    q_arr = np.empty((rows, cols), dtype=np.float64)
    s_arr = np.empty((rows, cols), dtype=np.float64)
    h_arr = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] f = f_arr, g = g_arr, c = c_arr
    cdef double[:, ::1] q = q_arr, s = s_arr, h = h_arr
    cdef Py_ssize_t i, j
    cdef double fv, gv, cv, qv, sv
    with nogil:
        for i in range(rows):
            for j in range(cols):
                fv = _sig(zf[i, j])
                gv = _sig(zg[i, j])
                if candidate_tanh:
                    cv = tanh(zc[i, j])
                else:
                    cv = _sig(zc[i, j])
                qv = _sig(zo[i, j])
                sv = fv * s_prev[i, j] + gv * cv
                f[i, j] = fv
                g[i, j] = gv
                c[i, j] = cv
                q[i, j] = qv
                s[i, j] = sv
                h[i, j] = tanh(sv) * qv
    return f_arr, g_arr, c_arr, q_arr, s_arr, h_arr


def lstm_gates_backward(double[:, ::1] dh, double[:, ::1] ds_in,
                        double[:, ::1] f, double[:, ::1] g,
                        double[:, ::1] c, double[:, ::1] q,
                        double[:, ::1] s, double[:, ::1] s_prev,
                        bint candidate_tanh):
    cdef Py_ssize_t rows = dh.shape[0]
    cdef Py_ssize_t cols = dh.shape[1]
    dzf_arr = np.empty((rows, cols), dtype=np.float64)
    dzg_arr = np.empty((rows, cols), dtype=np.float64)
    dzc_arr = np.empty((rows, cols), dtype=np.float64)
    dzo_arr = np.empty((rows, cols), dtype=np.float64)
    dsp_arr = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] dzf = dzf_arr, dzg = dzg_arr, dzc = dzc_arr
    cdef double[:, ::1] dzo = dzo_arr, dsp = dsp_arr
    cdef Py_ssize_t i, j
    cdef double ts, dq, ds, fv, gv, cv, qv
    with nogil:
        for i in range(rows):
            for j in range(cols):
                fv = f[i, j]
                gv = g[i, j]
                cv = c[i, j]
                qv = q[i, j]
                ts = tanh(s[i, j])
                dq = dh[i, j] * ts
                ds = ds_in[i, j] + dh[i, j] * qv * (1.0 - ts * ts)
                dzf[i, j] = ds * s_prev[i, j] * fv * (1.0 - fv)
                dzg[i, j] = ds * cv * gv * (1.0 - gv)
                if candidate_tanh:
                    dzc[i, j] = ds * gv * (1.0 - cv * cv)
                else:
                    dzc[i, j] = ds * gv * cv * (1.0 - cv)
                dzo[i, j] = dq * qv * (1.0 - qv)
                dsp[i, j] = ds * fv
    return dzf_arr, dzg_arr, dzc_arr, dzo_arr, dsp_arr


def softmax_rows(double[:, ::1] logits):
    cdef Py_ssize_t rows = logits.shape[0]
    cdef Py_ssize_t cols = logits.shape[1]
    out_arr = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double m, total
    with nogil:
        for i in range(rows):
            m = logits[i, 0]
            for j in range(1, cols):
                if logits[i, j] > m:
                    m = logits[i, j]
            total = 0.0
            for j in range(cols):
                out[i, j] = exp(logits[i, j] - m)
                total += out[i, j]
            for j in range(cols):
                out[i, j] /= total
    return out_arr
