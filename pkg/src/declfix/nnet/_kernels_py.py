"""Pure numpy implementations of the fused LSTM gate kernels.

These mirror declfix/nnet/_kernels_cy.pyx operation for operation; the
compiled module exists only to fuse the elementwise loops.  Keep the two
files in sync: the parity tests compare them at 1e-12.

All arrays are float64 with shape (batch, hidden) unless noted.  The cell
follows the recurrence used throughout this package: the candidate value
passes through a sigmoid by default (the tanh variant is selectable), the
new state is f*s_prev + g*candidate, and the output is tanh(state)*q.
"""

import numpy as np


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lstm_gates_forward(zf, zg, zc, zo, s_prev, candidate_tanh):
    """Pre-activations + previous state -> (f, g, c, q, s, h)."""
    f = _sigmoid(zf)
    g = _sigmoid(zg)
    c = np.tanh(zc) if candidate_tanh else _sigmoid(zc)
    q = _sigmoid(zo)
    s = f * s_prev + g * c
    h = np.tanh(s) * q
    return f, g, c, q, s, h


def lstm_gates_backward(dh, ds_in, f, g, c, q, s, s_prev, candidate_tanh):
    """Gradients wrt the four pre-activations and the previous state.

    dh is the loss gradient on the step output, ds_in the state gradient
    flowing back from the following step (zeros at the last step).
    """
    ts = np.tanh(s)
    dq = dh * ts
    ds = ds_in + dh * q * (1.0 - ts * ts)
    df = ds * s_prev
    dg = ds * c
    dc = ds * g
    ds_prev = ds * f
    dzf = df * f * (1.0 - f)
    dzg = dg * g * (1.0 - g)
    dzo = dq * q * (1.0 - q)
    if candidate_tanh:
        dzc = dc * (1.0 - c * c)
    else:
        dzc = dc * c * (1.0 - c)
    return dzf, dzg, dzc, dzo, ds_prev


def softmax_rows(logits):
    """Row-wise softmax, max-shifted for stability.  Shape (batch, vocab)."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)
