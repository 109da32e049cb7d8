"""Kernel backend selection.

The compiled extension is used when it imported cleanly; otherwise the
numpy implementation takes over, with identical semantics.  The choice is
made once, at import time.  DECLFIX_BACKEND=numpy or =cython forces a
side; forcing cython raises if the extension is missing rather than
silently degrading.

use_backend() rebinds the module-level functions at runtime.  It exists
for the parity tests and the benchmark; production code should rely on the
import-time choice.
"""

import os

from . import _kernels_py

_IMPL = None
BACKEND = None


def _select():
    forced = os.environ.get("DECLFIX_BACKEND", "").strip().lower()
    if forced == "numpy":
        return _kernels_py, "numpy"
    try:
        from . import _kernels_cy
    except ImportError:
        if forced == "cython":
            raise
        return _kernels_py, "numpy"
    return _kernels_cy, "cython"


def available_backends():
    names = ["numpy"]
    try:
        from . import _kernels_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def load_backend(name):
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        from . import _kernels_cy
        return _kernels_cy
    raise ValueError(f"unknown backend {name!r}")


def use_backend(name):
    """Rebind the kernel functions; returns the previous backend name."""
    global _IMPL, BACKEND, lstm_gates_forward, lstm_gates_backward, softmax_rows
    previous = BACKEND
    _IMPL = load_backend(name)
    BACKEND = name
    lstm_gates_forward = _IMPL.lstm_gates_forward
    lstm_gates_backward = _IMPL.lstm_gates_backward
    softmax_rows = _IMPL.softmax_rows
    return previous


_impl, _name = _select()
_IMPL = _impl
BACKEND = _name
lstm_gates_forward = _impl.lstm_gates_forward
lstm_gates_backward = _impl.lstm_gates_backward
softmax_rows = _impl.softmax_rows
