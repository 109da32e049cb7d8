"""Build script.

The LSTM gate math is the hot inner loop of training and gradient checking,
so it is compiled as a small Cython extension when possible.  The package
works without it: declfix.nnet.kernels falls back to a pure numpy
implementation at import time.  Set DECLFIX_NO_EXT=1 to skip the build.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DECLFIX_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/declfix/nnet/_kernels_cy.pyx"],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
