"""Backend selection for the hot loops.

The compiled extension is used when it is importable; set
``HOLODFS_PURE_PYTHON=1`` to force the numpy fallback. Products of
matrices with dimension ``BLAS_MIN_DIM`` or more go to numpy either way,
where BLAS beats the compiled loop.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
BLAS_MIN_DIM = 12
ordered_product = _pykernels.ordered_product
propagate = _pykernels.propagate

if not os.environ.get("HOLODFS_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        propagate = _ckernels.propagate

        def ordered_product(steps):
            if np.shape(steps)[1] >= BLAS_MIN_DIM:
                return _pykernels.ordered_product(steps)
            return _ckernels.ordered_product(steps)

__all__ = ["BACKEND", "BLAS_MIN_DIM", "ordered_product", "propagate"]
