"""Pure-Python reference kernels (numpy matmul in a Python loop)."""
import numpy as np


def ordered_product(steps):
    """Return ``steps[n-1] @ ... @ steps[1] @ steps[0]``."""
    steps = np.ascontiguousarray(steps, dtype=np.complex128)
    d = steps.shape[1]
    acc = np.eye(d, dtype=np.complex128)
    for u in steps:
        acc = u @ acc
    return acc


def propagate(steps, block, stride):
    """Apply ``steps`` in order to ``block`` (d, k), recording every ``stride`` steps.

    Row 0 of the result is the input block; the final block is always recorded.
    """
    steps = np.ascontiguousarray(steps, dtype=np.complex128)
    cur = np.array(block, dtype=np.complex128, copy=True)
    n = steps.shape[0]
    n_rec = n // stride + 1 + (1 if n % stride else 0)
    out = np.empty((n_rec,) + cur.shape, dtype=np.complex128)
    out[0] = cur
    r = 1
    for k in range(n):
        cur = steps[k] @ cur
        if (k + 1) % stride == 0 or k == n - 1:
            out[r] = cur
            r += 1
    return out
