# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels for long products of small dense complex matrices."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef void _left_mul(const double complex[:, ::1] a, double complex[:, ::1] b,
                    double complex[:, ::1] tmp) noexcept nogil:
    # b <- a @ b, with row-contiguous inner loop
    cdef Py_ssize_t d = a.shape[0], k = b.shape[1]
    cdef Py_ssize_t i, j, l
    cdef double complex s
    for i in range(d):
        for j in range(k):
            tmp[i, j] = 0
        for l in range(d):
            s = a[i, l]
            for j in range(k):
                tmp[i, j] = tmp[i, j] + s * b[l, j]
    for i in range(d):
        for j in range(k):
            b[i, j] = tmp[i, j]


def ordered_product(steps):
    """Return ``steps[n-1] @ ... @ steps[1] @ steps[0]``."""
    cdef const double complex[:, :, ::1] st = np.ascontiguousarray(steps, dtype=np.complex128)
    cdef Py_ssize_t n = st.shape[0], d = st.shape[1], k
    acc_arr = np.eye(d, dtype=np.complex128)
    tmp_arr = np.empty((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] acc = acc_arr
    cdef double complex[:, ::1] tmp = tmp_arr
    with nogil:
        for k in range(n):
            _left_mul(st[k], acc, tmp)
    return acc_arr


def propagate(steps, block, Py_ssize_t stride):
    """Apply ``steps`` in order to ``block`` (d, k), recording every ``stride`` steps.

    Row 0 of the result is the input block; the final block is always recorded.
    """
    cdef const double complex[:, :, ::1] st = np.ascontiguousarray(steps, dtype=np.complex128)
    cur_arr = np.array(block, dtype=np.complex128, copy=True, order="C")
    cdef Py_ssize_t n = st.shape[0], d = cur_arr.shape[0], kk = cur_arr.shape[1]
    cdef Py_ssize_t n_rec = n // stride + 1 + (1 if n % stride else 0)
    out_arr = np.empty((n_rec, d, kk), dtype=np.complex128)
    tmp_arr = np.empty((d, kk), dtype=np.complex128)
    cdef double complex[:, ::1] cur = cur_arr
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef double complex[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, r = 1, i, j
    out[0, :, :] = cur
    with nogil:
        for k in range(n):
            _left_mul(st[k], cur, tmp)
            if (k + 1) % stride == 0 or k == n - 1:
                for i in range(d):
                    for j in range(kk):
                        out[r, i, j] = cur[i, j]
                r = r + 1
    return out_arr
