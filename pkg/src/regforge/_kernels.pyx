# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: box enumeration of lattice points and ball-membership counts."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline double _nabla(const double* x, const long long* block, int n, double* sums, int nblocks) nogil:
    cdef int i
    cdef double a = 0.0, s = 0.0
    for i in range(nblocks):
        sums[i] = 0.0
    for i in range(n):
        sums[block[i]] += x[i]
        a += fabs(x[i])
    for i in range(nblocks):
        s += fabs(sums[i])
    return 0.5 * (s + a)


def enumerate_box(double[:, ::1] basis, long long[::1] bounds, long long[::1] block,
                  int nblocks, double limit):
    """Lattice points B*xi with |xi_i| <= bounds[i], first nonzero xi_i > 0,
    and float nabla(B*xi) <= limit.  Returns (coefficients, norms)."""
    cdef int n = basis.shape[0]
    cdef int i, j, lead
    cdef double nv
    cdef long long[::1] xi = np.empty(n, dtype=np.int64)
    cdef double[::1] x = np.zeros(n, dtype=np.float64)
    cdef double[::1] sums = np.zeros(max(nblocks, 1), dtype=np.float64)
    out_c = []
    out_n = []
    for i in range(n):
        xi[i] = -bounds[i]
    # x = B * xi
    for j in range(n):
        for i in range(n):
            x[j] += basis[j, i] * xi[i]
    while True:
        lead = 0
        for i in range(n):
            if xi[i] != 0:
                lead = 1 if xi[i] > 0 else -1
                break
        if lead > 0:
            nv = _nabla(&x[0], &block[0], n, &sums[0], nblocks)
            if nv <= limit:
                out_c.append(np.asarray(xi).copy())
                out_n.append(nv)
        # odometer step, last coordinate fastest
        i = n - 1
        while i >= 0:
            if xi[i] < bounds[i]:
                xi[i] += 1
                for j in range(n):
                    x[j] += basis[j, i]
                break
            for j in range(n):
                x[j] -= 2 * bounds[i] * basis[j, i]
            xi[i] = -bounds[i]
            i -= 1
        if i < 0:
            break
    if out_c:
        return np.array(out_c, dtype=np.int64), np.array(out_n, dtype=np.float64)
    return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.float64)


def count_inside(double[:, ::1] pts, long long[::1] block, int nblocks):
    """Number of rows x with nabla(x) <= 1."""
    cdef Py_ssize_t m = pts.shape[0], k
    cdef int n = pts.shape[1]
    cdef long long hits = 0
    cdef double[::1] sums = np.zeros(max(nblocks, 1), dtype=np.float64)
    with nogil:
        for k in range(m):
            if _nabla(&pts[k, 0], &block[0], n, &sums[0], nblocks) <= 1.0:
                hits += 1
    return hits
