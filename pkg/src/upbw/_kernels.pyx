# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: batched spanning tests and the product-state seesaw.

Both routines call LAPACK through scipy's Cython bindings and release the GIL,
so the Python wrappers can split work across threads.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.math cimport fabs
from scipy.linalg.cython_lapack cimport dgesvd, zgesvd, zheev

cnp.import_array()


def min_singular_values(vecs, cnp.intp_t[:, ::1] subsets):
    """Smallest singular value of each stacked subset (0 when the subset is too small to span).

    Real input (float64) goes through dgesvd, complex input through zgesvd.
    """
    cdef Py_ssize_t m = subsets.shape[0]
    cdef int k = <int>subsets.shape[1]
    cdef int d = <int>vecs.shape[1]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] res = out
    cdef double[:, ::1] rv
    cdef double complex[:, ::1] cv
    if k < d or m == 0:
        return out
    if vecs.dtype == np.float64:
        rv = vecs
        with nogil:
            _min_sv_real(rv, subsets, res, k, d)
    else:
        cv = vecs
        with nogil:
            _min_sv_complex(cv, subsets, res, k, d)
    return out


cdef void _min_sv_real(double[:, ::1] vecs, cnp.intp_t[:, ::1] subsets,
                       double[::1] res, int k, int d) noexcept nogil:
    cdef Py_ssize_t m = subsets.shape[0]
    cdef int mn = d if d < k else k
    cdef int mx = k if k > d else d
    cdef int lwork = 8 * (3 * mn + mx)
    cdef int one = 1
    cdef int info = 0
    cdef char jobn = b'N'
    cdef double *a = <double *>malloc(k * d * sizeof(double))
    cdef double *work = <double *>malloc(lwork * sizeof(double))
    cdef double *s = <double *>malloc(mn * sizeof(double))
    cdef double dummy
    cdef Py_ssize_t t
    cdef int r, c
    cdef int kk = k, dd = d
    for t in range(m):
        # column-major copy of the k×d stack
        for r in range(k):
            for c in range(d):
                a[r + c * k] = vecs[subsets[t, r], c]
        dgesvd(&jobn, &jobn, &kk, &dd, a, &kk, s, &dummy, &one, &dummy, &one,
               work, &lwork, &info)
        res[t] = s[mn - 1] if info == 0 else -1.0
    free(a)
    free(work)
    free(s)


cdef void _min_sv_complex(double complex[:, ::1] vecs, cnp.intp_t[:, ::1] subsets,
                          double[::1] res, int k, int d) noexcept nogil:
    cdef Py_ssize_t m = subsets.shape[0]
    cdef int mn = d if d < k else k
    cdef int mx = k if k > d else d
    cdef int lwork = 4 * (2 * mn + mx)
    cdef int one = 1
    cdef int info = 0
    cdef char jobn = b'N'
    cdef double complex *a = <double complex *>malloc(k * d * sizeof(double complex))
    cdef double complex *work = <double complex *>malloc(lwork * sizeof(double complex))
    cdef double *rwork = <double *>malloc(5 * mn * sizeof(double))
    cdef double *s = <double *>malloc(mn * sizeof(double))
    cdef double complex dummy
    cdef Py_ssize_t t
    cdef int r, c
    cdef int kk = k, dd = d
    for t in range(m):
        for r in range(k):
            for c in range(d):
                a[r + c * k] = vecs[subsets[t, r], c]
        zgesvd(&jobn, &jobn, &kk, &dd, a, &kk, s, &dummy, &one, &dummy, &one,
               work, &lwork, rwork, &info)
        res[t] = s[mn - 1] if info == 0 else -1.0
    free(a)
    free(work)
    free(rwork)
    free(s)


cdef int _lowest_eigvec(double complex *mat, int n, double complex *vec, double *val,
                        double *w, double complex *work, int lwork, double *rwork) noexcept nogil:
    # mat is overwritten (column-major, Hermitian).
    cdef char jobv = b'V'
    cdef char uplo = b'U'
    cdef int info = 0
    cdef int i
    zheev(&jobv, &uplo, &n, mat, &n, w, work, &lwork, rwork, &info)
    if info != 0:
        return info
    val[0] = w[0]
    for i in range(n):
        vec[i] = mat[i]
    return 0


def seesaw(double complex[:, ::1] H, int dA, int dB,
           double complex[::1] phiA0, double complex[::1] phiB0,
           int iters, double tol):
    """Alternating minimisation of <phiA phiB|H|phiA phiB>.

    Returns (phiA, phiB, history) where history[0] is the starting value and
    each later entry is the value after one half-step.
    """
    phiA_out = np.array(phiA0, dtype=np.complex128, copy=True)
    phiB_out = np.array(phiB0, dtype=np.complex128, copy=True)
    hist = np.empty(2 * iters + 1, dtype=np.float64)
    cdef double complex[::1] pa = phiA_out
    cdef double complex[::1] pb = phiB_out
    cdef double[::1] h = hist
    cdef int used
    with nogil:
        used = _seesaw_loop(H, dA, dB, pa, pb, iters, tol, h)
    if used < 0:
        raise RuntimeError("LAPACK zheev failed inside seesaw")
    return phiA_out, phiB_out, hist[:used]


cdef int _seesaw_loop(double complex[:, ::1] H, int dA, int dB,
                      double complex[::1] pa, double complex[::1] pb,
                      int iters, double tol, double[::1] h) noexcept nogil:
    cdef int dmax = dA if dA > dB else dB
    cdef int lwork = 8 * dmax
    cdef double complex *mat = <double complex *>malloc(dmax * dmax * sizeof(double complex))
    cdef double complex *work = <double complex *>malloc(lwork * sizeof(double complex))
    cdef double *rwork = <double *>malloc(3 * dmax * sizeof(double))
    cdef double *w = <double *>malloc(dmax * sizeof(double))
    cdef double complex *vec = <double complex *>malloc(dmax * sizeof(double complex))
    cdef double val = 0.0
    cdef double prev
    cdef double complex acc
    cdef int a, a2, b, b2, it, n = 0, info
    cdef int status = 0

    # starting value
    acc = 0
    for a in range(dA):
        for b in range(dB):
            for a2 in range(dA):
                for b2 in range(dB):
                    acc = acc + (pa[a] * pb[b]).conjugate() * H[a * dB + b, a2 * dB + b2] * pa[a2] * pb[b2]
    h[0] = acc.real
    n = 1
    prev = acc.real

    for it in range(iters):
        # A half-step: M_A[a, a2] = sum conj(pb[b]) H[(a,b),(a2,b2)] pb[b2]
        for a in range(dA):
            for a2 in range(dA):
                acc = 0
                for b in range(dB):
                    for b2 in range(dB):
                        acc = acc + pb[b].conjugate() * H[a * dB + b, a2 * dB + b2] * pb[b2]
                mat[a + a2 * dA] = acc
        info = _lowest_eigvec(mat, dA, vec, &val, w, work, lwork, rwork)
        if info != 0:
            status = -1
            break
        for a in range(dA):
            pa[a] = vec[a]
        h[n] = val
        n += 1
        # B half-step
        for b in range(dB):
            for b2 in range(dB):
                acc = 0
                for a in range(dA):
                    for a2 in range(dA):
                        acc = acc + pa[a].conjugate() * H[a * dB + b, a2 * dB + b2] * pa[a2]
                mat[b + b2 * dB] = acc
        info = _lowest_eigvec(mat, dB, vec, &val, w, work, lwork, rwork)
        if info != 0:
            status = -1
            break
        for b in range(dB):
            pb[b] = vec[b]
        h[n] = val
        n += 1
        if fabs(prev - val) < tol:
            break
        prev = val

    free(mat)
    free(work)
    free(rwork)
    free(w)
    free(vec)
    if status < 0:
        return -1
    return n
