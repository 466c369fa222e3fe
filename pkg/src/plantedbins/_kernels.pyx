#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched multinomial sampling and per-sample power sums.

Bit-parity contract with ``_kernels_py``: sampling calls the same
``random_multinomial`` C routine numpy's Generator.multinomial uses, and the
reductions perform the identical sequence of IEEE double operations
(increasing bin order, Neumaier compensated summation, no FMA contraction).
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport fabs
from libc.stdint cimport int64_t
from libc.string cimport memset

import numpy as np

cimport numpy as cnp
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport binomial_t, random_multinomial

cnp.import_array()

BACKEND_NAME = "cython"

cdef const char *_CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen_state(object generator) except NULL:
    capsule = generator.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, _CAPSULE_NAME):
        raise ValueError("generator does not expose a BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, _CAPSULE_NAME)


cdef inline void _neumaier(double x, double *s, double *c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef void _row_power_sums(const int64_t *active, const double *weights,
                          Py_ssize_t width, double n_over_m, double m_over_n,
                          double *out_row) noexcept nogil:
    cdef double s1 = 0, s2 = 0, s3 = 0, s4 = 0
    cdef double c1 = 0, c2 = 0, c3 = 0, c4 = 0
    cdef double z, q, term
    cdef Py_ssize_t col
    for col in range(width):
        z = <double> active[col]
        q = n_over_m * (z - m_over_n)
        term = weights[col] * q
        _neumaier(term, &s1, &c1)
        term = term * q
        _neumaier(term, &s2, &c2)
        term = term * q
        _neumaier(term, &s3, &c3)
        term = term * q
        _neumaier(term, &s4, &c4)
    out_row[0] = s1 + c1
    out_row[1] = s2 + c2
    out_row[2] = s3 + c3
    out_row[3] = s4 + c4


def multinomial_fill(object generator, m, const double[::1] pvals,
                     int64_t[:, ::1] out):
    """Fill each row of ``out`` with one multinomial(m, pvals) draw."""
    cdef bitgen_t *state = _bitgen_state(generator)
    cdef binomial_t binomial
    cdef int64_t balls = m
    cdef Py_ssize_t row, nrows = out.shape[0]
    cdef cnp.npy_intp nbins = <cnp.npy_intp> out.shape[1]
    memset(&binomial, 0, sizeof(binomial))
    with generator.bit_generator.lock, nogil:
        for row in range(nrows):
            # random_multinomial leaves trailing entries untouched after an
            # early break, so each row must start zeroed.
            memset(&out[row, 0], 0, nbins * sizeof(int64_t))
            random_multinomial(state, balls, &out[row, 0],
                               <double *> &pvals[0], nbins, &binomial)


def weighted_power_sums(const int64_t[:, ::1] active_counts,
                        const double[::1] weights,
                        double n_over_m, double m_over_n,
                        double[:, ::1] out):
    """Per-sample compensated sums of w * q**p for p = 1..4."""
    cdef Py_ssize_t row, nrows = active_counts.shape[0]
    cdef Py_ssize_t width = active_counts.shape[1]
    if out.shape[0] != nrows or out.shape[1] != 4:
        raise ValueError("out must have shape (len(active_counts), 4)")
    if weights.shape[0] != width:
        raise ValueError("weights length must match active_counts width")
    with nogil:
        for row in range(nrows):
            _row_power_sums(
                &active_counts[row, 0] if width > 0 else NULL,
                &weights[0] if width > 0 else NULL,
                width, n_over_m, m_over_n, &out[row, 0])


def sample_power_sums(object generator, m_throw, const double[::1] pvals,
                      const cnp.intp_t[::1] active_index,
                      const int64_t[::1] base_counts,
                      const double[::1] weights, double n_over_m,
                      double m_over_n, double[:, ::1] out):
    """Sample a batch of throws and reduce it to per-sample power sums.

    Fused version of multinomial_fill + weighted_power_sums: one scratch row
    instead of a (B, n) matrix.
    """
    cdef bitgen_t *state = _bitgen_state(generator)
    cdef binomial_t binomial
    cdef int64_t balls = m_throw
    cdef Py_ssize_t row, col, nrows = out.shape[0]
    cdef Py_ssize_t width = active_index.shape[0]
    cdef cnp.npy_intp nbins = <cnp.npy_intp> pvals.shape[0]
    if out.shape[1] != 4:
        raise ValueError("out must have shape (B, 4)")
    if base_counts.shape[0] != width or weights.shape[0] != width:
        raise ValueError("active_index, base_counts, weights must align")
    scratch_arr = np.zeros(pvals.shape[0], dtype=np.int64)
    active_arr = np.zeros(max(width, 1), dtype=np.int64)
    cdef int64_t[::1] scratch = scratch_arr
    cdef int64_t[::1] active = active_arr
    memset(&binomial, 0, sizeof(binomial))
    with generator.bit_generator.lock, nogil:
        for row in range(nrows):
            memset(&scratch[0], 0, nbins * sizeof(int64_t))
            random_multinomial(state, balls, &scratch[0],
                               <double *> &pvals[0], nbins, &binomial)
            for col in range(width):
                active[col] = scratch[active_index[col]] + base_counts[col]
            _row_power_sums(&active[0] if width > 0 else NULL,
                            &weights[0] if width > 0 else NULL,
                            width, n_over_m, m_over_n, &out[row, 0])
