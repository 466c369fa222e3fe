"""Pure numpy kernels: batched multinomial sampling and per-sample power sums.

This module and the compiled twin in ``_kernels.pyx`` must produce
bit-identical output from the same Generator state:

* sampling goes through numpy's Generator.multinomial here and through the
  same underlying C routine (``random_multinomial``) in the compiled kernel;
* the power-sum reductions accumulate active bins in increasing index order
  with Neumaier compensated summation, with the identical sequence of IEEE
  double operations in both implementations.

Any change to the arithmetic here must be mirrored in ``_kernels.pyx``.
"""

import numpy as np

BACKEND_NAME = "python"


def multinomial_fill(generator, m, pvals, out):
    """Fill each row of ``out`` with one multinomial(m, pvals) draw."""
    out[...] = generator.multinomial(int(m), pvals, size=out.shape[0])


def _accumulate(x, s, c):
    # One Neumaier step, vectorized over samples.  The branch order and the
    # (s - t) + x / (x - t) + s groupings are part of the bit-parity contract.
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c += np.where(big, (s - t) + x, (x - t) + s)
    s[:] = t


def weighted_power_sums(active_counts, weights, n_over_m, m_over_n, out):
    """Per-sample compensated sums of w * q**p for p = 1..4.

    ``active_counts`` is a (B, s) int64 array of occupancy counts at the
    weighted bins, in increasing bin order; ``out`` is (B, 4) float64.
    """
    nsamp = active_counts.shape[0]
    s = np.zeros((4, nsamp))
    c = np.zeros((4, nsamp))
    for col in range(active_counts.shape[1]):
        z = active_counts[:, col].astype(np.float64)
        q = n_over_m * (z - m_over_n)
        term = weights[col] * q
        _accumulate(term, s[0], c[0])
        term = term * q
        _accumulate(term, s[1], c[1])
        term = term * q
        _accumulate(term, s[2], c[2])
        term = term * q
        _accumulate(term, s[3], c[3])
    for p in range(4):
        out[:, p] = s[p] + c[p]


def sample_power_sums(generator, m_throw, pvals, active_index, base_counts,
                      weights, n_over_m, m_over_n, out):
    """Sample a batch of throws and reduce it to per-sample power sums.

    Throws ``m_throw`` balls per sample, adds the planted ``base_counts`` at
    ``active_index``, and writes w * q**p sums into ``out`` (B, 4).  The
    compiled twin fuses sampling and reduction without materializing the
    (B, n) count matrix; the results are identical.
    """
    counts = generator.multinomial(int(m_throw), pvals, size=out.shape[0])
    active = np.ascontiguousarray(counts[:, active_index]) + base_counts
    weighted_power_sums(active, weights, n_over_m, m_over_n, out)
