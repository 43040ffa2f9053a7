"""Hot inner loops of the analysis/synthesis operators.

Two interchangeable implementations live here: numba-compiled loops and a
pure-numpy path built on strided views and BLAS products. The jitted path is
used when numba imports cleanly and ``MSAEKIT_DISABLE_JIT`` is unset or "0".
Both produce the same values up to floating-point summation order.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("MSAEKIT_DISABLE_JIT", "0").strip().lower()
JIT_ENABLED = numba is not None and _flag in ("", "0", "false", "no")


def _pad_to(x, length):
    if x.shape[0] >= length:
        return x[:length]
    out = np.zeros(length, dtype=np.float64)
    out[: x.shape[0]] = x
    return out


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------


def np_strided_correlate(x, re, im, hop, n_frames):
    """Correlate kernels against frames ``x[t*hop : t*hop + N]``.

    Samples past the end of ``x`` read as zero. Returns ``(real, imag)``
    arrays of shape ``(n_frames, K)``.
    """
    n = re.shape[1]
    need = (n_frames - 1) * hop + n if n_frames > 0 else 0
    xp = _pad_to(np.asarray(x, dtype=np.float64), max(need, n))
    frames = np.lib.stride_tricks.sliding_window_view(xp, n)[::hop][:n_frames]
    return frames @ re.T, frames @ im.T


def np_transposed_correlate(cr, ci, re, im, hop, out_len):
    n = re.shape[1]
    assert 2 * hop == n, "hop must be half the kernel length"
    t_count = cr.shape[0]
    frames = cr @ re + ci @ im
    buf = np.zeros(max((t_count - 1) * hop + n, out_len, 0), dtype=np.float64)
    if t_count:
        # hop = n/2: even frames tile without overlap, as do odd frames
        even = frames[0::2].reshape(-1)
        buf[: even.shape[0]] += even
        odd = frames[1::2].reshape(-1)
        buf[hop : hop + odd.shape[0]] += odd
    return buf[:out_len]


def np_max_pool_time(a, pool):
    t_out = a.shape[0] // pool
    view = a[: t_out * pool].reshape((t_out, pool) + a.shape[1:])
    return view.max(axis=1)


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if JIT_ENABLED:

    @numba.njit(cache=True, nogil=True)
    def _nb_strided_correlate(x, re, im, hop, n_frames):
        k_count, n = re.shape
        cr = np.zeros((n_frames, k_count))
        ci = np.zeros((n_frames, k_count))
        length = x.shape[0]
        for t in range(n_frames):
            start = t * hop
            stop = min(n, length - start)
            for k in range(k_count):
                acc_r = 0.0
                acc_i = 0.0
                for m in range(stop):
                    v = x[start + m]
                    acc_r += v * re[k, m]
                    acc_i += v * im[k, m]
                cr[t, k] = acc_r
                ci[t, k] = acc_i
        return cr, ci

    @numba.njit(cache=True, nogil=True)
    def _nb_transposed_correlate(cr, ci, re, im, hop, out_len):
        t_count, k_count = cr.shape
        n = re.shape[1]
        out = np.zeros(out_len)
        for t in range(t_count):
            start = t * hop
            if start >= out_len:
                break
            stop = min(n, out_len - start)
            for k in range(k_count):
                a = cr[t, k]
                b = ci[t, k]
                if a == 0.0 and b == 0.0:
                    continue
                for m in range(stop):
                    out[start + m] += a * re[k, m] + b * im[k, m]
        return out

    @numba.njit(cache=True, nogil=True)
    def _nb_max_pool_time(a, pool):
        t_out = a.shape[0] // pool
        out = np.empty((t_out, a.shape[1], a.shape[2]))
        for t in range(t_out):
            for k in range(a.shape[1]):
                for c in range(a.shape[2]):
                    m = a[t * pool, k, c]
                    for j in range(1, pool):
                        v = a[t * pool + j, k, c]
                        if v > m:
                            m = v
                    out[t, k, c] = m
        return out

    def strided_correlate(x, re, im, hop, n_frames):
        x = np.ascontiguousarray(x, dtype=np.float64)
        return _nb_strided_correlate(x, re, im, int(hop), int(n_frames))

    def transposed_correlate(cr, ci, re, im, hop, out_len):
        return _nb_transposed_correlate(
            np.ascontiguousarray(cr, dtype=np.float64),
            np.ascontiguousarray(ci, dtype=np.float64),
            re,
            im,
            int(hop),
            int(out_len),
        )

    def max_pool_time(a, pool):
        return _nb_max_pool_time(np.ascontiguousarray(a, dtype=np.float64), int(pool))

else:
    strided_correlate = np_strided_correlate
    transposed_correlate = np_transposed_correlate
    max_pool_time = np_max_pool_time


def backend():
    return "numba" if JIT_ENABLED else "numpy"
