"""Pure numpy fallback for the compiled lattice sums in ``_kernels.pyx``.

Same table layout and the same per-node accumulation order (offsets in
ascending k1, then k2), vectorised over output nodes instead of offsets.
"""

import numpy as np


def _shifted(f, k):
    """g[i] = f[i + k] with zero fill, for an integer offset tuple k."""
    N = f.shape[0]
    out = np.zeros_like(f)
    src, dst = [], []
    for kj in k:
        if abs(kj) >= N:
            return out, False
        if kj >= 0:
            src.append(slice(kj, N))
            dst.append(slice(0, N - kj))
        else:
            src.append(slice(0, N + kj))
            dst.append(slice(-kj, N))
    out[tuple(dst)] = f[tuple(src)]
    return out, True


def _valid(N, k):
    mask = np.zeros((N,) * len(k), dtype=bool)
    _, ok = _shifted(mask, k)
    if not ok:
        return mask
    sl = tuple(slice(0, N - kj) if kj >= 0 else slice(-kj, N) for kj in k)
    mask[sl] = True
    return mask


def _half_offsets(N, ndim):
    if ndim == 1:
        for k in range(1, N):
            yield (k,), k
    else:
        c = N - 1
        for k1 in range(N):
            for k2 in range(1 if k1 == 0 else -(N - 1), N):
                yield (k1, k2), (k1, k2 + c)


def _pair_sum(f, w, parity):
    f = np.ascontiguousarray(f, dtype=float)
    out = np.zeros_like(f)
    par = float(parity)
    for k, widx in _half_offsets(f.shape[0], f.ndim):
        wk = w[widx]
        fp, okp = _shifted(f, k)
        fm, okm = _shifted(f, tuple(-kj for kj in k))
        if not (okp or okm):
            continue
        out += wk * (fp + par * fm)
    return out


def _powabs(x, p):
    if p == 1.0:
        return np.abs(x)
    if p == 2.0:
        return x * x
    return np.abs(x) ** p


def _absdiff_sum(f, w, p):
    f = np.ascontiguousarray(f, dtype=float)
    N = f.shape[0]
    out = np.zeros_like(f)
    for k, widx in _half_offsets(N, f.ndim):
        mk = tuple(-kj for kj in k)
        vp, vm = _valid(N, k), _valid(N, mk)
        if not (vp.any() or vm.any()):
            continue
        fp, _ = _shifted(f, k)
        fm, _ = _shifted(f, mk)
        dp = np.where(vp, _powabs(fp - f, p), 0.0)
        d = np.where(vm, dp + _powabs(fm - f, p), dp)
        out += w[widx] * d
    return out


def _absdiff_max(f, w):
    f = np.ascontiguousarray(f, dtype=float)
    N = f.shape[0]
    out = np.zeros_like(f)
    for k, widx in _half_offsets(N, f.ndim):
        for kk in (k, tuple(-kj for kj in k)):
            v = _valid(N, kk)
            if not v.any():
                continue
            fs, _ = _shifted(f, kk)
            np.maximum(out, np.where(v, w[widx] * np.abs(fs - f), 0.0), out=out)
    return out


def pair_sum_1d(f, w, parity, nthreads=1):
    return _pair_sum(np.asarray(f), np.asarray(w), parity)


def pair_sum_2d(f, w, parity, nthreads=1):
    return _pair_sum(np.asarray(f), np.asarray(w), parity)


def absdiff_sum_1d(f, w, p, nthreads=1):
    return _absdiff_sum(np.asarray(f), np.asarray(w), float(p))


def absdiff_sum_2d(f, w, p, nthreads=1):
    return _absdiff_sum(np.asarray(f), np.asarray(w), float(p))


def absdiff_max_1d(f, w, nthreads=1):
    return _absdiff_max(np.asarray(f), np.asarray(w))


def absdiff_max_2d(f, w, nthreads=1):
    return _absdiff_max(np.asarray(f), np.asarray(w))
