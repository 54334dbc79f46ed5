"""Vectorised Euler-Maclaurin evaluation of zeta(1/2+it) in double precision.

Independent of the crate's Riemann-Siegel path; used only to produce frozen
integral oracles.
"""
import numpy as np
import mpmath as mp

_B = [float(mp.bernoulli(2 * k)) / float(mp.factorial(2 * k)) for k in range(0, 40)]


def zeta_half(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    tmax = float(t.max())
    N = int(tmax / 3.0) + 30
    m = 26
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    out = np.empty(t.shape, dtype=complex)
    chunk = max(1, int(2e7 // N))
    for i in range(0, t.size, chunk):
        ss = s[i:i + chunk]
        acc = np.exp(-np.outer(ss, logn)).sum(axis=1)
        Ns = np.exp(-ss * np.log(N))
        acc += N * Ns / (ss - 1.0) + 0.5 * Ns
        # Bernoulli tail
        fac = ss.copy()  # s
        pw = Ns / N      # N^{-s-1}
        for k in range(1, m + 1):
            acc += _B[k] * fac * pw
            fac = fac * (ss + 2 * k - 1) * (ss + 2 * k)
            pw = pw / (N * N)
        out[i:i + chunk] = acc
    return out


def theta(t):
    t = np.asarray(t, dtype=float)
    return np.array([float(mp.siegeltheta(x)) for x in np.atleast_1d(t)])


def Z(t):
    return (np.exp(1j * theta(t)) * zeta_half(t)).real


if __name__ == "__main__":
    mp.mp.dps = 30
    for t in [0.0, 1.0, 14.134725141734693, 50.0, 300.3, 2000.7, 9000.1]:
        ref = mp.zeta(mp.mpc(0.5, t))
        got = zeta_half(t)[0]
        print(t, abs(got - complex(ref)), abs(complex(ref)))
