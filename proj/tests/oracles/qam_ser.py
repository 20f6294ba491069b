#!/usr/bin/env python3
"""64-QAM symbol error rate oracle.

Analytic SER for square M-QAM over complex AWGN with per-symbol SNR gamma
(noise variance sigma^2 = 10^(-snr_db/10), unit average symbol energy):

    P_axis = 2 * (1 - 1/sqrt(M)) * Q( sqrt(3 * gamma / (M - 1)) )
    SER    = 1 - (1 - P_axis)^2

Also runs a small Monte Carlo with the same Gray/level conventions as the
implementation (levels (2i-7)/sqrt(42), nearest-level decisions) to confirm
the closed form; the frozen values below are the analytic ones.
"""
import math
import random


def qfunc(x):
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def ser_analytic(snr_db, m=64):
    gamma = 10.0 ** (snr_db / 10.0)
    p_axis = 2.0 * (1.0 - 1.0 / math.sqrt(m)) * qfunc(math.sqrt(3.0 * gamma / (m - 1)))
    return 1.0 - (1.0 - p_axis) ** 2


def ser_monte_carlo(snr_db, trials=200_000, seed=7):
    rng = random.Random(seed)
    scale = 1.0 / math.sqrt(42.0)
    levels = [(2 * i - 7) * scale for i in range(8)]
    sigma_axis = math.sqrt(10.0 ** (-snr_db / 10.0) / 2.0)
    errors = 0
    for _ in range(trials):
        ii, qq = rng.randrange(8), rng.randrange(8)
        ri = levels[ii] + rng.gauss(0.0, sigma_axis)
        rq = levels[qq] + rng.gauss(0.0, sigma_axis)
        di = min(7, max(0, round((ri / scale + 7.0) / 2.0)))
        dq = min(7, max(0, round((rq / scale + 7.0) / 2.0)))
        errors += (di, dq) != (ii, qq)
    return errors / trials


for snr in (0.0, 8.0, 14.0, 18.0, 22.0, 26.0, 30.0):
    print(f"snr={snr:5.1f} dB  ser_analytic={ser_analytic(snr):.6f}  "
          f"ser_mc={ser_monte_carlo(snr):.6f}")
