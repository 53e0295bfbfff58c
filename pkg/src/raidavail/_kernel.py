"""Compiled event loop for the Monte-Carlo array simulator.

Each iteration owns a xoshiro256** stream seeded through splitmix64 from
(master_seed, iteration index), so an iteration's trajectory does not depend
on which worker runs it or in which order.
"""

import math

import numpy as np
from numba import njit, uint64

from .distributions import inverse_survival

_inverse_survival = njit(cache=True)(inverse_survival)

NEVER_FAILS = -1

_GOLDEN = uint64(0x9E3779B97F4A7C15)
_M1 = uint64(0xBF58476D1CE4E5B9)
_M2 = uint64(0x94D049BB133111EB)


@njit(cache=True)
def _mix(z):
    # splitmix64 finalizer, a bijection on 64-bit words
    z = (z ^ (z >> uint64(30))) * _M1
    z = (z ^ (z >> uint64(27))) * _M2
    return z ^ (z >> uint64(31))


@njit(cache=True)
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(cache=True)
def seed_stream(master_seed, index, s):
    """Fill the 4-word state ``s`` for iteration ``index``."""
    x = _mix(_mix(uint64(master_seed)) ^ uint64(index))
    for k in range(4):
        x += _GOLDEN
        s[k] = _mix(x)


@njit(cache=True)
def next_uniform(s):
    """Uniform on the open interval (0, 1)."""
    result = _rotl(s[1] * uint64(5), 7) * uint64(9)
    t = s[1] << uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return (float(result >> uint64(11)) + 0.5) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _exp(s, rate):
    return _inverse_survival(0, rate, 0.0, next_uniform(s))


@njit(cache=True)
def _ttf(s, kind, a, b):
    if kind == NEVER_FAILS:
        return math.inf
    return _inverse_survival(kind, a, b, next_uniform(s))


@njit(cache=True)
def _clip(start, end, mission):
    if end > mission:
        end = mission
    return end - start if end > start else 0.0


@njit(cache=True)
def simulate_range(
    master_seed, start, count, n_disks, parity,
    ttf_kind, ttf_a, ttf_b, repair_fixed,
    mu_df, mu_ddf, mu_he, lambda_crash, hep, mission,
    out_loss, out_human,
):
    """Simulate iterations ``start .. start+count-1`` into the output arrays.

    ``repair_fixed <= 0`` selects exponential repair at ``mu_df``.
    ``out_loss`` receives downtime from losses beyond the array's fault
    tolerance, ``out_human`` downtime caused by a wrong disk pull (including
    a data loss after the pulled disk crashes).
    """
    s = np.empty(4, dtype=np.uint64)
    fail = np.empty(n_disks)
    for j in range(count):
        seed_stream(master_seed, start + j, s)
        for k in range(n_disks):
            fail[k] = _ttf(s, ttf_kind, ttf_a, ttf_b)
        loss = 0.0
        human = 0.0
        while True:
            k1 = 0
            for k in range(1, n_disks):
                if fail[k] < fail[k1]:
                    k1 = k
            t = fail[k1]
            if t >= mission:
                break
            if repair_fixed > 0.0:
                t_repaired = t + repair_fixed
            else:
                t_repaired = t + _exp(s, mu_df)

            if parity == 0:
                # bare disk: down for the whole repair
                loss += _clip(t, t_repaired, mission)
                if t_repaired >= mission:
                    break
                fail[k1] = t_repaired + _ttf(s, ttf_kind, ttf_a, ttf_b)
                continue

            t2 = math.inf
            for k in range(n_disks):
                if k != k1 and fail[k] < t2:
                    t2 = fail[k]
            if t2 < t_repaired:
                # second failure before the first is repaired: restore from backup
                t_back = t2 + _exp(s, mu_ddf)
                loss += _clip(t2, t_back, mission)
                if t_back >= mission:
                    break
                for k in range(n_disks):
                    fail[k] = t_back + _ttf(s, ttf_kind, ttf_a, ttf_b)
                continue

            if t_repaired >= mission:
                break
            if hep > 0.0 and next_uniform(s) < hep:
                # a working disk was pulled instead of the failed one
                t = t_repaired
                t_crash = t + _exp(s, lambda_crash)
                while True:
                    t_undo = t + _exp(s, mu_he)
                    if t_crash < t_undo:
                        t_back = t_crash + _exp(s, mu_ddf)
                        human += _clip(t, t_back, mission)
                        t = t_back
                        break
                    human += _clip(t, t_undo, mission)
                    t = t_undo
                    if t >= mission or next_uniform(s) >= hep:
                        break
                if t >= mission:
                    break
                for k in range(n_disks):
                    fail[k] = t + _ttf(s, ttf_kind, ttf_a, ttf_b)
                continue

            fail[k1] = t_repaired + _ttf(s, ttf_kind, ttf_a, ttf_b)
        out_loss[j] = loss
        out_human[j] = human
