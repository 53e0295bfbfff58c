"""Reference computations kept independent of the package's solver paths."""

import numpy as np


def gth_stationary(q):
    """Grassmann-Taksar-Heyman state reduction: subtraction-free, so it needs
    no pivoting and keeps small probabilities accurate."""
    a = np.array(q, dtype=float)
    np.fill_diagonal(a, 0.0)
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        s = a[k, :k].sum()
        a[:k, k] /= s
        a[:k, :k] += np.outer(a[:k, k], a[k, :k])
        np.fill_diagonal(a, 0.0)
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ a[:k, k]
    return pi / pi.sum()


def conventional_closed_form(n, lam, mu_df, mu_ddf, mu_he, lambda_crash, hep):
    """Balance equations of the 4-state conventional chain solved by hand:

        pi_EXP * (mu_df + (n-1) lam)        = n lam pi_OP
        pi_DU  * (mu_he (1-hep) + crash)    = mu_df hep pi_EXP
        pi_DL  * mu_ddf                     = (n-1) lam pi_EXP + crash pi_DU

    Returns (pi_OP, pi_EXP, pi_DU, pi_DL).
    """
    op = 1.0
    exp_ = n * lam * op / (mu_df + (n - 1) * lam)
    du = mu_df * hep * exp_ / (mu_he * (1 - hep) + lambda_crash)
    dl = ((n - 1) * lam * exp_ + lambda_crash * du) / mu_ddf
    total = op + exp_ + du + dl
    return op / total, exp_ / total, du / total, dl / total


def three_state_availability(n, lam, mu_df, mu_ddf):
    """Classical RAID5 availability without human error."""
    op = 1.0
    exp_ = n * lam * op / (mu_df + (n - 1) * lam)
    dl = (n - 1) * lam * exp_ / mu_ddf
    return (op + exp_) / (op + exp_ + dl)


def fixed_repair_unavailability(n, lam, repair_hours, mu_ddf):
    """Renewal-reward unavailability of a single-parity array with
    exponential lifetimes, a deterministic repair and no human error.

    A cycle is: all-up period (mean 1/(n lam)); then a repair window of
    ``repair_hours`` raced by the (n-1) survivors; on a second failure the
    backup restore (mean 1/mu_ddf) ends the cycle.
    """
    a = (n - 1) * lam
    p_loss = -np.expm1(-a * repair_hours)
    up = 1.0 / (n * lam) + p_loss / a
    down = p_loss / mu_ddf
    return down / (up + down)
