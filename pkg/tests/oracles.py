"""Dense reference implementations built on scipy.linalg, independent of qalpha's spectral code.

Only valid for full-rank inputs (no support restriction).
"""

import numpy as np
from scipy.linalg import fractional_matrix_power, logm, sqrtm


def mpow(a, p):
    return np.asarray(fractional_matrix_power(np.asarray(a, dtype=complex), p))


def tr(a):
    return float(np.real(np.trace(a)))


def s_alpha(rho, sigma, alpha, ln_base=np.log(2)):
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    cross = tr(rho @ mpow(sigma, alpha - 1))
    val = (
        alpha / (1 - alpha) * np.log(cross)
        - 1 / (1 - alpha) * np.log(tr(mpow(rho, alpha)))
        + np.log(tr(mpow(sigma, alpha)))
    )
    return val / ln_base


def umegaki(rho, sigma, ln_base=np.log(2)):
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    return tr(rho @ (logm(rho) - logm(sigma))) / ln_base


def petz(rho, sigma, alpha, ln_base=np.log(2)):
    return np.log(tr(mpow(rho, alpha) @ mpow(sigma, 1 - alpha))) / (alpha - 1) / ln_base


def sandwiched(rho, sigma, alpha, ln_base=np.log(2)):
    s = mpow(sigma, (1 - alpha) / (2 * alpha))
    return np.log(tr(mpow(s @ np.asarray(rho) @ s, alpha))) / (alpha - 1) / ln_base


def qdpd(rho, sigma, alpha):
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    return (
        alpha / (1 - alpha) * tr(rho @ mpow(sigma, alpha - 1))
        - 1 / (1 - alpha) * tr(mpow(rho, alpha))
        + tr(mpow(sigma, alpha))
    )


def fidelity(rho, sigma):
    r = sqrtm(np.asarray(rho, dtype=complex))
    return tr(sqrtm(r @ np.asarray(sigma) @ r))


def ginibre_density(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real
