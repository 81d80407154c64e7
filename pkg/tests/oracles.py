"""Independent oracles used only by the test suite.

Each oracle takes a route disjoint from the implementation it checks:
the beam-splitter channel is simulated in a truncated Fock space (exact
two-mode unitary, block-diagonal in total photon number, then a partial
trace), ensemble averages are recomputed with a dense trapezoid rule over
the Gaussian marginal, and the tunneling-rate formula is re-evaluated in
arbitrary precision.
"""

import math

import numpy as np
from scipy.linalg import expm


def gaussian_trapezoid_average(fn, sigma, points=2048, span=6.0):
    """int N(0, sigma^2)(E) fn(E) dE on a dense symmetric grid."""
    grid = np.linspace(-span * sigma, span * sigma, points)
    pdf = np.exp(-grid**2 / (2.0 * sigma**2)) / math.sqrt(
        2.0 * math.pi * sigma**2)
    vals = np.array([fn(e) for e in grid])
    return float(np.trapezoid(pdf * vals, grid))


def gaussian_moment_trapezoid(sigma, order, points=4096, span=8.0):
    """Central moment <E^order> of N(0, sigma^2) by quadrature."""
    return gaussian_trapezoid_average(lambda e: e**order, sigma,
                                      points=points, span=span)


def adk_reference_rate(ip_au, core_charge, field_au, regularizer=1e-12,
                       digits=50):
    """Arbitrary-precision one-line evaluation of the tunneling formula."""
    import mpmath

    with mpmath.workdps(digits):
        ip = mpmath.mpf(ip_au)
        z = mpmath.mpf(core_charge)
        e0 = mpmath.sqrt(mpmath.mpf(field_au) ** 2 + mpmath.mpf(regularizer))
        n_star = z / mpmath.sqrt(2 * ip)
        d = (4 * mpmath.e * z**3 / (e0 * n_star**4)) ** n_star
        rate = (3 * n_star * e0 / (mpmath.pi * z**3)
                * e0 * d**2 / (8 * mpmath.pi * z)
                * mpmath.exp(-2 * z**3 / (3 * n_star**3 * e0)))
        return float(rate)


# --- Fock-space beam-splitter channel ------------------------------------

def squeezed_vacuum_amplitudes(r, n_max):
    """Fock amplitudes of a squeezed vacuum, anti-squeezed along X1.

    c_{2m} = (tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r); odd
    components vanish. The truncated vector is renormalized: the channel
    moment laws being verified hold for any normalized input state, so
    renormalization keeps truncation bias out of those comparisons.
    """
    c = np.zeros(n_max + 1)
    if r == 0.0:
        c[0] = 1.0
        return c
    log_tanh = math.log(math.tanh(r))
    for m in range(0, n_max // 2 + 1):
        log_c = (m * log_tanh + 0.5 * math.lgamma(2 * m + 1)
                 - m * math.log(2.0) - math.lgamma(m + 1)
                 - 0.5 * math.log(math.cosh(r)))
        c[2 * m] = math.exp(log_c)
    return c / math.sqrt(float(np.sum(c * c)))


def beam_splitter_reduced_state(amplitudes_a, transmission):
    """Exact lossy channel: mix with an ancilla vacuum, trace it out.

    The two-mode beam-splitter generator theta (a^dag b - a b^dag) is
    block-diagonal in total photon number; each block N is an (N+1)-dim
    antisymmetric tridiagonal matrix exponentiated directly. Input
    |psi>_A |0>_B lives at basis index k = N inside block N. Returns the
    reduced density matrix of mode A.
    """
    n_max = len(amplitudes_a) - 1
    theta = math.acos(math.sqrt(transmission))
    # psi_out[j, m]: amplitude for j photons in A, m in the ancilla
    psi_out = np.zeros((n_max + 1, n_max + 1))
    for n_tot in range(n_max + 1):
        if amplitudes_a[n_tot] == 0.0:
            continue
        gen = np.zeros((n_tot + 1, n_tot + 1))
        for k in range(n_tot):
            coupling = math.sqrt((k + 1) * (n_tot - k))
            gen[k + 1, k] = coupling     # a^dag b
            gen[k, k + 1] = -coupling    # -a b^dag
        block_u = expm(theta * gen)
        for k in range(n_tot + 1):
            psi_out[k, n_tot - k] += amplitudes_a[n_tot] * block_u[k, n_tot]
    return psi_out @ psi_out.T


def fock_moments(rho):
    """Quadrature variances, mean photons and <a^dag^n a^n> up to n=3.

    The state is padded with four empty Fock levels before operators are
    built: products like a a^dag or X^2 need headroom above the occupied
    space to keep their top-edge matrix elements exact.
    """
    padded = np.zeros((rho.shape[0] + 4, rho.shape[1] + 4))
    padded[:rho.shape[0], :rho.shape[1]] = rho
    rho = padded
    dim = rho.shape[0]
    lower = np.zeros((dim, dim))
    for n in range(1, dim):
        lower[n - 1, n] = math.sqrt(n)
    raise_op = lower.T
    x1 = raise_op + lower
    x2_sq = -(raise_op - lower) @ (raise_op - lower)
    number = raise_op @ lower

    def expect(op):
        return float(np.trace(rho @ op))

    mean_x1 = expect(x1)
    var_x1 = expect(x1 @ x1) - mean_x1**2
    var_x2 = expect(x2_sq)   # zero-mean states
    autocorr = {n: expect(np.linalg.matrix_power(raise_op, n)
                          @ np.linalg.matrix_power(lower, n))
                for n in (1, 2, 3)}
    return {"var_x1": var_x1, "var_x2": var_x2,
            "mean_photons": expect(number), "autocorr": autocorr}
