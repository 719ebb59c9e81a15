#!/usr/bin/env python3
"""Independent re-evaluation of the sample-complexity certificates.

Gramians are built from explicit matrix powers (numpy.linalg.matrix_power),
eigenvalues from numpy.linalg.eigvalsh and log-determinants from slogdet, so
nothing here shares a code path with the C++ implementation. The printed
values are frozen into tests/certify_test.cpp.
"""
import math

import numpy as np

A_TILDE = np.array([[0.7, 0.125], [1.0, 0.0]])
B_TILDE = np.array([[1.0], [0.0]])
C_CONST = 600.0
c_CONST = 10.0 / (3.0 / 20.0) ** 2


def gramian(a, t):
    return sum(np.linalg.matrix_power(a, j) @ np.linalg.matrix_power(a, j).T for j in range(t))


def gramian_input(a, b, t):
    return sum(
        np.linalg.matrix_power(a, t - j) @ b @ b.T @ np.linalg.matrix_power(a, t - j).T
        for j in range(1, t + 1)
    )


def bound_autonomous(a, K, k, delta, sigma):
    d = a.shape[0]
    wk, wK = gramian(a, k), gramian(a, K)
    lam = np.linalg.eigvalsh(wk).min()
    logdet = np.linalg.slogdet(wK)[1] - np.linalg.slogdet(wk)[1]
    term = d * math.log(d / delta) + logdet
    bound = C_CONST * sigma / math.sqrt(K * lam) * math.sqrt(term)
    return lam, logdet, bound, K / k >= c_CONST * term


def bound_inputs(a, b, K, k, delta, sigma, sigma_u):
    d = a.shape[0]
    mk = sigma**2 * gramian(a, k) + sigma_u**2 * gramian_input(a, b, k)
    mK = sigma**2 * gramian(a, K) + sigma_u**2 * gramian_input(a, b, K)
    lam = np.linalg.eigvalsh(mk).min()
    term = d * math.log(np.trace(mK) / (delta * lam))
    bound = C_CONST * sigma**2 / math.sqrt(K * lam) * math.sqrt(term)
    return lam, np.trace(mK), bound, K / k >= c_CONST * term


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("rho", max(abs(np.linalg.eigvals(A_TILDE))), (0.7 + math.sqrt(0.99)) / 2)
    print("W2", gramian(A_TILDE, 2).tolist())
    print("WB2", gramian_input(A_TILDE, B_TILDE, 2).tolist())
    lam, logdet, bound, burn = bound_autonomous(A_TILDE, 2000, 100, 0.1, 1.0)
    print(f"auto lam={lam!r} logdet={logdet!r} bound={bound!r} burn_in={burn}")
    lam, tr, bound, burn = bound_inputs(A_TILDE, B_TILDE, 2000, 100, 0.1, 1.0, 1.0)
    print(f"inputs lam={lam!r} trace={tr!r} bound={bound!r} burn_in={burn}")
    grid = [250, 500, 1000, 2000, 4000]
    bounds = [bound_autonomous(A_TILDE, K, 100, 0.1, 0.1)[2] for K in grid]
    print("bound grid (k=100, sigma=0.1)", bounds)
    print("non-increasing:", all(x >= y for x, y in zip(bounds, bounds[1:])))
    for alpha in (0.5, 0.3, 1.7):
        psi = [math.gamma(j - alpha) / (math.gamma(-alpha) * math.gamma(j + 1)) for j in range(6)]
        print("psi", alpha, psi)
    assert abs(max(abs(np.linalg.eigvals(A_TILDE))) - (0.7 + math.sqrt(0.99)) / 2) < 1e-12
    assert all(x >= y for x, y in zip(bounds, bounds[1:]))
