"""Brute-force reference constructions, written without the package's code paths.

Operators are assembled from explicit Kronecker products with site 0 as the
leftmost factor. Local index 0 is the parent level, 1 the daughter level.
"""

from functools import reduce

import numpy as np

LOWER = np.array([[0.0, 0.0], [1.0, 0.0]])  # parent -> daughter
I2 = np.eye(2)
STRING = {
    "bf": np.diag([1.0, -1.0]),  # sign per daughter
    "fb": np.diag([-1.0, 1.0]),  # sign per parent
    "bb": I2,
}


def site_lowering(n, i, stats="bf"):
    factors = [STRING[stats]] * i + [LOWER] + [I2] * (n - i - 1)
    return reduce(np.kron, factors)


def collective_L(n, gamma0=1.0, stats="bf"):
    return np.sqrt(gamma0) * sum(site_lowering(n, i, stats) for i in range(n))


def product_state(phases):
    # (|g> + e^{i a}|e>)/sqrt(2); |e> is local index 0
    locals_ = [np.array([np.exp(1j * a), 1.0]) / np.sqrt(2) for a in phases]
    return reduce(np.kron, locals_)


def dicke_top_eigenvalue(n, gamma0=1.0):
    # S^+ S^- on |S=N/2, m> gives (S+m)(S-m+1), largest near m = 1/2
    return gamma0 * ((n + 1) // 2) * (n // 2 + 1)
