"""Hierarchic (integrated Legendre) shape functions on the reference interval."""
import numpy as np

from ..polychaos import gauss_nodes


def hierarchic_1d(p: int, s):
    """Values and derivatives of the degree ``p`` hierarchic basis at ``s``.

    Ordering is ``[N0, N1, phi_2, ..., phi_p]`` with the vertex functions
    ``(1 - s)/2``, ``(1 + s)/2`` and the bubbles
    ``phi_j = (P_j - P_{j-2}) / sqrt(2(2j - 1))`` (classical Legendre P).

    Returns arrays of shape ``(p + 1, len(s))``.
    """
    if p < 1:
        raise ValueError("polynomial degree must be >= 1")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    # classical Legendre values P_0..P_p
    P = np.empty((p + 1, s.size))
    P[0] = 1.0
    P[1] = s
    for n in range(1, p):
        P[n + 1] = ((2 * n + 1) * s * P[n] - n * P[n - 1]) / (n + 1)
    N = np.empty((p + 1, s.size))
    dN = np.empty((p + 1, s.size))
    N[0] = 0.5 * (1.0 - s)
    N[1] = 0.5 * (1.0 + s)
    dN[0] = -0.5
    dN[1] = 0.5
    for j in range(2, p + 1):
        scale = 1.0 / np.sqrt(2.0 * (2 * j - 1))
        N[j] = scale * (P[j] - P[j - 2])
        # (P_j - P_{j-2})' = (2j - 1) P_{j-1}
        dN[j] = scale * (2 * j - 1) * P[j - 1]
    return N, dN


def energy_quadrature(p: int, extra: int = 4):
    """Gauss rule on ``[-1, 1]`` (weights summing to 2) with ``p + extra`` points.

    The modulus coefficients ``sin(pi m x)`` are not polynomial, hence the
    points beyond the ``p + 1`` needed for exact polynomial stiffness.
    """
    rule = gauss_nodes(p + extra - 1)
    return np.array(rule.nodes), 2.0 * np.array(rule.weights)
