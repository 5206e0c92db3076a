"""Frozen golden data for the demo channels.

The qubit matrices are exact rationals; the M4 time-map quadrants are closed
forms in the channel parameter.  Expected values were verified independently
before being frozen here, and the tests compare the library output against
these arrays rather than against anything the library computes.
"""

import numpy as np

QUBIT_PHI = np.array(
    [[2, 1, 1, 1], [-1, 2, 0, 1], [-1, 0, 2, 1], [1, -1, -1, 2]], dtype=float
) / 3.0

QUBIT_OMEGA = np.array(
    [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]], dtype=float
) / 2.0

QUBIT_Z = np.array(
    [[3, 2, 2, 1], [-2, 8, -4, 2], [-2, -4, 8, 2], [1, -2, -2, 3]], dtype=float
) / 4.0

QUBIT_PP = np.full((4, 4), 0.25)

QUBIT_QQ = np.array(
    [[1, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]], dtype=float
) / 4.0

QUBIT_K = np.array(
    [
        [39, -12, -12, 9],
        [-72, 32, 28, -12],
        [-72, 28, 32, -12],
        [177, -72, -72, 39],
    ],
    dtype=float,
) / 6.0

QUBIT_K12 = np.array(
    [[-3, 3, 3, -3], [1, -1, -1, 1], [1, -1, -1, 1], [5, -5, -5, 5]], dtype=float
) * 1.5


def qudit_k_expected(a: float) -> np.ndarray:
    """Expected 16x16 time-map representation of the M4 demo channel."""
    b = np.sqrt(1.0 - a * a)
    a1 = np.zeros((8, 8))
    a1[0, 0] = a**2 / b**4
    a1[0, 3] = a / b**3
    a1[5, 0] = 1 / b**2
    a1[5, 3] = a / b
    a2 = np.zeros((8, 8))
    a2[0, 4] = a / b**3
    a2[0, 7] = 1 / b**2
    a2[5, 4] = a / b
    a2[5, 7] = 2.0
    a3 = np.zeros((8, 8))
    a3[2, 0] = (1 + b**2) / (2 * b**2)
    a3[2, 3] = a / (2 * b)
    a3[2, 5] = 0.5
    a3[2, 6] = 0.5
    a3[7, 0] = (1 + b**2) / (2 * b**2)
    a3[7, 3] = a / (2 * b)
    a3[7, 5] = 0.5
    a3[7, 6] = -0.5
    a4 = np.zeros((8, 8))
    a4[2, 1] = 0.5
    a4[2, 2] = 0.5
    a4[2, 4] = a / (2 * b)
    a4[2, 7] = 1.5
    a4[7, 1] = -0.5
    a4[7, 2] = 0.5
    a4[7, 4] = a / (2 * b)
    a4[7, 7] = 1.5
    return np.block([[a1, a2], [a3, a4]])


def qudit_tau_phi(a: float) -> float:
    """Mean time from e_1 to span{e_3, e_4}: 1 + 1/b^2."""
    b2 = 1.0 - a * a
    return 1.0 + 1.0 / b2


def qudit_tau_chi(a: float) -> float:
    """Mean time from (e_1 + e_4)/sqrt(2): 2 (1 + a/(2b) + 1/(4b^2))."""
    b = np.sqrt(1.0 - a * a)
    return 2.0 * (1.0 + a / (2 * b) + 1.0 / (4 * b * b))


def qudit_psi_term(a: float) -> float:
    """Return-side summand of the hitting-time formula: (1 + 6b^2) / (4b^2)."""
    b2 = 1.0 - a * a
    return (1.0 + 6.0 * b2) / (4.0 * b2)


def qudit_phi_term(a: float) -> float:
    """Start-side summand of the hitting-time formula: (2b^2 - 3) / (4b^2)."""
    b2 = 1.0 - a * a
    return (2.0 * b2 - 3.0) / (4.0 * b2)


def two_state_z(p: float) -> np.ndarray:
    """Hand-derived fundamental matrix of the symmetric 2-state chain."""
    return np.array([[p + 0.5, p - 0.5], [p - 0.5, p + 0.5]]) / (2.0 * p)
