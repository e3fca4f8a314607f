"""Dynamics of the two secondaries in the physical chart.

State layout: y = (q1, q2, p1, p2) with q1 > q2 strictly; the hyperplane
q1 == q2 is the binary-collision set where the potential and the field blow
up.  Masses follow the MassParams normalization, so the kinetic matrix is
diag(1+eps, 1-eps) and the mutual attraction carries the factor m(1-eps^2).
"""

from __future__ import annotations

import math

import numpy as np

from .config import GeneralSymmetricConfig, MassParams, RingConfig, primary_positions_3d
from .errors import CollisionError

__all__ = [
    "potential",
    "hamiltonian",
    "physical_field",
    "make_physical_rhs",
    "axis_field_general",
    "infinitesimal_accel_3d",
]


def _check_ordering(q1: float, q2: float):
    if not q1 > q2:
        raise CollisionError(f"physical chart requires q1 > q2, got q1={q1}, q2={q2}")


def potential(y, params: MassParams, ring: RingConfig) -> float:
    """Force function of the axis problem (sign convention H = T - V):

    V = (1+eps)/sqrt(q1^2 + r^2) + (1-eps)/sqrt(q2^2 + r^2) + m(1-eps^2)/(q1 - q2)
    """
    q1, q2 = float(y[0]), float(y[1])
    _check_ordering(q1, q2)
    e, m, r = params.epsilon, params.m, ring.radius
    return (
        (1.0 + e) / math.sqrt(q1 * q1 + r * r)
        + (1.0 - e) / math.sqrt(q2 * q2 + r * r)
        + m * (1.0 - e * e) / (q1 - q2)
    )


def hamiltonian(y, params: MassParams, ring: RingConfig) -> float:
    """H = p1^2/(2(1+eps)) + p2^2/(2(1-eps)) - V(q1, q2)."""
    p1, p2 = float(y[2]), float(y[3])
    e = params.epsilon
    kinetic = p1 * p1 / (2.0 * (1.0 + e)) + p2 * p2 / (2.0 * (1.0 - e))
    return kinetic - potential(y, params, ring)


def physical_field(y, params: MassParams, ring: RingConfig) -> np.ndarray:
    """Hamiltonian vector field in the physical chart.

    The mutual terms are equal and opposite on the two bodies, so
    dp1/dt + dp2/dt reduces to the ring attraction alone.
    """
    q1, q2 = float(y[0]), float(y[1])
    _check_ordering(q1, q2)
    return np.array(make_physical_rhs(params, ring)(y))


def make_physical_rhs(params: MassParams, ring: RingConfig):
    """Scalar fast path for integrators: y -> (dq1, dq2, dp1, dp2) as a tuple."""
    e, m, r2 = params.epsilon, params.m, ring.radius**2
    a, b = 1.0 + e, 1.0 - e
    mab = m * a * b

    def rhs(y):
        q1, q2, p1, p2 = y
        d = q1 - q2
        mutual = mab / (d * d)
        return (
            p1 / a,
            p2 / b,
            -a * q1 / (q1 * q1 + r2) ** 1.5 - mutual,
            -b * q2 / (q2 * q2 + r2) ** 1.5 + mutual,
        )

    return rhs


def axis_field_general(
    y, params: MassParams, general: GeneralSymmetricConfig, t: float = 0.0
) -> np.ndarray:
    """Field for two secondaries on the symmetry axis of an arbitrary
    rotation-symmetric primary solution, in the rescaled-mass normalization.

    State layout (z1, z2, pz1, pz2) with z1 != z2.  Each subsystem contributes
    r_order * mass_k * (z - z_k) / |x - q_k(t)|^3 where q_k(t) is the
    representative position and the distance is the full 3-D one; on the axis
    all r_order images of a representative are equidistant from the secondary.
    """
    z1, z2, p1, p2 = (float(v) for v in y)
    if z1 == z2:
        raise CollisionError(f"secondaries collide at z1 = z2 = {z1}")
    e, m = params.epsilon, params.m
    a, b = 1.0 + e, 1.0 - e
    reps = np.asarray(general.representative_positions(t), dtype=float)
    ring1 = 0.0
    ring2 = 0.0
    for k in range(general.s_count):
        xk, yk, zk = reps[k]
        horiz = xk * xk + yk * yk
        w = general.r_order * general.subsystem_masses[k]
        d1 = (horiz + (z1 - zk) ** 2) ** 1.5
        d2 = (horiz + (z2 - zk) ** 2) ** 1.5
        ring1 += w * (z1 - zk) / d1
        ring2 += w * (z2 - zk) / d2
    mutual = m * a * b / (z1 - z2) ** 2
    sgn = 1.0 if z1 > z2 else -1.0
    return np.array(
        [
            p1 / a,
            p2 / b,
            -a * ring1 - sgn * mutual,
            -b * ring2 + sgn * mutual,
        ]
    )


def infinitesimal_accel_3d(z: float, ring: RingConfig, phase: float = 0.0) -> np.ndarray:
    """Full 3-D Newtonian acceleration on a test particle at (0, 0, z) from the
    N ring primaries at the given rotation phase.

    The horizontal components cancel by the N-fold symmetry; the axial one is
    -z/(z^2 + r^2)^(3/2).
    """
    pos = primary_positions_3d(ring, phase)
    x = np.array([0.0, 0.0, z])
    acc = np.zeros(3)
    for k in range(ring.N):
        dv = x - pos[k]
        acc -= ring.primary_mass * dv / np.dot(dv, dv) ** 1.5
    return acc
