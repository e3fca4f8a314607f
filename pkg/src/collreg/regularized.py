"""Collision-regularizing chart, fictitious time, and the regular Hamiltonians.

With mu = (1 - eps)/2 the chart rho maps (Q1, Q2, P1, P2) to

    q1 = Q2 + (mu/2) Q1^2          p1 = (1-mu) P2 + P1/Q1
    q2 = Q2 - ((1-mu)/2) Q1^2      p2 = mu P2 - P1/Q1

so the separation is q1 - q2 = Q1^2/2 >= 0 and Q1 runs over the whole real
line: the two half-lines form a double cover of the separation and binary
collisions become transversal Q1 = 0 crossings.  Physical time accumulates as

    dt/dtau = 2 mu (1-mu) Q1^2  (= (1 - eps^2)/2 * Q1^2),

which freezes exactly at collision.  On a fixed energy level h the flow in
fictitious time tau is generated by the globally regular Hamiltonian

    Gamma(z; h) = (1/2) (mu(1-mu) P2^2 Q1^2 + P1^2) - 16 mu^2 (1-mu)^2 m
                  - 2 mu (1-mu) Q1^2 [ 4(1-mu)/sqrt((2Q2 + mu Q1^2)^2 + 4r^2)
                                     + 4 mu  /sqrt((2Q2 - (1-mu) Q1^2)^2 + 4r^2)
                                     + h ],

which satisfies Gamma = g * (H o rho - h) away from Q1 = 0, with g the time
scale above.  All vector fields below are hand-derived symplectic gradients
of Gamma (resp. of its reduced restriction), and every derivative is
cross-checked in the test suite three independent ways: by finite
differences, by restriction of the full field, and by the chain rule against
the physical field.  Sign conventions live or die by those oracles, nothing
else.
"""

from __future__ import annotations

import math

import numpy as np

from .config import MassParams, RingConfig
from .errors import CollisionError, DomainError

__all__ = [
    "chart_to_physical",
    "collision_positions",
    "chart_to_regularized",
    "chart_jacobian",
    "time_scale",
    "gamma",
    "gamma_reduced",
    "regularized_field",
    "reduced_field",
    "make_regularized_rhs",
    "make_reduced_rhs",
    "collision_momentum",
    "project_to_level",
    "reduced_level_momentum",
]


def chart_to_physical(z, params: MassParams) -> np.ndarray:
    """Map a regularized state to (q1, q2, p1, p2).

    The momentum components carry P1/Q1 and are genuinely singular at Q1 = 0;
    use collision_positions for the (well-defined) positions there.
    """
    Q1, Q2, P1, P2 = (float(v) for v in z)
    if Q1 == 0.0:
        raise CollisionError("momenta are undefined at the collision point Q1 = 0")
    mu = params.mu
    return np.array(
        [
            Q2 + 0.5 * mu * Q1 * Q1,
            Q2 - 0.5 * (1.0 - mu) * Q1 * Q1,
            (1.0 - mu) * P2 + P1 / Q1,
            mu * P2 - P1 / Q1,
        ]
    )


def collision_positions(z, params: MassParams) -> tuple[float, float]:
    """Positions-only part of the chart; at Q1 = 0 both bodies sit at Q2."""
    Q1, Q2 = float(z[0]), float(z[1])
    mu = params.mu
    return Q2 + 0.5 * mu * Q1 * Q1, Q2 - 0.5 * (1.0 - mu) * Q1 * Q1


def chart_to_regularized(y, params: MassParams) -> np.ndarray:
    """Inverse chart on q1 > q2, taking the positive branch Q1 = +sqrt(2(q1-q2))."""
    q1, q2, p1, p2 = (float(v) for v in y)
    if not q1 > q2:
        raise DomainError(f"inverse chart requires q1 > q2, got q1={q1}, q2={q2}")
    mu = params.mu
    Q1 = math.sqrt(2.0 * (q1 - q2))
    return np.array(
        [
            Q1,
            (1.0 - mu) * q1 + mu * q2,
            (mu * p1 - (1.0 - mu) * p2) * Q1,
            p1 + p2,
        ]
    )


def chart_jacobian(z, params: MassParams) -> np.ndarray:
    """Exact Jacobian of chart_to_physical, rows ordered (q1, q2, p1, p2)."""
    Q1, _, P1, _ = (float(v) for v in z)
    if Q1 == 0.0:
        raise CollisionError("chart Jacobian is singular at Q1 = 0")
    mu = params.mu
    return np.array(
        [
            [mu * Q1, 1.0, 0.0, 0.0],
            [-(1.0 - mu) * Q1, 1.0, 0.0, 0.0],
            [-P1 / (Q1 * Q1), 0.0, 1.0 / Q1, 1.0 - mu],
            [P1 / (Q1 * Q1), 0.0, -1.0 / Q1, mu],
        ]
    )


def time_scale(z, params: MassParams) -> float:
    """dt/dtau = 2 mu (1-mu) Q1^2; vanishes exactly at collision."""
    Q1 = float(z[0])
    mu = params.mu
    return 2.0 * mu * (1.0 - mu) * Q1 * Q1


def gamma(z, h: float, params: MassParams, ring: RingConfig) -> float:
    """Regularized Hamiltonian on the level h; finite for every state,
    including the collision set Q1 = 0."""
    Q1, Q2, P1, P2 = (float(v) for v in z)
    mu = params.mu
    m, r = params.m, ring.radius
    omu = 1.0 - mu
    q1sq = Q1 * Q1
    A = 2.0 * Q2 + mu * q1sq
    B = 2.0 * Q2 - omu * q1sq
    bracket = (
        4.0 * omu / math.sqrt(A * A + 4.0 * r * r)
        + 4.0 * mu / math.sqrt(B * B + 4.0 * r * r)
        + h
    )
    return (
        0.5 * (mu * omu * P2 * P2 * q1sq + P1 * P1)
        - 16.0 * mu * mu * omu * omu * m
        - 2.0 * mu * omu * q1sq * bracket
    )


def gamma_reduced(s, h: float, m: float, a: float) -> float:
    """One-degree-of-freedom Hamiltonian of the symmetric problem (eps = 0,
    Q2 = P2 = 0), with a = 4 * ring radius:

        G~ = P1^2/2 - 4 Q1^2 (1/sqrt(Q1^4 + a^2) + h/8) - m
    """
    if not a > 0.0:
        raise DomainError(f"need a > 0, got {a}")
    Q1, P1 = float(s[0]), float(s[1])
    q = Q1 * Q1
    return 0.5 * P1 * P1 - 4.0 * q * (1.0 / math.sqrt(q * q + a * a) + h / 8.0) - m


def make_regularized_rhs(h: float, params: MassParams, ring: RingConfig):
    """Scalar fast path: z -> dz/dtau as a tuple, the symplectic gradient of
    gamma with closed-form partials.  Regular through Q1 = 0, where the field
    collapses to (P1, 0, 0, 0)."""
    mu = params.mu
    omu = 1.0 - mu
    r4 = 4.0 * ring.radius**2
    W = 2.0 * mu * omu
    momu = mu * omu

    def rhs(z):
        Q1, Q2, P1, P2 = z
        q1sq = Q1 * Q1
        A = 2.0 * Q2 + mu * q1sq
        B = 2.0 * Q2 - omu * q1sq
        DA = A * A + r4
        DB = B * B + r4
        sA = math.sqrt(DA)
        sB = math.sqrt(DB)
        U = 4.0 * omu / sA + 4.0 * mu / sB
        dU_dQ1 = 8.0 * momu * Q1 * (B / (DB * sB) - A / (DA * sA))
        dU_dQ2 = -8.0 * (omu * A / (DA * sA) + mu * B / (DB * sB))
        return (
            P1,
            momu * q1sq * P2,
            -momu * P2 * P2 * Q1 + W * (2.0 * Q1 * (U + h) + q1sq * dU_dQ1),
            W * q1sq * dU_dQ2,
        )

    return rhs


def regularized_field(z, h: float, params: MassParams, ring: RingConfig) -> np.ndarray:
    """dz/dtau for the full regularized system (see make_regularized_rhs)."""
    return np.array(make_regularized_rhs(h, params, ring)(tuple(float(v) for v in z)))


def make_reduced_rhs(h: float, a: float):
    """Scalar fast path for the symmetric one-degree-of-freedom system:

        Q1' = P1,   P1' = 8 Q1 (a^2/(Q1^4 + a^2)^(3/2) + h/8).

    The positive sign of P1' is the symplectic gradient of gamma_reduced and
    is independently confirmed by the chain rule from the physical force (the
    verification suite encodes both checks; a flipped sign fails them).
    """
    if not a > 0.0:
        raise DomainError(f"need a > 0, got {a}")
    asq = a * a

    def rhs(s):
        Q1, P1 = s
        d = Q1 * Q1 * Q1 * Q1 + asq
        return (P1, 8.0 * Q1 * (asq / (d * math.sqrt(d)) + h / 8.0))

    return rhs


def reduced_field(s, h: float, a: float) -> np.ndarray:
    """ds/dtau for the reduced system (see make_reduced_rhs)."""
    return np.array(make_reduced_rhs(h, a)((float(s[0]), float(s[1]))))


def collision_momentum(params: MassParams, m: float | None = None) -> float:
    """|P1| forced at any Q1 = 0 point of the level set Gamma = 0:
    (1 - eps^2) * sqrt(2m), independent of Q2 and P2."""
    if m is None:
        m = params.m
    e = params.epsilon
    return (1.0 - e * e) * math.sqrt(2.0 * m)


def reduced_level_momentum(Q1: float, h: float, m: float, a: float) -> float:
    """Nonnegative P1 with gamma_reduced((Q1, P1)) = 0, if it exists."""
    q = Q1 * Q1
    p1sq = 2.0 * m + 8.0 * q / math.sqrt(q * q + a * a) + h * q
    if p1sq < 0.0:
        raise DomainError(
            f"no real momentum on the level h={h} at Q1={Q1}: P1^2 would be {p1sq}"
        )
    return math.sqrt(p1sq)


def project_to_level(z, h: float, params: MassParams, ring: RingConfig) -> np.ndarray:
    """Adjust |P1| so the state lies on Gamma = 0, keeping its sign.

    The given (Q1, Q2, P2) are held fixed; refuses when no real P1 exists.
    A zero input momentum projects onto the nonnegative branch.
    """
    Q1, Q2, P1, P2 = (float(v) for v in z)
    mu = params.mu
    omu = 1.0 - mu
    q1sq = Q1 * Q1
    A = 2.0 * Q2 + mu * q1sq
    B = 2.0 * Q2 - omu * q1sq
    r4 = 4.0 * ring.radius**2
    U = 4.0 * omu / math.sqrt(A * A + r4) + 4.0 * mu / math.sqrt(B * B + r4)
    p1sq = (
        32.0 * (mu * omu) ** 2 * params.m
        + 4.0 * mu * omu * q1sq * (U + h)
        - mu * omu * P2 * P2 * q1sq
    )
    if p1sq < 0.0:
        raise DomainError(
            f"no real momentum on the level h={h} at (Q1={Q1}, Q2={Q2}, P2={P2})"
        )
    mag = math.sqrt(p1sq)
    return np.array([Q1, Q2, math.copysign(mag, P1) if P1 != 0.0 else mag, P2])
