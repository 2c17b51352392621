"""Attitude representations and conversions.

Quaternions are scalar-first [w, x, y, z], Hamilton convention with
body-frame rates multiplying on the right (2*qdot = q o omega).  The
attitude matrix C transforms reference-frame coordinates into the body
frame; `quat_apply` matches that convention.

Rotation vectors are alpha*e (rad); Rodrigues vectors are
2*tan(alpha/2)*e and are singular at alpha = pi.
"""

from __future__ import annotations

import numpy as np

# Below this rotation magnitude the sin/cos ratios switch to series.
SMALL_ANGLE = 1e-8


class DegenerateRotationError(ValueError):
    """Rotation outside the representable range of the target map."""


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix: skew(a) @ b == a x b."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def quat_multiply(a, b) -> np.ndarray:
    aw, av = a[0], np.asarray(a[1:], dtype=float)
    bw, bv = b[0], np.asarray(b[1:], dtype=float)
    w = aw * bw - av @ bv
    v = aw * bv + bw * av + np.cross(av, bv)
    return np.array([w, v[0], v[1], v[2]])


def quat_conjugate(q) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    norm = np.linalg.norm(q)
    if norm < 1e-15:
        raise DegenerateRotationError("cannot normalize a near-zero quaternion")
    return q / norm


def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_apply(q, v) -> np.ndarray:
    """Apply the attitude matrix of q to v, i.e. vec(q* o v o q)."""
    qv = quat_multiply(quat_conjugate(q), quat_multiply(np.r_[0.0, v], q))
    return qv[1:]


def quat_from_rodrigues(g) -> np.ndarray:
    """q = (2 + g) / sqrt(4 + |g|^2); unit by construction."""
    g = np.asarray(g, dtype=float)
    return np.r_[2.0, g] / np.sqrt(4.0 + g @ g)


def rodrigues_from_quat(q) -> np.ndarray:
    """Inverse map g = 2*vec(q)/w; valid for rotations short of pi."""
    if q[0] <= 1e-6:
        raise DegenerateRotationError("rotation too close to pi for the Rodrigues map")
    return 2.0 * np.asarray(q[1:], dtype=float) / q[0]


def quat_from_rotvec(g) -> np.ndarray:
    """q = cos(|g|/2) + (g/|g|) sin(|g|/2), series branch near zero."""
    g = np.asarray(g, dtype=float)
    angle = np.linalg.norm(g)
    if angle < SMALL_ANGLE:
        half_sinc = 0.5 - angle * angle / 48.0  # sin(a/2)/a
    else:
        half_sinc = np.sin(angle / 2.0) / angle
    return np.r_[np.cos(angle / 2.0), g * half_sinc]


def dcm_from_rodrigues(g) -> np.ndarray:
    """C = I - 4/(4+|g|^2) g x + 2/(4+|g|^2) (g x)^2."""
    g = np.asarray(g, dtype=float)
    s = skew(g)
    k = 1.0 / (4.0 + g @ g)
    return np.eye(3) - 4.0 * k * s + 2.0 * k * (s @ s)


def dcm_from_rotvec(g) -> np.ndarray:
    """C = I - sin|g|/|g| g x + (1-cos|g|)/|g|^2 (g x)^2."""
    g = np.asarray(g, dtype=float)
    angle = np.linalg.norm(g)
    if angle < SMALL_ANGLE:
        a = 1.0 - angle * angle / 6.0       # sin(x)/x
        b = 0.5 - angle * angle / 24.0      # (1-cos(x))/x^2
    else:
        a = np.sin(angle) / angle
        b = (1.0 - np.cos(angle)) / (angle * angle)
    s = skew(g)
    return np.eye(3) - a * s + b * (s @ s)


def attitude_error(q_est, q_true) -> float:
    """Angle metric 2*|vec(q_est* o q_true)| in rad; order-symmetric."""
    dq = quat_multiply(quat_conjugate(q_est), q_true)
    return 2.0 * float(np.linalg.norm(dq[1:]))


def update_attitude(q_start, g_inc) -> np.ndarray:
    """Right-multiply the incremental body rotation given as a Rodrigues vector."""
    return quat_normalize(quat_multiply(q_start, quat_from_rodrigues(g_inc)))
