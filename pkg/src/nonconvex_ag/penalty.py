"""SCAD and MCP penalties and their difference-of-convex split.

Both penalties are written as ``p(theta) = lam * |theta| + h(theta)`` where
the first term is convex (handled by the proximal step) and ``h`` is
concave with a Lipschitz-continuous derivative (handled by the gradient
step). All functions accept scalars or arrays and act elementwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ParameterError

__all__ = [
    "PenaltyKind",
    "PenaltySpec",
    "penalty_value",
    "dc_smooth_value",
    "dc_smooth_grad",
    "dc_smooth_lipschitz",
    "soft_threshold",
    "prox_l1",
]


class PenaltyKind(str, enum.Enum):
    SCAD = "scad"
    MCP = "mcp"


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family with its tuning parameters.

    Parameters
    ----------
    kind : PenaltyKind or str
        ``"scad"`` or ``"mcp"``.
    lam : float
        Penalty level, ``lam >= 0``. ``lam = 0`` is the unpenalized limit.
    shape : float
        ``a > 2`` for SCAD, ``gamma > 1`` for MCP.
    """

    kind: PenaltyKind
    lam: float
    shape: float

    def __post_init__(self):
        try:
            kind = PenaltyKind(str(getattr(self.kind, "value", self.kind)).lower())
        except ValueError:
            raise ParameterError(f"unknown penalty kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        lam, shape = float(self.lam), float(self.shape)
        if not np.isfinite(lam) or lam < 0:
            raise ParameterError(f"lam must be finite and >= 0, got {self.lam}")
        if kind is PenaltyKind.SCAD and not shape > 2:
            raise ParameterError(f"SCAD requires a > 2, got {self.shape}")
        if kind is PenaltyKind.MCP and not shape > 1:
            raise ParameterError(f"MCP requires gamma > 1, got {self.shape}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "shape", shape)

    def with_lambda(self, lam):
        return PenaltySpec(self.kind, lam, self.shape)

    @classmethod
    def scad(cls, lam, a=3.7):
        return cls(PenaltyKind.SCAD, lam, a)

    @classmethod
    def mcp(cls, lam, gamma=3.0):
        return cls(PenaltyKind.MCP, lam, gamma)


def _as_output(values, theta):
    return float(values) if np.ndim(theta) == 0 else values


def penalty_value(spec: PenaltySpec, theta):
    """Full SCAD or MCP penalty evaluated elementwise."""
    lam, s = spec.lam, spec.shape
    t = np.abs(np.asarray(theta, dtype=float))
    if spec.kind is PenaltyKind.SCAD:
        out = np.where(
            t <= lam,
            lam * t,
            np.where(
                t < s * lam,
                (2 * s * lam * t - t**2 - lam**2) / (2 * (s - 1)),
                0.5 * (s + 1) * lam**2,
            ),
        )
    else:
        out = np.where(t < s * lam, lam * t - t**2 / (2 * s), 0.5 * s * lam**2)
    return _as_output(out, theta)


def dc_smooth_value(spec: PenaltySpec, theta):
    """Concave remainder ``h`` with ``penalty_value = lam*|theta| + h``."""
    lam, s = spec.lam, spec.shape
    t = np.abs(np.asarray(theta, dtype=float))
    if spec.kind is PenaltyKind.SCAD:
        out = np.where(
            t <= lam,
            0.0,
            np.where(
                t < s * lam,
                (2 * lam * t - t**2 - lam**2) / (2 * (s - 1)),
                0.5 * (s + 1) * lam**2 - lam * t,
            ),
        )
    else:
        out = np.where(t < s * lam, -(t**2) / (2 * s), 0.5 * s * lam**2 - lam * t)
    return _as_output(out, theta)


def dc_smooth_grad(spec: PenaltySpec, theta):
    """Derivative of ``h``; odd, nonincreasing and bounded by ``lam``.

    SCAD: ``-sign(t) * clip((|t| - lam) / (a - 1), 0, lam)``;
    MCP: ``-sign(t) * min(|t| / gamma, lam)``.
    """
    lam, s = spec.lam, spec.shape
    x = np.asarray(theta, dtype=float)
    t = np.abs(x)
    if spec.kind is PenaltyKind.SCAD:
        mag = np.minimum(np.maximum((t - lam) / (s - 1), 0.0), lam)
    else:
        mag = np.minimum(t / s, lam)
    return _as_output(-np.sign(x) * mag, theta)


def dc_smooth_lipschitz(spec: PenaltySpec) -> float:
    """Smallest Lipschitz constant of ``dc_smooth_grad``.

    The value does not depend on ``lam``; for ``lam = 0`` the remainder is
    identically zero and any constant is valid.
    """
    if spec.kind is PenaltyKind.SCAD:
        return 1.0 / (spec.shape - 1.0)
    return 1.0 / spec.shape


def soft_threshold(z, t):
    """``sign(z) * max(|z| - t, 0)``, the proximal map of ``t*|.|``."""
    if np.any(np.asarray(t) < 0):
        raise ParameterError(f"threshold must be >= 0, got {t}")
    z_arr = np.asarray(z, dtype=float)
    out = np.sign(z_arr) * np.maximum(np.abs(z_arr) - t, 0.0)
    return _as_output(out, z)


def prox_l1(x, y, c, lam, penalized_mask):
    """Proximal step ``argmin_u <y,u> + |u-x|^2/(2c) + lam*|u_S|_1``.

    ``S`` is the set of coordinates flagged in `penalized_mask`; the
    remaining coordinates (e.g. the intercept) take a plain gradient step.

    Parameters
    ----------
    x, y : ndarray
        Current point and (smooth) gradient, same length.
    c : float
        Step size, ``c > 0``.
    lam : float
        l1 weight, ``lam >= 0``.
    penalized_mask : ndarray of bool

    Returns
    -------
    ndarray
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = np.asarray(penalized_mask, dtype=bool)
    if not (x.shape == y.shape == mask.shape):
        raise DimensionMismatchError(
            f"shapes differ: x{x.shape}, y{y.shape}, mask{mask.shape}"
        )
    if not c > 0:
        raise ParameterError(f"step size must be > 0, got {c}")
    if lam < 0:
        raise ParameterError(f"lam must be >= 0, got {lam}")
    z = x - c * y
    if lam == 0:
        return z
    shrunk = np.sign(z) * np.maximum(np.abs(z) - c * lam, 0.0)
    return np.where(mask, shrunk, z)
