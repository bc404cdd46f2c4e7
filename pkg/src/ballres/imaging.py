"""Time-reversal imaging with synthetic data on a far-field measurement sphere.

Data are dipole fields sampled at the nodes of a sphere product rule of radius
``R``. Back-propagation with the conjugate background Green's tensor gives the
imaging functional ``I(z) = sum_q w_q conj(G_0(z, x_q)) E(x_q)``, which the
Helmholtz-Kirchhoff identity relates to ``(1/k) Im G_0(z, z0) p``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .green import (
    ContrastContext,
    green_free,
    green_free_imag,
    im_phi_closed,
    mie_coefficients,
    phi_radial,
    special_polarization,
)
from .modes import FieldKind, MultipoleField, eval_multipole
from .quadrature import sphere_quadrature
from .spectrum import ModeFamily

__all__ = [
    "MeasurementSurface",
    "MeasuredData",
    "sphere_quadrature",
    "measured_field_free",
    "measured_field_ball",
    "imaging_functional",
    "hk_residual",
    "point_spread",
    "line_grid",
]


@dataclass(frozen=True)
class MeasurementSurface:
    """Sphere of radius ``radius`` sampled by a rule of exactness ``quad_order``."""

    radius: float = 100.0
    quad_order: int = 30

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 1):
            raise DomainError("measurement radius must exceed 1")
        if int(self.quad_order) != self.quad_order or self.quad_order < 8:
            raise DomainError("quad_order must be an integer >= 8")

    def nodes(self):
        """Points ``(N, 3)`` and area weights ``(N,)`` (summing to ``4 pi R^2``)."""
        rule = sphere_quadrature(int(self.quad_order))
        return self.radius * rule.points, self.radius**2 * rule.weights


@dataclass(frozen=True)
class MeasuredData:
    """Field samples ``values[q]`` at ``points[q]`` with area weights."""

    points: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def scaled(self, c):
        return MeasuredData(self.points, self.weights, c * self.values)

    def __add__(self, other):
        if other.points.shape != self.points.shape or not np.array_equal(other.points, self.points):
            raise DomainError("data sampled on different nodes")
        return MeasuredData(self.points, self.weights, self.values + other.values)


def _unit(v, name):
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if v.shape != (3,) or not abs(nv - 1.0) < 1e-12:
        raise DomainError(f"{name} must be a unit 3-vector")
    return v


def measured_field_free(z0, p, k, surf):
    """``E(x) = G_0(x, z0, k) p`` at the measurement nodes."""
    z0 = np.asarray(z0, dtype=float)
    if not np.linalg.norm(z0) < surf.radius:
        raise DomainError("source must lie inside the measurement sphere")
    p = np.asarray(p, dtype=float)
    x, w = surf.nodes()
    vals = np.einsum("qij,j->qi", green_free(x, z0[None, :], k), p)
    return MeasuredData(x, w, vals)


def measured_field_ball(ctx, surf):
    """Exterior field ``b_0 E^TM_{1,0}(k, x)`` of the centered dipole in the ball.

    The source carries the real polarization of :func:`special_polarization`.
    """
    _, b0 = mie_coefficients(ctx)
    x, w = surf.nodes()
    e = eval_multipole(MultipoleField(ModeFamily.TM, FieldKind.RADIATING, 1, 0, ctx.k), x)
    return MeasuredData(x, w, b0 * e)


def imaging_functional(data, k, points, q=None):
    """Back-propagated image ``I(z) = sum w conj(G_0(z, x)) E(x)``.

    Parameters
    ----------
    data : MeasuredData
    k : float
        Background wavenumber.
    points : array_like
        Sampling points ``(M, 3)``.
    q : array_like, optional
        Probe direction; when given the projection ``q . I(z)`` is returned.

    Returns
    -------
    ndarray
        ``(M, 3)`` complex vectors, or ``(M,)`` scalars when ``q`` is given.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty((pts.shape[0], 3), dtype=complex)
    for i, z in enumerate(pts):
        g = green_free(z[None, :], data.points, k)
        out[i] = np.einsum("q,qij,qj->i", data.weights, np.conj(g), data.values)
    if q is None:
        return out
    return out @ np.asarray(q, dtype=float)


def hk_residual(x, z, p, q, k, surf):
    """``|k sum w (conj(G_0(xi, x)) q) . (G_0(xi, z) p) - q . Im G_0(x, z) p|``."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    p = _unit(p, "p")
    q = _unit(q, "q")
    xi, w = surf.nodes()
    gx = np.einsum("qij,j->qi", np.conj(green_free(xi, x[None, :], k)), q)
    gz = np.einsum("qij,j->qi", green_free(xi, z[None, :], k), p)
    lhs = k * np.sum(w * np.einsum("qi,qi->q", gx, gz))
    rhs = q @ green_free_imag(x, z, k) @ p
    return float(abs(lhs - rhs))


def point_spread(ctx, t, closed=False):
    """Point-spread profile ``(1/k) Im phi(k_tau, t)`` along a diameter.

    With ``closed=True`` the form ``Im phi = c Jc_1(k_tau t)/(k_tau t)`` is used,
    which is finite at ``t = 0``.
    """
    if closed:
        return im_phi_closed(ctx, t) / ctx.k
    return np.imag(phi_radial(ctx, t)) / ctx.k


def line_grid(start, stop, points):
    """``points`` equispaced sampling points on the segment ``[start, stop]``."""
    if int(points) != points or points < 2:
        raise DomainError("a line grid needs at least two points")
    start = np.asarray(start, dtype=float)
    stop = np.asarray(stop, dtype=float)
    if start.shape != (3,) or stop.shape != (3,):
        raise DomainError("line endpoints must be 3-vectors")
    s = np.linspace(0.0, 1.0, int(points))
    return start[None, :] + s[:, None] * (stop - start)[None, :]


def polarization(ctx=None):
    """Unit vector of the special polarization (along ``zhat``)."""
    p = special_polarization(ctx)
    return p / np.linalg.norm(p)


def _ball_context(k, k_tau):
    return ContrastContext(k, k_tau)
