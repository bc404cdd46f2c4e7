"""Multipole fields, Lommel integrals and propagating functions.

Field conventions (``w`` the wavenumber, ``r = |x|``, ``b_n, B_n`` equal to
``j_n, Jc_n`` for interior fields and ``h_n, Hc_n`` for radiating fields)::

    E^TE_{n,m}(w, x) = -sqrt(n(n+1)) b_n(wr) V_n^m(xhat)
    E^TM_{n,m}(w, x) = -sqrt(n(n+1)) / (i w r) B_n(wr) U_n^m(xhat)
                       - n(n+1) / (i w r) b_n(wr) Y_n^m(xhat) xhat

The propagating function of an eigenvalue ``lambda`` is the scalar coefficient
of the tangential trace of the mode on the sphere of radius ``t``: inside the
ball (t <= 1) the trace of ``lambda E~``, outside (t > 1) the trace of the
operator applied to ``E~``.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import specfun as sf
from .errors import DomainError, SingularityError
from .quadrature import gauss_legendre, sphere_quadrature
from .spectrum import ModeFamily, WaveContext, interior_wavenumber

#: Relative closeness of Lommel arguments treated as coincident.
LOMMEL_DEGENERATE = 1e-6
_LOMMEL_GL = 64


class FieldKind(str, Enum):
    """``interior`` (entire, built on j_n) or ``radiating`` (built on h_n)."""

    INTERIOR = "interior"
    RADIATING = "radiating"


@dataclass(frozen=True)
class MultipoleField:
    """Parametrized vector wave function.

    Parameters
    ----------
    family : ModeFamily
    kind : FieldKind
    n, m : int
        ``n >= 1``, ``|m| <= n``.
    wavenumber : complex
    """

    family: ModeFamily
    kind: FieldKind
    n: int
    m: int
    wavenumber: complex

    def __post_init__(self):
        object.__setattr__(self, "family", ModeFamily.parse(self.family))
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("multipole degree must be >= 1")
        if abs(self.m) > self.n:
            raise DomainError("|m| must not exceed n")
        if complex(self.wavenumber) == 0:
            raise DomainError("wavenumber must be nonzero")

    def scaled(self, wavenumber):
        return MultipoleField(self.family, self.kind, self.n, self.m, wavenumber)


def _radial(kind, n, arg):
    if kind is FieldKind.INTERIOR:
        return sf.sph_bessel_j(n, arg), sf.cal_J(n, arg)
    return sf.sph_hankel1(n, arg), sf.cal_H(n, arg)


def _origin_value(field):
    # only the interior TM dipole is nonzero at the origin:
    # E~^TM_{1,m}(w, 0) = (2i/3) (sqrt(2) U + Y xhat), a constant vector
    if field.family is ModeFamily.TM and field.n == 1:
        u, _, y = sf.vector_harmonics(1, field.m, 1.0, 0.5)
        xhat = sf.direction_vectors(1.0, 0.5)[0]
        return (2j / 3) * (math.sqrt(2) * u + y * xhat)
    return np.zeros(3, dtype=complex)


def eval_multipole(field, x):
    """Evaluate a multipole field at points ``x`` of shape ``(..., 3)``.

    Raises
    ------
    SingularityError
        For a radiating field at the origin.
    """
    x = np.asarray(x, dtype=float)
    r, theta, phi = sf.cartesian_to_spherical(x)
    n, w = field.n, complex(field.wavenumber)
    at0 = r == 0
    if np.any(at0) and field.kind is FieldKind.RADIATING:
        raise SingularityError("radiating multipole fields are singular at the origin")
    rs = np.where(at0, 1.0, r)
    u, v, y = sf.vector_harmonics(n, field.m, theta, phi)
    nn = n * (n + 1)
    arg = w * rs
    if field.family is ModeFamily.TE:
        b = _radial(field.kind, n, arg)[0]
        out = -math.sqrt(nn) * np.asarray(b)[..., None] * v
        out = np.where(at0[..., None], 0.0, out)
    else:
        b, bb = _radial(field.kind, n, arg)
        xhat = sf.direction_vectors(theta, phi)[0]
        c = 1.0 / (1j * arg)
        out = (-math.sqrt(nn) * c * bb)[..., None] * u - (nn * c * b * y)[..., None] * xhat
        if np.any(at0):
            out = np.where(at0[..., None], _origin_value(field), out)
    return out


def tangential_trace(field, r, theta, phi):
    """``xhat x E`` on the sphere of radius ``r`` in closed form.

    TE: ``sqrt(n(n+1)) b_n(wr) U``; TM: ``-sqrt(n(n+1)) / (i w r) B_n(wr) V``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("trace radius must be positive")
    n, w = field.n, complex(field.wavenumber)
    u, v, _ = sf.vector_harmonics(n, field.m, theta, phi)
    b, bb = _radial(field.kind, n, w * r)
    s = math.sqrt(n * (n + 1))
    if field.family is ModeFamily.TE:
        return (s * np.asarray(b))[..., None] * u
    return (-s / (1j * w * r) * np.asarray(bb))[..., None] * v


# ---------------------------------------------------------------------------
# Lommel integrals
# ---------------------------------------------------------------------------


def _zj_prev(n, z, seq):
    # z j_{n-1}(z), with z j_{-1}(z) = cos z
    if n == 0:
        return np.cos(z)
    return z * seq[n - 1]


def _lommel_quadrature(n, a, b):
    r, w = gauss_legendre(_LOMMEL_GL)
    ja = sf.sph_bessel_j(n, a * r)
    jb = sf.sph_bessel_j(n, b * r)
    return complex(np.sum(w * ja * jb * r * r))


def lommel_radial(n, a, b):
    """``int_0^1 j_n(a r) j_n(b r) r^2 dr`` for complex ``a, b``.

    Uses the closed form ``[j_n(a) b j_{n-1}(b) - a j_{n-1}(a) j_n(b)] / (a^2 - b^2)``.
    Coincident arguments (relative gap below ``LOMMEL_DEGENERATE``) use the
    confluent limit ``(j_n(c)^2 - j_{n-1}(c) j_{n+1}(c)) / 2`` at the midpoint;
    small arguments (``max(|a|, |b|) < 1``) use 64-point Gauss-Legendre.
    """
    if int(n) != n or n < 0:
        raise DomainError("order must be a non-negative integer")
    n = int(n)
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b))
    if scale == 0:
        return 1.0 / 3.0 + 0j if n == 0 else 0j
    if scale < 1.0:
        return _lommel_quadrature(n, a, b)
    sign = 1.0
    if abs(a + b) < abs(a - b):
        # j_n(-x) = (-1)^n j_n(x): fold b onto the half-plane of a
        b = -b
        sign = (-1.0) ** n
    if abs(a - b) <= LOMMEL_DEGENERATE * scale:
        c = 0.5 * (a + b)
        seq = sf.sph_bessel_j_all(n + 1, c)
        jm1 = np.cos(c) / c if n == 0 else seq[n - 1]
        return sign * 0.5 * (seq[n] ** 2 - jm1 * seq[n + 1])
    sa = sf.sph_bessel_j_all(max(n, 1), a)
    sb = sf.sph_bessel_j_all(max(n, 1), b)
    num = sa[n] * _zj_prev(n, b, sb) - _zj_prev(n, a, sa) * sb[n]
    return sign * num / (a * a - b * b)


def lommel_combined(n, a, b):
    """``int_0^1 [n(n+1) j_n(ar) j_n(br) + Jc_n(ar) Jc_n(br)] dr``.

    Evaluated as ``ab/(2n+1) [(n+1) L(n-1) + n L(n+1)]`` with ``L`` from
    :func:`lommel_radial`.
    """
    if int(n) != n or n < 1:
        raise DomainError("order must be >= 1")
    n = int(n)
    a, b = complex(a), complex(b)
    return a * b / (2 * n + 1) * ((n + 1) * lommel_radial(n - 1, a, b) + n * lommel_radial(n + 1, a, b))


# ---------------------------------------------------------------------------
# propagating functions
# ---------------------------------------------------------------------------


def _phi_exterior(family, n, k, w, t):
    s = math.sqrt(n * (n + 1))
    if family is ModeFamily.TE:
        return 1j * k**3 * s * sf.sph_hankel1(n, k * t) * lommel_radial(n, k, w)
    return -(k * s / (w * t)) * sf.cal_H(n, k * t) * lommel_combined(n, k, w)


def _phi_interior(family, n, lam, w, t):
    s = math.sqrt(n * (n + 1))
    if family is ModeFamily.TE:
        return s * lam * sf.sph_bessel_j(n, w * t)
    return 1j * lam * s / (w * t) * sf.cal_J(n, w * t)


def propagating_phi(family, n, ctx, lam, t):
    """Propagating function of eigenvalue ``lam`` sampled at radii ``t``.

    Parameters
    ----------
    family : ModeFamily
    n : int
    ctx : WaveContext
    lam : complex
    t : float or array_like
        Radii; ``t > 0`` for TM (``t >= 0`` for TE).

    Returns
    -------
    complex or ndarray
    """
    family = ModeFamily.parse(family)
    n = int(n)
    w = interior_wavenumber(ctx, lam)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0) or (family is ModeFamily.TM and np.any(t == 0)):
        raise DomainError("propagating functions need t > 0")
    out = np.empty(t.shape, dtype=complex)
    inner = t <= 1.0
    if np.any(inner):
        out[inner] = _phi_interior(family, n, complex(lam), w, t[inner])
    if np.any(~inner):
        out[~inner] = _phi_exterior(family, n, ctx.k, w, t[~inner])
    return complex(out[0]) if scalar else out


def continuity_jump(mode):
    """Relative jump ``|phi(1-) - phi(1+)| / max(|phi(1-)|, 1)`` of a mode."""
    ctx = WaveContext(mode.k)
    w = interior_wavenumber(ctx, mode.lam)
    inner = complex(_phi_interior(mode.family, mode.n, mode.lam, w, 1.0))
    outer = complex(_phi_exterior(mode.family, mode.n, ctx.k, w, 1.0))
    return abs(inner - outer) / max(abs(inner), 1.0)


def interior_profile(mode, grid=2048):
    """Samples ``(t, phi)`` of the interior profile on ``t = j/grid``, ``j = 1..grid``."""
    t = np.arange(1, grid + 1) / grid
    return t, propagating_phi(mode.family, mode.n, WaveContext(mode.k), mode.lam, t)


def localization_ratio(mode, a=0.5, grid=2048):
    """``max_{[a,1]} |phi| / max_{(0,1]} |phi|`` for an eigenmode."""
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    if grid < 256:
        raise DomainError("grid must be at least 256")
    t, phi = interior_profile(mode, grid)
    mag = np.abs(phi)
    return float(np.max(mag[t >= a]) / np.max(mag))


# ---------------------------------------------------------------------------
# image of interior fields under the volume integral operator
# ---------------------------------------------------------------------------


def tdk_image_trace(field, ctx, r, theta, phi):
    """Tangential trace of the operator applied to an interior field, at radius ``r > 1``.

    TE fields map to multiples of ``U_n^m`` and TM fields to multiples of
    ``V_n^m``; the coefficient is the exterior propagating function.
    """
    if field.kind is not FieldKind.INTERIOR:
        raise DomainError("the image is defined for interior fields")
    if not r > 1:
        raise DomainError("trace radius must exceed the ball radius 1")
    coef = complex(_phi_exterior(field.family, field.n, ctx.k, complex(field.wavenumber), float(r)))
    u, v, _ = sf.vector_harmonics(field.n, field.m, theta, phi)
    return coef * (u if field.family is ModeFamily.TE else v)


def tdk_image_bruteforce(field, ctx, r, theta, phi, n_radial=48, sphere_order=None, kernel=None):
    """Volume-quadrature reference for :func:`tdk_image_trace`.

    Integrates ``k^2 G_0(x, y) E~(y)`` over the unit ball with a radial
    Gauss-Legendre rule times a sphere product rule, then takes ``xhat x``.
    ``kernel(x, y, k)`` defaults to the closed-form free-space tensor.
    """
    from .green import green_free

    if kernel is None:
        kernel = green_free
    if sphere_order is None:
        sphere_order = 2 * field.n + 40
    rr, wr = gauss_legendre(n_radial)
    rule = sphere_quadrature(sphere_order)
    dirs = rule.points
    y = (rr[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    wy = (wr[:, None] * rr[:, None] ** 2 * rule.weights[None, :]).ravel()
    xhat = sf.direction_vectors(theta, phi)[0]
    x = float(r) * xhat
    e = eval_multipole(field, y)
    g = kernel(x[None, :], y, ctx.k)
    val = ctx.k**2 * np.einsum("q,qij,qj->i", wy, g, e)
    return np.cross(xhat, val)
