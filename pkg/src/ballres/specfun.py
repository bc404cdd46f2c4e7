"""Spherical Bessel and Hankel functions of complex argument, and spherical harmonics.

Conventions
-----------
* ``j_n`` is evaluated by Miller's downward recurrence and normalized against
  whichever of ``j_0 = sin z / z`` and ``j_1 = (sin z / z - cos z) / z`` is
  larger in magnitude at ``z``.
* ``h_n = h_n^{(1)}`` is evaluated by upward recurrence from its closed forms
  for orders 0 and 1.
* Derived combinations use ``Jc_n(z) = j_n(z) + z j_n'(z) = z j_{n-1}(z) - n j_n(z)``
  and likewise ``Hc_n`` for the Hankel function.
* Spherical harmonics are orthonormal on the unit sphere and include the
  Condon-Shortley phase::

      Y_n^m(theta, phi) = P~_n^m(cos theta) exp(i m phi) / sqrt(2 pi)

  where ``P~_n^m`` is the associated Legendre function normalized to unit
  L2 norm on [-1, 1]. Negative orders follow ``Y_n^{-m} = (-1)^m conj(Y_n^m)``.
* Vector harmonics are ``U = grad_S Y / sqrt(n(n+1))`` and ``V = xhat x U``.

All routines are pure functions and hold no shared state.
"""

import cmath
import math

import numpy as np

from .errors import DomainError, SingularityError

#: Largest supported order.
NMAX = 200

_RESCALE = 1e200
_SMALL = 1e-3


def _check_order(n, allow=0):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"order must be an integer, got {n!r}")
    if n < 0 or n > NMAX + allow:
        raise DomainError(f"order {n} outside supported range [0, {NMAX}]")
    return int(n)


def _check_finite_scalar(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    return z


def _is_scalar(z):
    return np.ndim(z) == 0


# ---------------------------------------------------------------------------
# scalar kernels (pure Python, used by root scans)
# ---------------------------------------------------------------------------


def _j_small_series(n, z):
    # z^n / (2n+1)!! * (1 - z^2/(2(2n+3)) + z^4/(8(2n+3)(2n+5)))
    df = 1.0
    for k in range(3, 2 * n + 2, 2):
        df *= k
    z2 = z * z
    s = 1.0 - z2 / (2 * (2 * n + 3)) + z2 * z2 / (8 * (2 * n + 3) * (2 * n + 5))
    return z**n / df * s


def _start_order(nmax, az):
    # n + 20 + |z| plus a margin covering the turning-point layer of width ~|z|^(1/3)
    return nmax + 20 + int(az + 8.0 * az ** (1.0 / 3.0))


def _j_list(nmax, z):
    """Return [j_0(z), ..., j_nmax(z)] for a finite complex scalar."""
    if z == 0:
        return [1.0 + 0j] + [0j] * nmax
    if abs(z) < _SMALL:
        return [complex(_j_small_series(k, z)) for k in range(nmax + 1)]
    start = _start_order(nmax, abs(z))
    out = [0j] * (nmax + 1)
    f_hi = 0j
    f = 1e-300 + 0j
    for k in range(start, 0, -1):
        # f = f_k, f_hi = f_{k+1}; produce f_{k-1}
        f_lo = (2 * k + 1) / z * f - f_hi
        f_hi, f = f, f_lo
        if k - 1 <= nmax:
            out[k - 1] = f
        if k <= nmax:
            out[k] = f_hi
        if abs(f) > _RESCALE:
            f *= 1.0 / _RESCALE
            f_hi *= 1.0 / _RESCALE
            for i in range(k - 1, nmax + 1):
                out[i] *= 1.0 / _RESCALE
    s = cmath.sin(z)
    j0 = s / z
    j1 = (j0 - cmath.cos(z)) / z
    if abs(j0) >= abs(j1) or nmax < 1:
        scale = j0 / out[0]
    else:
        scale = j1 / out[1]
    return [v * scale for v in out]


def _h_list(nmax, z):
    """Return [h_0(z), ..., h_nmax(z)] (first kind) for a nonzero scalar."""
    if z.imag < 0:
        # upward recurrence is only stable where h^(1) is the recessive
        # solution; below the axis use h^(1) = 2 j - conj(h^(1)(conj z))
        up = _h_up(nmax, z.conjugate())
        js = _j_list(nmax, z)
        return [2 * a - b.conjugate() for a, b in zip(js, up)]
    return _h_up(nmax, z)


def _h_up(nmax, z):
    e = cmath.exp(1j * z)
    h0 = -1j * e / z
    out = [h0]
    if nmax >= 1:
        out.append(-e * (z + 1j) / (z * z))
    for k in range(1, nmax):
        out.append((2 * k + 1) / z * out[k] - out[k - 1])
    return out


# ---------------------------------------------------------------------------
# array kernels (numpy, used for field and quadrature evaluation)
# ---------------------------------------------------------------------------


def _j_array(nmax, z):
    """Return array of shape (nmax+1,) + z.shape with j_0..j_nmax."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros((nmax + 1,) + z.shape, dtype=complex)
    if z.size == 0:
        return out
    az = np.abs(z)
    small = az < _SMALL
    big = ~small
    if np.any(small):
        zs = z[small]
        for k in range(nmax + 1):
            out[k][small] = _j_small_series(k, zs)
    if not np.any(big):
        return out
    zb = z[big]
    start = _start_order(nmax, float(np.max(np.abs(zb))))
    buf = np.zeros((nmax + 1, zb.size), dtype=complex)
    f_hi = np.zeros(zb.size, dtype=complex)
    f = np.full(zb.size, 1e-300, dtype=complex)
    inv = 1.0 / zb
    for k in range(start, 0, -1):
        f_lo = (2 * k + 1) * inv * f - f_hi
        f_hi, f = f, f_lo
        if k <= nmax:
            buf[k] = f_hi
        if k - 1 <= nmax:
            buf[k - 1] = f
        over = np.abs(f) > _RESCALE
        if np.any(over):
            f[over] /= _RESCALE
            f_hi[over] /= _RESCALE
            lo = max(k - 1, 0)
            buf[lo:, over] /= _RESCALE
    j0 = np.sin(zb) * inv
    j1 = (j0 - np.cos(zb)) * inv
    if nmax >= 1:
        use0 = np.abs(j0) >= np.abs(j1)
        scale = np.where(use0, j0 / buf[0], j1 / np.where(buf[1] == 0, 1, buf[1]))
    else:
        scale = j0 / buf[0]
    buf *= scale
    out[:, big] = buf
    return out


def _h_array(nmax, z):
    z = np.asarray(z, dtype=complex)
    lower = z.imag < 0
    if not np.any(lower):
        return _h_array_up(nmax, z)
    out = _h_array_up(nmax, np.where(lower, np.conj(z), z))
    with np.errstate(over="ignore", invalid="ignore"):
        out[:, lower] = 2 * _j_array(nmax, z[lower]) - np.conj(out[:, lower])
    return out


def _h_array_up(nmax, z):
    out = np.zeros((nmax + 1,) + z.shape, dtype=complex)
    e = np.exp(1j * z)
    out[0] = -1j * e / z
    if nmax >= 1:
        out[1] = -e * (z + 1j) / (z * z)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, nmax):
            out[k + 1] = (2 * k + 1) / z * out[k] - out[k - 1]
    return out


def _check_array_arg(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("arguments must be finite")
    return z


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def sph_bessel_j_all(nmax, z):
    """Spherical Bessel functions ``j_0, ..., j_nmax`` at ``z``.

    Parameters
    ----------
    nmax : int
        Highest order, ``0 <= nmax <= NMAX + 1``.
    z : complex or array_like
        Argument(s).

    Returns
    -------
    list of complex or ndarray
        For scalar ``z`` a list of length ``nmax + 1``; otherwise an array of
        shape ``(nmax + 1,) + z.shape``.
    """
    nmax = _check_order(nmax, allow=1)
    if _is_scalar(z):
        return _j_list(nmax, _check_finite_scalar(z))
    return _j_array(nmax, _check_array_arg(z))


def sph_hankel1_all(nmax, z):
    """Spherical Hankel functions of the first kind ``h_0, ..., h_nmax``.

    Raises
    ------
    SingularityError
        If any argument is zero.
    """
    nmax = _check_order(nmax, allow=1)
    if _is_scalar(z):
        z = _check_finite_scalar(z)
        if z == 0:
            raise SingularityError("h_n is singular at z = 0")
        return _h_list(nmax, z)
    z = _check_array_arg(z)
    if np.any(z == 0):
        raise SingularityError("h_n is singular at z = 0")
    return _h_array(nmax, z)


def sph_bessel_j(n, z, derivative=False):
    """Spherical Bessel function of the first kind ``j_n(z)``.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= NMAX``.
    z : complex or array_like
        Argument; ``j_n`` is entire so any finite value is accepted.
    derivative : bool, optional
        Return ``j_n'(z)`` instead.

    Examples
    --------
    >>> round(sph_bessel_j(0, 1.0).real, 10)
    0.8414709848
    """
    n = _check_order(n)
    seq = sph_bessel_j_all(n + 1, z)
    if not derivative:
        return seq[n]
    if n == 0:
        return -seq[1]
    return (n * seq[n - 1] - (n + 1) * seq[n + 1]) / (2 * n + 1)


def sph_hankel1(n, z, derivative=False):
    """Spherical Hankel function of the first kind ``h_n^{(1)}(z)``.

    Raises
    ------
    SingularityError
        At ``z = 0``.
    """
    n = _check_order(n)
    seq = sph_hankel1_all(n + 1, z)
    if not derivative:
        return seq[n]
    if n == 0:
        return -seq[1]
    return (n * seq[n - 1] - (n + 1) * seq[n + 1]) / (2 * n + 1)


def cal_J(n, z):
    """Riccati-type derivative ``Jc_n(z) = j_n(z) + z j_n'(z)``.

    Computed as ``z j_{n-1}(z) - n j_n(z)`` (``j_0(z) - z j_1(z)`` for n = 0),
    which is odd/even in ``z`` with the parity of ``n``.
    """
    n = _check_order(n)
    zz = complex(z) if _is_scalar(z) else np.asarray(z, dtype=complex)
    if n == 0:
        seq = sph_bessel_j_all(1, z)
        return seq[0] - zz * seq[1]
    seq = sph_bessel_j_all(n, z)
    return zz * seq[n - 1] - n * seq[n]


def cal_H(n, z):
    """``Hc_n(z) = h_n(z) + z h_n'(z)`` for the first-kind Hankel function."""
    n = _check_order(n)
    if n == 0:
        seq = sph_hankel1_all(1, z)
        zz = complex(z) if _is_scalar(z) else np.asarray(z, dtype=complex)
        return seq[0] - zz * seq[1]
    seq = sph_hankel1_all(n, z)
    zz = complex(z) if _is_scalar(z) else np.asarray(z, dtype=complex)
    return zz * seq[n - 1] - n * seq[n]


def radial_pair(kind, n, z):
    """Return ``(b_n(z), B_n(z))`` with ``(j, Jc)`` or ``(h, Hc)``.

    ``kind`` is ``"interior"`` or ``"radiating"``. Routes through the public
    module-level functions so that every consumer sees one implementation.
    """
    if kind == "interior":
        return sph_bessel_j(n, z), cal_J(n, z)
    if kind == "radiating":
        return sph_hankel1(n, z), cal_H(n, z)
    raise DomainError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# spherical harmonics
# ---------------------------------------------------------------------------


def _check_index(n, m, vector):
    n = _check_order(n)
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise DomainError(f"order m must be an integer, got {m!r}")
    m = int(m)
    if vector and n < 1:
        raise DomainError("vector harmonics need n >= 1")
    if abs(m) > n:
        raise DomainError(f"|m| = {abs(m)} exceeds n = {n}")
    return n, m


def legendre_normalized(nmax, theta):
    """Normalized associated Legendre functions and angular derivatives.

    Parameters
    ----------
    nmax : int
        Highest degree.
    theta : array_like
        Polar angles.

    Returns
    -------
    plm, pilm, taulm : ndarray
        Arrays of shape ``(nmax+1, nmax+1) + theta.shape`` holding, for
        ``0 <= m <= n``, ``P~_n^m(cos theta)``, ``P~_n^m / sin theta`` (zero
        for ``m = 0``) and ``d P~_n^m / d theta``.
    """
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    s = np.sin(theta)
    shape = (nmax + 1, nmax + 1) + theta.shape
    plm = np.zeros(shape)
    pilm = np.zeros(shape)
    taulm = np.zeros(shape)

    # P~ recurrences
    plm[0, 0] = np.sqrt(0.5)
    for m in range(1, nmax + 1):
        plm[m, m] = -np.sqrt((2 * m + 1) / (2 * m)) * s * plm[m - 1, m - 1]
    for m in range(nmax):
        plm[m + 1, m] = np.sqrt(2 * m + 3) * x * plm[m, m]
        for n in range(m + 2, nmax + 1):
            a = np.sqrt((2 * n + 1) * (2 * n - 1) / ((n - m) * (n + m)))
            b = np.sqrt((2 * n + 1) * (n - m - 1) * (n + m - 1) / ((2 * n - 3) * (n - m) * (n + m)))
            plm[n, m] = a * x * plm[n - 1, m] - b * plm[n - 2, m]

    # pi~ = P~ / sin, started from P~_m^m / sin which stays finite at the poles
    if nmax >= 1:
        pilm[1, 1] = -np.sqrt(0.75) * np.ones_like(theta)
    for m in range(2, nmax + 1):
        pilm[m, m] = -np.sqrt((2 * m + 1) / (2 * m)) * s * pilm[m - 1, m - 1]
    for m in range(1, nmax):
        pilm[m + 1, m] = np.sqrt(2 * m + 3) * x * pilm[m, m]
        for n in range(m + 2, nmax + 1):
            a = np.sqrt((2 * n + 1) * (2 * n - 1) / ((n - m) * (n + m)))
            b = np.sqrt((2 * n + 1) * (n - m - 1) * (n + m - 1) / ((2 * n - 3) * (n - m) * (n + m)))
            pilm[n, m] = a * x * pilm[n - 1, m] - b * pilm[n - 2, m]

    # tau~ = d P~ / d theta
    for n in range(1, nmax + 1):
        taulm[n, 0] = np.sqrt(n * (n + 1)) * plm[n, 1]
        for m in range(1, n + 1):
            c = np.sqrt((2 * n + 1) / (2 * n - 1) * (n - m) * (n + m))
            taulm[n, m] = n * x * pilm[n, m] - c * pilm[n - 1, m]
    return plm, pilm, taulm


def direction_vectors(theta, phi):
    """Return ``(xhat, thetahat, phihat)`` arrays of shape ``theta.shape + (3,)``."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    xhat = np.stack([st * cp, st * sp, ct], axis=-1)
    that = np.stack([ct * cp, ct * sp, -st], axis=-1)
    phat = np.stack([-sp, cp, np.zeros_like(st)], axis=-1)
    return xhat, that, phat


def cartesian_to_spherical(x):
    """Return ``(r, theta, phi)`` for points ``x`` of shape ``(..., 3)``."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    theta = np.arccos(np.clip(x[..., 2] / safe, -1.0, 1.0))
    phi = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2 * np.pi)
    return r, theta, phi


def sph_harm(n, m, theta, phi):
    """Orthonormal scalar spherical harmonic ``Y_n^m(theta, phi)``."""
    n, m = _check_index(n, m, vector=False)
    plm, _, _ = legendre_normalized(n, theta)
    am = abs(m)
    y = plm[n, am] * np.exp(1j * am * np.asarray(phi, dtype=float)) / np.sqrt(2 * np.pi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y[()] if np.ndim(y) == 0 else y


def vector_harmonics(n, m, theta, phi):
    """Vector spherical harmonics ``(U_n^m, V_n^m, Y_n^m)`` at a direction.

    Parameters
    ----------
    n, m : int
        Degree ``n >= 1`` and order ``|m| <= n``.
    theta, phi : float or array_like
        Polar and azimuthal angles (broadcast together).

    Returns
    -------
    U, V : ndarray
        Complex arrays of shape ``shape + (3,)``.
    Y : complex or ndarray
        Scalar harmonic.
    """
    n, m = _check_index(n, m, vector=True)
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    plm, pilm, taulm = legendre_normalized(n, theta)
    am = abs(m)
    e = np.exp(1j * am * phi) / np.sqrt(2 * np.pi)
    _, that, phat = direction_vectors(theta, phi)
    nn = np.sqrt(n * (n + 1))
    y = plm[n, am] * e
    u = ((taulm[n, am] * e)[..., None] * that + (1j * am * pilm[n, am] * e)[..., None] * phat) / nn
    # xhat x thetahat = phihat, xhat x phihat = -thetahat
    v = ((taulm[n, am] * e)[..., None] * phat - (1j * am * pilm[n, am] * e)[..., None] * that) / nn
    if m < 0:
        sgn = (-1) ** am
        y, u, v = sgn * np.conj(y), sgn * np.conj(u), sgn * np.conj(v)
    if np.ndim(y) == 0:
        y = complex(y)
    return u, v, y
