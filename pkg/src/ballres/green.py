"""Dyadic Green's tensors and the centered-source solution for the dielectric ball.

The free-space tensor is ``G_0 = (I + grad div / k^2) g`` with
``g = exp(ikR) / (4 pi R)``. In terms of spherical Hankel functions of ``kR``::

    G_0 = (ik / 4pi) [ (2 h_0 - h_2)/3 I + h_2 Rhat Rhat ]

and its imaginary part, which stays bounded at ``R = 0``, replaces ``h`` by ``j``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun as sf
from .errors import DomainError, ResonanceError, SingularityError
from .modes import FieldKind, MultipoleField, eval_multipole
from .spectrum import ModeFamily

#: ``|f_1^2(k_tau)|`` below this is treated as an exact resonance.
RESONANCE_GUARD = 1e-10


def _pairs(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    rr = np.linalg.norm(d, axis=-1)
    return d, rr


def green_free(x, y, k):
    """Free-space dyadic Green's tensor ``G_0(x, y, k)``.

    Parameters
    ----------
    x, y : array_like
        Points of shape ``(..., 3)`` (broadcast together).
    k : float
        Wavenumber.

    Returns
    -------
    ndarray
        Complex array of shape ``(..., 3, 3)``.

    Raises
    ------
    SingularityError
        If any ``x == y``.
    """
    d, rr = _pairs(x, y)
    if np.any(rr == 0):
        raise SingularityError("G_0 is singular at x = y")
    s = k * rr
    e = np.exp(1j * s)
    h0 = -1j * e / s
    h1 = -e * (s + 1j) / (s * s)
    h2 = 3.0 / s * h1 - h0
    rhat = d / rr[..., None]
    eye = np.eye(3)
    a = (2.0 * h0 - h2) / 3.0
    out = a[..., None, None] * eye + h2[..., None, None] * rhat[..., :, None] * rhat[..., None, :]
    return (1j * k / (4 * math.pi)) * out


def green_free_imag(x, y, k):
    """``Im G_0(x, y, k)``, continuous at ``x = y`` where it equals ``k/(6 pi) I``."""
    d, rr = _pairs(x, y)
    s = k * rr
    jj = sf.sph_bessel_j_all(2, np.atleast_1d(s)).real.reshape((3,) + np.shape(s))
    j0, j2 = jj[0], jj[2]
    safe = np.where(rr > 0, rr, 1.0)
    rhat = np.where((rr > 0)[..., None], d / safe[..., None], 0.0)
    eye = np.eye(3)
    out = ((2 * j0 - j2) / 3.0)[..., None, None] * eye + j2[..., None, None] * rhat[..., :, None] * rhat[..., None, :]
    return (k / (4 * math.pi)) * out


def default_terms(k, x):
    """Series truncation ``max(20, ceil(e k |x| / 2) + 10)``."""
    return max(20, int(math.ceil(math.e * k * float(np.linalg.norm(x)) / 2)) + 10)


def addition_series(x, y, k, N=None):
    """Partial sum of the multipole expansion of ``G_0(x, y, k)`` for ``|x| > |y|``.

    ``sum_{n<=N} ik/(n(n+1)) sum_m [E^TM(x) (x) conj(E~^TM(y)) + E^TE(x) (x) conj(E~^TE(y))]``
    with radiating fields at ``x`` and interior fields at ``y``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rx, ry = np.linalg.norm(x), np.linalg.norm(y)
    if not rx > ry:
        raise DomainError("the addition series needs |x| > |y|")
    if N is None:
        N = default_terms(k, x)
    N = int(N)
    ux, vx, yx, xh = _vsh_table(N, x)
    hx = np.asarray(sf.sph_hankel1_all(N, complex(k * rx)))
    kr = complex(k * rx)
    terms = []
    if ry > 0:
        uy, vy, yy, yh = _vsh_table(N, y)
        jy = np.asarray(sf.sph_bessel_j_all(N, complex(k * ry)))
        ky = complex(k * ry)
    for n in range(1, N + 1):
        nn = n * (n + 1)
        s = math.sqrt(nn)
        # radiating fields at x for all m
        hcx = kr * hx[n - 1] - n * hx[n]
        cx = 1.0 / (1j * kr)
        te_x = -s * hx[n] * vx[n]
        tm_x = -s * cx * hcx * ux[n] - nn * cx * hx[n] * yx[n][:, None] * xh
        if ry == 0:
            if n > 1:
                break
            e0 = np.stack([_origin_tm1(m) for m in (-1, 0, 1)])
            acc = tm_x.T @ np.conj(e0)
        else:
            jcy = ky * jy[n - 1] - n * jy[n]
            cy = 1.0 / (1j * ky)
            te_y = -s * jy[n] * vy[n]
            tm_y = -s * cy * jcy * uy[n] - nn * cy * jy[n] * yy[n][:, None] * yh
            acc = tm_x.T @ np.conj(tm_y) + te_x.T @ np.conj(te_y)
        terms.append(1j * k / nn * acc)
    return _pairwise_sum(terms)


def _origin_tm1(m):
    return eval_multipole(MultipoleField(ModeFamily.TM, FieldKind.INTERIOR, 1, m, 1.0), np.zeros(3))


def _vsh_table(N, x):
    """Vector harmonics at the direction of ``x`` for all ``1 <= n <= N``, ``|m| <= n``.

    Returns lists indexed by ``n`` of arrays of shape ``(2n+1, 3)`` (``U``, ``V``)
    and ``(2n+1,)`` (``Y``), rows ordered ``m = -n..n``, plus ``xhat``.
    """
    _, theta, phi = sf.cartesian_to_spherical(x)
    plm, pilm, taulm = sf.legendre_normalized(N, theta)
    xh, th, ph = sf.direction_vectors(theta, phi)
    U, V, Y = [None], [None], [None]
    for n in range(1, N + 1):
        s = math.sqrt(n * (n + 1))
        m = np.arange(0, n + 1)
        e = np.exp(1j * m * phi) / math.sqrt(2 * math.pi)
        y = plm[n, : n + 1] * e
        a = (taulm[n, : n + 1] * e)[:, None]
        b = (1j * m * pilm[n, : n + 1] * e)[:, None]
        u = (a * th + b * ph) / s
        v = (a * ph - b * th) / s
        sgn = ((-1.0) ** m)[1:][::-1]
        Y.append(np.concatenate([sgn * np.conj(y[1:][::-1]), y]))
        U.append(np.concatenate([sgn[:, None] * np.conj(u[1:][::-1]), u]))
        V.append(np.concatenate([sgn[:, None] * np.conj(v[1:][::-1]), v]))
    return U, V, Y, xh


def _pairwise_sum(items):
    if not items:
        return np.zeros((3, 3), dtype=complex)
    while len(items) > 1:
        nxt = [items[i] + items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


# ---------------------------------------------------------------------------
# centered dipole in a dielectric ball
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContrastContext:
    """Free-space wavenumber ``k`` and interior wavenumber ``k_tau = k sqrt(1 + tau)``."""

    k: float
    k_tau: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise DomainError("k must be positive")
        if not (math.isfinite(self.k_tau) and self.k_tau >= self.k):
            raise DomainError(f"k_tau must be >= k (tau >= 0), got k_tau={self.k_tau}, k={self.k}")

    @property
    def tau(self):
        return (self.k_tau / self.k) ** 2 - 1.0


def mie_system(ctx):
    """Matrix and right-hand side of the transmission problem for ``(a_0, b_0)``.

    Tangential continuity of ``E`` and of ``curl E`` across ``|x| = 1`` between
    ``G_0(x, 0, k_tau) p + a_0 E~^TM_{1,0}(k_tau, x)`` inside and
    ``b_0 E^TM_{1,0}(k, x)`` outside.
    """
    k, kt = ctx.k, ctx.k_tau
    a = np.array(
        [
            [sf.cal_J(1, kt) / (1j * kt), -sf.cal_H(1, k) / (1j * k)],
            [-1j * kt * sf.sph_bessel_j(1, kt), 1j * k * sf.sph_hankel1(1, k)],
        ]
    )
    rhs = np.array([0.5j * sf.cal_H(1, kt), 0.5j * kt * kt * sf.sph_hankel1(1, kt)])
    return a, rhs


def resonance_denominator(ctx):
    """``(k/k_tau)^2 Jc_1(k_tau) h_1(k) - j_1(k_tau) Hc_1(k)``, i.e. ``f_1^2(k_tau)``."""
    k, kt = ctx.k, ctx.k_tau
    return (k * k / (kt * kt)) * sf.cal_J(1, kt) * sf.sph_hankel1(1, k) - sf.sph_bessel_j(1, kt) * sf.cal_H(1, k)


def _guard(ctx, guard):
    den = resonance_denominator(ctx)
    if abs(den) < guard:
        raise ResonanceError(f"k_tau = {ctx.k_tau} sits on a TM resonance (|f_1^2| = {abs(den):.3e})")
    return den


def mie_a0(ctx, guard=RESONANCE_GUARD):
    """Interior correction coefficient ``a_0`` in closed form.

    Raises
    ------
    ResonanceError
        If ``|f_1^2(k_tau)| < guard``.
    """
    den = _guard(ctx, guard)
    k, kt = ctx.k, ctx.k_tau
    h1k = sf.sph_hankel1(1, k)
    num = -(k * k / (2 * kt)) * sf.cal_H(1, kt) * h1k + 0.5 * kt * sf.cal_H(1, k) * sf.sph_hankel1(1, kt)
    return num / den


def mie_coefficients(ctx, guard=RESONANCE_GUARD):
    """``(a_0, b_0)`` from a direct solve of :func:`mie_system`."""
    _guard(ctx, guard)
    a, rhs = mie_system(ctx)
    a0, b0 = np.linalg.solve(a, rhs)
    return complex(a0), complex(b0)


def origin_dipole_field():
    """``E~^TM_{1,0}(w, 0) = (2i/3) sqrt(3/(4 pi)) zhat`` (independent of ``w``)."""
    return eval_multipole(MultipoleField(ModeFamily.TM, FieldKind.INTERIOR, 1, 0, 1.0), np.zeros(3))


def special_polarization(ctx=None):
    """Real polarization ``p = (E~_0 / i) / |E~_0|^2`` with ``E~_0 = E~^TM_{1,0}(k_tau, 0)``.

    With this choice ``G_0(x, 0, w) p = (w/2) E^TM_{1,0}(w, x)``.
    """
    e0 = origin_dipole_field()
    p = e0 / 1j / np.real(np.vdot(e0, e0))
    return np.real_if_close(p, tol=1)


def phi_radial(ctx, t, guard=RESONANCE_GUARD):
    """Radial coefficient of the interior field trace along a diameter.

    ``phi(k_tau, t) = i/(sqrt(2) t) Hc_1(k_tau t) - a_0 sqrt(2)/(i k_tau t) Jc_1(k_tau t)``

    Parameters
    ----------
    t : float or array_like
        Nonzero radii in ``[-1, 1]``; any nonzero value is accepted when
        ``k_tau = k`` since the formula is then the free-space field.

    Raises
    ------
    SingularityError
        At ``t = 0``.
    DomainError
        For ``|t| > 1`` with a nonzero contrast.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t == 0):
        raise SingularityError("phi(k_tau, t) is singular at t = 0")
    if ctx.tau != 0 and np.any(np.abs(t) > 1):
        raise DomainError("phi(k_tau, t) is the interior field; need |t| <= 1")
    a0 = 0j if ctx.tau == 0 else mie_a0(ctx, guard)
    kt = ctx.k_tau
    arg = kt * t
    val = 1j / (math.sqrt(2) * t) * sf.cal_H(1, arg) - a0 * math.sqrt(2) / (1j * arg) * sf.cal_J(1, arg)
    return complex(val[0]) if scalar else val


def im_phi_closed(ctx, t, guard=RESONANCE_GUARD):
    """``Im phi = (k_tau/sqrt 2 + sqrt 2 Re a_0) Jc_1(k_tau t) / (k_tau t)``, finite at ``t = 0``."""
    t = np.asarray(t, dtype=float)
    a0 = 0j if ctx.tau == 0 else mie_a0(ctx, guard)
    kt = ctx.k_tau
    arg = kt * t
    safe = np.where(arg == 0, 1.0, arg)
    shape = np.where(arg == 0, 2.0 / 3.0, np.real(sf.cal_J(1, safe)) / safe)
    return (kt / math.sqrt(2) + math.sqrt(2) * a0.real) * shape


def fwhm(t, values):
    """Full width at half maximum of the main lobe of a sampled profile.

    The main lobe is the connected run of samples around the global ``|value|``
    maximum where the value keeps the peak's sign and exceeds half of its
    magnitude. Crossings are located by linear interpolation.

    Raises
    ------
    DomainError
        If the lobe reaches either end of the samples.
    """
    t = np.asarray(t, dtype=float)
    v = np.real(np.asarray(values))
    if t.shape != v.shape or t.size < 3:
        raise DomainError("need matching sample arrays of length >= 3")
    if np.any(np.diff(t) <= 0):
        raise DomainError("abscissae must be strictly increasing")
    i = int(np.argmax(np.abs(v)))
    s = v * np.sign(v[i])
    half = 0.5 * s[i]
    lo = i
    while lo > 0 and s[lo - 1] > half:
        lo -= 1
    hi = i
    while hi < t.size - 1 and s[hi + 1] > half:
        hi += 1
    if lo == 0 or hi == t.size - 1:
        raise DomainError("no half-maximum crossing inside the sampled window")
    tl = t[lo - 1] + (half - s[lo - 1]) * (t[lo] - t[lo - 1]) / (s[lo] - s[lo - 1])
    tr = t[hi] + (half - s[hi]) * (t[hi + 1] - t[hi]) / (s[hi + 1] - s[hi])
    return float(tr - tl)


def profile_grid(points=2001, half_width=1.0):
    """Uniform grid on ``[-w, w]`` with ``t = 0`` replaced by ``+-h/2`` (``h`` the spacing).

    The default 2001-point grid on ``[-1, 1]`` therefore uses ``+-5e-4``.
    """
    if int(points) != points or points < 3:
        raise DomainError("profile grid needs at least 3 points")
    t = np.linspace(-half_width, half_width, int(points))
    h = t[1] - t[0]
    zero = np.abs(t) < 0.25 * h
    if np.any(zero):
        t = np.concatenate([t[t < -0.25 * h], [-0.5 * h, 0.5 * h], t[t > 0.25 * h]])
    return t
