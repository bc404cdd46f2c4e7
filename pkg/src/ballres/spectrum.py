"""Eigenvalues of the volume integral operator on the unit ball.

For a free-space wavenumber ``k`` the eigenvalues of finite type come in two
families. TE eigenvalues correspond to zeros ``z`` of

    f_n^1(z) = h_n(k) Jc_n(z) - j_n(z) Hc_n(k)

and TM eigenvalues to zeros of

    f_n^2(z) = (k^2 / z^2) h_n(k) Jc_n(z) - j_n(z) Hc_n(k).

A zero ``z`` maps to the eigenvalue ``lambda = k^2 / (z^2 - k^2)``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import specfun as sf
from .errors import DomainError, SingularityError
from .rootscan import ScanConfig, scan_strip

#: Points of the essential spectrum; eigenvalues this close are rejected.
ESSENTIAL_SPECTRUM = (0.0, -0.5, -1.0)
ESSENTIAL_GUARD = 1e-6
#: Hard floor for ``Im lambda`` and the start of the warning band.
IM_LAMBDA_FLOOR = -1e-13


class ModeFamily(str, Enum):
    """Transverse electric (zeros of f_n^1) or transverse magnetic (f_n^2)."""

    TE = "TE"
    TM = "TM"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown mode family {value!r}") from None


@dataclass(frozen=True)
class WaveContext:
    """Free-space wavenumber ``k > 0`` (ball radius 1)."""

    k: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise DomainError(f"k must be positive and finite, got {self.k!r}")


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    return int(n)


def f_n1(ctx, n, z):
    """TE eigenvalue function ``h_n(k) Jc_n(z) - j_n(z) Hc_n(k)`` (entire in z)."""
    n = _check_n(n)
    k = ctx.k
    return sf.sph_hankel1(n, k) * sf.cal_J(n, z) - sf.sph_bessel_j(n, z) * sf.cal_H(n, k)


def f_n2(ctx, n, z):
    """TM eigenvalue function ``(k/z)^2 h_n(k) Jc_n(z) - j_n(z) Hc_n(k)``.

    Raises
    ------
    SingularityError
        At ``z = 0``.
    """
    n = _check_n(n)
    if np.any(np.asarray(z) == 0):
        raise SingularityError("f_n^2 has a pole at z = 0")
    k = ctx.k
    return (k * k / (z * z)) * sf.sph_hankel1(n, k) * sf.cal_J(n, z) - sf.sph_bessel_j(n, z) * sf.cal_H(n, k)


def eigen_function(ctx, family, n):
    """Return the unscaled eigenvalue function of ``family`` as a callable."""
    family = ModeFamily.parse(family)
    if family is ModeFamily.TE:
        return lambda z: f_n1(ctx, n, z)
    return lambda z: f_n2(ctx, n, z)


def function_scale(ctx, n):
    """Magnitude ``|h_n(k)| + |Hc_n(k)|`` used to normalize residuals."""
    return abs(sf.sph_hankel1(n, ctx.k)) + abs(sf.cal_H(n, ctx.k))


def eigenvalue_from_zero(ctx, z):
    """``lambda = k^2 / (z^2 - k^2)``."""
    z = complex(z)
    return ctx.k**2 / (z * z - ctx.k**2)


def interior_wavenumber(ctx, lam):
    """``k_lambda = k sqrt(1 + 1/lambda)`` on the principal branch.

    Raises
    ------
    DomainError
        If ``1 + 1/lambda`` lies on the branch cut ``(-inf, 0]`` or
        ``lambda = 0``.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 has no interior wavenumber")
    w = 1.0 + 1.0 / lam
    if w.imag == 0 and w.real <= 0:
        raise DomainError(f"1 + 1/lambda = {w} lies on the branch cut")
    return ctx.k * np.sqrt(w)


def asymptotic_zero(family, n, l):
    """Large-``l`` location of the ``l``-th zero.

    TE: ``(1 + 2l + n) pi / 2``; TM: ``(2l + n) pi / 2``.
    """
    family = ModeFamily.parse(family)
    if l < 0:
        raise DomainError("l must be non-negative")
    shift = 1 if family is ModeFamily.TE else 0
    return (shift + 2 * l + n) * math.pi / 2


def asymptotic_lambda(ctx, family, n, l):
    """Large-``l`` eigenvalue ``k^2 / zcheck^2`` with ``zcheck = asymptotic_zero``."""
    return ctx.k**2 / asymptotic_zero(family, n, l) ** 2


def nearest_asymptotic_index(family, n, z):
    """The ``l >= 0`` whose asymptotic zero is closest to ``Re z``."""
    family = ModeFamily.parse(family)
    shift = 1 if family is ModeFamily.TE else 0
    l = round((2.0 * complex(z).real / math.pi - shift - n) / 2.0)
    return max(0, int(l))


@dataclass(frozen=True)
class Eigenmode:
    """One computed resonance.

    Attributes
    ----------
    family : ModeFamily
    n : int
        Multipole degree.
    l : int
        Rank by ascending ``Re z`` among zeros with ``Re z > k``.
    z : complex
        Zero of the family's eigenvalue function (``k_lambda`` at resonance).
    lam : complex
        Eigenvalue ``k^2 / (z^2 - k^2)``.
    residual : float
        ``|f_n^i(z)|`` of the unscaled function.
    k : float
        Free-space wavenumber.
    scaled_residual : float
        Residual divided by ``|h_n(k)| + |Hc_n(k)|``.
    l_asym : int
        Asymptotic label: ``l`` plus a per-family offset chosen so that
        ``asymptotic_zero(l_asym)`` is the nearest asymptotic zero for large ``l``.
    lam_err : float
        ``|d lambda / dz|`` times the last Muller step.
    near_origin : bool
        True when ``|z| <= k + 0.5``.
    """

    family: ModeFamily
    n: int
    l: int
    z: complex
    lam: complex
    residual: float
    k: float = 1.0
    scaled_residual: float = 0.0
    l_asym: int = 0
    lam_err: float = 0.0
    near_origin: bool = False

    @property
    def z_asym(self):
        return asymptotic_zero(self.family, self.n, self.l_asym)

    @property
    def lam_asym(self):
        return asymptotic_lambda(WaveContext(self.k), self.family, self.n, self.l_asym)


def default_config(ctx, re_max, cfg=None):
    """Scan configuration for ``compute_modes`` with ``re_min = k``."""
    if cfg is None:
        cfg = ScanConfig(re_min=ctx.k, re_max=re_max)
    return cfg.replace(re_min=max(cfg.re_min, ctx.k), re_max=re_max)


def compute_modes(ctx, family, n, re_max, cfg=None, workers=1):
    """Enumerate eigenmodes of one family and degree with ``k < Re z <= re_max``.

    Parameters
    ----------
    ctx : WaveContext
    family : ModeFamily or str
    n : int
        Degree ``n >= 1``.
    re_max : float
        Upper end of the scanned real window, ``re_max > k``.
    cfg : ScanConfig, optional
        Scan parameters. ``re_max`` is overridden and ``re_min`` raised to ``k``.
    workers : int, optional
        Seed-level parallelism.

    Returns
    -------
    list of Eigenmode
        Ordered by ascending ``Re z``.

    Notes
    -----
    The scan runs on ``f / (|h_n(k)| + |Hc_n(k)|)`` so that the residual
    tolerance has the same meaning for every degree.
    """
    family = ModeFamily.parse(family)
    n = _check_n(n)
    if not re_max > ctx.k:
        raise DomainError(f"re_max must exceed k = {ctx.k}, got {re_max}")
    cfg = default_config(ctx, re_max, cfg)
    f = eigen_function(ctx, family, n)
    scale = function_scale(ctx, n)
    g = lambda z: f(z) / scale
    roots = scan_strip(g, cfg, workers=workers)
    kept = []
    for c in roots:
        if not c.z.real > ctx.k:
            continue
        lam = eigenvalue_from_zero(ctx, c.z)
        if any(abs(lam - e) < ESSENTIAL_GUARD for e in ESSENTIAL_SPECTRUM):
            continue
        kept.append((c, lam))
    offset = _index_offset(ctx, family, n, g, cfg, [c.z for c, _ in kept], workers)
    modes = []
    k2 = ctx.k**2
    for c, lam in kept:
        dlam = 2 * k2 * abs(c.z) / abs(c.z * c.z - k2) ** 2
        modes.append(
            Eigenmode(
                family=family,
                n=n,
                l=len(modes),
                z=c.z,
                lam=lam,
                residual=abs(f(c.z)),
                k=ctx.k,
                scaled_residual=c.residual,
                l_asym=len(modes) + offset,
                lam_err=dlam * c.step,
                near_origin=abs(c.z) <= ctx.k + 0.5,
            )
        )
    return modes


#: The asymptotic label is calibrated on a zero at least this far into the
#: regime where ``|z - zcheck| < pi / 4``; ``l * |z - zcheck|`` grows like n^2.
def _regime_index(n):
    return n * (n + 1) // 4 + 6


_REGIME_SCAN_LIMIT = 2000.0


def _index_offset(ctx, family, n, g, cfg, zs, workers):
    """Shift between the rank ``l`` and the asymptotic label ``l_asym``.

    The nearest asymptotic zero is unambiguous only for large ``l``, so the
    offset is read off the deepest zero of a scan that reaches that regime and
    applied to every rank. Scans stopping short are extended for calibration.
    """
    x_reg = asymptotic_zero(family, n, _regime_index(n))
    if zs and (zs[-1].real >= x_reg or x_reg > _REGIME_SCAN_LIMIT):
        return nearest_asymptotic_index(family, n, zs[-1]) - (len(zs) - 1)
    ref = scan_strip(g, cfg.replace(re_max=x_reg + math.pi / 2), workers=workers)
    ref = [c.z for c in ref if c.z.real > ctx.k and all(
        abs(eigenvalue_from_zero(ctx, c.z) - e) >= ESSENTIAL_GUARD for e in ESSENTIAL_SPECTRUM)]
    if not ref:
        return 0
    return nearest_asymptotic_index(family, n, ref[-1]) - (len(ref) - 1)


def find_mode(modes, l, index="asym"):
    """Pick the mode with the given index (``"asym"`` or ``"rank"``)."""
    for m in modes:
        if (m.l_asym if index == "asym" else m.l) == l:
            return m
    raise DomainError(f"no mode with {index} index {l}")


@dataclass(frozen=True)
class SpectralReport:
    """Summary of a batch of eigenmodes.

    Attributes
    ----------
    count : int
    max_abs_im_z, max_abs_im_lambda : float
    violations : list of Eigenmode
        Modes with ``Im lambda <= IM_LAMBDA_FLOOR``.
    warnings : list of Eigenmode
        Modes with ``IM_LAMBDA_FLOOR < Im lambda <= 0``.
    partial_sums : dict
        ``(family, n) -> ndarray`` of cumulative ``sum |Im lambda|^2`` in
        ascending ``Re z``.
    eventually_decreasing : dict
        ``(family, n) -> int`` first rank from which ``|Im lambda|``
        decreases monotonically to the end of the sequence.
    """

    count: int
    max_abs_im_z: float
    max_abs_im_lambda: float
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    partial_sums: dict = field(default_factory=dict)
    eventually_decreasing: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations


def spectral_report(modes):
    """Empirical checks of the half-plane, strip and summability properties."""
    if not modes:
        raise DomainError("spectral_report needs at least one mode")
    groups = {}
    for m in sorted(modes, key=lambda m: (m.family.value, m.n, m.z.real)):
        groups.setdefault((m.family, m.n), []).append(m)
    sums, dec = {}, {}
    for key, seq in groups.items():
        im2 = np.array([m.lam.imag**2 for m in seq])
        sums[key] = np.cumsum(im2)
        a = np.abs([m.lam.imag for m in seq])
        start = len(a) - 1
        while start > 0 and a[start - 1] > a[start]:
            start -= 1
        dec[key] = start
    return SpectralReport(
        count=len(modes),
        max_abs_im_z=max(abs(m.z.imag) for m in modes),
        max_abs_im_lambda=max(abs(m.lam.imag) for m in modes),
        violations=[m for m in modes if m.lam.imag <= IM_LAMBDA_FLOOR],
        warnings=[m for m in modes if IM_LAMBDA_FLOOR < m.lam.imag <= 0],
        partial_sums=sums,
        eventually_decreasing=dec,
    )
