"""Muller's method and a strip-scanning driver for zeros of analytic functions.

The driver seeds Muller iterations on three horizontal rows of a strip
``re_min <= Re z <= re_max, |Im z| <= strip_height`` and merges the converged
roots into a deduplicated list sorted by real part.
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import DomainError

_STEP_RTOL = 1e-13
_POLISH = 3


@dataclass(frozen=True)
class ScanConfig:
    """Parameters of a strip scan.

    Parameters
    ----------
    re_min, re_max : float
        Real-part window reported by :func:`scan_strip`.
    strip_height : float
        Largest ``|Im z|`` accepted.
    seed_spacing : float
        Distance between Muller seeds along each row.
    tol : float
        Residual tolerance ``|f(z)|`` a root must meet.
    max_iter : int
        Iteration budget per seed.
    dedupe_radius : float
        Roots closer than this are merged.
    """

    re_min: float = 0.0
    re_max: float = 10.0
    strip_height: float = 3.0
    seed_spacing: float = math.pi / 4
    tol: float = 1e-11
    max_iter: int = 100
    dedupe_radius: float = 1e-6

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.strip_height, self.seed_spacing, self.tol, self.dedupe_radius)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("scan parameters must be finite")
        if not self.re_min < self.re_max:
            raise DomainError(f"need re_min < re_max, got {self.re_min} >= {self.re_max}")
        if self.strip_height <= 0:
            raise DomainError("strip_height must be positive")
        if self.seed_spacing <= 0:
            raise DomainError("seed_spacing must be positive")
        if self.tol <= 0:
            raise DomainError("tol must be positive")
        if self.dedupe_radius <= 0:
            raise DomainError("dedupe_radius must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError("max_iter must be a positive integer")

    def replace(self, **changes):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d.update(changes)
        return ScanConfig(**d)


@dataclass(frozen=True)
class RootCandidate:
    """A located zero.

    Attributes
    ----------
    z : complex
        The root.
    residual : float
        ``|f(z)|``.
    iterations : int
        Muller iterations spent.
    step : float
        Length of the final Muller step, a proxy for the error in ``z``.
    """

    z: complex
    residual: float
    iterations: int
    step: float


def _in_padded_strip(z, cfg):
    pad = 2.0 * cfg.seed_spacing + 1.0
    return (cfg.re_min - pad <= z.real <= cfg.re_max + pad) and abs(z.imag) <= 2.0 * cfg.strip_height + 1.0


def _safe_eval(f, z):
    try:
        v = complex(f(z))
    except (ArithmeticError, ValueError):
        return None
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return None
    return v


def _muller_once(f, x0, x1, x2, cfg):
    f0, f1, f2 = _safe_eval(f, x0), _safe_eval(f, x1), _safe_eval(f, x2)
    if f0 is None or f1 is None or f2 is None:
        return None, "eval"
    it = 0
    polish = 0
    step = abs(x2 - x1)
    best = (abs(f2), x2, step)
    while it < cfg.max_iter:
        it += 1
        h1 = x1 - x0
        h2 = x2 - x1
        if h1 == 0 or h2 == 0 or h1 + h2 == 0:
            return None, "degenerate"
        d1 = (f1 - f0) / h1
        d2 = (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        disc = cmath.sqrt(b * b - 4.0 * a * f2)
        den = b + disc if abs(b + disc) >= abs(b - disc) else b - disc
        if den == 0:
            return None, "degenerate"
        dx = -2.0 * f2 / den
        x3 = x2 + dx
        if not _in_padded_strip(x3, cfg):
            return None, "escaped"
        f3 = _safe_eval(f, x3)
        if f3 is None:
            return None, "eval"
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f3
        step = abs(dx)
        if abs(f2) <= best[0]:
            best = (abs(f2), x2, step)
        if f2 == 0:
            break
        small_step = step <= _STEP_RTOL * (1.0 + abs(x2))
        if small_step:
            break
        if abs(f2) <= cfg.tol:
            # a few extra steps tighten the root well below tol
            polish += 1
            if polish > _POLISH:
                break
    res, z, step = best
    if res <= cfg.tol:
        return RootCandidate(z, res, it, step), "ok"
    return None, "maxiter"


def muller(f, seeds, cfg):
    """Locate one zero of ``f`` by Muller's method.

    Parameters
    ----------
    f : callable
        Analytic function of one complex variable.
    seeds : sequence of three complex
        Pairwise distinct starting points.
    cfg : ScanConfig
        Supplies ``tol``, ``max_iter`` and the padded strip iterates must stay in.

    Returns
    -------
    RootCandidate or None
        ``None`` when the iteration fails to meet ``tol``.
    """
    x0, x1, x2 = (complex(s) for s in seeds)
    if x0 == x1 or x1 == x2 or x0 == x2:
        raise DomainError("Muller seeds must be pairwise distinct")
    for attempt in range(3):
        cand, why = _muller_once(f, x0, x1, x2, cfg)
        if cand is not None or why != "degenerate":
            return cand
        # collinear or coincident iterates: nudge the seeds and retry
        eps = 1e-3 * (attempt + 1) * (1.0 + abs(x2))
        x0, x1, x2 = x0 - eps, x1 + 1j * eps, x2 + eps * (0.5 + 0.5j)
    return None


def seed_triples(cfg):
    """Deterministic list of Muller seed triples covering the strip."""
    count = max(1, int(math.ceil((cfg.re_max - cfg.re_min) / cfg.seed_spacing)))
    rows = (0.0, 0.5 * cfg.strip_height, -0.5 * cfg.strip_height)
    out = []
    for j in range(count):
        x = cfg.re_min + (j + 0.5) * cfg.seed_spacing
        for y in rows:
            s = complex(x, y)
            out.append((s - 0.01, s + 0.01, s + 0.01j))
    return out


def _dedupe(cands, radius):
    ordered = sorted(cands, key=lambda c: (c.residual, c.z.real, c.z.imag))
    kept = []
    for c in ordered:
        if all(abs(c.z - k.z) >= radius for k in kept):
            kept.append(c)
    return sorted(kept, key=lambda c: (c.z.real, c.z.imag))


def scan_strip(f, cfg, workers=1):
    """Enumerate zeros of ``f`` in the strip described by ``cfg``.

    Parameters
    ----------
    f : callable
        Analytic function; must be safe to call from several threads.
    cfg : ScanConfig
    workers : int, optional
        Thread count for solving seeds. Results do not depend on it.

    Returns
    -------
    list of RootCandidate
        Sorted by ascending real part, pairwise at least ``dedupe_radius``
        apart, each with ``residual <= tol``.
    """
    triples = seed_triples(cfg)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as ex:
            results = list(ex.map(lambda t: muller(f, t, cfg), triples))
    else:
        results = [muller(f, t, cfg) for t in triples]
    found = [
        c
        for c in results
        if c is not None
        and cfg.re_min <= c.z.real <= cfg.re_max
        and abs(c.z.imag) <= cfg.strip_height
        and c.residual <= cfg.tol
    ]
    return _dedupe(found, cfg.dedupe_radius)
