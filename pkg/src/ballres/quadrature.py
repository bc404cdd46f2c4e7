"""Gauss-Legendre rules on intervals, balls and the unit sphere."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .specfun import direction_vectors


@lru_cache(maxsize=64)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n, a=0.0, b=1.0):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[a, b]``."""
    if n < 1:
        raise DomainError("need at least one node")
    x, w = _leggauss(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class SphereRule:
    """Product rule on the unit sphere.

    Attributes
    ----------
    theta, phi, weights : ndarray
        Flattened node angles and weights (weights sum to ``4 pi``).
    order : int
        Spherical-harmonic degree integrated exactly.
    """

    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def points(self):
        """Unit vectors of shape ``(N, 3)``."""
        return direction_vectors(self.theta, self.phi)[0]

    def __len__(self):
        return self.weights.size

    def __iter__(self):
        for t, p, w in zip(self.theta, self.phi, self.weights):
            yield (float(t), float(p)), float(w)


def sphere_quadrature(order):
    """Gauss-Legendre in ``cos theta`` times the trapezoid rule in ``phi``.

    Parameters
    ----------
    order : int
        Every spherical harmonic of degree ``<= order`` is integrated exactly.

    Returns
    -------
    SphereRule
    """
    if isinstance(order, bool) or int(order) != order or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")
    order = int(order)
    n_theta = order // 2 + 1
    n_phi = order + 1
    x, wx = _leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(wx, np.full(n_phi, 2 * np.pi / n_phi))
    return SphereRule(tt.ravel(), pp.ravel(), ww.ravel(), order)
