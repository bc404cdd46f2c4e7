import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballres.errors import DomainError
from ballres.rootscan import ScanConfig, muller, scan_strip, seed_triples
from ballres.spectrum import WaveContext, f_n1, f_n2


def triple(s, d=0.01):
    return (s - d, s + d, s + 1j * d)


def test_muller_quadratic():
    cfg = ScanConfig(re_min=-5, re_max=5)
    c = muller(lambda z: z * z + 1, triple(0.1 + 0.9j), cfg)
    assert c is not None
    assert abs(c.z - 1j) <= 1e-12
    assert c.residual <= 1e-12
    assert c.iterations <= cfg.max_iter


def test_muller_cosine_zero():
    cfg = ScanConfig(re_min=0, re_max=5)
    c = muller(lambda z: cmath.cos(z), triple(1.4), cfg)
    assert abs(c.z - math.pi / 2) <= 1e-12


def test_muller_tm_resonance():
    ctx = WaveContext(1.0)
    cfg = ScanConfig(re_min=1, re_max=20)
    c = muller(lambda z: f_n2(ctx, 1, z), triple(7.8), cfg)
    assert abs(c.z.real - 7.5944) <= 5e-4
    assert -0.5 < c.z.imag < 0  # small negative imaginary part
    assert abs(f_n2(ctx, 1, c.z)) <= cfg.tol


def test_muller_reports_failure_without_raising():
    cfg = ScanConfig(re_min=0, re_max=5, max_iter=30)
    assert muller(lambda z: cmath.exp(z), triple(1.0), cfg) is None
    # a function with no root close by escapes the padded strip
    assert muller(lambda z: z - 100.0, triple(1.0), cfg) is None


def test_muller_degenerate_quadratic_is_retried():
    # a constant plus a linear piece: seeds exactly on a line give a vanishing
    # quadratic coefficient, which Muller handles; a flat function cannot converge
    cfg = ScanConfig(re_min=-5, re_max=5)
    c = muller(lambda z: 2 * z - 1, (0.0, 1.0, 2.0), cfg)
    assert abs(c.z - 0.5) <= 1e-14
    assert muller(lambda z: 1.0 + 0j, (0.0, 1.0, 2.0), cfg) is None


def test_muller_rejects_repeated_seeds():
    with pytest.raises(DomainError):
        muller(lambda z: z, (1.0, 1.0, 2.0), ScanConfig())


def test_muller_survives_evaluation_errors():
    def f(z):
        if abs(z) < 0.5:
            raise ZeroDivisionError
        return z - 2

    c = muller(f, triple(1.5), ScanConfig(re_min=0, re_max=4))
    assert c is not None and abs(c.z - 2) <= 1e-12


@pytest.mark.parametrize(
    "kw",
    [
        dict(re_min=2, re_max=1),
        dict(strip_height=0),
        dict(tol=0),
        dict(dedupe_radius=-1),
        dict(seed_spacing=0),
        dict(max_iter=0),
        dict(re_max=float("inf")),
    ],
)
def test_config_validation(kw):
    with pytest.raises(DomainError):
        ScanConfig(**kw)


def test_seed_layout():
    cfg = ScanConfig(re_min=0, re_max=math.pi, strip_height=2)
    seeds = seed_triples(cfg)
    assert len(seeds) == 4 * 3
    mids = sorted({round(t[0].real + 0.01, 12) for t in seeds})
    assert np.allclose(np.diff(mids), math.pi / 4)
    assert {round(t[0].imag, 12) for t in seeds} == {0.0, 1.0, -1.0}


def test_sine_scan():
    cfg = ScanConfig(re_min=1, re_max=10, strip_height=1)
    roots = scan_strip(lambda z: cmath.sin(z), cfg)
    assert [round(r.z.real, 10) for r in roots] == [round(m * math.pi, 10) for m in (1, 2, 3)]
    assert all(abs(r.z.imag) <= 1e-12 for r in roots)


def test_te5_scan_contains_reported_zeros():
    ctx = WaveContext(1.0)
    cfg = ScanConfig(re_min=3, re_max=30)
    roots = scan_strip(lambda z: f_n1(ctx, 5, z), cfg)
    for target in (11.6952, 24.7230):
        assert any(abs(r.z.real - target) <= 5e-3 for r in roots)
    for r in roots:
        assert abs(f_n1(ctx, 5, r.z)) <= cfg.tol


def _check_scan_invariants(f, roots, cfg):
    zs = [r.z for r in roots]
    assert zs == sorted(zs, key=lambda z: (z.real, z.imag))
    for i, a in enumerate(zs):
        assert abs(complex(f(a))) <= cfg.tol  # independent re-evaluation
        assert cfg.re_min <= a.real <= cfg.re_max and abs(a.imag) <= cfg.strip_height
        for b in zs[i + 1 :]:
            assert abs(a - b) >= cfg.dedupe_radius


@pytest.mark.parametrize("n", range(0, 6))
def test_cosine_completeness(n):
    cfg = ScanConfig(re_min=1, re_max=60)
    f = lambda z: cmath.cos(z - n * math.pi / 2)
    roots = scan_strip(f, cfg)
    _check_scan_invariants(f, roots, cfg)
    expected = [(2 * l + 1 + n) * math.pi / 2 for l in range(-n, 40)]
    expected = [x for x in expected if cfg.re_min <= x <= cfg.re_max]
    assert len(roots) == len(expected)
    assert max(abs(r.z - x) for r, x in zip(roots, expected)) <= 1e-12


def test_determinism_and_thread_independence():
    ctx = WaveContext(1.0)
    cfg = ScanConfig(re_min=1, re_max=40)
    f = lambda z: f_n2(ctx, 1, z)
    a = scan_strip(f, cfg)
    b = scan_strip(f, cfg)
    c = scan_strip(f, cfg, workers=4)
    assert a == b == c


def test_empty_result_is_valid():
    cfg = ScanConfig(re_min=0, re_max=5, strip_height=1)
    assert scan_strip(lambda z: cmath.exp(z), cfg) == []


def test_dedupe_keeps_one_representative():
    # every seed near the single root converges there
    cfg = ScanConfig(re_min=0, re_max=4, strip_height=1)
    roots = scan_strip(lambda z: (z - 2.0) * cmath.exp(-((z - 2.0) ** 2) / 50), cfg)
    assert len(roots) == 1 and abs(roots[0].z - 2) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(1.3, 19.7), min_size=1, max_size=5, unique=True))
def test_polynomial_roots_found(rs):
    rs = sorted(rs)
    if min(np.diff(rs), default=1.0) < 0.05:
        return
    cfg = ScanConfig(re_min=1, re_max=20, strip_height=1, tol=1e-9)
    scale = np.prod([max(abs(r), 1.0) for r in rs])

    def f(z):
        return np.prod([(z - r) for r in rs]) / scale

    roots = scan_strip(f, cfg)
    _check_scan_invariants(f, roots, cfg)
    assert len(roots) == len(rs)
    for r, x in zip(roots, rs):
        assert abs(r.z - x) <= 1e-6
