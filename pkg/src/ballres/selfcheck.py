"""Fast invariant checks across all modules.

Each check returns a :class:`CheckResult`. Hard checks decide the exit status
of ``ballres selfcheck``; warning-band checks are reported but never fatal.
Every function is looked up through its module at call time, so a patched
implementation is what gets checked.
"""

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import green, imaging, modes, rootscan, specfun, spectrum


@dataclass
class CheckResult:
    name: str
    passed: bool
    severity: str  # "hard" or "warn"
    detail: str


def _res(name, passed, detail, severity="hard"):
    return CheckResult(name, bool(passed), severity, detail)


def check_wronskian():
    worst = 0.0
    for n in (0, 3, 10, 25):
        for z in (0.7, 3 + 0.5j, 20 - 2j, 60 + 1j):
            j, jp = specfun.sph_bessel_j(n, z), specfun.sph_bessel_j(n, z, derivative=True)
            h, hp = specfun.sph_hankel1(n, z), specfun.sph_hankel1(n, z, derivative=True)
            ref = 1j / (z * z)
            worst = max(worst, abs(j * hp - jp * h - ref) / abs(ref))
    return _res("specfun.wronskian", worst <= 1e-9, f"max rel dev {worst:.2e}")


def check_symmetry():
    worst = 0.0
    for n in (1, 2, 5, 8):
        z = 2.3 + 0.7j
        for f in (specfun.sph_bessel_j, specfun.cal_J):
            a, b = f(n, -z), (-1) ** n * f(n, z)
            worst = max(worst, abs(a - b) / abs(b))
    return _res("specfun.parity", worst <= 1e-12, f"max rel dev {worst:.2e}")


def check_calJ_derivative():
    worst = 0.0
    h = 1e-5
    for n in (1, 3, 5):
        for z in (1.5 + 0.2j, 10 + 1j):
            fd = ((z + h) * specfun.sph_bessel_j(n, z + h) - (z - h) * specfun.sph_bessel_j(n, z - h)) / (2 * h)
            val = specfun.cal_J(n, z)
            worst = max(worst, abs(val - fd) / abs(fd))
    return _res("specfun.calJ_derivative", worst <= 1e-6, f"max rel dev {worst:.2e}")


def check_calH_identity():
    worst = 0.0
    for n in (1, 4, 9):
        for z in (0.8, 4 + 0.3j, 30.0):
            lhs = specfun.sph_bessel_j(n, z) * specfun.cal_H(n, z) - specfun.cal_J(n, z) * specfun.sph_hankel1(n, z)
            worst = max(worst, abs(lhs - 1j / z) / abs(1j / z))
    return _res("specfun.calH_identity", worst <= 1e-9, f"max rel dev {worst:.2e}")


def check_sine_scan():
    cfg = rootscan.ScanConfig(re_min=1, re_max=10, strip_height=1)
    roots = rootscan.scan_strip(lambda z: np.sin(complex(z)), cfg)
    zs = [r.z for r in roots]
    ok = len(zs) == 3 and all(abs(z - m * math.pi) < 1e-10 for z, m in zip(zs, (1, 2, 3)))
    return _res("rootscan.sine_zeros", ok, f"found {len(zs)} roots")


_TM1 = (7.5944, 10.8119, 13.9949, 17.1626)


def check_tm_resonances():
    ctx = spectrum.WaveContext(1.0)
    ms = spectrum.compute_modes(ctx, "TM", 1, 18.0)
    miss = [v for v in _TM1 if not any(abs(m.z.real - v) <= 5e-3 and m.residual <= 1e-10 for m in ms)]
    return _res("spectrum.tm1_resonances", not miss, f"{len(ms)} modes, missing {miss}")


def _batch():
    ctx = spectrum.WaveContext(1.0)
    return spectrum.compute_modes(ctx, "TM", 1, 40.0) + spectrum.compute_modes(ctx, "TE", 5, 40.0)


def check_half_plane(batch):
    rep = spectrum.spectral_report(batch)
    out = [_res("spectrum.im_lambda_positive", rep.ok, f"{len(rep.violations)} violations in {rep.count}")]
    out.append(_res("spectrum.im_lambda_warning_band", not rep.warnings, f"{len(rep.warnings)} modes in band", "warn"))
    return out


def check_continuity(batch):
    worst = max(modes.continuity_jump(m) for m in batch)
    return _res("modes.continuity_at_resonance", worst <= 1e-6, f"max rel jump {worst:.2e}")


def check_lommel():
    r, w = np.polynomial.legendre.leggauss(400)
    r, w = 0.5 * (r + 1), 0.5 * w
    worst = 0.0
    for n, a, b in ((1, 3.0, 7.5 - 0.2j), (6, 12 + 1j, 2.5), (15, 30.0, 31 - 1j)):
        ref = np.sum(w * specfun.sph_bessel_j(n, a * r) * specfun.sph_bessel_j(n, b * r) * r * r)
        worst = max(worst, abs(modes.lommel_radial(n, a, b) - ref) / abs(ref))
        integrand = (
            n * (n + 1) * specfun.sph_bessel_j(n, a * r) * specfun.sph_bessel_j(n, b * r)
            + specfun.cal_J(n, a * r) * specfun.cal_J(n, b * r)
        )
        ref2 = np.sum(w * integrand)
        worst = max(worst, abs(modes.lommel_combined(n, a, b) - ref2) / abs(ref2))
    return _res("modes.lommel_closed_form", worst <= 1e-8, f"max rel dev {worst:.2e}")


def check_green():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        x, y = rng.normal(size=3), rng.normal(size=3)
        worst = max(worst, np.max(np.abs(green.green_free(x, y, 1.3).T - green.green_free(y, x, 1.3))))
    out = [_res("green.reciprocity", worst <= 1e-12, f"max dev {worst:.2e}")]
    x = np.array([1.2, -0.8, 1.3])
    x *= 2 / np.linalg.norm(x)
    y = np.array([0.1, 0.4, -0.2])
    y *= 0.5 / np.linalg.norm(y)
    g, s = green.green_free(x, y, 1.0), green.addition_series(x, y, 1.0, 40)
    dev = np.max(np.abs(g - s)) / np.max(np.abs(g))
    out.append(_res("green.addition_formula", dev <= 1e-8, f"rel dev {dev:.2e}"))
    return out


def check_a0():
    out = []
    a0 = abs(green.mie_a0(green.ContrastContext(1.0, 1.0)))
    out.append(_res("green.a0_vanishes_without_contrast", a0 <= 1e-12, f"|a0| = {a0:.2e}"))
    worst = 0.0
    ctx = spectrum.WaveContext(1.0)
    for kt in (3.0, 7.5, 12.2):
        den = green.resonance_denominator(green.ContrastContext(1.0, kt))
        f = spectrum.f_n2(ctx, 1, kt)
        worst = max(worst, abs(den - f) / abs(f))
    out.append(_res("green.a0_denominator_is_f12", worst <= 1e-12, f"rel dev {worst:.2e}"))
    return out


def check_imaging():
    surf = imaging.MeasurementSurface(100.0, 30)
    ctx = green.ContrastContext(1.0, 1.0)
    ball = imaging.measured_field_ball(ctx, surf)
    free = imaging.measured_field_free(np.zeros(3), green.special_polarization(ctx), 1.0, surf)
    dev = np.max(np.abs(ball.values - free.values)) / np.max(np.abs(free.values))
    out = [_res("imaging.free_space_reduction", dev <= 1e-10, f"rel dev {dev:.2e}")]
    x, z = np.array([0.5, -0.3, 0.8]), np.array([-0.4, 0.9, 0.1])
    p, q = np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])
    radii = np.array([20.0, 40.0, 80.0, 160.0])
    res = np.array([imaging.hk_residual(x, z, p, q, 1.0, imaging.MeasurementSurface(r, 30)) for r in radii])
    slope = float(np.polyfit(np.log(radii), np.log(res), 1)[0])
    bounded = bool(np.all(np.diff(res * radii) <= 0))
    out.append(_res("imaging.hk_residual_bounded", bounded, f"R*residual non-increasing; slope {slope:.3f}"))
    return out


def run_all():
    """Run every check and return the list of results."""
    results = []
    simple = (
        check_wronskian,
        check_symmetry,
        check_calJ_derivative,
        check_calH_identity,
        check_sine_scan,
        check_tm_resonances,
        check_lommel,
    )
    for fn in simple:
        results.extend(_safe(fn))
    batch = None
    try:
        batch = _batch()
    except Exception as exc:  # a broken evaluator must surface as a failed check
        results.append(_res("spectrum.batch", False, f"{type(exc).__name__}: {exc}"))
    if batch:
        results.extend(_safe(lambda: check_half_plane(batch)))
        results.extend(_safe(lambda: check_continuity(batch), "modes.continuity_at_resonance"))
    elif batch is not None:
        results.append(_res("spectrum.batch", False, "no modes found"))
    for fn in (check_green, check_a0, check_imaging):
        results.extend(_safe(fn))
    return results


def _safe(fn, name=None):
    try:
        r = fn()
    except Exception as exc:
        return [_res(name or getattr(fn, "__name__", "check"), False, f"{type(exc).__name__}: {exc}")]
    return r if isinstance(r, list) else [r]


def summary(results):
    hard_fail = [r for r in results if r.severity == "hard" and not r.passed]
    return {"passed": not hard_fail, "failed": [r.name for r in hard_fail], "checks": [asdict(r) for r in results]}


def format_text(results):
    lines = []
    for r in results:
        tag = "PASS" if r.passed else ("FAIL" if r.severity == "hard" else "WARN")
        lines.append(f"{tag:4s} {r.name}: {r.detail}")
    s = summary(results)
    lines.append("selfcheck: " + ("ok" if s["passed"] else "FAILED (" + ", ".join(s["failed"]) + ")"))
    return "\n".join(lines)


def format_json(results):
    return json.dumps(summary(results), indent=2, sort_keys=True)
