"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, collected in the ``acceptance
criteria`` section of the pytest terminal summary. Criteria that the
mathematics does not allow as stated are strict xfails; the measured values
are still printed.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate

from ballres import green as gr
from ballres import imaging as im
from ballres import modes as md
from ballres import specfun as sf
from ballres import spectrum as sp
from ballres.modes import MultipoleField

CTX = sp.WaveContext(1.0)
TM1 = (7.5944, 10.8119, 13.9949, 17.1626)
TE5 = (11.6952, 24.7230, 75.2638, 216.7232)


@pytest.fixture(scope="module")
def batches():
    """Mode sequences shared by several criteria, with their scan times."""
    out, times = {}, {}
    t0 = time.perf_counter()
    out["tm1_18"] = sp.compute_modes(CTX, "TM", 1, 18.0)
    times["tm1_18"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    out["te5_220"] = sp.compute_modes(CTX, "TE", 5, 220.0)
    times["te5_220"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    out["tm1_deep"] = sp.compute_modes(CTX, "TM", 1, sp.asymptotic_zero("TM", 1, 60) + 1.0)
    times["tm1_deep"] = time.perf_counter() - t0
    out["te5_deep"] = out["te5_220"]
    out["te1"] = sp.compute_modes(CTX, "TE", 1, sp.asymptotic_zero("TE", 1, 45) + 1.0)
    out["tm5"] = sp.compute_modes(CTX, "TM", 5, sp.asymptotic_zero("TM", 5, 45) + 1.0)
    return out, times


# ---- 1 --------------------------------------------------------------------------------------


def test_c1_tm1_resonances(acceptance):
    t0 = time.perf_counter()
    ms = sp.compute_modes(CTX, "TM", 1, 18.0)
    dt = time.perf_counter() - t0
    worst_d, worst_r = 0.0, 0.0
    for v in TM1:
        m = min(ms, key=lambda m: abs(m.z.real - v))
        worst_d = max(worst_d, abs(m.z.real - v))
        worst_r = max(worst_r, abs(sp.f_n2(CTX, 1, m.z)))
    ok = worst_d <= 5e-3 and worst_r <= 1e-10 and dt < 5
    acceptance("1", ok, f"max |Re z - ref| = {worst_d:.2e}, max residual = {worst_r:.1e}, {dt:.2f} s")
    assert ok


# ---- 2 --------------------------------------------------------------------------------------


def test_c2_te5_zeros(acceptance):
    t0 = time.perf_counter()
    ms = sp.compute_modes(CTX, "TE", 5, 220.0)
    dt = time.perf_counter() - t0
    dist = [min(abs(m.z.real - v) for m in ms) for v in TE5]
    ok = max(dist) <= 5e-3 and dt < 30
    acceptance("2", ok, "distances " + ", ".join(f"{d:.1e}" for d in dist) + f", {dt:.2f} s")
    assert ok


# ---- 3 --------------------------------------------------------------------------------------


def _slopes(ms, lo=5, hi=60):
    sel = [m for m in ms if lo <= m.l_asym <= hi]
    ls = np.log([m.l_asym for m in sel])
    dz = np.log([abs(m.z - m.z_asym) for m in sel])
    dl = np.log([abs(m.lam - m.lam_asym) for m in sel])
    return np.polyfit(ls, dz, 1)[0], np.polyfit(ls, dl, 1)[0], len(sel)


CASES_3 = [
    ("3.tm1.z", "tm1_deep", "z", -1.0, 0.3),
    ("3.tm1.lam", "tm1_deep", "lam", -4.0, 0.4),
    ("3.te5.z", "te5_deep", "z", -1.0, 0.3),
    pytest.param(
        "3.te5.lam", "te5_deep", "lam", -4.0, 0.4,
        marks=pytest.mark.xfail(
            strict=True,
            reason="over l in [5, 60] the TE n=5 eigenvalue error is pre-asymptotic: l |z - zcheck| still "
            "grows from about 2.0 to 3.1, so the fitted slope is about -3.45, outside -4 +- 0.4",
        ),
    ),
]


@pytest.mark.parametrize("key,batch,which,target,tol", CASES_3)
def test_c3_asymptotic_laws(batches, acceptance, key, batch, which, target, tol):
    data, times = batches
    t0 = time.perf_counter()
    sz, sl, count = _slopes(data[batch])
    dt = time.perf_counter() - t0 + times.get(batch, times["te5_220"])
    slope = sz if which == "z" else sl
    ok = abs(slope - target) <= tol and dt < 60 and count == 56
    acceptance(key, ok, f"slope {slope:.3f} (target {target} +- {tol}) over {count} modes, {dt:.2f} s")
    assert ok


# ---- 4 --------------------------------------------------------------------------------------


def test_c4_spectral_invariants(batches, acceptance):
    data, _ = batches
    modes = [m for key in ("tm1_deep", "te5_deep", "te1", "tm5") for m in data[key]]
    rep = sp.spectral_report(modes)
    min_im = min(m.lam.imag for m in modes)
    decreasing, tail = True, 0.0
    for key in ("tm1_deep", "te5_deep", "te1", "tm5"):
        seq = data[key]
        mags = np.array([abs(m.lam) for m in seq])
        decreasing &= bool(np.all(np.diff(mags) < 0))
        inc = np.array([m.lam.imag**2 for m in seq if m.l_asym > 40])
        tail = max(tail, float(inc.max()))
    ok = min_im > -1e-13 and rep.ok and decreasing and tail < 1e-10
    acceptance(
        "4", ok, f"{rep.count} modes, min Im lambda = {min_im:.2e}, |lambda| decreasing: {decreasing}, "
        f"max tail increment {tail:.1e}"
    )
    assert ok


# ---- 5 --------------------------------------------------------------------------------------


def _quad(f):
    v, _ = integrate.quad_vec(lambda r: (lambda c: np.array([c.real, c.imag]))(f(r)), 0, 1, epsabs=0, epsrel=1e-11, limit=400)
    return complex(v[0], v[1])


def test_c5_lommel_oracle(acceptance):
    g = np.random.default_rng(2024)

    def arg():
        y = g.uniform(-2, 2)
        r = g.uniform(max(abs(y), 0.2), 50)
        return complex(math.sqrt(r * r - y * y) * g.choice([-1, 1]), y)

    t0 = time.perf_counter()
    worst1 = worst2 = 0.0
    for _ in range(200):
        n = int(g.integers(1, 21))
        a, b = arg(), arg()
        ref = _quad(lambda r: sf.sph_bessel_j(n, a * r) * sf.sph_bessel_j(n, b * r) * r * r)
        worst1 = max(worst1, abs(md.lommel_radial(n, a, b) - ref) / abs(ref))
        ref2 = _quad(
            lambda r: n * (n + 1) * sf.sph_bessel_j(n, a * r) * sf.sph_bessel_j(n, b * r)
            + sf.cal_J(n, a * r) * sf.cal_J(n, b * r)
        )
        worst2 = max(worst2, abs(md.lommel_combined(n, a, b) - ref2) / abs(ref2))
    dt = time.perf_counter() - t0
    ok = worst1 <= 1e-8 and worst2 <= 1e-8 and dt < 60
    acceptance("5", ok, f"200 cases, max rel err radial {worst1:.1e}, combined {worst2:.1e}, {dt:.1f} s")
    assert ok


# ---- 6 --------------------------------------------------------------------------------------


def test_c6_eigenfunction_property(batches, acceptance):
    data, _ = batches
    ms = data["tm1_18"] + data["te5_220"]
    jump = max(md.continuity_jump(m) for m in ms)
    worst = 0.0
    for fam in ("TE", "TM"):
        for n, m in ((1, 0), (2, -1), (3, 2), (4, 1)):
            f = MultipoleField(fam, "interior", n, m, 4.2 + 0.1j)
            closed = md.tdk_image_trace(f, CTX, 2.0, 0.8, 1.3)
            brute = md.tdk_image_bruteforce(f, CTX, 2.0, 0.8, 1.3)
            worst = max(worst, np.linalg.norm(closed - brute) / np.linalg.norm(closed))
    ok = jump <= 1e-6 and worst <= 1e-5
    acceptance("6", ok, f"{len(ms)} modes, max continuity jump {jump:.1e}; brute-force image rel err {worst:.1e}")
    assert ok


# ---- 7 --------------------------------------------------------------------------------------


def test_c7_localization(batches, acceptance):
    data, _ = batches
    seqs = {("TE", 1): data["te1"], ("TM", 1): data["tm1_deep"], ("TE", 5): data["te5_deep"], ("TM", 5): data["tm5"]}
    ok, parts = True, []
    for key, seq in seqs.items():
        vals = np.array([md.localization_ratio(sp.find_mode(seq, l), 0.5) * l for l in (5, 10, 20, 40)])
        c = float(np.exp(np.mean(np.log(vals))))
        good = bool(np.all(vals >= c / 3) and np.all(vals <= 3 * c))
        ok &= good
        parts.append(f"{key[0]}{key[1]} c={c:.3f} band {vals.min() / c:.2f}..{vals.max() / c:.2f}")
    acceptance("7", ok, "; ".join(parts))
    assert ok


# ---- 8 --------------------------------------------------------------------------------------


def test_c8_large_n_decay(batches, acceptance):
    data, _ = batches
    lam = data["te1"][0].lam
    vals = np.array([abs(md.propagating_phi("TE", n, CTX, lam, 2.0)) for n in range(5, 26)])
    ratios = vals[1:] / vals[:-1]
    ok = bool(np.all(ratios < 1) and np.all(np.diff(ratios) < 0))
    acceptance("8", ok, f"consecutive ratios {ratios[0]:.3f} -> {ratios[-1]:.4f}, strictly shrinking: {ok}")
    assert ok


# ---- 9 --------------------------------------------------------------------------------------


def test_c9_a0(acceptance):
    t0 = time.perf_counter()
    a_free = abs(gr.mie_a0(gr.ContrastContext(1.0, 1.0)))
    kts = np.linspace(1.0, 50.0, 4901)
    mags = np.array([abs(gr.mie_a0(gr.ContrastContext(1.0, float(kt)))) for kt in kts])
    peaks = kts[1:-1][(mags[1:-1] > mags[:-2]) & (mags[1:-1] >= mags[2:])]
    zs = [m.z.real for m in sp.compute_modes(CTX, "TM", 1, 52.0)]
    dist = max(min(abs(p - z) for z in zs) for p in peaks)
    dt = time.perf_counter() - t0
    ok = a_free <= 1e-12 and dist <= 0.05 and dt < 10
    acceptance("9", ok, f"|a0(1,1)| = {a_free:.1e}; {len(peaks)} maxima, max distance {dist:.3f}; {dt:.2f} s")
    assert ok


# ---- 10 -------------------------------------------------------------------------------------


def _hk_configs():
    g = np.random.default_rng(10)
    out = []
    for _ in range(5):
        pts = [g.normal(size=3) for _ in range(4)]
        x = g.uniform(0, 2) * pts[0] / np.linalg.norm(pts[0])
        z = g.uniform(0, 2) * pts[1] / np.linalg.norm(pts[1])
        out.append((x, z, pts[2] / np.linalg.norm(pts[2]), pts[3] / np.linalg.norm(pts[3])))
    return out


@pytest.mark.xfail(
    strict=True,
    reason="the O(1/R) terms of the far-field expansion cancel in the conjugate product, so the "
    "quadrature-converged residual decays like 1/R^2 (slope -2), not with slope -1 +- 0.2",
)
@pytest.mark.parametrize("cfg", range(5))
def test_c10_helmholtz_kirchhoff(acceptance, cfg):
    x, z, p, q = _hk_configs()[cfg]
    radii = np.array([20.0, 40.0, 80.0, 160.0])
    t0 = time.perf_counter()
    res = [im.hk_residual(x, z, p, q, 1.0, im.MeasurementSurface(r, 30)) for r in radii]
    conv = [im.hk_residual(x, z, p, q, 1.0, im.MeasurementSurface(r, 60)) for r in radii]
    dt = time.perf_counter() - t0
    slope = float(np.polyfit(np.log(radii), np.log(res), 1)[0])
    drift = max(abs(a - b) / b for a, b in zip(res, conv))
    ok = abs(slope + 1) <= 0.2 and dt < 60
    acceptance(f"10.{cfg}", ok, f"slope {slope:.3f} (target -1 +- 0.2), quad order 30 vs 60 rel change {drift:.1e}")
    assert ok


# ---- 11 -------------------------------------------------------------------------------------


def test_c11_super_resolution(acceptance):
    base_t = gr.profile_grid(8001, 4.0)
    base_phi = gr.phi_radial(gr.ContrastContext(1.0, 1.0), base_t).imag
    widths = [gr.fwhm(base_t, base_phi)]
    t = gr.profile_grid()
    for kt in TM1:
        widths.append(gr.fwhm(t, gr.phi_radial(gr.ContrastContext(1.0, kt), t).imag))
    base_peak = np.max(np.abs(gr.phi_radial(gr.ContrastContext(1.0, 1.0), t).imag))
    peaks = [np.max(np.abs(gr.phi_radial(gr.ContrastContext(1.0, kt), t).imag)) for kt in (15.0, 25.0)]
    mono = all(b < a for a, b in zip(widths, widths[1:]))
    factor = widths[0] / widths[-1]
    within = all(base_peak / 3 <= v <= 3 * base_peak for v in peaks)
    ok = mono and factor >= 3 and within
    acceptance(
        "11", ok, "FWHM " + ", ".join(f"{w:.4f}" for w in widths) + f" (ratio {factor:.1f}); "
        f"off-resonant peaks {peaks[0] / base_peak:.2f}, {peaks[1] / base_peak:.2f} x baseline"
    )
    assert ok
