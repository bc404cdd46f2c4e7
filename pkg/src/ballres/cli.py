"""Command-line front end: reproducible CSV tables for spectra, modes, Green's functions and imaging.

Every command writes CSV with a ``#``-prefixed header recording the version and
the full resolved configuration. Options may also come from an INI file given
with ``--config``; each command reads its own section and flags override it.

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

import argparse
import configparser
import io
import math
import os
import sys

import numpy as np

from . import __version__
from . import green, imaging, modes, selfcheck, spectrum
from .errors import DomainError, ResonanceError
from .rootscan import ScanConfig

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Invalid command-line or configuration input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def workers_from_env():
    """Worker count from the THREADS environment variable (default: CPU count)."""
    raw = os.environ.get("THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("THREADS must be >= 1")
    return n


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class CsvTable:
    """Accumulates header comments, column names and rows."""

    def __init__(self, command, config):
        self.command = command
        self.config = config
        self.comments = []
        self.footer = []
        self.columns = []
        self.rows = []
        self.seed = "none"

    def render(self):
        buf = io.StringIO()
        buf.write(f"# ballres {__version__}\n")
        buf.write(f"# command: {self.command}\n")
        for key in sorted(self.config):
            buf.write(f"# config.{key} = {_fmt_config(self.config[key])}\n")
        buf.write(f"# seed: {self.seed}\n")
        for c in self.comments:
            buf.write(f"# {c}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        for c in self.footer:
            buf.write(f"# {c}\n")
        return buf.getvalue()


def _fmt_config(v):
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return _fmt(v)


def _positive(name):
    def conv(s):
        v = float(s)
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v

    return conv


def _family(s):
    try:
        return spectrum.ModeFamily.parse(s).value
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_at_least(lo):
    def conv(s):
        v = int(s)
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return v

    return conv


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="ballres", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ballres {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="INI file; the section named after the command supplies defaults")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--gnuplot-stub", help="also write a gnuplot script for the CSV to this path")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eig", parents=[common], help="eigenvalue table for one family and degree")
    e.add_argument("--k", type=_positive("k"), default=1.0)
    e.add_argument("--family", type=_family, default="TM")
    e.add_argument("--n", type=_int_at_least(1), default=1)
    e.add_argument("--re-max", type=float, default=18.0)
    _scan_args(e)

    m = sub.add_parser("modes", parents=[common], help="propagating-function profiles")
    m.add_argument("--k", type=_positive("k"), default=1.0)
    m.add_argument("--family", type=_family, default="TE")
    m.add_argument("--n", type=_int_at_least(1), default=5)
    m.add_argument("--l", type=_int_at_least(0), nargs="+", default=[1, 5, 20, 50])
    m.add_argument("--index", choices=("asym", "rank"), default="asym")
    m.add_argument("--grid", type=_int_at_least(2), default=512, help="samples on (0, 1]")
    m.add_argument("--t-max", type=float, default=2.0, help="profiles extend to t-max (> 1 adds the exterior)")
    _scan_args(m)

    g = sub.add_parser("green", parents=[common], help="|a_0| scan or phi(k_tau, t) profiles")
    g.add_argument("--k", type=_positive("k"), default=1.0)
    g.add_argument("--ktau-range", type=float, nargs=2, default=[1.0, 50.0], metavar=("A", "B"))
    g.add_argument("--steps", type=_int_at_least(1), default=4900)
    g.add_argument("--profile", action="store_true", help="emit phi(k_tau, t) profiles instead of the scan")
    g.add_argument("--ktau", type=float, nargs="+", default=[1.0])
    g.add_argument("--points", type=_int_at_least(3), default=2001)

    i = sub.add_parser("image", parents=[common], help="imaging line scans, PSFs and HK tables")
    i.add_argument("--what", choices=("hk", "psf", "line"), default="hk")
    i.add_argument("--k", type=_positive("k"), default=1.0)
    i.add_argument("--radii", type=float, nargs="+", default=[20.0, 40.0, 80.0, 160.0])
    i.add_argument("--quad-order", type=_int_at_least(8), default=30)
    i.add_argument("--configs", type=_int_at_least(1), default=5, help="random HK configurations")
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--ktau", type=float, default=13.9949)
    i.add_argument("--points", type=_int_at_least(2), default=41)
    i.add_argument("--radius", type=float, default=100.0)
    i.add_argument("--z0", type=float, nargs=3, default=[0.0, 0.0, 0.0])
    i.add_argument("--p", type=float, nargs=3, default=[0.0, 0.0, 1.0])
    i.add_argument("--q", type=float, nargs=3, default=[0.0, 0.0, 1.0])
    i.add_argument("--line-from", type=float, nargs=3, default=[-2.0, 0.0, 0.0])
    i.add_argument("--line-to", type=float, nargs=3, default=[2.0, 0.0, 0.0])

    s = sub.add_parser("selfcheck", parents=[common], help="run all invariant suites")
    s.add_argument("--json", action="store_true", help="machine-readable report")
    return p


def _scan_args(p):
    p.add_argument("--strip-height", type=_positive("strip-height"), default=3.0)
    p.add_argument("--seed-spacing", type=_positive("seed-spacing"), default=math.pi / 4)
    p.add_argument("--tol", type=_positive("tol"), default=1e-11)
    p.add_argument("--max-iter", type=_int_at_least(1), default=100)
    p.add_argument("--dedupe-radius", type=_positive("dedupe-radius"), default=1e-6)


_SKIP = {"command", "config", "out", "gnuplot_stub", "handler"}


def _config_defaults(path, command, parser):
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"malformed config file: {exc}") from None
    if not cp.has_section(command):
        return {}
    sub = _subparser(parser, command)
    actions = {a.dest: a for a in sub._actions}
    out = {}
    for key, raw in cp.items(command):
        dest = key.replace("-", "_")
        if dest not in actions or dest in ("command", "config"):
            raise UsageError(f"unknown config key {key!r} in section [{command}]")
        act = actions[dest]
        try:
            if isinstance(act, argparse._StoreTrueAction):
                out[dest] = cp.getboolean(command, key)
            elif act.nargs in ("+", 2, 3):
                out[dest] = [act.type(x) if act.type else x for x in raw.split()]
            else:
                out[dest] = act.type(raw) if act.type else raw
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad value for {key!r}: {exc}") from None
        if act.choices is not None and out[dest] not in act.choices:
            raise UsageError(f"bad value for {key!r}: {raw!r}")
    return out


def _subparser(parser, command):
    for a in parser._actions:
        if isinstance(a, argparse._SubParsersAction):
            return a.choices[command]
    raise KeyError(command)


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _config_defaults(args.config, args.command, parser)
        if defaults:
            sub = _subparser(parser, args.command)
            sub.set_defaults(**defaults)
            args = parser.parse_args(argv)
    return args


def _resolved(args):
    return {k: v for k, v in vars(args).items() if k not in _SKIP}


def _scan_cfg(args):
    return ScanConfig(
        re_min=0.0,
        re_max=args.re_max,
        strip_height=args.strip_height,
        seed_spacing=args.seed_spacing,
        tol=args.tol,
        max_iter=args.max_iter,
        dedupe_radius=args.dedupe_radius,
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eig(args):
    if not args.re_max > args.k:
        raise UsageError(f"--re-max must exceed k = {args.k}")
    ctx = spectrum.WaveContext(args.k)
    cfg = _scan_cfg(args)
    ms = spectrum.compute_modes(ctx, args.family, args.n, args.re_max, cfg, workers=workers_from_env())
    t = CsvTable("eig", _resolved(args))
    t.columns = [
        "family", "n", "l", "re_z", "im_z", "re_lambda", "im_lambda", "residual",
        "dist_z_asym", "dist_lambda_asym", "l_asym", "near_origin",
    ]
    if not ms:
        t.comments.append("warning: no modes found in the scanned strip")
        print("warning: no modes found", file=sys.stderr)
    for m in ms:
        t.rows.append([
            m.family.value, m.n, m.l, m.z.real, m.z.imag, m.lam.real, m.lam.imag, m.residual,
            abs(m.z - m.z_asym), abs(m.lam - m.lam_asym), m.l_asym, m.near_origin,
        ])
    if ms:
        rep = spectrum.spectral_report(ms)
        t.footer.append(f"max_abs_im_z = {_fmt(rep.max_abs_im_z)}")
        t.footer.append(f"im_lambda_violations = {len(rep.violations)}")
    status = EXIT_OK if not ms or spectrum.spectral_report(ms).ok else EXIT_INVARIANT
    return t, status, _gp_eig


def cmd_modes(args):
    if not args.t_max > 0:
        raise UsageError("--t-max must be positive")
    ctx = spectrum.WaveContext(args.k)
    lmax = max(args.l)
    re_max = spectrum.asymptotic_zero(args.family, args.n, lmax + (0 if args.index == "asym" else args.n)) + 2 * math.pi
    args.re_max = re_max
    ms = spectrum.compute_modes(ctx, args.family, args.n, re_max, _scan_cfg(args), workers=workers_from_env())
    t = CsvTable("modes", _resolved(args))
    t.columns = ["l", "t", "re_phi", "im_phi", "re_phi_norm", "im_phi_norm"]
    status = EXIT_OK
    npts = max(1, int(round(args.grid * args.t_max)))
    tt = np.arange(1, npts + 1) * (args.t_max / npts)
    for l in args.l:
        try:
            mode = spectrum.find_mode(ms, l, args.index)
        except DomainError:
            t.comments.append(f"warning: no mode with {args.index} index {l}")
            status = EXIT_INVARIANT
            continue
        phi = modes.propagating_phi(mode.family, mode.n, ctx, mode.lam, tt)
        re_max_abs = np.max(np.abs(phi.real)) or 1.0
        im_max_abs = np.max(np.abs(phi.imag)) or 1.0
        for ti, v in zip(tt, phi):
            t.rows.append([l, ti, v.real, v.imag, v.real / re_max_abs, v.imag / im_max_abs])
        jump = modes.continuity_jump(mode)
        ok = jump <= 1e-6
        if not ok:
            status = EXIT_INVARIANT
        t.footer.append(
            f"continuity l={l} z={_fmt(mode.z.real)}{mode.z.imag:+.6e}j rel_jump={_fmt(jump)} {'ok' if ok else 'FAIL'}"
        )
    return t, status, _gp_modes


def cmd_green(args):
    k = args.k
    t = CsvTable("green", _resolved(args))
    status = EXIT_OK
    if args.profile:
        for kt in args.ktau:
            if kt < k:
                raise UsageError("k_tau must be >= k (tau >= 0)")
        t.columns = ["k_tau", "t", "re_phi", "im_phi"]
        for kt in args.ktau:
            ctx = green.ContrastContext(k, kt)
            # the free-space profile is defined everywhere; widen the window until the main lobe fits
            half = 1.0 if ctx.tau != 0 else 4.0
            grid = green.profile_grid(args.points if half == 1.0 else 4 * args.points - 3, half)
            try:
                phi = green.phi_radial(ctx, grid)
            except ResonanceError as exc:
                t.comments.append(f"warning: {exc}")
                status = EXIT_INVARIANT
                continue
            for ti, v in zip(grid, phi):
                t.rows.append([kt, ti, v.real, v.imag])
            try:
                width = green.fwhm(grid, phi.imag)
                t.footer.append(f"fwhm k_tau={_fmt(kt)} width={_fmt(width)} peak={_fmt(np.max(np.abs(phi.imag)))}")
            except DomainError as exc:
                t.footer.append(f"fwhm k_tau={_fmt(kt)} unavailable: {exc}")
        return t, status, _gp_profile
    a, b = args.ktau_range
    if not (a >= k and b > a):
        raise UsageError("--ktau-range needs k <= A < B")
    kts = np.linspace(a, b, args.steps + 1)
    t.columns = ["k_tau", "re_a0", "im_a0", "abs_a0"]
    mags = []
    for kt in kts:
        try:
            a0 = green.mie_a0(green.ContrastContext(k, float(kt)))
        except ResonanceError:
            a0 = complex("nan")
            status = EXIT_INVARIANT
        mags.append(abs(a0))
        t.rows.append([float(kt), a0.real, a0.imag, abs(a0)])
    mags = np.array(mags)
    peaks = [i for i in range(1, len(mags) - 1) if mags[i] > mags[i - 1] and mags[i] >= mags[i + 1]]
    t.footer.append("local_maxima k_tau = " + " ".join(_fmt(float(kts[i])) for i in peaks))
    return t, status, _gp_a0


def cmd_image(args):
    k = args.k
    t = CsvTable("image", _resolved(args))
    if args.what == "hk":
        radii = np.array(sorted(args.radii))
        if len(radii) < 2 or np.any(radii <= 1):
            raise UsageError("--radii needs at least two values > 1")
        rng = np.random.default_rng(args.seed)
        t.columns = ["config", "radius", "residual"]
        for c in range(args.configs):
            x, z = _rand_point(rng, 2.0), _rand_point(rng, 2.0)
            p, q = _rand_unit(rng), _rand_unit(rng)
            res = [imaging.hk_residual(x, z, p, q, k, imaging.MeasurementSurface(r, args.quad_order)) for r in radii]
            for r, v in zip(radii, res):
                t.rows.append([c, float(r), v])
            slope = np.polyfit(np.log(radii), np.log(res), 1)[0]
            t.footer.append(f"slope config={c} value={_fmt(float(slope))}")
        t.seed = args.seed
        return t, EXIT_OK, _gp_hk
    if args.what == "psf":
        if args.ktau < k:
            raise UsageError("k_tau must be >= k")
        ctx = green.ContrastContext(k, args.ktau)
        if args.points < 3:
            raise UsageError("--points must be >= 3 for a profile")
        grid = green.profile_grid(args.points, 1.0)
        psf = imaging.point_spread(ctx, grid)
        t.columns = ["t", "psf"]
        for ti, v in zip(grid, psf):
            t.rows.append([ti, v])
        try:
            t.footer.append(f"fwhm = {_fmt(green.fwhm(grid, psf))}")
        except DomainError as exc:
            t.footer.append(f"fwhm unavailable: {exc}")
        return t, EXIT_OK, _gp_psf
    # line scan of the imaging functional for a free-space dipole
    try:
        pts = imaging.line_grid(args.line_from, args.line_to, args.points)
        surf = imaging.MeasurementSurface(args.radius, args.quad_order)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    p = np.asarray(args.p) / np.linalg.norm(args.p)
    q = np.asarray(args.q) / np.linalg.norm(args.q)
    data = imaging.measured_field_free(np.asarray(args.z0), p, k, surf)
    img = imaging.imaging_functional(data, k, pts, q)
    ref = np.array([q @ green.green_free_imag(z, np.asarray(args.z0), k) @ p for z in pts]) / k
    t.columns = ["x", "y", "z", "re_qI", "im_qI", "im_g0_over_k"]
    for z, v, r in zip(pts, img, ref):
        t.rows.append([z[0], z[1], z[2], v.real, v.imag, r])
    return t, EXIT_OK, _gp_line


def _rand_point(rng, rmax):
    v = rng.normal(size=3)
    return rng.uniform(0, rmax) * v / np.linalg.norm(v)


def _rand_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def cmd_selfcheck(args):
    results = selfcheck.run_all()
    text = selfcheck.format_json(results) if args.json else selfcheck.format_text(results)
    status = EXIT_OK if selfcheck.summary(results)["passed"] else EXIT_INVARIANT
    return text + "\n", status, None


# ---------------------------------------------------------------------------
# gnuplot stubs
# ---------------------------------------------------------------------------


def _gp(csv, body):
    return "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n" + body.format(csv=csv)


def _gp_eig(csv):
    return _gp(csv, "set xlabel 'Re z'\nset ylabel 'Im z'\nplot '{csv}' using 4:5 with points\n")


def _gp_modes(csv):
    return _gp(csv, "set xlabel 't'\nplot '{csv}' using 2:5 with lines title 'Re phi (normalized)'\n")


def _gp_profile(csv):
    return _gp(csv, "set xlabel 't'\nplot '{csv}' using 2:4 with lines title 'Im phi'\n")


def _gp_a0(csv):
    return _gp(csv, "set xlabel 'k_tau'\nset ylabel '|a_0|'\nplot '{csv}' using 1:4 with lines\n")


def _gp_hk(csv):
    return _gp(csv, "set logscale xy\nplot '{csv}' using 2:3 with points\n")


def _gp_psf(csv):
    return _gp(csv, "set xlabel 't'\nplot '{csv}' using 1:2 with lines\n")


def _gp_line(csv):
    return _gp(csv, "plot '{csv}' using 1:4 with lines, '' using 1:6 with lines\n")


COMMANDS = {"eig": cmd_eig, "modes": cmd_modes, "green": cmd_green, "image": cmd_image, "selfcheck": cmd_selfcheck}


def main(argv=None, stdout=None):
    """Entry point; returns the process exit code."""
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        out, status, gp = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ballres: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ballres: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = out.render() if isinstance(out, CsvTable) else out
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        try:
            stdout.write(text)
            stdout.flush()
        except BrokenPipeError:  # reader closed early (e.g. piped into head)
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
            return status
    if args.gnuplot_stub and gp is not None:
        with open(args.gnuplot_stub, "w", encoding="utf-8") as fh:
            fh.write(gp(args.out or "data.csv"))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
