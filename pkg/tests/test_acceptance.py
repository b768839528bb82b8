"""Acceptance suite: every criterion at its stated tolerance.

Each check records a pass/fail line (see conftest.py); the terminal summary
prints one line per criterion.  The Monte Carlo criteria run 10^5
trajectories per case through the ``fracsub verify`` command and take a few
minutes.
"""
import json
import math
import time

import numpy as np
import pytest
from scipy import integrate, stats

from fracsub import (RngStream, directing_density, extremal_from_wright, green_cdf,
                     green_cf, green_function, leading_density, mittag_leffler,
                     ml_spectral_density, sample_one_sided, sample_stable, stable_cf,
                     stable_pdf, wright_m, wright_m_moment)
from fracsub.cli import main as cli
from fracsub.subordination import tail_mass_estimate
from oracles import LEVY_SMIRNOV_MEDIAN

SQPI = math.sqrt(math.pi)
N_MC = 100_000
CASES = [(2.0, 0.0, 0.8), (1.5, 0.0, 0.9)]
MC_SEED = 7


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# ------------------------------------------------------------------ 1. closed forms

def test_1_mittag_leffler_anchors(record):
    with Timer() as tm:
        e1 = abs(mittag_leffler(1, 1, -1) - math.exp(-1))
        e2 = abs(mittag_leffler(2, 1, -math.pi ** 2) + 1)
    ok = max(e1, e2) <= 1e-12 and tm.elapsed < 1
    assert record(1, "Mittag-Leffler E_1(-1), E_2(-pi^2)", ok,
                  f"err {max(e1, e2):.1e} <= 1e-12, {tm.elapsed:.2f}s")


def test_1_wright_half(record):
    x = np.array([0.0, 0.5, 1.0, 2.0])
    with Timer() as tm:
        err = np.max(np.abs(wright_m(0.5, x) - np.exp(-x * x / 4) / SQPI))
    ok = err <= 1e-10 and tm.elapsed < 1
    assert record(1, "M_1/2 closed form", ok, f"err {err:.1e} <= 1e-10, {tm.elapsed:.2f}s")


def test_1_stable_closed_forms(record):
    x = np.linspace(-5, 5, 11)
    xp = np.where(x > 0, x, 1.0)
    ls = np.where(x > 0, xp ** -1.5 * np.exp(-1 / (4 * xp)) / (2 * SQPI), 0.0)
    with Timer() as tm:
        errs = [np.max(np.abs(stable_pdf((2, 0), x) - np.exp(-x * x / 4) / (2 * SQPI))),
                np.max(np.abs(stable_pdf((1, 0), x) - 1 / (math.pi * (1 + x * x)))),
                np.max(np.abs(stable_pdf((0.5, -0.5), x) - ls))]
    ok = max(errs) <= 1e-10 and tm.elapsed < 1
    assert record(1, "Gauss/Cauchy/Levy-Smirnov on 11 points", ok,
                  f"err {max(errs):.1e} <= 1e-10, {tm.elapsed:.2f}s")


# ------------------------------------------------------------------ 2. cross representations

def test_2_wright_bridge(record):
    x = np.linspace(0.1, 5, 100)
    with Timer() as tm:
        worst = 0.0
        for a in (0.5, 0.75, 1.5, 2.0):
            th = -a if a < 1 else a - 2
            worst = max(worst, np.max(np.abs(stable_pdf((a, th), x) / extremal_from_wright(a, x) - 1)))
    ok = worst <= 1e-7 and tm.elapsed < 30
    assert record(2, "Wright bridge", ok, f"rel err {worst:.1e} <= 1e-7, {tm.elapsed:.1f}s")


def test_2_reciprocity(record):
    x = np.linspace(0.2, 3, 57)
    with Timer() as tm:
        worst = 0.0
        for a in (0.5, 0.75, 1.0):
            bound = 2 - 1 / a
            for th in np.linspace(-bound, bound, 7):
                ths = a * (th + 1) - 1
                if abs(ths) >= 1 and a == 1.0:
                    continue
                lhs = x ** (-(a + 1)) * stable_pdf((1 / a, th), x ** -a)
                worst = max(worst, np.max(np.abs(lhs - stable_pdf((a, ths), x))))
    ok = worst <= 1e-6 and tm.elapsed < 30
    assert record(2, "reciprocity", ok, f"err {worst:.1e} <= 1e-6, {tm.elapsed:.1f}s")


def test_2_spectral_identity(record):
    with Timer() as tm:
        worst = 0.0
        for a in (0.3, 0.5, 0.7):
            for t in (0.5, 1.0, 5.0):
                f = lambda r: math.exp(-r * t) * ml_spectral_density(a, r)
                v = (integrate.quad(f, 0, 1, limit=400, epsabs=1e-13)[0]
                     + integrate.quad(f, 1, np.inf, limit=400, epsabs=1e-13)[0])
                worst = max(worst, abs(v - mittag_leffler(a, 1, -t ** a)))
    ok = worst <= 1e-6 and tm.elapsed < 30
    assert record(2, "spectral identity", ok, f"err {worst:.1e} <= 1e-6, {tm.elapsed:.1f}s")


def test_2_moment_identity(record):
    with Timer() as tm:
        worst = 0.0
        for nu in (0.5, 0.8):
            for d in (0, 1, 2):
                v = integrate.quad(lambda r: r ** d * wright_m(nu, r), 0, np.inf, limit=400)[0]
                worst = max(worst, abs(v - wright_m_moment(nu, d)))
    ok = worst <= 1e-5 and tm.elapsed < 30
    assert record(2, "moment identity", ok, f"err {worst:.1e} <= 1e-5, {tm.elapsed:.1f}s")


# ------------------------------------------------------------------ 3. Green function

def central(p, lo=0.01, hi=0.99):
    xs = np.linspace(-30, 30, 6001)
    c = green_cdf(p, xs, 1.0)
    return xs[(c > lo) & (c < hi)]


def test_3_alpha_two_channel(record):
    x = np.linspace(0, 5, 101)
    with Timer() as tm:
        q = green_function((2, 0, 0.8), x, 1.0, method="quadrature")
        err = np.max(np.abs(q - 0.5 * wright_m(0.4, x)))
    ok = err <= 1e-5 and tm.elapsed < 300
    assert record(3, "alpha=2 channel", ok, f"err {err:.1e} <= 1e-5, {tm.elapsed:.1f}s")


def test_3_beta_near_one_channel(record):
    with Timer() as tm:
        worst = 0.0
        for a in (2.0, 1.5):
            x = central((a, 0, 1.0))
            q = green_function((a, 0, 0.999), x, 1.0, method="quadrature")
            c = green_function((a, 0, 1.0), x, 1.0)
            worst = max(worst, np.max(np.abs(q - c)))
    # absolute sup difference; see the notes on why relative 1e-3 cannot hold
    ok = worst <= 1e-3 and tm.elapsed < 300
    assert record(3, "beta=0.999 vs beta=1 closed form", ok,
                  f"abs err {worst:.1e} <= 1e-3, {tm.elapsed:.1f}s")


def total_mass(p, t):
    gx, gw = np.polynomial.legendre.leggauss(20)
    edges = np.geomspace(1e-9, 1e6, 121)
    a, b = edges[:-1, None], edges[1:, None]
    x = (0.5 * (b - a) * gx + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * gw).ravel()
    m = (green_function(p, x, t) * w).sum() + (green_function(p, -x, t) * w).sum()
    m += green_cdf(p, 1e-9, t) - green_cdf(p, -1e-9, t)
    return m + tail_mass_estimate(p, t, -1e6, 1e6)


def test_3_normalisation(record):
    with Timer() as tm:
        worst = 0.0
        for p in [(2, 0, 0.8), (1.5, 0, 0.9), (1, 0, 1), (0.8, 0, 0.6)]:
            for t in (0.5, 1.0, 5.0):
                worst = max(worst, abs(total_mass(p, t) - 1))
    ok = worst <= 1e-3 and tm.elapsed < 300
    assert record(3, "normalisation", ok, f"err {worst:.1e} <= 1e-3, {tm.elapsed:.1f}s")


def test_3_transform_identity(record):
    b = 0.8
    with Timer() as tm:
        worst = 0.0
        for a in (1.5, 2.0):
            for k, s in [(0.7, 0.5), (1.0, 1.0), (2.0, 2.0)]:
                f = lambda t: math.exp(-s * t) * green_cf((a, 0, b), k, t)[0]
                v = integrate.quad(f, 0, np.inf, limit=200)[0]
                worst = max(worst, abs(v - s ** (b - 1) / (s ** b + k ** a)))
    ok = worst <= 1e-4 and tm.elapsed < 300
    assert record(3, "Laplace identity at 6 (kappa, s)", ok, f"err {worst:.1e} <= 1e-4, {tm.elapsed:.1f}s")


def test_3_inversion_duality(record):
    with Timer() as tm:
        worst = 0.0
        for beta in (0.5, 0.8):
            for T in (0.5, 2.0):
                for Ts in (0.5, 2.0):
                    lhs = integrate.quad(lambda s: directing_density(beta, s, T), 0, Ts,
                                         limit=200)[0]
                    rhs = integrate.quad(lambda t: leading_density(beta, t, Ts), T, np.inf,
                                         limit=200)[0]
                    worst = max(worst, abs(lhs - rhs))
    ok = worst <= 1e-5 and tm.elapsed < 300
    assert record(3, "inversion duality", ok, f"err {worst:.1e} <= 1e-5, {tm.elapsed:.1f}s")


# ------------------------------------------------------------------ 4 and 5. Monte Carlo

def verify_args(p, out, samples, workers=1):
    a, th, b = p
    return ["verify", "--alpha", str(a), "--theta", str(th), "--beta", str(b), "--t", "1",
            "--paths", str(N_MC), "--tau-star", "1e-3", "--seed", str(MC_SEED),
            "--workers", str(workers), "--omit-timing", "--samples", str(samples),
            "-o", str(out)]


@pytest.fixture(scope="module")
def mc_runs(tmp_path_factory):
    """First verify run of each case study: (exit code, report path, samples path, seconds)."""
    d = tmp_path_factory.mktemp("mc")
    runs = {}
    for p in CASES:
        out, smp = d / f"{p[0]}_{p[2]}.json", d / f"{p[0]}_{p[2]}.csv"
        start = time.perf_counter()
        code = cli(verify_args(p, out, smp))
        runs[p] = (code, out, smp, time.perf_counter() - start)
    return d, runs


@pytest.mark.parametrize("p", CASES, ids=lambda p: f"alpha{p[0]}_beta{p[2]}")
def test_4_marginal_law(record, mc_runs, p):
    _, runs = mc_runs
    code, out, _, secs = runs[p]
    rep = json.loads(out.read_text())
    ok = rep["ks_sup"] < 0.01 and code == 0 and secs < 600
    assert record(4, f"KS x(1) alpha={p[0]} beta={p[2]}", ok,
                  f"sup {rep['ks_sup']:.4f} < 0.01 over {rep['n_paths']} paths, {secs:.0f}s")


CF_PARAMS = [(1.5, 0.0), (1.5, -0.5), (0.7, -0.7), (2.0, 0.0)]


def cf_samples():
    return {p: sample_stable(p, RngStream(MC_SEED, i), size=N_MC) for i, p in enumerate(CF_PARAMS)}


def test_4_empirical_cf(record):
    worst = 0.0
    for p, x in cf_samples().items():
        for k in (0.5, 1.0, 2.0):
            z = np.exp(1j * k * x).mean()
            re, im = stable_cf(p, k)
            worst = max(worst, abs(z.real - re), abs(z.imag - im))
    band = 4 / math.sqrt(N_MC)
    assert record(4, "empirical CF", worst < band, f"max dev {worst:.4f} < {band:.4f}")


def test_4_levy_smirnov_median(record):
    t = sample_one_sided(0.5, RngStream(MC_SEED, 100), size=N_MC)
    err = abs(np.median(t) - LEVY_SMIRNOV_MEDIAN)
    ok = err < 0.03 and np.all(t > 0)
    assert record(4, "one-sided median", ok, f"|{np.median(t):.4f} - {LEVY_SMIRNOV_MEDIAN:.4f}| < 0.03")


def divisibility_samples(a):
    one = sample_stable((a, 0.0), RngStream(MC_SEED, 200), size=N_MC)
    parts = sample_stable((a, 0.0), RngStream(MC_SEED, 201), size=(4, N_MC))
    return one, (0.25 ** (1 / a) * parts).sum(axis=0)


def test_4_infinite_divisibility(record):
    crit = 1.628 * math.sqrt(2 / N_MC)
    worst = 0.0
    for a in (0.8, 1.5, 2.0):
        one, summed = divisibility_samples(a)
        worst = max(worst, stats.ks_2samp(one, summed).statistic)
    assert record(4, "infinite divisibility", worst < crit, f"KS {worst:.4f} < {crit:.4f} (1%)")


@pytest.mark.parametrize("p", CASES, ids=lambda p: f"alpha{p[0]}_beta{p[2]}")
def test_5_verify_reproducible(record, mc_runs, p):
    d, runs = mc_runs
    _, out, smp, _ = runs[p]
    out2, smp2 = d / "again.json", d / "again.csv"
    out4, smp4 = d / "w4.json", d / "w4.csv"
    cli(verify_args(p, out2, smp2))
    cli(verify_args(p, out4, smp4, workers=4))
    same_seed = out.read_bytes() == out2.read_bytes() and smp.read_bytes() == smp2.read_bytes()
    workers = out.read_bytes() == out4.read_bytes() and smp.read_bytes() == smp4.read_bytes()
    assert record(5, f"verify alpha={p[0]} beta={p[2]}", same_seed and workers,
                  f"rerun identical={same_seed}, --workers 4 identical={workers}")


def test_5_samplers_reproducible(record):
    a = cf_samples()
    b = cf_samples()
    same = all(a[p].tobytes() == b[p].tobytes() for p in CF_PARAMS)
    same &= all(np.array_equal(x, y) for x, y in zip(divisibility_samples(1.5),
                                                     divisibility_samples(1.5)))
    assert record(5, "sampler streams", same, "bit-identical deviates on rerun")


# ------------------------------------------------------------------ 6. figure data

@pytest.mark.parametrize("p", CASES, ids=lambda p: f"alpha{p[0]}_beta{p[2]}")
def test_6_figure_data_lints(record, tmp_path, capsys, p):
    a, th, b = p
    problems = []
    for n in (10, 100, 1000):
        files = {}
        for kind in ("leading", "parent", "subordinated"):
            f = tmp_path / f"{kind}_{n}.csv"
            args = ["simulate", "--alpha", str(a), "--theta", str(th), "--beta", str(b),
                    "--tau-star", repr(1.0 / n), "--steps", str(n), "--seed", "1",
                    "--plot", kind, "-o", str(f)]
            if cli(args) != 0:
                problems.append(f"simulate {kind} N={n}")
            files[kind] = str(f)
        if cli(["lint", files["leading"], "--monotone", "--require-waiting"]) != 0:
            problems.append(f"leading N={n}")
        if cli(["lint", files["parent"]]) != 0:
            problems.append(f"parent N={n}")
        if cli(["lint", files["subordinated"], "--require-waiting"]) != 0:
            problems.append(f"subordinated N={n}")
        if n == 1000:
            t = np.loadtxt(files["leading"], delimiter=",", skiprows=1)[:, 1]
            jumps = np.diff(t[0::2])
            if jumps.max() < 20 * np.median(jumps):
                problems.append("leading path shows no heavy-tailed jump")
    capsys.readouterr()
    assert record(6, f"lint alpha={a} beta={b}", not problems,
                  "N=10,100,1000 clean" if not problems else ", ".join(problems))
