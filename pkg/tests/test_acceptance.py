"""End-to-end acceptance gate: one test per published criterion.

Each test records a PASS/FAIL line (printed after the summary) and then
asserts, so the terminal shows the whole gate at a glance.  Criterion 9
is expected to fail: reduction of integer triples out to 10^6 does not
cover the nonzero surface points for most moduli in range — the measured
coverage is reported in the failure detail rather than papered over.
"""

import itertools
import json
import math

import numpy as np
import pytest

from markoff_forge import cli
from markoff_forge.conics import (
    _moving_pair,
    cascade_certify,
    conic_points,
    level_census,
    rotation_tables,
)
from markoff_forge.dioph import count_eq5, cz_bound, subgroup, unity_audit
from markoff_forge.modmath import eigen_order, primes_upto
from markoff_forge.orbits import decompose, orbit_of
from markoff_forge.spectral import dense_lambda2, spectral_gap
from markoff_forge.surface import ResiduePoint, SurfaceSpec, enumerate_keys
from markoff_forge.tree import (
    check_uniqueness,
    congruence_check,
    markoff_numbers,
    primality_census,
    reduction_cover,
    zagier_fit,
)

MARKOFF = SurfaceSpec.markoff(0)

SPHERE_FILE = """\
alpha = 1 0 0 0 1 0 0 0 1
beta = 0 0 0
gamma = -1
delta = 0
"""


def odd_primes(lo, hi):
    return [p for p in primes_upto(hi) if p >= lo]


def test_criterion_01_two_orbit_scan(criterion, tmp_path):
    bad = []
    for p in odd_primes(5, 2000):
        rep = decompose(MARKOFF, p)
        if not (rep.conjecture1 and rep.orbit_sizes == [rep.n_points - 1, 1]):
            bad.append(p)
    # a surface with fragmented orbits must exit with the flag code
    sphere = tmp_path / "sphere.surface"
    sphere.write_text(SPHERE_FILE)
    flag = cli.run(
        ["orbits", "--modulus", "7", "--surface-file", str(sphere),
         "--out", str(tmp_path / "o.jsonl")]
    )
    ok = not bad and flag == 3
    criterion(
        "01 two-orbit decomposition for all primes 5..2000",
        ok,
        f"{len(odd_primes(5, 2000))} primes checked; counterexamples={bad}; "
        f"fragmented-surface exit code {flag}",
    )
    assert ok, (bad, flag)


def test_criterion_02_point_counts(criterion):
    worst = 0.0
    for p in odd_primes(5, 300):
        n_star = len(enumerate_keys(MARKOFF, p)) - 1
        worst = max(worst, abs(n_star - p * p) / p)
    exact = True
    for q in range(2, 51):
        r = np.arange(q, dtype=np.int64)
        x1, x2, x3 = np.meshgrid(r, r, r, indexing="ij")
        on = (x1 * x1 + x2 * x2 + x3 * x3 - 3 * x1 * x2 * x3) % q == 0
        brute = np.sort(x1[on] + q * x2[on] + q * q * x3[on])
        if not np.array_equal(np.sort(enumerate_keys(MARKOFF, q)), brute):
            exact = False
            break
    ok = worst <= 10.0 and exact
    criterion(
        "02 nonzero point count within 10p of p^2; enumeration exact to q=50",
        ok,
        f"max |count - p^2|/p = {worst:.3f}; triple-loop equality={exact}",
    )
    assert ok


def test_criterion_03_rotation_orders(criterion):
    bad_div = []
    for p in odd_primes(5, 500):
        for desc, maximal in level_census(MARKOFF, p):
            t = desc.matrix_order
            if p * (p - 1) * (p + 1) % t:
                bad_div.append((p, desc.level))
            if desc.kind == "split" and (p - 1) % t:
                bad_div.append((p, desc.level))
            if desc.kind == "nonsplit" and (p + 1) % t:
                bad_div.append((p, desc.level))
            if desc.kind == "parabolic" and t not in (p, 2 * p):
                bad_div.append((p, desc.level))
    bad_max = []
    for p in odd_primes(5, 97):
        tabs = rotation_tables(MARKOFF, p)
        for desc, maximal in level_census(MARKOFF, p):
            pts = conic_points(MARKOFF, p, desc.fixed_index, desc.level)
            if not pts:
                if maximal:
                    bad_max.append((p, desc.level))
                continue
            u, v = _moving_pair(pts[0].as_tuple(), desc.fixed_index)
            if (tabs.cycle_length(u, v, desc.level) == len(pts)) != maximal:
                bad_max.append((p, desc.level))
    bad_eig = []
    for p in odd_primes(5, 97):
        for s in range(p):
            _, order = eigen_order(s, p)
            direct = _matrix_order(s, p)
            if order != direct:
                bad_eig.append((p, s, order, direct))
    ok = not bad_div and not bad_max and not bad_eig
    criterion(
        "03 rotation orders divide p(p-1)(p+1); maximality and orders exact",
        ok,
        f"divisibility breaches={bad_div[:3]}; maximality breaches={bad_max[:3]}; "
        f"order disagreements={bad_eig[:3]}",
    )
    assert ok


def _matrix_order(s, p):
    ident = (1, 0, 0, 1)
    m = ident
    for n in range(1, 3 * p + 2):
        ma, mb, mc, md = m
        m = (mb % p, (-ma + s * mb) % p, md % p, (-mc + s * md) % p)
        if m == ident:
            return n
    return -1


def test_criterion_04_cascade_endpoints(criterion):
    rng = np.random.default_rng(20260819)
    strays = []
    n_checked = n_failed = 0
    for p in odd_primes(5, 200):
        keys = enumerate_keys(MARKOFF, p)
        keys = keys[keys != 0]
        picks = rng.choice(keys, size=min(1000, len(keys)), replace=False)
        rep = decompose(MARKOFF, p)
        giant_rank = int(np.argmax(np.asarray(rep.orbit_sizes)))
        for key in sorted(int(k) for k in picks):
            chain = cascade_certify(MARKOFF, p, ResiduePoint.from_key(key, p))
            if chain is None:
                n_failed += 1
                continue
            n_checked += 1
            rank, _ = orbit_of(MARKOFF, p, ResiduePoint(*chain[-1].point, p))
            if rank != giant_rank:
                strays.append((p, key))
    ok = not strays
    criterion(
        "04 cascade endpoints land in the giant orbit (1000 starts/prime)",
        ok,
        f"{n_checked} certificates verified, {n_failed} bounded-search failures, "
        f"{len(strays)} strays",
    )
    assert ok, strays[:5]


def test_criterion_05_pair_counts(criterion):
    mismatch = []
    bound_breach = []
    for p in odd_primes(3, 60):
        divs = [d for d in range(1, p) if (p - 1) % d == 0]
        groups = {d: subgroup(p, d) for d in divs}
        for d1, d2 in itertools.product(divs, repeat=2):
            h1, h2 = groups[d1].elements(), groups[d2].elements()
            for b in range(2, p):
                fast = count_eq5(p, b, groups[d1], groups[d2])
                slow = 0
                for x in h1:
                    lhs = (x + b * pow(x, -1, p)) % p
                    for y in h2:
                        if (y + pow(y, -1, p)) % p == lhs:
                            slow += 1
                if fast != slow:
                    mismatch.append((p, b, d1, d2))
                if fast > 2 * d2:
                    bound_breach.append((p, b, d1, d2))
    hand = (
        abs(cz_bound(1, 1, 13) - 20.0) < 1e-12
        and abs(cz_bound(12, 12, 13) - 20.0 * 144 / 13) < 1e-12
        and abs(cz_bound(8, 8, 1009) - 80.0) < 1e-12
    )
    ok = not mismatch and not bound_breach and hand
    criterion(
        "05 subgroup pair counts exact to p=60; trivial bound holds",
        ok,
        f"mismatches={mismatch[:3]}; bound breaches={bound_breach[:3]}; "
        f"benchmark hand values ok={hand}",
    )
    assert ok


def test_criterion_06_unity_search(criterion):
    audit = unity_audit(MARKOFF, 60)
    sols = audit.solutions
    ok = (
        len(sols) == 1
        and sols[0].trivial
        and sols[0].orders == (4, 4, 4)
        and audit.disagreements == ()
    )
    criterion(
        "06 root-of-unity search to order 60 finds only the trivial family",
        ok,
        f"{audit.n_values} grid values, {audit.n_candidates} screen candidates, "
        f"{len(sols)} solutions, {len(audit.disagreements)} screen/exact splits",
    )
    assert ok


def test_criterion_07_markoff_numbers(criterion):
    members, _ = markoff_numbers(200)
    prefix_ok = sorted(members) == [1, 2, 5, 13, 29, 34, 89, 169, 194]
    dupes = check_uniqueness(10**12)
    congr = {
        p: congruence_check(10**9, p)
        for p in odd_primes(5, 199)
        if p % 4 == 3
    }
    congr_bad = {p: v for p, v in congr.items() if v}
    ok = prefix_ok and not dupes and not congr_bad
    criterion(
        "07 number prefix exact; no repeated maxima to 1e12; congruences clean",
        ok,
        f"prefix ok={prefix_ok}; duplicate maxima={dupes}; "
        f"{len(congr)} moduli swept, violations={congr_bad}",
    )
    assert ok


def test_criterion_08_growth_constant(criterion):
    rows = zagier_fit([10 ** e for e in range(3, 31, 3)])
    last, prev = rows[-1].c_hat, rows[-2].c_hat
    drift = abs(last - prev) / prev
    ok = drift < 0.20
    criterion(
        "08 growth constant drifts <20% between 1e27 and 1e30",
        ok,
        f"c_hat(1e27)={prev:.6f}, c_hat(1e30)={last:.6f}, drift={100 * drift:.2f}%",
    )
    assert ok


def test_criterion_09_reduction_cover(criterion):
    covers = {q: reduction_cover(10**6, q) for q in primes_upto(50)}
    short = {q: round(c, 4) for q, c in covers.items() if c < 1.0}
    ok = not short
    criterion(
        "09 reduced triples cover all nonzero points mod q<=50 at T=1e6",
        ok,
        f"full cover for {sorted(q for q in covers if q not in short)}; "
        f"short: {short}",
    )
    # Expected red: the tree below 1e6 is too sparse for most q in range.
    # Coverage is monotone in T but reaches 1.0 only at astronomically
    # larger thresholds for the larger moduli; see the recorded fractions.
    assert ok, f"coverage incomplete at T=1e6: {short}"


def test_criterion_10_primality_trend(criterion):
    early = primality_census(10**3)
    late = primality_census(10**20)
    r_early = early.n_prime / early.n_triples
    r_late = late.n_prime / late.n_triples
    ok = r_late < r_early
    criterion(
        "10 prime fraction falls from T=1e3 to T=1e20",
        ok,
        f"ratio(1e3)={early.n_prime}/{early.n_triples}={r_early:.3f}, "
        f"ratio(1e20)={late.n_prime}/{late.n_triples}={r_late:.3f}",
    )
    assert ok


def test_criterion_11_spectral_gaps(criterion):
    agree_bad = []
    for p in odd_primes(5, 31):
        rep = spectral_gap(MARKOFF, p)
        if abs(rep.lambda2 - dense_lambda2(MARKOFF, p)) > 1e-6:
            agree_bad.append(p)
    gaps = {}
    for p in odd_primes(5, 31):
        gaps[p] = spectral_gap(MARKOFF, p).gap
    for p, tol in ((101, 1e-9), (199, 1e-9), (307, 1e-9), (499, 1e-8)):
        gaps[p] = spectral_gap(MARKOFF, p, tol=tol).gap
    min_p, min_gap = min(gaps.items(), key=lambda kv: kv[1])
    ok = not agree_bad and min_gap > 1e-3
    criterion(
        "11 walk spectrum matches dense oracle; gap above 1e-3 on tested set",
        ok,
        f"dense disagreements={agree_bad}; min gap {min_gap:.5f} at p={min_p} "
        f"over {sorted(gaps)}",
    )
    assert ok


def test_criterion_12_determinism(criterion, tmp_path):
    invocations = {
        "orbits": ["orbits", "--modulus", "13"],
        "scan": ["scan", "--start", "5", "--stop", "30"],
        "conics": ["conics", "--modulus", "13"],
        "certify": ["certify", "--modulus", "29", "--starts", "20", "--seed", "3"],
        "eq5": ["eq5", "--prime", "13", "--b", "2", "--d1", "12", "--d2", "12"],
        "unity": ["unity", "--max-order", "12"],
        "tree": ["tree", "--limit", "1000000", "--check", "census"],
        "spectral": ["spectral", "--prime", "11"],
    }
    unstable = []
    for name, argv in invocations.items():
        payloads = []
        for run_idx in (0, 1):
            out = tmp_path / f"{name}{run_idx}.jsonl"
            code = cli.run(argv + ["--out", str(out)])
            assert code == 0, (name, code)
            records = [json.loads(line) for line in out.read_text().splitlines()]
            payloads.append([r["payload"] for r in records])
        if payloads[0] != payloads[1]:
            unstable.append(name)
    ok = not unstable
    criterion(
        "12 every subcommand repeats with identical payloads",
        ok,
        f"{len(invocations)} subcommands doubled; unstable={unstable}",
    )
    assert ok
