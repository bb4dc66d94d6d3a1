"""Self-contained identity and property suite at desk scale.

Each check exercises one cross-module identity with exact arithmetic (or an
exhaustive small enumeration) and reports a one-line detail.  The suite backs
the `verify` subcommand: any failure names the identity that broke, which
also makes the suite a mutation detector for the analytic kernel.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import counting, covkernel
from .digits import AT_LEAST_P, gamma_vector
from .nets import faure_net, verify_net
from .scramble import ScrambleSeed, owen_scramble
from .walsh import WalshIndex, enumerate_L_k, index_add, shell_size, wal_eval


class CheckFailure(AssertionError):
    pass


def expect(cond: bool, msg: str) -> None:
    if not cond:
        raise CheckFailure(msg)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _length_vectors(s: int, total_max: int):
    if s == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _length_vectors(s - 1, total_max - first):
            yield (first,) + rest


def _rational_grid(num: int, den: int):
    return [Fraction(i, den) for i in range(num + 1)]


def check_net_equidistribution() -> str:
    cases = [(2, 4, 2), (3, 3, 3), (5, 2, 4), (7, 1, 2)]
    for b, m, s in cases:
        report = verify_net(faure_net(b, m, s), t=0)
        expect(report.passed, f"base-{b} m={m} s={s} net fails: {report.failure}")
    return f"{len(cases)} nets equidistributed at t=0"


def check_scramble_net_quality() -> str:
    count = 0
    for b, m, s in [(2, 3, 2), (3, 2, 3)]:
        base = faure_net(b, m, s)
        for master in range(3):
            ps = owen_scramble(base, ScrambleSeed(master), precision=m + 4)
            report = verify_net(ps, t=0)
            expect(report.passed,
                   f"scrambled base-{b} m={m} s={s} seed={master}: {report.failure}")
            count += 1
    return f"{count} scrambled nets equidistributed at t=0"


def check_scramble_gamma_preservation() -> str:
    pairs = 0
    for b, m, s in [(2, 3, 2), (3, 2, 3)]:
        base = faure_net(b, m, s)
        ps = owen_scramble(base, ScrambleSeed(17), precision=m + 2)

        def clamp(v):
            # agreement beyond the m input digits is scramble randomness
            return m if v is AT_LEAST_P else min(v, m)

        for i in range(base.n):
            for j in range(base.n):
                if i == j:
                    continue
                before, _ = gamma_vector(base.point(i), base.point(j))
                after, _ = gamma_vector(ps.point(i), ps.point(j))
                expect(tuple(clamp(v) for v in before)
                       == tuple(clamp(v) for v in after),
                       f"pair ({i},{j}) gamma changed: {before} -> {after}")
                pairs += 1
    return f"gamma preserved on {pairs} ordered pairs"


def check_profile_closed_forms() -> str:
    checked = 0
    for b, m, s in [(2, 3, 2), (3, 2, 2), (3, 1, 3)]:
        ps = owen_scramble(faure_net(b, m, s), ScrambleSeed(5), precision=m + 2)
        profile = counting.profile_bruteforce(ps)
        for i in product(range(m + 2), repeat=s):
            expect(profile.exact_count(i) == counting.N_closed_form(b, m, s, i),
                   f"exact-count mismatch at {(b, m, s)}, i={i}")
            expect(profile.at_least_count(i) == counting.M_closed_form(b, m, i),
                   f"dominated-count mismatch at {(b, m, s)}, k={i}")
            checked += 2
    return f"{checked} profile counts equal their closed forms"


def check_pdf_normalization() -> str:
    cases = [(b, m, s) for b in (2, 3) for m in (1, 2, 3) for s in (1, 2, 3)]
    for b, m, s in cases:
        total = counting.pdf_normalization(b, m, s)
        expect(total == 1, f"density integrates to {total} at {(b, m, s)}")
    return f"density integrates to 1 in {len(cases)} configurations"


def check_psi_hat_two_routes() -> str:
    checked = 0
    for b, m, s in [(2, 2, 2), (3, 2, 3)]:
        n = b ** m
        for k_vec in _length_vectors(s, m + 3):
            for idx in enumerate_L_k(b, k_vec):
                if idx.is_zero():
                    continue
                general = covkernel.psi_hat_general(
                    lambda k: counting.M_closed_form(b, m, k), idx, n)
                shell = covkernel.psi_hat_zero_t(b, m, idx)
                expect(general == shell,
                       f"routes disagree at {(b, m, s)}, l={idx.l}: "
                       f"{general} vs {shell}")
                checked += 1
    return f"{checked} indices agree across both coefficient routes"


def check_psi_hat_flat_zone() -> str:
    checked = 0
    for b, m in [(2, 3), (3, 2)]:
        n = b ** m
        for k_vec in _length_vectors(2, m):
            if sum(k_vec) == 0:
                continue
            for idx in enumerate_L_k(b, k_vec):
                value = covkernel.psi_hat_zero_t(b, m, idx)
                expect(value == Fraction(-1, n - 1),
                       f"flat zone broken at b={b}, m={m}, l={idx.l}: {value}")
                checked += 1
    return f"{checked} shallow indices sit at -1/(n-1)"


def check_covariance_vs_witness() -> str:
    checked = 0
    xs = [Fraction(1, 7), Fraction(1, 3), Fraction(2, 3), Fraction(9, 10)]
    for b in (2, 3):
        for m in range(1, 4):
            for s in range(1, 4):
                poly = covkernel.cov_polynomial(b, m, s, Fraction(b - 1, b))
                for x in xs:
                    expect(poly.eval(x) == covkernel.q_s(b, m, s, x),
                           f"polynomial and witness differ at {(b, m, s)}, x={x}")
                    checked += 1
    return f"{checked} evaluations match the witness exactly"


def check_witness_sign() -> str:
    points = 0
    for b in (2, 3):
        for m in range(1, 5):
            for s in range(1, 5):
                for x in _rational_grid(50, 50):
                    v = covkernel.q_s(b, m, s, x)
                    expect(v <= 0, f"positive witness at {(b, m, s)}, x={x}: {v}")
                    points += 1
                expect(covkernel.q_s(b, m, s, 0) == 0, f"nonzero at x=0, {(b, m, s)}")
                expect(covkernel.q_s(b, m, s, 1) == 1 - b ** m,
                       f"wrong endpoint at x=1, {(b, m, s)}")
    return f"witness nonpositive at {points} grid points, endpoints exact"


def check_witness_difference() -> str:
    checked = 0
    xs = [Fraction(1, 10), Fraction(1, 2), Fraction(4, 5)]
    for b in (2, 3):
        for m in range(1, 4):
            for s in range(1, 5):
                for x in xs:
                    diff = (covkernel.q_s(b, m, s - 1, x)
                            - covkernel.q_s(b, m, s, x))
                    closed = covkernel.delta_s(b, m, s, x)
                    expect(diff == closed,
                           f"difference mismatch at {(b, m, s)}, x={x}")
                    parts = (covkernel.delta_first_part(b, m, s, x)
                             + covkernel.delta_second_part(b, m, s, x)
                             - covkernel.delta_second_part(b, m, s - 1, x))
                    expect(parts == closed,
                           f"part split mismatch at {(b, m, s)}, x={x}")
                    expect(closed >= 0,
                           f"negative difference at {(b, m, s)}, x={x}")
                    checked += 1
    return f"{checked} difference evaluations telescope exactly"


def check_beta_identities() -> str:
    rng = random.Random(2024)
    checked = 0
    for _ in range(40):
        a = rng.randint(1, 6)
        bb = rng.randint(1, 6)
        x = Fraction(rng.randint(-8, 12), rng.randint(1, 9))
        direct = covkernel.inc_beta(a, bb, x)
        expect(direct == 1 - covkernel.inc_beta(bb, a, 1 - x),
               f"reflection fails at ({a}, {bb}, {x})")
        expect(direct == covkernel.inc_beta_derivative_form(a, bb, x),
               f"derivative form differs at ({a}, {bb}, {x})")
        checked += 1
    return f"{checked} random beta identities hold"


def check_recurrence_solution() -> str:
    checked = 0
    xs = [Fraction(1, 4), Fraction(1, 2), Fraction(5, 7)]
    for b in (2, 3):
        for m in (1, 2, 3):
            a = Fraction(b - 1, b)
            for s in (1, 2, 3):
                polys = {t: covkernel.cov_polynomial(b, m, t, a)
                         for t in range(s, s + 4)}
                for x in xs:
                    window = [polys[t].eval(x) for t in range(s, s + 4)]
                    res = covkernel.recurrence_residual(b, m, s, x, window)
                    expect(res == 0,
                           f"polynomial residual {res} at {(b, m, s)}, x={x}")
                    window_q = [covkernel.q_s(b, m, t, x)
                                for t in range(s, s + 4)]
                    res_q = covkernel.recurrence_residual(b, m, s, x, window_q)
                    expect(res_q == 0,
                           f"witness residual {res_q} at {(b, m, s)}, x={x}")
                    checked += 2
    return f"{checked} recurrence windows vanish exactly"


def check_hypergeometric_assembly() -> str:
    rng = random.Random(99)
    checked = 0
    while checked < 25:
        b = rng.choice((2, 3, 5))
        m = rng.randint(1, 4)
        s = rng.randint(1, 4)
        x = Fraction(rng.randint(1, 23), 24)
        if x == Fraction(1, b):
            continue
        expect(covkernel.recmain_eval(b, m, s, x) == covkernel.q_s(b, m, s, x),
               f"assembly differs at {(b, m, s)}, x={x}")
        checked += 1
    return f"{checked} assembled values equal the witness"


def check_walsh_orthogonality() -> str:
    checked = 0
    for b in (2, 3):
        k = 2
        net = faure_net(b, k, 1, precision=k)
        for l in range(1, b ** k):
            total = sum(wal_eval(WalshIndex(b, (l,)), p) for p in net)
            expect(abs(total) < 1e-9,
                   f"character sum over the base-{b} grid not zero at l={l}")
            checked += 1
        for k_vec in _length_vectors(2, 3):
            expect(len(enumerate_L_k(b, k_vec)) == shell_size(b, k_vec),
                   f"shell size mismatch at base {b}, k={k_vec}")
            checked += 1
    return f"{checked} character sums and shell sizes verified"


def check_walsh_product_rule() -> str:
    rng = random.Random(7)
    checked = 0
    for b in (2, 3, 5):
        net = faure_net(b, 2, 1, precision=4)
        for _ in range(20):
            k = rng.randrange(0, b ** 3)
            l = rng.randrange(0, b ** 3)
            kl = index_add(b, k, l)
            for p in (net.point(0), net.point(1), net.point(net.n - 1)):
                lhs = (wal_eval(WalshIndex(b, (k,)), p)
                       * wal_eval(WalshIndex(b, (l,)), p))
                rhs = wal_eval(WalshIndex(b, (kl,)), p)
                expect(abs(lhs - rhs) < 1e-9,
                       f"product rule fails at base {b}, k={k}, l={l}")
                checked += 1
    return f"product rule holds at {checked} sample evaluations"


CHECKS = [
    ("net-equidistribution", check_net_equidistribution),
    ("scramble-net-quality", check_scramble_net_quality),
    ("scramble-gamma-preservation", check_scramble_gamma_preservation),
    ("profile-closed-forms", check_profile_closed_forms),
    ("pdf-normalization", check_pdf_normalization),
    ("psi-hat-two-routes", check_psi_hat_two_routes),
    ("psi-hat-flat-zone", check_psi_hat_flat_zone),
    ("covariance-vs-witness", check_covariance_vs_witness),
    ("witness-sign", check_witness_sign),
    ("witness-difference", check_witness_difference),
    ("beta-identities", check_beta_identities),
    ("recurrence-solution", check_recurrence_solution),
    ("hypergeometric-assembly", check_hypergeometric_assembly),
    ("walsh-orthogonality", check_walsh_orthogonality),
    ("walsh-product-rule", check_walsh_product_rule),
]


def verify_all() -> dict:
    """Run every check; never raises.  The report carries one entry per
    check with its timing, plus the overall verdict."""
    results = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            detail = fn()
            passed = True
        except CheckFailure as exc:
            detail = str(exc)
            passed = False
        except Exception as exc:  # a crash is a failure, not an abort
            detail = f"{type(exc).__name__}: {exc}"
            passed = False
        results.append(CheckResult(
            name=name, passed=passed, detail=detail,
            seconds=time.perf_counter() - start))
    return {
        "passed": all(r.passed for r in results),
        "checks": [
            {"name": r.name, "passed": r.passed,
             "detail": r.detail, "seconds": round(r.seconds, 4)}
            for r in results
        ],
    }
