"""Replication experiments for scrambled-net integration.

A replication scrambles the base net, evaluates the integrand, and records
the sample mean together with the mean over ordered distinct pairs; across
replications those two statistics estimate the estimator variance and the
pair covariance.  All analytic reference values come from the coefficient
map in exact rationals, so every statistical gate compares noise against a
known number, never against another simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .covkernel import psi_hat_zero_t
from .digits import ConfigurationError
from .nets import PointSet, faure_net
from .scramble import ScrambleSeed, owen_scramble
from .walsh import Coefficient, WalshIndex, WalshPolynomial, random_decay_polynomial


def estimate(ps: PointSet, f: WalshPolynomial) -> complex:
    """Sample mean of f over the point set: exact Walsh exponents per point,
    float summation at the end."""
    values = f.eval_digit_matrix(ps.digits)
    return complex(values.sum() / ps.n)


def build_function(b: int, s: int, spec: Mapping) -> WalshPolynomial:
    """Materialize an integrand from its config description.

    kinds: "wal" (a single Walsh character, field l), "decay" (random series
    from random_decay_polynomial; rational fields as strings), "file" (a
    saved coefficient map).
    """
    kind = spec.get("kind")
    if kind == "wal":
        l = tuple(int(v) for v in spec["l"])
        if len(l) != s:
            raise ConfigurationError(f"index {l} has wrong dimension for s={s}")
        return WalshPolynomial(
            b=b, s=s,
            terms={l: Coefficient(Fraction(1), Fraction(0))},
            metadata={"kind": "wal", "l": list(l)},
        )
    if kind == "decay":
        return random_decay_polynomial(
            b=b, s=s,
            kind=spec["decay"],
            a=Fraction(spec["a"]) if "a" in spec else None,
            x=Fraction(spec["x"]),
            alpha=Fraction(spec.get("alpha", 1)),
            k_max=int(spec["k_max"]),
            seed=int(spec.get("seed", 0)),
        )
    if kind == "file":
        with open(spec["path"], "r", encoding="utf-8") as fh:
            return WalshPolynomial.from_json(fh.read())
    raise ConfigurationError(f"unknown function kind {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    b: int
    m: int
    s: int
    R: int
    seed: int
    function_spec: Mapping
    precision: int | None = None
    threads: int = 1

    def __post_init__(self):
        if self.R < 2:
            raise ConfigurationError(f"need at least 2 replications, got {self.R}")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ExperimentConfig":
        return cls(
            b=int(doc["b"]), m=int(doc["m"]), s=int(doc["s"]),
            R=int(doc["R"]), seed=int(doc.get("seed", 0)),
            function_spec=dict(doc["function"]),
            precision=int(doc["precision"]) if "precision" in doc else None,
            threads=int(doc.get("threads", 1)),
        )

    def build_function(self) -> WalshPolynomial:
        return build_function(self.b, self.s, self.function_spec)


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    n: int
    precision: int
    integral: complex
    integral_weight: Fraction
    est_mean: complex
    est_var: float
    cov_emp: float
    cov_se: float
    cov_analytic: Fraction
    var_mc_analytic: Fraction
    identity_residual: float
    identity_se: float
    estimates: np.ndarray = field(repr=False)
    pair_terms: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "b": cfg.b, "m": cfg.m, "s": cfg.s, "n": self.n,
            "R": cfg.R, "seed": cfg.seed, "precision": self.precision,
            "integral_re": self.integral.real,
            "integral_im": self.integral.imag,
            "est_mean_re": self.est_mean.real,
            "est_mean_im": self.est_mean.imag,
            "est_var": self.est_var,
            "cov_emp": self.cov_emp,
            "cov_se": self.cov_se,
            "cov_analytic": str(self.cov_analytic),
            "cov_analytic_float": float(self.cov_analytic),
            "var_mc_analytic": str(self.var_mc_analytic),
            "var_mc_analytic_float": float(self.var_mc_analytic),
            "identity_residual": self.identity_residual,
            "identity_se": self.identity_se,
        }

    def trace_rows(self):
        for r, (e, t) in enumerate(zip(self.estimates, self.pair_terms)):
            yield r, float(e.real), float(e.imag), float(t)


def _replication_stats(base: PointSet, f: WalshPolynomial,
                       seed: ScrambleSeed, precision: int):
    ps = owen_scramble(base, seed, precision=precision)
    values = f.eval_digit_matrix(ps.digits)
    n = ps.n
    total = values.sum()
    pair = (abs(total) ** 2 - float((np.abs(values) ** 2).sum())) / (n * (n - 1))
    return total / n, pair


def analytic_covariance(f: WalshPolynomial, b: int, m: int) -> Fraction:
    """Exact pair covariance of f over one scrambled t = 0 net."""
    return f.covariance_analytic(lambda idx: psi_hat_zero_t(b, m, idx))


def analytic_variance(f: WalshPolynomial, b: int, m: int) -> Fraction:
    """Exact estimator variance, assembled per index: each nonzero index
    contributes its weight times (1 + (n-1) psi_hat)/n."""
    n = b ** m
    total = Fraction(0)
    zero = (0,) * f.s
    for l, coef in f.terms.items():
        if l == zero:
            continue
        idx = WalshIndex(f.b, l)
        total += coef.weight * (1 + (n - 1) * psi_hat_zero_t(b, m, idx)) / n
    return total


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """R independent scrambles of one base net, with exact reference values.

    Per replication: the sample mean of f and the mean of f(x) conj(f(y))
    over all ordered distinct point pairs.  The pair statistic is computed
    from the identity sum_{i != j} v_i conj(v_j) = |sum v|^2 - sum |v|^2, so
    each replication costs one pass over the points.
    """
    f = cfg.build_function()
    if f.b != cfg.b:
        raise ConfigurationError(f"function base {f.b} does not match {cfg.b}")
    precision = cfg.precision
    if precision is None:
        precision = max(cfg.m, f.max_digit_length(), 1)
    base = faure_net(cfg.b, cfg.m, cfg.s, precision=precision)
    n = base.n

    def one(r: int):
        return _replication_stats(base, f, ScrambleSeed(cfg.seed, r), precision)

    if cfg.threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(one, range(cfg.R)))
    else:
        results = [one(r) for r in range(cfg.R)]

    estimates = np.array([e for e, _ in results], dtype=np.complex128)
    pair_terms = np.array([t for _, t in results], dtype=np.float64)

    coef0 = f.constant_coefficient()
    integral = coef0.to_complex()
    integral_weight = coef0.weight
    R = cfg.R

    est_mean = complex(math.fsum(estimates.real) / R,
                       math.fsum(estimates.imag) / R)
    est_var = math.fsum(abs(e - est_mean) ** 2 for e in estimates) / (R - 1)

    w0 = float(integral_weight)
    cov_emp = math.fsum(pair_terms) / R - w0
    cov_se = float(np.std(pair_terms, ddof=1)) / math.sqrt(R)

    var_mc = f.variance_mc(n)
    deltas = [abs(e - integral) ** 2 - (n - 1) / n * (t - w0)
              for e, t in zip(estimates, pair_terms)]
    identity_residual = math.fsum(deltas) / R - float(var_mc)
    identity_se = float(np.std(np.array(deltas), ddof=1)) / math.sqrt(R)

    return ExperimentReport(
        config=cfg, n=n, precision=precision,
        integral=integral, integral_weight=integral_weight,
        est_mean=est_mean, est_var=est_var,
        cov_emp=cov_emp, cov_se=cov_se,
        cov_analytic=analytic_covariance(f, cfg.b, cfg.m),
        var_mc_analytic=var_mc,
        identity_residual=identity_residual, identity_se=identity_se,
        estimates=estimates, pair_terms=pair_terms,
    )


def variance_identity_check(report: ExperimentReport) -> tuple[float, float]:
    """Absolute residual of the variance decomposition, with its propagated
    standard error.  The residual centers the per-replication square error
    at the exact integral, so the R terms are independent and the standard
    error is the plain one of their mean."""
    return abs(report.identity_residual), report.identity_se
