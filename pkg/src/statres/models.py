"""Observation models and likelihood-ratio tests for one source versus two.

Given bin intensities lambda_i = eta * t * p_i, three models of the photon
record Y = (Y_1, ..., Y_n) are supported:

* ``poisson``  Y_i ~ Poi(lambda_i), the physical counting model.
* ``vsg``      Y_i ~ N(2 sqrt(lambda_i), 1), the variance-stabilized
               Gaussian limit of root counts.
* ``hg``       Y_i ~ N(lambda_i, 1), homogeneous Gaussian readings with
               unit noise independent of the signal.

The detection efficiency ``thinning`` (eta) enters every formula only
through the product eta * t.

For the two Gaussian models the log-likelihood-ratio statistic T of the
null bin profile p0 against the alternative p1 is exactly normal,

    T ~ N(-m, 2m) under the null,    T ~ N(+m, 2m) under the alternative,

with m the model's separation measure (``hg_mu`` or ``vsg_nu``), so level
and power have closed forms. The Poisson statistic sum(Y_i log(p1_i/p0_i))
is treated by a central-limit report or by Monte Carlo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .binning import BinProbabilities
from .exceptions import (ModelAssumptionError, ParameterError,
                         UnsupportedMethodError)

MODEL_KINDS = ("poisson", "vsg", "hg")


@dataclass(frozen=True)
class NoiseModel:
    """Observation model kind plus detector thinning eta in (0, 1]."""

    kind: str
    thinning: float = 1.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ParameterError(f"unknown model kind {self.kind!r}")
        if not 0.0 < self.thinning <= 1.0:
            raise ParameterError("thinning eta must lie in (0, 1]")


@dataclass(frozen=True)
class RngState:
    """Reproducible random state: a root seed plus a stream index.

    Generators derive from numpy's SeedSequence with the stream (and any
    further subkeys) as the spawn key, so draws are independent of worker
    count and execution order.
    """

    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream < 0:
            raise ParameterError("seed and stream must be >= 0")

    def generator(self, *subkeys: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed,
                                    spawn_key=(self.stream, *subkeys))
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class TestReport:
    """Level, power and threshold of one test; mc_se = 0 for closed forms."""

    threshold: float
    level: float
    power: float
    mc_se: float = 0.0
    reps: int = 0


def normal_cdf(x) -> np.ndarray:
    """Standard normal distribution function."""
    return ndtr(np.asarray(x, dtype=float))


def normal_quantile(p) -> np.ndarray:
    """Standard normal quantile function; requires p strictly in (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ParameterError("quantile argument must lie in (0, 1)")
    return ndtri(p)


def _check_t(t: float) -> None:
    if not t >= 1.0:
        raise ParameterError("illumination time t must be >= 1")


def _resolve_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    raise ParameterError("rng must be an RngState or numpy Generator")


def sample_observations(model: NoiseModel, p, t: float, rng,
                        reps: int | None = None) -> np.ndarray:
    """Draw one observation vector (or a reps-by-n matrix) for bin
    probabilities p under the given model.

    Deterministic given the RngState: repeated calls with the same state
    return the same draws.
    """
    _check_t(t)
    p = np.asarray(p, dtype=float)
    lam = model.thinning * t * p
    gen = _resolve_generator(rng)
    size = p.shape if reps is None else (reps, p.size)
    if model.kind == "poisson":
        if np.any(lam <= 0.0):
            raise ModelAssumptionError(
                "poisson model requires strictly positive bin means")
        return gen.poisson(lam, size=size).astype(float)
    if np.any(lam < 0.0):
        raise ModelAssumptionError("bin intensities must be >= 0")
    noise = gen.standard_normal(size)
    if model.kind == "vsg":
        return 2.0 * np.sqrt(lam) + noise
    return lam + noise


def _statistic_terms(model: NoiseModel, probs: BinProbabilities, t: float):
    """Constant and per-bin coefficient of the LRT statistic T = c + Y @ a."""
    tau = model.thinning * t
    p0, p1 = probs.p0, probs.p1
    if model.kind == "hg":
        coeff = tau * (p1 - p0)
        const = 0.5 * tau ** 2 * (p0 @ p0 - p1 @ p1)
        return const, coeff
    if model.kind == "vsg":
        if np.any(p0 < 0.0) or np.any(p1 < 0.0):
            raise ModelAssumptionError("vsg model requires p >= 0")
        coeff = 2.0 * math.sqrt(tau) * (np.sqrt(p1) - np.sqrt(p0))
        const = 2.0 * tau * (np.sum(p0) - np.sum(p1))
        return const, coeff
    if np.any(p0 <= 0.0) or np.any(p1 <= 0.0):
        raise ModelAssumptionError(
            "poisson likelihood ratio requires strictly positive p0 and p1")
    return 0.0, np.log(p1 / p0)


def lrt_statistic(model: NoiseModel, probs: BinProbabilities, t: float, y):
    """Log-likelihood-ratio statistic of p1 against p0 for observations y.

    Accepts a single observation vector of length n (returns a float) or a
    matrix with one observation per row (returns a vector).
    """
    _check_t(t)
    const, coeff = _statistic_terms(model, probs, t)
    y = np.asarray(y, dtype=float)
    stat = const + y @ coeff
    if y.ndim == 1:
        return float(stat)
    return stat


def hg_mu(probs: BinProbabilities, t: float, eta: float = 1.0) -> float:
    """Separation measure of the homogeneous Gaussian test."""
    tau = eta * t
    diff = probs.p1 - probs.p0
    return 0.5 * tau ** 2 * float(diff @ diff)


def vsg_nu(probs: BinProbabilities, t: float, eta: float = 1.0) -> float:
    """Separation measure of the variance-stabilized Gaussian test."""
    tau = eta * t
    diff = np.sqrt(probs.p1) - np.sqrt(probs.p0)
    return 2.0 * tau * float(diff @ diff)


def separation_measure(model: NoiseModel, probs: BinProbabilities,
                       t: float) -> float:
    """The model's m with thinning applied; Poisson has no closed form."""
    if model.kind == "hg":
        return hg_mu(probs, t, eta=model.thinning)
    if model.kind == "vsg":
        return vsg_nu(probs, t, eta=model.thinning)
    raise UnsupportedMethodError(
        "no closed-form separation measure for the poisson model; "
        "use poisson_clt_report or mc_error_rates")


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0, 1)")


def exact_error_rates(model: NoiseModel, probs: BinProbabilities, t: float,
                      alpha: float) -> TestReport:
    """Exact level and power of the level-alpha LRT for hg and vsg.

    With m the separation measure, the statistic is N(-m, 2m) under the
    null and N(+m, 2m) under the alternative, so the threshold is
    sqrt(2m) z_(1-alpha) - m and the power is Phi(sqrt(2m) - z_(1-alpha)).
    """
    _check_t(t)
    _check_alpha(alpha)
    m = separation_measure(model, probs, t)
    z = float(ndtri(1.0 - alpha))
    threshold = math.sqrt(2.0 * m) * z - m
    power = float(ndtr(math.sqrt(2.0 * m) - z))
    return TestReport(threshold=threshold, level=alpha, power=power,
                      mc_se=0.0, reps=0)


def poisson_clt_report(probs: BinProbabilities, t: float, alpha: float,
                       eta: float = 1.0) -> TestReport:
    """Normal-approximation level and power of the Poisson LRT.

    Uses the exact mean and variance of T = sum(Y_i a_i) with
    a_i = log(p1_i / p0_i) under both hypotheses. A degenerate alternative
    (p1 identical to p0) reports power = alpha by convention.
    """
    _check_t(t)
    _check_alpha(alpha)
    if np.any(probs.p0 <= 0.0) or np.any(probs.p1 <= 0.0):
        raise ModelAssumptionError(
            "poisson likelihood ratio requires strictly positive p0 and p1")
    tau = eta * t
    a = np.log(probs.p1 / probs.p0)
    lam0 = tau * probs.p0
    lam1 = tau * probs.p1
    e0 = float(a @ lam0)
    v0 = float((a * a) @ lam0)
    if v0 == 0.0:
        return TestReport(threshold=e0, level=alpha, power=alpha,
                          mc_se=0.0, reps=0)
    e1 = float(a @ lam1)
    v1 = float((a * a) @ lam1)
    z = float(ndtri(1.0 - alpha))
    threshold = z * math.sqrt(v0) + e0
    power = 1.0 - float(ndtr((threshold - e1) / math.sqrt(v1)))
    return TestReport(threshold=threshold, level=alpha, power=power,
                      mc_se=0.0, reps=0)


def analytic_report(model: NoiseModel, probs: BinProbabilities, t: float,
                    alpha: float) -> TestReport:
    """Closed-form report: exact for hg/vsg, CLT for poisson."""
    if model.kind == "poisson":
        return poisson_clt_report(probs, t, alpha, eta=model.thinning)
    return exact_error_rates(model, probs, t, alpha)


THRESHOLD_MODES = ("analytic", "h0-calibrated")


def mc_error_rates(model: NoiseModel, probs: BinProbabilities, t: float,
                   alpha: float, reps: int = 10000,
                   rng: RngState | None = None,
                   threshold_mode: str = "analytic") -> TestReport:
    """Monte Carlo level and power of the level-alpha LRT.

    threshold_mode "analytic" takes the closed-form threshold (CLT for
    poisson); "h0-calibrated" takes the empirical (1 - alpha) quantile of
    a fresh null batch, making the level alpha by construction up to
    quantile granularity. Null and alternative batches use separate
    substreams of the RngState.
    """
    _check_t(t)
    _check_alpha(alpha)
    if reps < 100:
        raise ParameterError("reps must be >= 100")
    if threshold_mode not in THRESHOLD_MODES:
        raise ParameterError(f"unknown threshold mode {threshold_mode!r}")
    if rng is None:
        rng = RngState()
    y0 = sample_observations(model, probs.p0, t, rng.generator(0), reps=reps)
    t0 = lrt_statistic(model, probs, t, y0)
    if threshold_mode == "analytic":
        threshold = analytic_report(model, probs, t, alpha).threshold
    else:
        order = int(math.ceil((1.0 - alpha) * reps))
        threshold = float(np.sort(t0)[order - 1])
    level = float(np.mean(t0 > threshold))
    y1 = sample_observations(model, probs.p1, t, rng.generator(1), reps=reps)
    t1 = lrt_statistic(model, probs, t, y1)
    power = float(np.mean(t1 > threshold))
    mc_se = math.sqrt(power * (1.0 - power) / reps)
    return TestReport(threshold=float(threshold), level=level, power=power,
                      mc_se=mc_se, reps=reps)
