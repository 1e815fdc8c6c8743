"""Critical separation solvers: the smallest d a level-alpha test resolves.

The statistical resolution of a query is the separation d at which the
optimal level-alpha likelihood-ratio test of "one source" against "two
sources d apart" reaches power 1 - beta. Four routes compute it:

* ``asymptotic_resolution``  closed-form rate with exact kernel integrals,
* ``finite_n_resolution``    closed-form rate with per-bin integrals,
* ``exact_resolution``       bisection on the exact Gaussian-model power,
* ``mc_resolution``          bisection on a Monte Carlo power estimate.

The two Gaussian models scale differently: the variance-stabilized model
(and Poisson, which shares its asymptotics) resolves at order t^(-1/4)
independent of the bin count, while the homogeneous model resolves at
order t^(-1/2) n^(1/4), paying for its signal-independent noise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy.special import ndtr, ndtri

from .binning import SourceConfig, bin_curvature_integrals, bin_probabilities
from .exceptions import (GeometryError, NoResolutionError, ParameterError,
                         UnsupportedMethodError)
from .models import (NoiseModel, RngState, analytic_report, lrt_statistic,
                     sample_observations, separation_measure)
from .psf import (GAUSSIAN_FWHM_FACTOR, PsfModel, curvature_integral,
                  fisher_integral, psf_fwhm)

BISECT_M_TOL = 1e-10
BISECT_D_TOL = 1e-12
MC_MAX_ITERATIONS = 60
MC_EXPANSION_FACTOR = 1.5
MC_WINDOW_MARGIN = 0.05
MC_FWHM_CAP = 4.0


@dataclass(frozen=True)
class ResolutionQuery:
    """Everything a resolution computation needs.

    The background pedestal lives in ``psf.background`` and the detector
    thinning in ``model.thinning``; they are not duplicated here.
    """

    model: NoiseModel
    psf: PsfModel
    x0: float = 0.5
    weight_q: float = 0.5
    n: int = 20
    t: float = 20.0
    alpha: float = 0.1
    beta: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ParameterError("alpha must lie in (0, 1/2)")
        if not 0.0 < self.beta < 0.5:
            raise ParameterError("beta must lie in (0, 1/2)")
        if not self.t >= 1.0:
            raise ParameterError("illumination time t must be >= 1")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError("bin count n must be an integer >= 1")
        if not 0.0 < self.x0 < 1.0:
            raise GeometryError("x0 must lie in (0, 1)")
        if not 0.0 < self.weight_q < 1.0:
            raise ParameterError("weight_q must lie in (0, 1)")


@dataclass(frozen=True)
class ResolutionResult:
    """A critical separation, the method that produced it, diagnostics."""

    d: float
    method: str
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _quantile_gap(alpha: float, beta: float) -> float:
    """z_(1-alpha) + z_(1-beta), the quantile span the test must cover."""
    gap = float(ndtri(1.0 - alpha) + ndtri(1.0 - beta))
    if gap <= 0.0:
        raise ParameterError("alpha and beta leave no quantile gap")
    return gap


def _prefactor(query: ResolutionQuery) -> float:
    q = query.weight_q
    return (math.sqrt(2.0) / math.sqrt(q * (1.0 - q))
            * math.sqrt(_quantile_gap(query.alpha, query.beta)))


def _checked_result(d: float, method: str, diag: dict) -> ResolutionResult:
    if not 0.0 < d < 1.0:
        raise NoResolutionError(
            f"critical separation {d} does not fit the unit window")
    return ResolutionResult(d=float(d), method=method, diagnostics=diag)


def asymptotic_resolution(query: ResolutionQuery) -> ResolutionResult:
    """Large-t resolution with exact kernel integrals.

    Poisson and vsg share the t^(-1/4) law through the Fisher-type
    integral of h''^2 / (h + background); hg follows the slower
    t^(-1/2) n^(1/4) law through the squared-curvature integral and is
    guaranteed only while n grows slower than t^2 (flagged otherwise).
    """
    eta = query.model.thinning
    t = query.t
    diag: dict[str, Any] = {}
    if query.model.kind == "hg":
        integral = curvature_integral(query.psf, x0=query.x0)
        d = (_prefactor(query) * (eta ** 2 * integral) ** -0.25
             / math.sqrt(t) * query.n ** 0.25)
        if query.n >= t * t:
            diag["note"] = ("n >= t^2: outside the hg guarantee regime, "
                            "value extrapolated")
    else:
        integral = fisher_integral(query.psf, x0=query.x0)
        d = _prefactor(query) * (eta * integral) ** -0.25 * t ** -0.25
    diag["integral"] = integral
    return _checked_result(d, "asymptotic", diag)


def finite_n_resolution(query: ResolutionQuery) -> ResolutionResult:
    """Resolution from the small-d expansion with per-bin integrals.

    Refines the asymptotic law by replacing the limit integrals with
    their n-bin Riemann forms; converges to the asymptotic value as the
    bins refine. Not defined for poisson (the vsg value is its large-t
    reference).
    """
    if query.model.kind == "poisson":
        raise UnsupportedMethodError(
            "finite-n resolution is not defined for the poisson model; "
            "the vsg value is its large-t reference")
    tau = query.model.thinning * query.t
    curvature_bins = bin_curvature_integrals(query.psf, query.x0, query.n)
    if query.model.kind == "hg":
        bin_sum = float(curvature_bins @ curvature_bins)
        d = _prefactor(query) * bin_sum ** -0.25 / math.sqrt(tau)
    else:
        null = bin_probabilities(
            query.psf, SourceConfig(x0=query.x0, d=0.0), query.n).p0
        bin_sum = float(np.sum(curvature_bins ** 2 / null))
        d = _prefactor(query) * bin_sum ** -0.25 * tau ** -0.25
    return _checked_result(d, "finite_n", {"bin_sum": bin_sum})


def _geometry_limit(x0: float, weight_q: float, margin: float = 0.0) -> float:
    """Largest d keeping both sources inside (margin, 1 - margin)."""
    return min((x0 - margin) / (1.0 - weight_q),
               (1.0 - margin - x0) / weight_q)


def _separation_at(query: ResolutionQuery, d: float) -> float:
    src = SourceConfig(x0=query.x0, d=d, weight_q=query.weight_q)
    probs = bin_probabilities(query.psf, src, query.n)
    return separation_measure(query.model, probs, query.t)


def exact_resolution(query: ResolutionQuery) -> ResolutionResult:
    """Bisection on the exact power of the Gaussian-model tests.

    Solves m(d) = (z_(1-alpha) + z_(1-beta))^2 / 2, where m is the
    model's separation measure; at the root the level-alpha test has
    power exactly 1 - beta. Not defined for poisson.
    """
    if query.model.kind == "poisson":
        raise UnsupportedMethodError(
            "exact resolution is not defined for the poisson model; "
            "the vsg value is its large-t reference")
    target = 0.5 * _quantile_gap(query.alpha, query.beta) ** 2
    hi = min(0.5, _geometry_limit(query.x0, query.weight_q)) * (1.0 - 1e-9)
    if _separation_at(query, hi) < target:
        raise GeometryError(
            "no admissible separation reaches the requested power; "
            "the root lies outside the unit window")
    lo = 0.0
    iterations = 0
    mid = hi
    residual = math.inf
    while iterations < 200:
        mid = 0.5 * (lo + hi)
        m = _separation_at(query, mid)
        residual = m - target
        iterations += 1
        if abs(residual) <= BISECT_M_TOL or hi - lo <= BISECT_D_TOL:
            break
        if m < target:
            lo = mid
        else:
            hi = mid
    diag = {"iterations": iterations, "residual": residual,
            "target": target}
    return _checked_result(mid, "exact", diag)


def mc_resolution(query: ResolutionQuery, reps: int = 10000,
                  rng: RngState | None = None,
                  threshold_mode: str = "analytic") -> ResolutionResult:
    """Bisection on a Monte Carlo estimate of the type-II error rate.

    Starting bracket [0, FWHM]; the upper end grows by 1.5x (capped by
    4 FWHM and by keeping both sources inside (0.05, 0.95)) until the
    estimated type-II rate beta_hat drops below the acceptance band.
    Bisection stops once beta_hat falls in [0.95 beta, 1.05 beta) or
    after 60 iterations. Each estimate draws reps observations from a
    fresh substream indexed by (phase, iteration, side), so the result
    is deterministic given the RngState and independent of threading.
    """
    if reps < 100:
        raise ParameterError("reps must be >= 100")
    if threshold_mode not in ("analytic", "h0-calibrated"):
        raise ParameterError(f"unknown threshold mode {threshold_mode!r}")
    if rng is None:
        rng = RngState()
    band_lo = 0.95 * query.beta
    band_hi = 1.05 * query.beta

    def type2(d: float, phase: int, iteration: int) -> float:
        src = SourceConfig(x0=query.x0, d=d, weight_q=query.weight_q)
        probs = bin_probabilities(query.psf, src, query.n)
        if threshold_mode == "h0-calibrated":
            y0 = sample_observations(
                query.model, probs.p0, query.t,
                rng.generator(phase, iteration, 0), reps=reps)
            t0 = lrt_statistic(query.model, probs, query.t, y0)
            order = int(math.ceil((1.0 - query.alpha) * reps))
            threshold = float(np.sort(t0)[order - 1])
        else:
            threshold = analytic_report(
                query.model, probs, query.t, query.alpha).threshold
        y1 = sample_observations(
            query.model, probs.p1, query.t,
            rng.generator(phase, iteration, 1), reps=reps)
        t1 = lrt_statistic(query.model, probs, query.t, y1)
        return float(np.mean(t1 <= threshold))

    fwhm = psf_fwhm(query.psf)
    cap = min(MC_FWHM_CAP * fwhm,
              _geometry_limit(query.x0, query.weight_q, MC_WINDOW_MARGIN))
    if cap <= 0.0:
        raise GeometryError(
            "x0 leaves no room for two sources inside (0.05, 0.95)")

    lo = 0.0
    hi = min(fwhm, cap)
    expansions = 0
    beta_hat = type2(hi, 0, expansions)
    while beta_hat >= band_hi:
        if hi >= cap * (1.0 - 1e-12):
            raise NoResolutionError(
                f"type-II rate {beta_hat} stays above the band even at "
                f"the separation cap {cap}")
        lo = hi
        hi = min(MC_EXPANSION_FACTOR * hi, cap)
        expansions += 1
        beta_hat = type2(hi, 0, expansions)

    d = hi
    converged = band_lo <= beta_hat < band_hi
    iterations = 0
    while not converged and iterations < MC_MAX_ITERATIONS:
        iterations += 1
        d = 0.5 * (lo + hi)
        beta_hat = type2(d, 1, iterations)
        if band_lo <= beta_hat < band_hi:
            converged = True
        elif beta_hat >= band_hi:
            lo = d
        else:
            hi = d

    diag = {"iterations": iterations, "expansions": expansions,
            "beta_hat": beta_hat, "band": (band_lo, band_hi),
            "mc_se": math.sqrt(beta_hat * (1.0 - beta_hat) / reps),
            "converged": converged, "threshold_mode": threshold_mode,
            "reps": reps}
    return _checked_result(d, "monte_carlo", diag)


def acuna_power(psf: PsfModel, x0: float, gamma: float, n: int, t: float,
                d: float, alpha: float) -> float:
    """Closed-form power of the equal-weight variance-stabilized test.

    Phi(z_alpha + sqrt(sum_i (int_i h'')^2 / int_i (h + gamma))
    * d^2 sqrt(t) / 8). The pedestal is the explicit gamma argument; any
    background already on the psf is replaced by it. Inverts exactly to
    finite_n_resolution for the vsg model at weight 1/2.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0, 1)")
    if d < 0.0:
        raise ParameterError("separation d must be >= 0")
    if not t >= 1.0:
        raise ParameterError("illumination time t must be >= 1")
    pedestal = replace(psf, background=gamma)
    curvature_bins = bin_curvature_integrals(psf, x0, n)
    null = bin_probabilities(pedestal, SourceConfig(x0=x0, d=0.0), n).p0
    bin_sum = float(np.sum(curvature_bins ** 2 / null))
    shift = math.sqrt(bin_sum) * d * d * math.sqrt(t) / 8.0
    return float(ndtr(float(ndtri(alpha)) + shift))


def detection_boundary(model: NoiseModel, fwhm: float, t: float, n: int,
                       alpha: float, beta: float,
                       weight_q: float = 0.5) -> float:
    """Leading-order critical separation for a Gaussian kernel.

    Small-width limits of the kernel integrals give pure power laws:
    hg resolves at C sqrt(z) t^(-1/2) n^(1/4) fwhm^(5/4) and
    poisson/vsg at C' sqrt(z) t^(-1/4) fwhm, exactly linear in fwhm.
    Thinning enters through eta * t as everywhere else.
    """
    if not fwhm > 0.0:
        raise ParameterError("fwhm must be > 0")
    query = ResolutionQuery(model=model,
                            psf=PsfModel.gaussian_from_fwhm(fwhm),
                            weight_q=weight_q, n=n, t=t,
                            alpha=alpha, beta=beta)
    tau = model.thinning * t
    sigma = fwhm / GAUSSIAN_FWHM_FACTOR
    if model.kind == "hg":
        integral = 3.0 / (8.0 * math.sqrt(math.pi)) * sigma ** -5.0
        return (_prefactor(query) * integral ** -0.25
                / math.sqrt(tau) * n ** 0.25)
    integral = 2.0 * sigma ** -4.0
    return _prefactor(query) * integral ** -0.25 * tau ** -0.25


def resolve_query(query: ResolutionQuery, method: str = "asymptotic",
                  reps: int = 10000, rng: RngState | None = None,
                  threshold_mode: str = "analytic") -> ResolutionResult:
    """Dispatch a query to the named method."""
    if method == "asymptotic":
        return asymptotic_resolution(query)
    if method == "finite-n":
        return finite_n_resolution(query)
    if method == "exact":
        return exact_resolution(query)
    if method == "mc":
        return mc_resolution(query, reps=reps, rng=rng,
                             threshold_mode=threshold_mode)
    raise ParameterError(f"unknown method {method!r}")
