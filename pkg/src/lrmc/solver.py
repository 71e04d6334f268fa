"""Proximal-gradient solvers with singular-value shrinkage.

Four solve loops share one engine skeleton:

* ``ista_solve``        - fixed spectral weights, single matrix;
* ``istra_solve``       - weights recomputed each iteration from the current
                          spectrum (tangent weights of the smoothed
                          Schatten-p penalty), single matrix;
* ``alter_ista_solve``  - block-cyclic (Gauss-Seidel) variant for the
                          multi-domain problem, fixed weights per block;
* ``alter_istra_solve`` - block-cyclic with per-block reweighting.

Each iteration costs one SVD per block. When ``diagnostics_on`` is set, the
solver asserts, at every unit-tau iteration, that the objective decreased,
that the decrease beats ``(1/eta - L)/2 * ||dX||^2`` up to a 1e-8 slack, and
(single-matrix solvers) that the subgradient surrogate produced by the update
is bounded by the step-dependent constant times the step gap.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, thin_svd
from .exceptions import DiagnosticError, SolverDivergedError
from .loss import MaskedQuadraticLoss, MultiDomainProblem
from .penalty import Penalty, reweight, shrink

__all__ = [
    "TERMINATION_TOL",
    "TERMINATION_MAX_ITERS",
    "TERMINATION_STALLED",
    "DEFAULT_TAU_SCHEDULE",
    "Backtracking",
    "SolverConfig",
    "IterateTrace",
    "Solution",
    "subgradient_residual",
    "backtrack_step",
    "ista_solve",
    "istra_solve",
    "alter_ista_solve",
    "alter_istra_solve",
]

TERMINATION_TOL = "tol_reached"
TERMINATION_MAX_ITERS = "max_iters"
TERMINATION_STALLED = "stalled"

DEFAULT_TAU_SCHEDULE = (8.0, 4.0, 2.0, 1.0)

# Descent checks tolerate this much violation before raising; the subgradient
# bound uses the same slack. Objective monotonicity gets a tighter one.
_DESCENT_SLACK = 1e-8
_MONOTONE_SLACK = 1e-10
_STALL_DECREASE = 1e-14
_STALL_LIMIT = 50


@dataclass(frozen=True)
class Backtracking:
    """Geometric step-size line search.

    Starts from ``eta0 / L`` and multiplies the step by ``beta`` until the
    full objective drops by at least ``sigma * ||dX||^2``, or the step falls
    to the safe floor ``0.9 / L`` where the candidate is accepted
    unconditionally (plain descent holds there). The accepted step carries
    over to the next iteration, so steps never grow during a run.
    """

    beta: float = 0.5
    sigma: float = 0.1
    eta0: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if not 0.0 < self.sigma < 1.0:
            raise ValueError(f"sigma must lie in (0, 1), got {self.sigma}")
        if self.eta0 <= 0.0:
            raise ValueError(f"eta0 must be positive, got {self.eta0}")


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters shared by all solvers.

    ``step`` is the fixed step size (must stay below 1/L when backtracking is
    off; L = 1 for the masked quadratic losses here). ``rel_tol`` stops a run
    once the step gap divided by the norm of the observed entries falls below
    it. ``tau_schedule``, when given, multiplies the prox threshold by
    ``tau_schedule[t]`` for the first iterations (it must be non-increasing
    and end at 1); only the step, not the gradient, is affected.
    """

    step: float = 0.9
    max_iters: int = 2000
    rel_tol: float = 1e-4
    backtracking: Backtracking | None = None
    tau_schedule: tuple[float, ...] | None = None
    diagnostics_on: bool = False

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.rel_tol <= 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.tau_schedule is not None:
            ts = tuple(float(v) for v in self.tau_schedule)
            if len(ts) == 0 or ts[-1] != 1.0:
                raise ValueError("tau_schedule must be non-empty and end at 1")
            if any(b > a for a, b in zip(ts, ts[1:])) or any(v < 1.0 for v in ts):
                raise ValueError("tau_schedule must be non-increasing with values >= 1")
            object.__setattr__(self, "tau_schedule", ts)


def _tau_at(cfg: SolverConfig, t: int) -> float:
    if cfg.tau_schedule is None or t >= len(cfg.tau_schedule):
        return 1.0
    return cfg.tau_schedule[t]


class IterateTrace:
    """Per-iteration diagnostics of a solver run (row 0 is the start point).

    ``svd_count`` is cumulative and counts the SVDs performed by the proximal
    updates (plus any warm-start run); the one-time factorization of the
    start point used only to seed the diagnostics is not included.
    ``elapsed_ms`` is wall-clock and therefore excluded from CSV output
    unless explicitly requested, keeping exported files byte-reproducible.
    """

    COLUMNS = ("iter", "objective", "loss", "penalty", "step_gap", "rank",
               "subgrad_residual", "step", "svd_count", "elapsed_ms")

    def __init__(self):
        self.iteration: list[int] = []
        self.objective: list[float] = []
        self.loss: list[float] = []
        self.penalty: list[float] = []
        self.step_gap: list[float] = []
        self.rank: list[int] = []
        self.subgrad_residual: list[float] = []
        self.step: list[float] = []
        self.svd_count: list[int] = []
        self.elapsed_ms: list[float] = []

    def append(self, iteration, objective, loss, penalty, step_gap, rank,
               subgrad_residual, step, svd_count, elapsed_ms):
        self.iteration.append(int(iteration))
        self.objective.append(float(objective))
        self.loss.append(float(loss))
        self.penalty.append(float(penalty))
        self.step_gap.append(float(step_gap))
        self.rank.append(int(rank))
        self.subgrad_residual.append(float(subgrad_residual))
        self.step.append(float(step))
        self.svd_count.append(int(svd_count))
        self.elapsed_ms.append(float(elapsed_ms))

    def __len__(self) -> int:
        return len(self.iteration)

    @property
    def iterations_run(self) -> int:
        return self.iteration[-1] if self.iteration else 0

    @property
    def total_svds(self) -> int:
        return self.svd_count[-1] if self.svd_count else 0

    def write_csv(self, path, include_timing: bool = False) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for i in range(len(self)):
                ms = self.elapsed_ms[i] if include_timing else 0.0
                fh.write(",".join([
                    str(self.iteration[i]),
                    repr(self.objective[i]),
                    repr(self.loss[i]),
                    repr(self.penalty[i]),
                    repr(self.step_gap[i]),
                    str(self.rank[i]),
                    repr(self.subgrad_residual[i]),
                    repr(self.step[i]),
                    str(self.svd_count[i]),
                    repr(ms),
                ]) + "\n")


@dataclass
class Solution:
    """Result of a solver run: final iterate(s), trace, termination reason."""

    trace: IterateTrace
    termination: str
    x: np.ndarray | None = None
    x0: np.ndarray | None = None
    xs: list[np.ndarray] | None = None
    warm_start: "Solution | None" = field(default=None, repr=False)


def subgradient_residual(x_prev, x_next, loss: MaskedQuadraticLoss, eta: float) -> float:
    """Norm of the stationarity surrogate of one proximal step.

    G = (x_prev - x_next) / eta + grad(x_next) - grad(x_prev); its norm is
    bounded by (L + 1/eta) times the step gap.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    x_prev = as_matrix(x_prev, "x_prev")
    x_next = as_matrix(x_next, "x_next")
    if x_prev.shape != x_next.shape:
        raise ValueError(f"shape mismatch: {x_prev.shape} vs {x_next.shape}")
    g = (x_prev - x_next) / eta + loss.grad(x_next) - loss.grad(x_prev)
    return float(np.linalg.norm(g))


# ---------------------------------------------------------------------------
# Weight rules: what the prox threshold uses and what the objective's penalty
# term is. Fixed rule = weighted nuclear norm; reweight rule = smoothed
# Schatten-p penalty linearized at the current spectrum.
# ---------------------------------------------------------------------------

class _FixedWeightRule:
    reweighted = False

    def __init__(self, penalty: Penalty):
        if penalty.is_reweighted:
            raise ValueError("fixed-weight solver got the reweighted penalty; "
                             "use istra_solve / alter_istra_solve")
        self._penalty = penalty
        self._w: np.ndarray | None = None

    def weights(self, sv: np.ndarray) -> np.ndarray:
        if self._w is None or self._w.size != sv.size:
            self._w = self._penalty.weight_vector(sv.size)
        return self._w

    def penalty_value(self, sv: np.ndarray) -> float:
        return float(self.weights(sv) @ sv)

    def residual_bound(self, eta: float, gap: float, k: int, l: float) -> float | None:
        return (l + 1.0 / eta) * gap


class _ReweightRule:
    reweighted = True

    def __init__(self, p: float, eps: float):
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        if eps <= 0.0:
            raise ValueError(f"eps must be positive, got {eps}")
        self.p = p
        self.eps = eps

    def weights(self, sv: np.ndarray) -> np.ndarray:
        return reweight(sv, self.p, self.eps)

    def penalty_value(self, sv: np.ndarray) -> float:
        return float(np.sum((sv + self.eps) ** self.p))

    def residual_bound(self, eta: float, gap: float, k: int, l: float) -> float | None:
        # The weight-difference term inflates the constant by
        # (1-p) * p * k / eps^(2-p); only meaningful for eps away from zero.
        if self.eps < 1e-3:
            return None
        rho = l + 1.0 / eta + (1.0 - self.p) * self.p * k / self.eps ** (2.0 - self.p)
        return rho * gap


def _numerical_rank(sv: np.ndarray) -> int:
    if sv.size == 0 or sv[0] <= 0.0:
        return 0
    return int(np.sum(sv > 1e-8 * sv[0]))


def _shrunk_spectrum(fac, w: np.ndarray, threshold: float) -> np.ndarray:
    return np.maximum(fac.s - threshold * w, 0.0)


def _prox(x, grad, w, eta, tau):
    return shrink(x - eta * grad, w, eta * tau)


def _backtrack(x, grad, w, tau, obj_curr, eta_start, beta, sigma, loss, rule, l):
    """Shrink eta geometrically until sufficient decrease or the safe floor.

    Returns (eta, candidate, candidate SVD factors, number of SVDs spent).
    """
    floor = 0.9 / l
    eta = eta_start
    n_svd = 0
    while True:
        cand, fac = _prox(x, grad, w, eta, tau)
        n_svd += 1
        if eta <= floor * (1.0 + 1e-12):
            return eta, cand, fac, n_svd
        sv_c = _shrunk_spectrum(fac, w, eta * tau)
        obj_c = loss.value(cand) + rule.penalty_value(sv_c)
        gap2 = float(np.sum((cand - x) ** 2))
        if obj_c <= obj_curr - sigma * gap2:
            return eta, cand, fac, n_svd
        eta = max(eta * beta, floor)


def backtrack_step(x, loss: MaskedQuadraticLoss, spec: Penalty, eta_init: float,
                   beta: float = 0.5, sigma: float = 0.1):
    """One line-searched proximal step; returns the accepted (eta, candidate).

    The acceptance test uses the full objective (fidelity plus penalty). If
    eta falls below 0.9/L the candidate at that safe step is accepted
    unconditionally, so the search always terminates.
    """
    if eta_init <= 0:
        raise ValueError(f"eta_init must be positive, got {eta_init}")
    if not 0.0 < beta < 1.0 or not 0.0 < sigma < 1.0:
        raise ValueError("beta and sigma must lie in (0, 1)")
    x = as_matrix(x, "x")
    rule = _ReweightRule(spec.p, spec.eps) if spec.is_reweighted else _FixedWeightRule(spec)
    sv = thin_svd(x).s
    w = rule.weights(sv)
    obj = loss.value(x) + rule.penalty_value(sv)
    grad = loss.grad(x)
    eta, cand, _, _ = _backtrack(x, grad, w, 1.0, obj, eta_init, beta, sigma,
                                 loss, rule, loss.lipschitz)
    return eta, cand


# ---------------------------------------------------------------------------
# Single-matrix engine.
# ---------------------------------------------------------------------------

def _check_step_bound(cfg: SolverConfig, l: float):
    if cfg.backtracking is None and cfg.step >= 1.0 / l:
        raise ValueError(f"step {cfg.step} must be < 1/L = {1.0 / l} "
                         "when backtracking is disabled")


def _check_descent(obj, obj_next, gap, eta, l, t):
    if obj_next > obj + _MONOTONE_SLACK:
        raise DiagnosticError(f"objective increased at iteration {t}: "
                              f"{obj} -> {obj_next}")
    required = (1.0 / eta - l) / 2.0 * gap * gap
    if obj - obj_next < required - _DESCENT_SLACK:
        raise DiagnosticError(f"insufficient decrease at iteration {t}: "
                              f"got {obj - obj_next}, needed {required}")


def _solve_single(loss: MaskedQuadraticLoss, rule, cfg: SolverConfig, x_init,
                  callback=None, svd_offset: int = 0) -> Solution:
    l = loss.lipschitz
    _check_step_bound(cfg, l)
    x = as_matrix(x_init, "x_init").copy()
    if x.shape != loss.shape:
        raise ValueError(f"x_init shape {x.shape}, expected {loss.shape}")
    t0 = time.perf_counter()
    trace = IterateTrace()

    sv = thin_svd(x).s  # seeds diagnostics and the first reweighting
    denom = float(np.linalg.norm(loss.observations.values)) or 1.0
    f_val = loss.value(x)
    pen = rule.penalty_value(sv)
    obj = f_val + pen
    trace.append(0, obj, f_val, pen, 0.0, _numerical_rank(sv), 0.0, 0.0,
                 svd_offset, (time.perf_counter() - t0) * 1e3)

    grad = loss.grad(x)
    bt = cfg.backtracking
    eta = (bt.eta0 / l) if bt is not None else cfg.step
    svds = 0
    stall = 0
    termination = TERMINATION_MAX_ITERS
    for t in range(cfg.max_iters):
        tau = _tau_at(cfg, t)
        w = rule.weights(sv)
        if bt is not None:
            eta, x_next, fac, used = _backtrack(x, grad, w, tau, obj, eta,
                                                bt.beta, bt.sigma, loss, rule, l)
            svds += used
        else:
            x_next, fac = _prox(x, grad, w, eta, tau)
            svds += 1
        sv_next = _shrunk_spectrum(fac, w, eta * tau)
        dx = x - x_next
        gap = float(np.linalg.norm(dx))
        grad_next = loss.grad(x_next)
        g = dx / eta + grad_next - grad
        if rule.reweighted:
            w_next = rule.weights(sv_next)
            g = g + (fac.u * (w_next - w)) @ fac.v.T
        resid = float(np.linalg.norm(g))
        f_next = loss.value(x_next)
        pen_next = rule.penalty_value(sv_next)
        obj_next = f_next + pen_next
        if not np.isfinite(obj_next):
            raise SolverDivergedError(t + 1)
        trace.append(t + 1, obj_next, f_next, pen_next, gap,
                     _numerical_rank(sv_next), resid, eta, svd_offset + svds,
                     (time.perf_counter() - t0) * 1e3)
        if cfg.diagnostics_on and tau == 1.0:
            _check_descent(obj, obj_next, gap, eta, l, t + 1)
            bound = rule.residual_bound(eta, gap, sv_next.size, l)
            if bound is not None and resid > bound + _DESCENT_SLACK:
                raise DiagnosticError(f"subgradient bound failed at iteration "
                                      f"{t + 1}: {resid} > {bound}")
        if callback is not None:
            callback(t + 1, x_next)
        decrease = obj - obj_next
        x, sv, grad, obj = x_next, sv_next, grad_next, obj_next
        if gap / denom <= cfg.rel_tol:
            termination = TERMINATION_TOL
            break
        if decrease < _STALL_DECREASE:
            stall += 1
            if stall >= _STALL_LIMIT:
                termination = TERMINATION_STALLED
                break
        else:
            stall = 0
    return Solution(trace=trace, termination=termination, x=x)


def ista_solve(loss: MaskedQuadraticLoss, penalty: Penalty,
               cfg: SolverConfig | None = None, x_init=None,
               callback=None) -> Solution:
    """Proximal gradient with a fixed weighted spectral penalty.

    Starts from the observed matrix (zeros off the support) unless ``x_init``
    is given. ``callback(t, x)`` is invoked after each iteration; the array
    belongs to the solver and must not be mutated.
    """
    cfg = cfg or SolverConfig()
    rule = _FixedWeightRule(penalty)
    x0 = loss.observations.observed_matrix() if x_init is None else x_init
    return _solve_single(loss, rule, cfg, x0, callback)


def istra_solve(loss: MaskedQuadraticLoss, p: float, eps: float,
                cfg: SolverConfig | None = None, x_init=None,
                warm_lambda: float | None = None, callback=None) -> Solution:
    """Reweighted proximal gradient for the smoothed Schatten-p penalty.

    Each iteration recomputes the weights from the current spectrum, which
    makes the true objective ``f + sum((sigma_i + eps) ** p)`` monotonically
    non-increasing. If ``x_init`` is omitted, a plain nuclear-norm run with
    ``warm_lambda`` supplies the start point and its SVD count is folded into
    this run's accounting (``warm_lambda`` is then required).
    """
    cfg = cfg or SolverConfig()
    rule = _ReweightRule(p, eps)
    warm = None
    offset = 0
    if x_init is None:
        if warm_lambda is None:
            raise ValueError("istra_solve needs x_init or warm_lambda "
                             "(nuclear-norm warm start)")
        warm = ista_solve(loss, Penalty.nuclear(warm_lambda), cfg)
        x_init = warm.x
        offset = warm.trace.total_svds
    sol = _solve_single(loss, rule, cfg, x_init, callback, svd_offset=offset)
    sol.warm_start = warm
    return sol


# ---------------------------------------------------------------------------
# Multi-domain engine (Gauss-Seidel over the shared block then each domain).
# ---------------------------------------------------------------------------

def _solve_multi(prob: MultiDomainProblem, rules, cfg: SolverConfig,
                 x0_init=None, xs_init=None, callback=None) -> Solution:
    l_max = 1.0
    if cfg.backtracking is not None:
        raise ValueError("backtracking is not supported by the alternating "
                         "solvers; use a fixed step below 1/L")
    _check_step_bound(cfg, l_max)
    mu = cfg.step
    num_d = prob.num_domains
    if x0_init is None:
        x0 = np.zeros(prob.shape0)
    else:
        x0 = as_matrix(x0_init, "x0_init").copy()
    if xs_init is None:
        xs = [np.zeros((prob.shared_rows, c)) for c in prob.domain_cols]
    else:
        xs = [as_matrix(xd, f"xs_init[{d}]").copy() for d, xd in enumerate(xs_init)]
    # Spectra of the current blocks; zero starts need no factorization.
    svs = []
    for blk_x, shape in zip([x0] + xs, [prob.shape0]
                            + [(prob.shared_rows, c) for c in prob.domain_cols]):
        if blk_x.shape != shape:
            raise ValueError(f"initial block shape {blk_x.shape}, expected {shape}")
        svs.append(np.zeros(min(shape)) if not blk_x.any() else thin_svd(blk_x).s)

    t0 = time.perf_counter()
    trace = IterateTrace()
    denom = prob.observed_norm() or 1.0
    f_val = prob.value(x0, xs)
    pen = sum(rules[i].penalty_value(svs[i]) for i in range(num_d + 1))
    obj = f_val + pen
    trace.append(0, obj, f_val, pen, 0.0, sum(_numerical_rank(s) for s in svs),
                 0.0, 0.0, 0, (time.perf_counter() - t0) * 1e3)

    rho = 1.0 / mu - l_max  # min over blocks of 1/mu - L_d; all L_d equal 1
    svds = 0
    stall = 0
    termination = TERMINATION_MAX_ITERS
    for t in range(cfg.max_iters):
        tau = _tau_at(cfg, t)
        # Shared block first; its update is visible to every domain update.
        w0 = rules[0].weights(svs[0])
        g0 = prob.grad_block(0, x0, xs)
        x0_new, fac0 = _prox(x0, g0, w0, mu, tau)
        sv0_new = _shrunk_spectrum(fac0, w0, mu * tau)
        new_xs, new_svs, used_grads, used_ws, facs = [], [], [], [], []
        for d in range(1, num_d + 1):
            wd = rules[d].weights(svs[d])
            gd = prob.grad_block(d, x0_new, xs)
            xd_new, facd = _prox(xs[d - 1], gd, wd, mu, tau)
            new_xs.append(xd_new)
            new_svs.append(_shrunk_spectrum(facd, wd, mu * tau))
            used_grads.append(gd)
            used_ws.append(wd)
            facs.append(facd)
        svds += num_d + 1

        # End-of-sweep residuals double as the fidelity value and the
        # stationarity surrogate for every block.
        final_resids = [prob.grad_block(d + 1, x0_new, new_xs) for d in range(num_d)]
        f_next = 0.5 * sum(float(np.sum(r * r)) for r in final_resids)
        g_blocks = [(x0 - x0_new) / mu + np.concatenate(final_resids, axis=1) - g0]
        for d in range(num_d):
            g_blocks.append((xs[d] - new_xs[d]) / mu + final_resids[d] - used_grads[d])
        if rules[0].reweighted:
            w0_next = rules[0].weights(sv0_new)
            g_blocks[0] = g_blocks[0] + (fac0.u * (w0_next - w0)) @ fac0.v.T
            for d in range(num_d):
                wd_next = rules[d + 1].weights(new_svs[d])
                g_blocks[d + 1] = (g_blocks[d + 1]
                                   + (facs[d].u * (wd_next - used_ws[d])) @ facs[d].v.T)
        resid = float(np.sqrt(sum(float(np.sum(g * g)) for g in g_blocks)))
        gap2 = float(np.sum((x0 - x0_new) ** 2))
        gap2 += sum(float(np.sum((xs[d] - new_xs[d]) ** 2)) for d in range(num_d))
        gap = float(np.sqrt(gap2))

        pen_next = rules[0].penalty_value(sv0_new)
        pen_next += sum(rules[d + 1].penalty_value(new_svs[d]) for d in range(num_d))
        obj_next = f_next + pen_next
        if not np.isfinite(obj_next):
            raise SolverDivergedError(t + 1)
        ranks = _numerical_rank(sv0_new) + sum(_numerical_rank(s) for s in new_svs)
        trace.append(t + 1, obj_next, f_next, pen_next, gap, ranks, resid, mu,
                     svds, (time.perf_counter() - t0) * 1e3)
        if cfg.diagnostics_on and tau == 1.0:
            # (1/mu - L)/2 equals rho/2, the multi-block decrease constant.
            _check_descent(obj, obj_next, gap, mu, l_max, t + 1)
        if callback is not None:
            callback(t + 1, (x0_new, list(new_xs)))
        decrease = obj - obj_next
        x0, xs, svs, obj = x0_new, new_xs, [sv0_new] + new_svs, obj_next
        if gap / denom <= cfg.rel_tol:
            termination = TERMINATION_TOL
            break
        if decrease < _STALL_DECREASE:
            stall += 1
            if stall >= _STALL_LIMIT:
                termination = TERMINATION_STALLED
                break
        else:
            stall = 0
    return Solution(trace=trace, termination=termination, x0=x0, xs=list(xs))


def alter_ista_solve(prob: MultiDomainProblem, specs, cfg: SolverConfig | None = None,
                     x0_init=None, xs_init=None, callback=None) -> Solution:
    """Block-cyclic proximal gradient on the multi-domain problem.

    ``specs`` holds one fixed-weight penalty per block: index 0 regularizes
    the shared matrix, index d the d-th domain. Blocks start at zero unless
    initial values are supplied. Within a sweep the shared block is updated
    first and the domain updates see its new value.
    """
    cfg = cfg or SolverConfig()
    specs = list(specs)
    if len(specs) != prob.num_domains + 1:
        raise ValueError(f"{len(specs)} penalties for {prob.num_domains + 1} blocks")
    rules = [_FixedWeightRule(s) for s in specs]
    return _solve_multi(prob, rules, cfg, x0_init, xs_init, callback)


def alter_istra_solve(prob: MultiDomainProblem, p: float, eps: float,
                      cfg: SolverConfig | None = None, x0_init=None,
                      xs_init=None, callback=None) -> Solution:
    """Block-cyclic variant with per-block reweighting from each spectrum."""
    cfg = cfg or SolverConfig()
    rules = [_ReweightRule(p, eps) for _ in range(prob.num_domains + 1)]
    return _solve_multi(prob, rules, cfg, x0_init, xs_init, callback)
