"""Smooth data-fidelity terms and their gradients.

Both losses are masked quadratics, so every (partial) gradient is 1-Lipschitz
and the constants used by the solvers are exact rather than estimated.
"""

from __future__ import annotations

import numpy as np

from .core import ObservationSet, as_matrix

__all__ = ["MaskedQuadraticLoss", "MultiDomainProblem"]


class MaskedQuadraticLoss:
    """f(X) = 0.5 * ||(X - Y) restricted to the observed entries||_F^2."""

    lipschitz = 1.0

    def __init__(self, observations: ObservationSet):
        if observations.count == 0:
            raise ValueError("observation set must be non-empty")
        self.observations = observations
        self._mask = observations.mask
        self._target = observations.observed_matrix()

    @property
    def shape(self) -> tuple[int, int]:
        return self.observations.rows, self.observations.cols

    def _residual(self, x: np.ndarray) -> np.ndarray:
        if x.shape != self._mask.shape:
            raise ValueError(f"iterate shape {x.shape} does not match observations "
                             f"{self._mask.shape}")
        return np.where(self._mask, x, 0.0) - self._target

    def value(self, x) -> float:
        r = self._residual(as_matrix(x, "x"))
        return 0.5 * float(np.sum(r * r))

    def grad(self, x) -> np.ndarray:
        """Gradient; equals the masked residual, hence 1-Lipschitz."""
        return self._residual(as_matrix(x, "x"))


class MultiDomainProblem:
    """Row-aligned observation sets from D domains plus a shared block.

    The iterate is a shared matrix ``x0`` (rows x sum of domain widths) and
    one matrix ``xs[d]`` per domain; domain ``d`` is predicted by the column
    block of ``x0`` assigned to it plus ``xs[d]``. The fidelity is the sum of
    per-domain masked quadratics on those predictions, so every partial
    gradient is 1-Lipschitz (and the joint gradient is 2-Lipschitz).
    """

    def __init__(self, shared_rows: int, domain_cols, observations):
        shared_rows = int(shared_rows)
        domain_cols = [int(c) for c in domain_cols]
        observations = list(observations)
        if shared_rows <= 0 or any(c <= 0 for c in domain_cols):
            raise ValueError("dimensions must be positive")
        if len(domain_cols) < 1:
            raise ValueError("need at least one domain")
        if len(observations) != len(domain_cols):
            raise ValueError(f"{len(observations)} observation sets for "
                             f"{len(domain_cols)} domains")
        for d, obs in enumerate(observations):
            if (obs.rows, obs.cols) != (shared_rows, domain_cols[d]):
                raise ValueError(f"domain {d}: observations are {obs.rows}x{obs.cols}, "
                                 f"expected {shared_rows}x{domain_cols[d]}")
        self.shared_rows = shared_rows
        self.domain_cols = domain_cols
        self.observations = observations
        self.offsets = np.concatenate([[0], np.cumsum(domain_cols)])
        self._losses = [MaskedQuadraticLoss(o) for o in observations]

    @property
    def num_domains(self) -> int:
        return len(self.domain_cols)

    @property
    def total_cols(self) -> int:
        return int(self.offsets[-1])

    @property
    def shape0(self) -> tuple[int, int]:
        return self.shared_rows, self.total_cols

    def block(self, x0: np.ndarray, d: int) -> np.ndarray:
        """Column block of the shared matrix assigned to domain d (a view)."""
        return x0[:, self.offsets[d]:self.offsets[d + 1]]

    def _check(self, x0, xs):
        x0 = as_matrix(x0, "x0")
        if x0.shape != self.shape0:
            raise ValueError(f"x0 shape {x0.shape}, expected {self.shape0}")
        if len(xs) != self.num_domains:
            raise ValueError(f"{len(xs)} domain blocks, expected {self.num_domains}")
        xs = [as_matrix(x, f"xs[{d}]") for d, x in enumerate(xs)]
        for d, x in enumerate(xs):
            if x.shape != (self.shared_rows, self.domain_cols[d]):
                raise ValueError(f"xs[{d}] shape {x.shape}, expected "
                                 f"({self.shared_rows}, {self.domain_cols[d]})")
        return x0, xs

    def value(self, x0, xs) -> float:
        x0, xs = self._check(x0, xs)
        return sum(loss.value(self.block(x0, d) + xs[d])
                   for d, loss in enumerate(self._losses))

    def grad_block(self, d: int, x0, xs) -> np.ndarray:
        """Partial gradient for block d at the given point.

        Block 0 is the shared matrix: its gradient is the column-wise
        concatenation of the per-domain masked residuals. Blocks 1..D are the
        per-domain residuals themselves.
        """
        if not 0 <= d <= self.num_domains:
            raise ValueError(f"block index {d} out of range 0..{self.num_domains}")
        x0, xs = self._check(x0, xs)
        if d >= 1:
            return self._losses[d - 1].grad(self.block(x0, d - 1) + xs[d - 1])
        parts = [self._losses[j].grad(self.block(x0, j) + xs[j])
                 for j in range(self.num_domains)]
        return np.concatenate(parts, axis=1)

    def observed_norm(self) -> float:
        """Frobenius norm of all observed values pooled across domains."""
        return float(np.sqrt(sum(float(np.sum(o.values ** 2))
                                 for o in self.observations)))
