"""Spectral penalties and the singular-value shrinkage (proximal) operator.

Supported penalties: weighted nuclear norm with non-descending weights
(presets: plain nuclear norm, truncated nuclear norm with zero weights on the
top-r singular values) and the smoothed Schatten-p penalty
``sum((sigma_i + eps) ** p)`` with p in (0, 1), whose tangent majorizer yields
the reweighting rule used by the reweighted solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SvdFactors, as_matrix, thin_svd
from .exceptions import ConfigError

__all__ = [
    "validate_weights",
    "penalty_value",
    "reweight",
    "majorizer_value",
    "shrink",
    "Penalty",
]


def validate_weights(weights, k: int | None = None) -> np.ndarray:
    """Validate a weight vector: finite, non-negative, non-descending."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-D vector")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and non-negative")
    if np.any(np.diff(w) < 0):
        raise ValueError("weights must be non-descending")
    if k is not None and w.size != k:
        raise ValueError(f"expected {k} weights, got {w.size}")
    return w


def _validate_sv(sv, name: str = "singular values") -> np.ndarray:
    sv = np.asarray(sv, dtype=np.float64)
    if sv.ndim != 1 or sv.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(sv)) or np.any(sv < 0):
        raise ValueError(f"{name} must be finite and non-negative")
    if np.any(np.diff(sv) > 0):
        raise ValueError(f"{name} must be sorted non-increasing")
    return sv


def _check_p_eps(p: float, eps: float, eps_positive: bool = True):
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if eps_positive:
        if eps <= 0.0:
            raise ValueError(f"eps must be positive, got {eps}")
    elif eps < 0.0:
        raise ValueError(f"eps must be non-negative, got {eps}")


def penalty_value(sv, spec: "Penalty") -> float:
    """Evaluate a penalty on a sorted non-increasing singular value vector."""
    sv = _validate_sv(sv)
    if spec.variant == "schatten":
        # eps = 0 is permitted for evaluation only; solvers require eps > 0.
        return float(np.sum((sv + spec.eps) ** spec.p))
    return float(spec.weight_vector(sv.size) @ sv)


def reweight(sv, p: float, eps: float) -> np.ndarray:
    """Tangent weights of the smoothed Schatten-p penalty at ``sv``.

    w_i = p * (sigma_i + eps) ** (p - 1). Larger singular values get smaller
    weights, so the output is non-descending whenever ``sv`` is sorted
    non-increasing; a cumulative max makes that exact under floating point.
    """
    sv = _validate_sv(sv)
    _check_p_eps(p, eps)
    w = p * (sv + eps) ** (p - 1.0)
    return np.maximum.accumulate(w)


def majorizer_value(sv, sv_anchor, p: float, eps: float) -> float:
    """Tangent upper bound of the smoothed Schatten-p penalty.

    Linearizes the concave penalty at ``sv_anchor`` and evaluates at ``sv``;
    equals the penalty itself when the two coincide, and never falls below it.
    """
    sv = np.asarray(sv, dtype=np.float64)
    anchor = _validate_sv(sv_anchor, "anchor singular values")
    if sv.shape != anchor.shape:
        raise ValueError(f"length mismatch: {sv.shape} vs {anchor.shape}")
    _check_p_eps(p, eps)
    g_anchor = float(np.sum((anchor + eps) ** p))
    slope = p * (anchor + eps) ** (p - 1.0)
    return g_anchor + float(slope @ (np.abs(sv) - anchor))


def shrink(m, weights, mu: float) -> tuple[np.ndarray, SvdFactors]:
    """Proximal map of the weighted spectral penalty at threshold ``mu``.

    Solves argmin_X 0.5*||X - M||_F^2 + mu * sum(w_i * sigma_i(X)) by soft
    thresholding the singular values of M: the output spectrum is
    ``(s_i - mu*w_i)_+``, still sorted because the weights are non-descending.
    Returns the result together with the SVD factors of M (the output shares
    their singular vectors). Output rank never exceeds the rank of M.
    """
    m = as_matrix(m, "m")
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    k = min(m.shape)
    w = validate_weights(weights, k)
    fac = thin_svd(m)
    if not np.any(w > 0):
        # Zero threshold: the prox is the identity, skip the reconstruction.
        return m.copy(), fac
    shrunk = np.maximum(fac.s - mu * w, 0.0)
    return (fac.u * shrunk) @ fac.v.T, fac


@dataclass(frozen=True)
class Penalty:
    """Serializable description of a spectral penalty.

    Fixed-weight variants ("weighted", "nuclear", "truncated") materialize a
    weight vector of any requested length; the "schatten" variant is the
    reweighted smoothed penalty and carries its exponent as a rational pair
    (the theory wants a rational p; evaluation uses the float quotient).
    """

    variant: str
    weights: tuple[float, ...] | None = None
    lam: float = 0.0
    r: int = 0
    p_num: int = 1
    p_den: int = 2
    eps: float = 0.0

    @classmethod
    def weighted(cls, weights) -> "Penalty":
        w = validate_weights(weights)
        return cls(variant="weighted", weights=tuple(float(x) for x in w))

    @classmethod
    def nuclear(cls, lam: float) -> "Penalty":
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        return cls(variant="nuclear", lam=float(lam))

    @classmethod
    def truncated(cls, r: int, lam: float) -> "Penalty":
        if r < 0:
            raise ValueError(f"truncation rank must be non-negative, got {r}")
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        return cls(variant="truncated", r=int(r), lam=float(lam))

    @classmethod
    def schatten(cls, p_num: int, p_den: int, eps: float) -> "Penalty":
        if p_den <= 0 or p_num <= 0 or p_num >= p_den:
            raise ValueError(f"p = {p_num}/{p_den} must be a rational in (0, 1)")
        if eps < 0:
            raise ValueError(f"eps must be non-negative, got {eps}")
        return cls(variant="schatten", p_num=int(p_num), p_den=int(p_den),
                   eps=float(eps))

    @property
    def is_reweighted(self) -> bool:
        return self.variant == "schatten"

    @property
    def p(self) -> float:
        return self.p_num / self.p_den

    def weight_vector(self, k: int) -> np.ndarray:
        """Materialize the fixed weight vector for min(m, n) = k."""
        if self.variant == "weighted":
            return validate_weights(np.asarray(self.weights), k)
        if self.variant == "nuclear":
            return np.full(k, self.lam)
        if self.variant == "truncated":
            w = np.full(k, self.lam)
            w[:min(self.r, k)] = 0.0
            return w
        raise ValueError("the reweighted (schatten) penalty has no fixed weights; "
                         "its weights depend on the current iterate")

    def value(self, sv) -> float:
        return penalty_value(sv, self)

    def to_dict(self) -> dict:
        if self.variant == "weighted":
            return {"variant": "weighted", "weights": list(self.weights)}
        if self.variant == "nuclear":
            return {"variant": "nuclear", "lambda": self.lam}
        if self.variant == "truncated":
            return {"variant": "truncated", "r": self.r, "lambda": self.lam}
        return {"variant": "schatten", "p_num": self.p_num, "p_den": self.p_den,
                "eps": self.eps}

    @classmethod
    def from_dict(cls, d: dict) -> "Penalty":
        if not isinstance(d, dict):
            raise ConfigError(f"penalty must be an object, got {type(d).__name__}")
        variant = d.get("variant")
        known = {
            "weighted": ("weights",),
            "nuclear": ("lambda",),
            "truncated": ("r", "lambda"),
            "schatten": ("p_num", "p_den", "eps"),
        }
        if variant not in known:
            raise ConfigError(f"penalty.variant: unknown variant {variant!r}")
        extra = set(d) - set(known[variant]) - {"variant"}
        if extra:
            raise ConfigError(f"penalty: unexpected field(s) {sorted(extra)}")
        missing = [f for f in known[variant] if f not in d]
        if missing:
            raise ConfigError(f"penalty: missing field(s) {missing}")
        try:
            if variant == "weighted":
                return cls.weighted(d["weights"])
            if variant == "nuclear":
                return cls.nuclear(d["lambda"])
            if variant == "truncated":
                return cls.truncated(d["r"], d["lambda"])
            return cls.schatten(d["p_num"], d["p_den"], d["eps"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"penalty: {exc}") from None
