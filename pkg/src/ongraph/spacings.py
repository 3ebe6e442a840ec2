"""Uniform spacings in (0,1): sampling, marginal densities, exact moments.

n independent uniform points split [0,1] into n+1 exchangeable gaps
whose joint law is the flat (symmetric parameter-1) Dirichlet law on the
simplex.  The moment formulas below are the gamma-ratio identities that
the nearest-neighbour graph calculations reduce to.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .specfun import gamma_ratio, log_gamma

SUM_TOL = 1e-12  # gaps of a valid spacing vector sum to 1 within this


def sample_spacings(n: int, rng) -> np.ndarray:
    """The n+1 gaps induced by n uniforms on (0,1), as one draw.

    Sampling is sort-and-difference of n uniforms rather than normalised
    exponentials, so coupled experiments can reuse the very same uniform
    variates.  `rng` needs only a `.random(size)` method; a ReplayStream
    may be passed to inject deterministic points.
    """
    n = _check_count(n, minimum=0)
    if n == 0:
        return np.array([1.0])
    u = np.sort(rng.random(n))
    return np.diff(u, prepend=0.0, append=1.0)


def sample_spacings_many(n: int, replications: int, rng) -> np.ndarray:
    """(replications, n+1) array of independent spacing vectors."""
    n = _check_count(n, minimum=0)
    if n == 0:
        return np.ones((replications, 1))
    u = np.sort(rng.random((replications, n)), axis=1)
    out = np.empty((replications, n + 1))
    out[:, 0] = u[:, 0]
    out[:, 1:n] = np.diff(u, axis=1)
    out[:, n] = 1.0 - u[:, -1]
    return out


def spacing_moment(n: int, beta: float) -> float:
    """E[S^beta] for a single spacing among n+1:
    Gamma(n+1) Gamma(beta+1) / Gamma(n+beta+1)."""
    n = _check_count(n, minimum=1)
    if not beta > 0.0:
        raise DomainError(f"spacing_moment requires beta > 0, got {beta!r}")
    return math.exp(log_gamma(beta + 1.0)) * gamma_ratio(n, beta)


def joint_spacing_moment(n: int, beta: float) -> float:
    """E[(S_1 S_2)^beta] for two distinct spacings:
    Gamma(n+1) Gamma(beta+1)^2 / Gamma(n+2 beta+1)."""
    n = _check_count(n, minimum=2)
    if not beta > 0.0:
        raise DomainError(f"joint_spacing_moment requires beta > 0, got {beta!r}")
    return math.exp(2.0 * log_gamma(beta + 1.0)) * gamma_ratio(n, 2.0 * beta)


def spacing_density(n: int, xs) -> float:
    """Joint marginal density of the first k spacings (k = 1, 2 or 3).

    Equals n! / (n-k)! * (1 - sum xs)^(n-k) inside the simplex and 0
    outside.  Only k <= 3 is supported; that is all the graph moment
    calculations need.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    k = xs.size
    if k not in (1, 2, 3):
        raise DomainError(f"spacing_density supports 1 to 3 coordinates, got {k}")
    n = _check_count(n, minimum=k)
    s = float(xs.sum())
    if np.any(xs < 0.0) or s > 1.0:
        return 0.0
    val = 1.0
    for j in range(k):
        val *= n - j
    return val * (1.0 - s) ** (n - k)


def _check_count(n, minimum: int) -> int:
    if n != int(n) or n < minimum:
        raise DomainError(f"need an integer n >= {minimum}, got {n!r}")
    return int(n)
