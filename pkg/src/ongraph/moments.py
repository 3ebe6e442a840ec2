"""Closed-form expectations, variances and limiting constants.

Covers the exact finite-n mean of the 1-D ONG total weight under all
three rootings, the mean gaps between rootings, the exact mean and
variance of the 1-D nearest-neighbour directed graph, the limiting
scaled variance V_alpha, the increment moments, and the dimensional
constants (unit-ball volume, law-of-large-numbers limit, increment
scaling).

The finite-n ONG mean is assembled as an exact chain: the doubly rooted
sequence has an exact closed form, and the singly rooted and plain
variants follow by adding the exact finite-n rooting gaps.  alpha = 1 is
a removable singularity of the generic forms (1/(alpha-1) terms); a
guard band routes nearby alpha to the logarithmic branch.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

from .errors import DomainError
from .specfun import gamma, gamma_ratio, hyp2f1

# Euler's constant, fixed 20-digit literal; euler_gamma_harmonic provides
# an in-repo cross-check through the defining harmonic-sum limit.
EULER_GAMMA = 0.57721566490153286061

# |alpha - 1| below this routes to the alpha = 1 branch of the ONG mean
# formulas, where the generic expressions lose all precision.
ALPHA_ONE_BAND = 1e-6

VARIANTS = ("plain", "rooted0", "rooted01")


@dataclass(frozen=True)
class MomentReport:
    """One evaluated closed-form quantity with its parameters."""

    quantity: str
    params: dict
    value: float
    asymptotic_value: float | None = None

    def to_json(self) -> str:
        payload = {"quantity": self.quantity, "params": self.params,
                   "value": self.value}
        if self.asymptotic_value is not None:
            payload["asymptotic_value"] = self.asymptotic_value
        return json.dumps(payload, sort_keys=True)


def harmonic(n: int) -> float:
    """H_n = sum_{i<=n} 1/i (summed small-to-large for accuracy)."""
    return sum(1.0 / i for i in range(n, 0, -1))


def euler_gamma_harmonic(k: int) -> float:
    """Harmonic-sum approximation H_k - log k = gamma + O(1/k)."""
    if k < 1:
        raise DomainError("euler_gamma_harmonic needs k >= 1")
    return harmonic(k) - math.log(k)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d: pi^(d/2) / Gamma(1 + d/2)."""
    d = _check_dim(d)
    return math.pi ** (d / 2.0) / gamma(1.0 + d / 2.0)


def lln_constant(d: int, alpha: float) -> float:
    """L^1 limit of n^((alpha-d)/d) times the ONG total weight, 0 <= alpha < d:

        (d / (d - alpha)) * v_d^(-alpha/d) * Gamma(1 + alpha/d).
    """
    d = _check_dim(d)
    if not 0.0 <= alpha < d:
        raise DomainError(f"lln_constant requires 0 <= alpha < d, got alpha={alpha!r}")
    vd = unit_ball_volume(d)
    return d / (d - alpha) * vd ** (-alpha / d) * gamma(1.0 + alpha / d)


def increment_scaling_constant(d: int, alpha: float) -> float:
    """Constant c with E[(n-th increment)^alpha] ~ c * n^(-alpha/d):

        (alpha/d) * v_d^(-alpha/d) * Gamma(alpha/d).

    At alpha = d this reduces to 1/v_d, the coefficient of log n in the
    critical-exponent mean.
    """
    d = _check_dim(d)
    if not alpha > 0.0:
        raise DomainError(f"increment_scaling_constant requires alpha > 0, got {alpha!r}")
    vd = unit_ball_volume(d)
    return (alpha / d) * vd ** (-alpha / d) * gamma(alpha / d)


# ---------------------------------------------------------------------------
# exact finite-n means of the 1-D ONG total weight
# ---------------------------------------------------------------------------

def _near_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_BAND


def _warn_band(alpha: float) -> None:
    if alpha != 1.0 and _near_one(alpha):
        warnings.warn(
            f"alpha={alpha!r} is within {ALPHA_ONE_BAND} of the removable "
            "singularity at 1; using the alpha=1 branch", stacklevel=3)


def rooted01_exact_mean(n: int, alpha: float) -> float:
    """Exact E[total weight] for the doubly rooted sequence on n uniforms.

    alpha != 1:  1 + 2^-a/(a-1) * (1 - Gamma(1+a) (n+1) Gamma(n+1)/Gamma(n+1+a))
    alpha  = 1:  1 + (H_{n+1} - 1)/2
    """
    n, alpha = _check_n_alpha(n, alpha)
    _warn_band(alpha)
    if _near_one(alpha):
        return 1.0 + 0.5 * (harmonic(n + 1) - 1.0)
    c = 2.0 ** -alpha / (alpha - 1.0)
    return 1.0 + c * (1.0 - gamma(1.0 + alpha) * (n + 1.0) * gamma_ratio(n, alpha))


def _snap_alpha(alpha: float) -> float:
    # inside the guard band every formula evaluates at exactly 1
    return 1.0 if _near_one(alpha) else alpha


def mean_variant_gap(n: int, alpha: float, which: str) -> float:
    """Exact expected difference between rootings of the same sequence.

    which = "rooted0_minus_rooted01":
        (1 - 2^-a - a)/a + (2^-a - 1) Gamma(a) Gamma(n+1)/Gamma(n+1+a)
    which = "plain_minus_rooted0": the same with first term divided by (1+a).
    """
    if n != int(n) or n < 2:
        raise DomainError(f"mean_variant_gap needs integer n >= 2, got {n!r}")
    if not alpha > 0.0:
        raise DomainError(f"mean_variant_gap requires alpha > 0, got {alpha!r}")
    if which not in ("rooted0_minus_rooted01", "plain_minus_rooted0"):
        raise DomainError(f"unknown gap {which!r}")
    return _gap(int(n), float(alpha), which)


def _gap(n: int, alpha: float, which: str) -> float:
    # valid for all n >= 1 (checked against direct increment expectations)
    lead = (1.0 - 2.0 ** -alpha - alpha) / alpha
    if which == "plain_minus_rooted0":
        lead /= 1.0 + alpha
    return lead + (2.0 ** -alpha - 1.0) * gamma(alpha) * gamma_ratio(n, alpha)


def expected_ong_weight(n: int, alpha: float, variant: str = "plain") -> MomentReport:
    """Exact finite-n mean of the 1-D ONG total weight, plus its asymptote.

    The value is exact for every variant: the doubly rooted closed form
    plus the exact rooting gaps.  asymptotic_value evaluates the
    large-n expansion (through its constant term) at this n.
    """
    n, alpha = _check_n_alpha(n, alpha)
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    _warn_band(alpha)
    alpha = _snap_alpha(alpha)
    value = rooted01_exact_mean(n, alpha)
    if variant in ("rooted0", "plain"):
        value += _gap(n, alpha, "rooted0_minus_rooted01")
    if variant == "plain":
        value += _gap(n, alpha, "plain_minus_rooted0")
    return MomentReport(
        quantity="expected_ong_weight",
        params={"n": n, "alpha": alpha, "variant": variant},
        value=value,
        asymptotic_value=_ong_mean_asymptote(n, alpha, variant),
    )


def _ong_mean_asymptote(n: int, alpha: float, variant: str) -> float:
    # constant terms of the three expansions, by variant
    if _near_one(alpha):
        const = {"rooted01": 0.5 * (EULER_GAMMA + 1.0),
                 "rooted0": 0.5 * EULER_GAMMA,
                 "plain": 0.5 * EULER_GAMMA - 0.25}[variant]
        return 0.5 * math.log(n) + const
    ta = 2.0 ** -alpha
    if alpha < 1.0:
        lead = gamma(alpha + 1.0) / (1.0 - alpha) * ta * n ** (1.0 - alpha)
        # The plain constant is the rooted0 constant plus the limiting
        # rooting gap, which simplifies to 2(1-2^-a-a)/(a(1-a^2)).  The
        # widely quoted standalone form 2/a - 2^-a(2-a)/(a(1-a)) differs
        # from this route by (2-2^-a)/(1+a) and disagrees with direct
        # simulation; the exact finite-n chain is the authority here.
        const = {"rooted01": 1.0 - ta / (1.0 - alpha),
                 "rooted0": 1.0 / alpha - ta / (alpha * (1.0 - alpha)),
                 "plain": 2.0 * (1.0 - ta - alpha) / (alpha * (1.0 - alpha * alpha)),
                 }[variant]
        return lead + const
    return {"rooted01": 1.0 + ta / (alpha - 1.0),
            "rooted0": 1.0 / alpha + ta / (alpha * (alpha - 1.0)),
            "plain": 2.0 / (alpha * (alpha + 1.0)) * (1.0 + ta / (alpha - 1.0)),
            }[variant]


# ---------------------------------------------------------------------------
# nearest-neighbour directed graph: exact mean, variance, limits
# ---------------------------------------------------------------------------

def expected_nn_weight(n: int, alpha: float) -> float:
    """Exact E of the NN directed graph total weight on n uniforms:

        ((n-2) 2^-a + 2) * Gamma(n+1) Gamma(a+1) / Gamma(n+a+1).
    """
    if n != int(n) or n < 2:
        raise DomainError(f"expected_nn_weight needs integer n >= 2, got {n!r}")
    if not alpha > 0.0:
        raise DomainError(f"expected_nn_weight requires alpha > 0, got {alpha!r}")
    n = int(n)
    return ((n - 2.0) * 2.0 ** -alpha + 2.0) * gamma(alpha + 1.0) * gamma_ratio(n, alpha)


def J_n_alpha(n: int, alpha: float) -> float:
    """Cross moment of adjacent minimum spacings:

        6^(-a-1) Gamma(n+1) Gamma(2+2a) / ((1+a) Gamma(n+1+2a))
            * 2F1(-a, 1+a; 2+a; 1/3).
    """
    if n != int(n) or n < 2:
        raise DomainError(f"J_n_alpha needs integer n >= 2, got {n!r}")
    if not alpha > 0.0:
        raise DomainError(f"J_n_alpha requires alpha > 0, got {alpha!r}")
    n = int(n)
    return (6.0 ** (-alpha - 1.0) * gamma(2.0 + 2.0 * alpha) / (1.0 + alpha)
            * gamma_ratio(n, 2.0 * alpha)
            * hyp2f1(-alpha, 1.0 + alpha, 2.0 + alpha, 1.0 / 3.0))


def j_alpha(alpha: float) -> float:
    """Scaled limit 8 lim n^(2a) J_{n,a}."""
    if not alpha > 0.0:
        raise DomainError(f"j_alpha requires alpha > 0, got {alpha!r}")
    return (8.0 * 6.0 ** (-alpha - 1.0) * gamma(2.0 + 2.0 * alpha) / (1.0 + alpha)
            * hyp2f1(-alpha, 1.0 + alpha, 2.0 + alpha, 1.0 / 3.0))


def var_nn_weight(n: int, alpha: float) -> float:
    """Exact variance of the NN directed graph total weight, n >= 4."""
    if n != int(n) or n < 4:
        raise DomainError(f"var_nn_weight needs integer n >= 4, got {n!r}")
    if not alpha > 0.0:
        raise DomainError(f"var_nn_weight requires alpha > 0, got {alpha!r}")
    n = int(n)
    ta = 2.0 ** -alpha
    fa = 4.0 ** -alpha
    bracket = (gamma(2.0 * alpha + 1.0)
               * (2.0 - 2.0 * 3.0 ** (-2.0 * alpha) + fa * n
                  + 2.0 * 3.0 ** (-1.0 - 2.0 * alpha) * n)
               + gamma(alpha + 1.0) ** 2
               * (4.0 + 12.0 * fa - 12.0 * ta + 2.0 ** (2.0 - alpha) * n
                  - 7.0 * fa * n + fa * n * n))
    mean = expected_nn_weight(n, alpha)
    return (gamma_ratio(n, 2.0 * alpha) * bracket - mean * mean
            + 8.0 * (n - 3.0) * J_n_alpha(n, alpha))


def V_alpha(alpha: float) -> float:
    """Limit of n^(2a-1) Var of the NN directed graph total weight:

        (4^-a + 2 * 3^(-1-2a)) Gamma(2a+1) - 4^-a (3+a^2) Gamma(a+1)^2 + j_a.
    """
    if not alpha > 0.0:
        raise DomainError(f"V_alpha requires alpha > 0, got {alpha!r}")
    fa = 4.0 ** -alpha
    return ((fa + 2.0 * 3.0 ** (-1.0 - 2.0 * alpha)) * gamma(2.0 * alpha + 1.0)
            - fa * (3.0 + alpha * alpha) * gamma(alpha + 1.0) ** 2
            + j_alpha(alpha))


# ---------------------------------------------------------------------------
# increments and fixed-point means
# ---------------------------------------------------------------------------

def T_n_moment(n: int, beta: float) -> float:
    """E[T_n^beta] for the n-th doubly rooted increment:

        2^-b Gamma(n+1) Gamma(b+1) / Gamma(n+b+1).
    """
    if n != int(n) or n < 1:
        raise DomainError(f"T_n_moment needs integer n >= 1, got {n!r}")
    if not beta > 0.0:
        raise DomainError(f"T_n_moment requires beta > 0, got {beta!r}")
    return 2.0 ** -beta * gamma(beta + 1.0) * gamma_ratio(int(n), beta)


def rde_mean(alpha: float, which: str) -> float:
    """Mean of the uncentred fixed-point laws, alpha > 1.

    which = "J": 2^-a / (a-1)
    which = "H": 1/a + 2^-a / (a (a-1))
    """
    if not alpha > 1.0:
        raise DomainError(f"rde_mean requires alpha > 1, got {alpha!r}")
    if which == "J":
        return 2.0 ** -alpha / (alpha - 1.0)
    if which == "H":
        return 1.0 / alpha + 2.0 ** -alpha / (alpha * (alpha - 1.0))
    raise DomainError(f"unknown family {which!r} (expected 'J' or 'H')")


def _check_dim(d) -> int:
    if d != int(d) or d < 1:
        raise DomainError(f"need integer dimension d >= 1, got {d!r}")
    return int(d)


def _check_n_alpha(n, alpha) -> tuple[int, float]:
    if n != int(n) or n < 1:
        raise DomainError(f"need integer n >= 1, got {n!r}")
    if not alpha > 0.0:
        raise DomainError(f"need alpha > 0, got {alpha!r}")
    return int(n), float(alpha)
