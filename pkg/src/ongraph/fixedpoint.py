"""Limiting distributions of the 1-D ONG via recursive fixed points.

Three centred families are supported for every weight exponent
alpha > 1/2 (below which the recursion stops being an L^2 contraction):

  J : the doubly rooted limit, a binary tree recursion
          X =d U^a X1 + (1-U)^a X2 + b_J(U)
  H : the singly rooted limit, a self-chained recursion
          X =d U^a J + (1-U)^a X + b_H(U)
  G : the plain limit, one combination level
          X =d U^a H1 + (1-U)^a H2 + b_G(U)

with the logarithmic shift forms at alpha = 1.  For alpha > 1 the
uncentred laws (J, H, and the total-weight limit W = uncentred G) are
the centred draws plus their exact means; expanding the uncentred
recursion directly gives the identical value path by a telescoping
argument, so one sampler serves both.

Sampling expands the recursion tree depth first and prunes any subtree
whose accumulated coefficient product drops below `tol`; a pruned
subtree is a centred remainder and is replaced by its mean, 0.  The
moment solver turns the same equations into linear identities for
second and third moments (cross terms with independent mean-zero
factors vanish) with all U-integrals done by adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .errors import DomainError
from .moments import rde_mean
from .rng import BLOCK, TAG_RDE, block_ranges, substream

FAMILIES = ("J", "H", "G")
_FAMILY_CODE = {"J": _kernels.FAM_J, "H": _kernels.FAM_H, "G": _kernels.FAM_G}

DEFAULT_TOL = 1e-4
DEPTH_CAP = 64

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-13, limit=300)


# ---------------------------------------------------------------------------
# shift functions (python-facing wrappers over the compiled scalars)
# ---------------------------------------------------------------------------

def _powers(u: float, alpha: float):
    v = 1.0 - u
    return u, v, u ** alpha, v ** alpha


def shift_J(u: float, alpha: float) -> float:
    return _kernels.shift_j(*_powers(u, alpha), alpha)


def shift_H(u: float, alpha: float) -> float:
    return _kernels.shift_h(*_powers(u, alpha), alpha)


def shift_G(u: float, alpha: float) -> float:
    return _kernels.shift_g(*_powers(u, alpha), alpha)


def shift_R(u: float, alpha: float) -> float:
    return _kernels.shift_r(*_powers(u, alpha), alpha)


def shift_S(u: float, alpha: float) -> float:
    return _kernels.shift_s(*_powers(u, alpha), alpha)


_SHIFTS = {"J": shift_J, "H": shift_H, "G": shift_G, "R": shift_R, "S": shift_S}


@dataclass(frozen=True)
class RdeSpec:
    """Validated description of one fixed-point equation."""

    alpha: float
    family: str                  # J | H | G | W
    structure: str               # tree-recursive | self-chained | one-level
    centred: bool

    def __post_init__(self):
        if self.family not in ("J", "H", "G", "W"):
            raise DomainError(f"unknown family {self.family!r}")
        a = self.alpha
        # contraction: E[U^2a + (1-U)^2a] = 2/(2a+1) < 1 iff a > 1/2
        if not a > 0.5:
            raise DomainError(
                f"alpha={a!r} violates the contraction condition "
                f"(2/(2 alpha + 1) = {2.0 / (2.0 * a + 1.0):.6f} >= 1)")
        if not self.centred and not a > 1.0:
            raise DomainError("uncentred families exist only for alpha > 1")

    def coefficients(self, u: float):
        """(A_1, A_2) of the defining equation at U = u."""
        return u ** self.alpha, (1.0 - u) ** self.alpha

    def shift(self, u: float) -> float:
        """B(U) of the centred defining equation at U = u."""
        fam = "G" if self.family == "W" else self.family
        return _SHIFTS[fam](u, self.alpha)

    def shift_mean(self) -> float:
        """E[B(U)] by quadrature; 0 for every centred family."""
        return _integrate(self.shift)

    def mean(self) -> float:
        """Exact mean of the law (0 when centred)."""
        if self.centred:
            return 0.0
        return _uncentred_mean(self.family, self.alpha)


def make_spec(family: str, alpha: float, centred: bool = True) -> RdeSpec:
    structure = {"J": "tree-recursive", "H": "self-chained",
                 "G": "one-level", "W": "one-level"}[family]
    if family == "W":
        centred = False
    return RdeSpec(alpha=float(alpha), family=family, structure=structure,
                   centred=centred)


def _uncentred_mean(family: str, alpha: float) -> float:
    if family == "J":
        return rde_mean(alpha, "J")
    if family == "H":
        return rde_mean(alpha, "H")
    # W: total-weight limit, 2 E[H_a] / (1 + a)
    return 2.0 * rde_mean(alpha, "H") / (1.0 + alpha)


@dataclass(frozen=True)
class RdeSample:
    """One draw plus its truncation bookkeeping."""

    value: float
    truncation_depth_reached: bool
    discarded_weight: float  # largest pruned coefficient product


def _check_tol(tol: float) -> float:
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")
    return float(tol)


def _draw(family: str, alpha: float, tol: float, rng, centred: bool) -> RdeSample:
    spec = make_spec(family, alpha, centred)
    tol = _check_tol(tol)
    out = np.empty(1)
    mx, nhit = _kernels.rde_block(rng, 1, _FAMILY_CODE["G" if family == "W" else family],
                                  float(alpha), tol, DEPTH_CAP, out)
    return RdeSample(value=float(out[0]) + spec.mean(),
                     truncation_depth_reached=bool(nhit),
                     discarded_weight=float(mx))


def sample_J(alpha: float, tol: float, rng, centred: bool = True) -> RdeSample:
    """One draw of the doubly rooted limit (centred, or raw for alpha > 1)."""
    return _draw("J", alpha, tol, rng, centred)


def sample_H(alpha: float, tol: float, rng, centred: bool = True) -> RdeSample:
    """One draw of the singly rooted limit."""
    return _draw("H", alpha, tol, rng, centred)


def sample_G(alpha: float, tol: float, rng, centred: bool = True) -> RdeSample:
    """One draw of the plain limit (centred) or of W (centred=False, alpha > 1)."""
    return _draw("G" if centred else "W", alpha, tol, rng, centred)


def draw_many(family: str, alpha: float, count: int, tol: float = DEFAULT_TOL,
              master_seed: int = 0, centred: bool = True, workers: int | None = None):
    """`count` independent draws under block substreams of `master_seed`.

    Returns (values, stats) with stats = {"max_discarded_weight",
    "depth_capped_draws"}.  Identical arguments give identical values
    regardless of worker count.
    """
    if family == "W":
        centred = False
    spec = make_spec(family, alpha, centred)
    tol = _check_tol(tol)
    if count < 1:
        raise DomainError("count must be >= 1")
    code = _FAMILY_CODE["G" if family == "W" else family]
    blocks = list(block_ranges(count))
    outs = [np.empty(c) for _, c in blocks]

    def run(k):
        b, c = blocks[k]
        gen = substream(master_seed, TAG_RDE, b)
        return _kernels.rde_block(gen, c, code, float(alpha), tol, DEPTH_CAP, outs[k])

    results = _run_blocks(run, len(blocks), workers)
    mx = max(r[0] for r in results)
    nhit = sum(r[1] for r in results)
    values = np.concatenate(outs) + spec.mean()
    return values, {"max_discarded_weight": float(mx), "depth_capped_draws": int(nhit)}


def _run_blocks(run, nblocks: int, workers: int | None):
    import os
    from concurrent.futures import ThreadPoolExecutor

    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or nblocks <= 1:
        return [run(k) for k in range(nblocks)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(run, range(nblocks)))


# ---------------------------------------------------------------------------
# moments by quadrature
#
# Squaring / cubing each defining equation and taking expectations kills
# every cross term carrying an isolated mean-zero factor, leaving linear
# equations in the unknown moments:
#
#   E[X^2] terms scale by E[U^2a + (1-U)^2a] = 2/(2a+1)  (tree)
#   E[X^3] terms scale by 2/(3a+1), well posed for a > 1/3.
#
# Covariances come from the joint system for (J, R, S) where
# H = J + R and G = J + R + S share one uniform per level:
#
#   R =d (1-U)^a R' + b_R(U),   S =d U^a R'' + b_S(U).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RdeMoments:
    alpha: float
    var_J: float
    var_H: float
    var_G: float
    third_J: float
    third_H: float
    third_G: float
    cov_JH: float
    cov_GH: float
    cov_GJ: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "alpha", "var_J", "var_H", "var_G", "third_J", "third_H",
            "third_G", "cov_JH", "cov_GH", "cov_GJ")}


def _integrate(f) -> float:
    # split at 1/2: the min kink and the indicator jump both sit there
    a, _ = quad(f, 0.0, 0.5, **_QUAD_OPTS)
    b, _ = quad(f, 0.5, 1.0, **_QUAD_OPTS)
    return a + b


def moments_by_quadrature(alpha: float) -> RdeMoments:
    """Second and third moments and pairwise covariances of the centred laws."""
    a = float(alpha)
    make_spec("J", a)  # contraction check
    bJ = lambda u: shift_J(u, a)
    bH = lambda u: shift_H(u, a)
    bG = lambda u: shift_G(u, a)
    bR = lambda u: shift_R(u, a)
    bS = lambda u: shift_S(u, a)
    w2 = lambda u: u ** (2 * a) + (1.0 - u) ** (2 * a)
    uu2 = lambda u: u ** (2 * a)
    vv2 = lambda u: (1.0 - u) ** (2 * a)

    c2 = 2.0 / (2.0 * a + 1.0)       # E[w2]
    e2 = 1.0 / (2.0 * a + 1.0)       # E[U^2a]
    c3 = 2.0 / (3.0 * a + 1.0)
    e3 = 1.0 / (3.0 * a + 1.0)

    var_J = _integrate(lambda u: bJ(u) ** 2) / (1.0 - c2)
    var_H = (e2 * var_J + _integrate(lambda u: bH(u) ** 2)) / (1.0 - e2)
    var_G = c2 * var_H + _integrate(lambda u: bG(u) ** 2)

    third_J = (_integrate(lambda u: bJ(u) ** 3)
               + 3.0 * _integrate(lambda u: w2(u) * bJ(u)) * var_J) / (1.0 - c3)
    third_H = (e3 * third_J
               + _integrate(lambda u: bH(u) ** 3)
               + 3.0 * _integrate(lambda u: uu2(u) * bH(u)) * var_J
               + 3.0 * _integrate(lambda u: vv2(u) * bH(u)) * var_H) / (1.0 - e3)
    third_G = (c3 * third_H
               + _integrate(lambda u: bG(u) ** 3)
               + 3.0 * _integrate(lambda u: w2(u) * bG(u)) * var_H)

    # joint system: H = J + R, G = J + R + S
    cov_JR = _integrate(lambda u: bJ(u) * bR(u)) / (1.0 - e2)
    cov_JS = e2 * cov_JR + _integrate(lambda u: bJ(u) * bS(u))
    cov_RS = _integrate(lambda u: bR(u) * bS(u))
    cov_JH = var_J + cov_JR
    cov_GJ = cov_JH + cov_JS
    cov_GH = var_H + cov_JS + cov_RS

    return RdeMoments(alpha=a, var_J=var_J, var_H=var_H, var_G=var_G,
                      third_J=third_J, third_H=third_H, third_G=third_G,
                      cov_JH=cov_JH, cov_GH=cov_GH, cov_GJ=cov_GJ)


def joint_second_moments(alpha: float) -> dict:
    """Variances of the auxiliary differences R and S (checks the joint law)."""
    a = float(alpha)
    make_spec("J", a)
    e2 = 1.0 / (2.0 * a + 1.0)
    var_R = _integrate(lambda u: shift_R(u, a) ** 2) / (1.0 - e2)
    var_S = e2 * var_R + _integrate(lambda u: shift_S(u, a) ** 2)
    return {"var_R": var_R, "var_S": var_S}
