"""Radial calculus and inequality checks on the Poincare ball model.

Comparison-geometry certificates, the modified sharp uncertainty equality,
curvature-improved Hardy inequalities, the scan refuting the published
extremal-parameter equation, and numeric bounds for the open sharp constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .flat import InequalityReport
from .norms import ball_volume_constant
from .quadrature import (
    DecayClass,
    QuadratureSpec,
    RadialProfile,
    hyperbolic_radial_volume_integral,
)

__all__ = [
    "ct",
    "curvature_defect",
    "hyp_distance",
    "conformal_factor",
    "RadialHypFunction",
    "radial_laplacian",
    "laplace_comparison_check",
    "hyp_volume_ratio_check",
    "hyp_ball_volume",
    "hpw_hyperbolic_report",
    "modified_hpw_report",
    "hardy_hyperbolic_report",
    "ko_alpha_scan",
    "hpw_constant_bounds",
]


def ct(c: float, rho: float) -> float:
    """Comparison cotangent for curvature bound c <= 0."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if c > 0:
        raise ValueError("curvature bound must be <= 0")
    if c == 0:
        return 1.0 / rho
    s = math.sqrt(-c)
    return s / math.tanh(s * rho)


def curvature_defect(c: float, rho: float) -> float:
    """Nonnegative defect rho * ct_c(rho) - 1, continuous at 0."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if rho == 0:
        return 0.0
    return rho * ct(c, rho) - 1.0


def conformal_factor(x: np.ndarray) -> float:
    """Metric factor 2 / (1 - |x|^2) of the ball model."""
    r2 = float(np.dot(x, x))
    if r2 >= 1:
        raise ValueError("point must lie strictly inside the unit ball")
    return 2.0 / (1.0 - r2)


def hyp_distance(x: np.ndarray) -> float:
    """Distance from the origin in the ball model: ln((1+|x|)/(1-|x|))."""
    r = float(np.linalg.norm(x))
    if r >= 1:
        raise ValueError("point must lie strictly inside the unit ball")
    return math.log((1 + r) / (1 - r))


@dataclass(frozen=True)
class RadialHypFunction:
    """Radial function of hyperbolic distance with derivative handle.

    The decay class must dominate the e^((n-1) rho) growth of the volume
    element; gaussian decay always does.
    """

    profile: RadialProfile
    derivative: Callable[[float], float]

    @staticmethod
    def gaussian(alpha: float, beta: float = 0.0) -> "RadialHypFunction":
        """e^(-alpha d^2 - beta d) with alpha > 0, beta >= 0."""
        if alpha <= 0 or beta < 0:
            raise ValueError("need alpha > 0 and beta >= 0")

        def u(r):
            return math.exp(-alpha * r * r - beta * r)

        def du(r):
            return -(2 * alpha * r + beta) * u(r)

        return RadialHypFunction(
            RadialProfile(u, DecayClass.gaussian(alpha)), du
        )


def radial_laplacian(u: Callable, du: Callable, d2u: Callable, n: int, rho: float) -> float:
    """Laplace-Beltrami of a radial function on the curvature -1 model."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return d2u(rho) + (n - 1) / math.tanh(rho) * du(rho)


def laplace_comparison_check(n: int, c_list: Sequence[float], rho_grid: Sequence[float]) -> dict:
    """Distance-Laplacian lower bound (n-1) ct_c on the model space.

    Equality for c = -1 (the model curvature); strict inequality for the
    weaker bound c = 0.
    """
    rows = []
    for c in c_list:
        if c not in (0.0, -1.0):
            raise ValueError("only c in {0, -1} is meaningful on this model")
        for rho in rho_grid:
            lap = (n - 1) / math.tanh(rho)  # exact radial Laplacian of d
            bound = (n - 1) * ct(c, rho)
            rows.append(
                {
                    "c": c,
                    "rho": rho,
                    "laplacian": lap,
                    "bound": bound,
                    "defect": lap - bound,
                }
            )
    return {
        "rows": rows,
        "max_equality_defect": max(
            (abs(r["defect"]) for r in rows if r["c"] == -1.0), default=0.0
        ),
        "min_strict_defect": min(
            (r["defect"] for r in rows if r["c"] == 0.0), default=math.inf
        ),
    }


def hyp_ball_volume(n: int, rho: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Volume of the centered hyperbolic ball of radius rho."""
    prof = RadialProfile(lambda r: 1.0 if r < rho else 0.0, DecayClass.compact(rho))
    return hyperbolic_radial_volume_integral(prof, n, spec).value


def hyp_volume_ratio_check(
    n: int, rho_grid: Sequence[float], spec: QuadratureSpec = QuadratureSpec()
) -> dict:
    """Ball-volume over rho^n: non-decreasing, >= omega_n, -> omega_n at 0."""
    omega = ball_volume_constant(n)
    ratios = [hyp_ball_volume(n, rho, spec) / rho**n for rho in rho_grid]
    return {
        "rho": list(rho_grid),
        "ratios": ratios,
        "omega_n": omega,
        "non_decreasing": all(b >= a - 1e-10 for a, b in zip(ratios, ratios[1:])),
        "all_above_omega": all(v >= omega * (1 - 1e-12) for v in ratios),
    }


def _hyp_integrals(u: RadialHypFunction, n: int, spec: QuadratureSpec):
    """Dirichlet energy, second moment, and mass of a radial function."""
    prof, du = u.profile, u.derivative
    d = prof.decay
    if d.kind == "algebraic":
        raise ValueError(
            "algebraic decay cannot beat the exponential volume growth; "
            "gaussian decay is mandatory"
        )

    def dec():
        if d.kind == "compact":
            return DecayClass.compact(d.support_radius)
        return DecayClass.gaussian(2 * d.rate)

    A = hyperbolic_radial_volume_integral(
        RadialProfile(lambda r: du(r) ** 2, dec(), breakpoints=prof.breakpoints), n, spec
    )
    M = hyperbolic_radial_volume_integral(
        RadialProfile(lambda r: r**2 * prof(r) ** 2, dec(), breakpoints=prof.breakpoints),
        n,
        spec,
    )
    L = hyperbolic_radial_volume_integral(
        RadialProfile(lambda r: prof(r) ** 2, dec(), breakpoints=prof.breakpoints), n, spec
    )
    return A, M, L


def hpw_hyperbolic_report(
    u: RadialHypFunction, n: int, spec: QuadratureSpec = QuadratureSpec()
) -> InequalityReport:
    """Plain uncertainty product on the model, against n^2/4.

    Strictly above the target for every nonzero input; no extremal exists.
    """
    A, M, L = _hyp_integrals(u, n, spec)
    if L.value == 0:
        raise ValueError("zero test function")
    ratio = A.value * M.value / L.value**2
    return InequalityReport(
        lhs=A.value * M.value,
        rhs=n**2 / 4 * L.value**2,
        ratio=ratio,
        target=n**2 / 4,
        integral_errors=(
            A.error_estimate / abs(A.value),
            M.error_estimate / abs(M.value),
            L.error_estimate / abs(L.value),
        ),
    )


def modified_hpw_report(
    n: int,
    alpha: Optional[float] = None,
    u: Optional[RadialHypFunction] = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> InequalityReport:
    """Uncertainty product against the curvature-corrected mass, target n^2/4.

    The corrected mass weights u^2 by 1 + ((n-1)/n)(d coth d - 1).  For the
    gaussian family e^(-alpha d^2) this is an equality; any other admissible
    u stays above the target.
    """
    if (alpha is None) == (u is None):
        raise ValueError("pass exactly one of alpha or u")
    if u is None:
        u = RadialHypFunction.gaussian(alpha)
    A, M, _ = _hyp_integrals(u, n, spec)
    prof = u.profile
    d = prof.decay
    dec = (
        DecayClass.compact(d.support_radius)
        if d.kind == "compact"
        else DecayClass.gaussian(2 * d.rate)
    )
    W = hyperbolic_radial_volume_integral(
        RadialProfile(
            lambda r: (1 + (n - 1) / n * curvature_defect(-1.0, r)) * prof(r) ** 2,
            dec,
            breakpoints=prof.breakpoints,
        ),
        n,
        spec,
    )
    ratio = A.value * M.value / W.value**2
    return InequalityReport(
        lhs=A.value * M.value,
        rhs=n**2 / 4 * W.value**2,
        ratio=ratio,
        target=n**2 / 4,
        integral_errors=(
            A.error_estimate / abs(A.value),
            M.error_estimate / abs(M.value),
            W.error_estimate / abs(W.value),
        ),
    )


def hardy_hyperbolic_report(
    u: RadialHypFunction, n: int, spec: QuadratureSpec = QuadratureSpec()
) -> tuple[InequalityReport, InequalityReport]:
    """Quantitative and improved Hardy on the model, both with target 1.

    Report 1: Dirichlet energy against the defect-weighted Hardy integral with
    constant (n-2)^2/4.  Report 2: the continued-fraction relaxation, with the
    remainder weight 1/(pi^2 + d^2).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    prof, du = u.profile, u.derivative
    d = prof.decay
    if d.kind == "algebraic":
        raise ValueError("gaussian decay is mandatory against the volume growth")
    dec = (
        DecayClass.compact(d.support_radius)
        if d.kind == "compact"
        else DecayClass.gaussian(2 * d.rate)
    )
    A = hyperbolic_radial_volume_integral(
        RadialProfile(lambda r: du(r) ** 2, dec, breakpoints=prof.breakpoints), n, spec
    )
    H1 = hyperbolic_radial_volume_integral(
        RadialProfile(
            lambda r: (1 + 2 * (n - 1) / (n - 2) * curvature_defect(-1.0, r))
            * prof(r) ** 2
            / r**2,
            dec,
            breakpoints=prof.breakpoints,
        ),
        n,
        spec,
    )
    if H1.value == 0:
        raise ValueError("zero test function")
    rhs1 = (n - 2) ** 2 / 4 * H1.value
    rep1 = InequalityReport(
        lhs=A.value,
        rhs=rhs1,
        ratio=A.value / rhs1,
        target=1.0,
        integral_errors=(
            A.error_estimate / abs(A.value),
            H1.error_estimate / abs(H1.value),
        ),
    )
    H2 = hyperbolic_radial_volume_integral(
        RadialProfile(lambda r: prof(r) ** 2 / r**2, dec, breakpoints=prof.breakpoints),
        n,
        spec,
    )
    H3 = hyperbolic_radial_volume_integral(
        RadialProfile(
            lambda r: prof(r) ** 2 / (math.pi**2 + r**2), dec, breakpoints=prof.breakpoints
        ),
        n,
        spec,
    )
    rhs2 = (n - 2) ** 2 / 4 * H2.value + 3 * (n - 1) * (n - 2) / 2 * H3.value
    rep2 = InequalityReport(
        lhs=A.value,
        rhs=rhs2,
        ratio=A.value / rhs2,
        target=1.0,
        integral_errors=(
            A.error_estimate / abs(A.value),
            H2.error_estimate / abs(H2.value),
            H3.error_estimate / abs(H3.value),
        ),
    )
    return rep1, rep2


def _gaussian_mass(k: int, alpha: float, spec: QuadratureSpec) -> float:
    """k omega_k int e^(-alpha rho^2) sinh^(k-1)(rho) d rho."""
    prof = RadialProfile(lambda r: math.exp(-alpha * r * r), DecayClass.gaussian(alpha))
    return hyperbolic_radial_volume_integral(prof, k, spec).value


def ko_alpha_scan(
    n: int,
    alpha_range: tuple[float, float],
    grid_size: int = 4096,
    spec: QuadratureSpec = QuadratureSpec(),
) -> dict:
    """Scan the published extremal-parameter equation for solutions.

    Phi(alpha) = ((n-1)/(n-2)) (n-1 + 2 pi C_{n-2}(alpha)/C_n(alpha)) - alpha
    where C_k is the gaussian mass on the k-dimensional model.  Returns every
    bracketing interval with a sign change; an empty list means the equation
    has no root on the range.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    lo, hi = alpha_range
    if not (0 < lo < hi):
        raise ValueError("alpha range must be positive and increasing")
    if grid_size < 2:
        return {"alphas": [], "phi": [], "brackets": []}
    alphas = np.linspace(lo, hi, grid_size)

    def phi(a: float) -> float:
        c_small = _gaussian_mass(n - 2, a, spec)
        c_big = _gaussian_mass(n, a, spec)
        return (n - 1) / (n - 2) * (n - 1 + 2 * math.pi * c_small / c_big) - a

    values = [phi(a) for a in alphas]
    brackets = [
        (float(alphas[i]), float(alphas[i + 1]))
        for i in range(len(alphas) - 1)
        if values[i] == 0.0 or (values[i] > 0) != (values[i + 1] > 0)
    ]
    return {"alphas": alphas.tolist(), "phi": values, "brackets": brackets}


def hpw_constant_bounds(
    n: int,
    alphas: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0),
    betas: Sequence[float] = (0.0, 0.5, 1.0, 2.0, 4.0),
    spec: QuadratureSpec = QuadratureSpec(),
) -> dict:
    """Numeric bounds for the open sharp constant of the plain inequality.

    Lower bound n^2/4 (validity); upper bound from minimizing the uncertainty
    ratio over the two-parameter trial family e^(-alpha d^2 - beta d).
    """
    lower = n**2 / 4
    best = math.inf
    arg = (None, None)
    for a in alphas:
        for b in betas:
            ratio = hpw_hyperbolic_report(RadialHypFunction.gaussian(a, b), n, spec).ratio
            if ratio < best:
                best, arg = ratio, (a, b)
    return {
        "n": n,
        "lower": lower,
        "upper": best,
        "argmin_alpha": arg[0],
        "argmin_beta": arg[1],
    }
