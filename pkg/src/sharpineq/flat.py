"""Sharp-constant verification on Minkowski-normed flat space.

Interpolation kernels and the P/Q/R identity, the Heisenberg-Pauli-Weyl
equality family, and Hardy inequalities with the curvature-flat remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .norms import MinkowskiNorm, ball_volume_constant, bh_density, dual_norm_value
from .quadrature import (
    DecayClass,
    IntegralResult,
    QuadratureSpec,
    RadialProfile,
    fd_derivative,
    flat_radial_volume_integral,
    monte_carlo_integral,
)

__all__ = [
    "ExponentTriple",
    "TestFunction",
    "InequalityReport",
    "AdmissibilityError",
    "kernel_h",
    "kernel_g",
    "pqr",
    "check_pqr_identity",
    "check_p_ode",
    "interpolation_report",
    "gaussian_T",
    "hpw_report",
    "hardy_report",
    "hardy_sharpness_sweep",
    "double_hardy_report",
    "smoothstep_cutoff",
]


class AdmissibilityError(ValueError):
    """Exponent triple outside 0 < q < 2 < p, 2 < n < 2(p-q)/(p-2)."""


@dataclass(frozen=True)
class ExponentTriple:
    """Admissible (n, p, q) for the interpolation inequality."""

    n: int
    p: float
    q: float

    def __post_init__(self):
        if not (0 < self.q < 2 < self.p):
            raise AdmissibilityError(
                f"need 0 < q < 2 < p, got q={self.q}, p={self.p}"
            )
        bound = 2 * (self.p - self.q) / (self.p - 2)
        if not (2 < self.n < bound):
            raise AdmissibilityError(
                f"need 2 < n < 2(p-q)/(p-2) = {bound}, got n={self.n}"
            )

    @property
    def target(self) -> float:
        """(n - q)^2 / p^2, the sharp interpolation constant."""
        return (self.n - self.q) ** 2 / self.p**2

    @property
    def p_power(self) -> float:
        """Exponent of the lambda power law for P."""
        return (self.n - self.q) / (2 - self.q) - self.p / (self.p - 2)

    @property
    def near_boundary(self) -> bool:
        """Within 1e-3 of losing integrability; run with a bigger budget."""
        return (
            min(self.q, 2 - self.q, self.p - 2) < 1e-3
            or 2 * (self.p - self.q) / (self.p - 2) - self.n < 1e-3
            or self.n - 2 < 1e-3
        )


@dataclass(frozen=True)
class TestFunction:
    """Radial profile of the distance, or a general compactly supported function.

    Radial: profile(rho) with derivative handle.  General: evaluator and a
    gradient-covector evaluator on a support box (gradient by central
    differences when omitted).
    """

    kind: str  # 'radial' | 'general'
    profile: Optional[RadialProfile] = None
    derivative: Optional[Callable[[float], float]] = None
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    support_box: Optional[tuple] = None
    basepoint: Optional[np.ndarray] = None

    @staticmethod
    def radial(profile: RadialProfile, derivative, basepoint=None) -> "TestFunction":
        return TestFunction("radial", profile=profile, derivative=derivative, basepoint=basepoint)

    @staticmethod
    def general(evaluator, support_box, gradient=None, basepoint=None) -> "TestFunction":
        return TestFunction(
            "general",
            evaluator=evaluator,
            gradient=gradient,
            support_box=tuple(tuple(b) for b in support_box),
            basepoint=basepoint,
        )


@dataclass(frozen=True)
class InequalityReport:
    """One inequality evaluation, arranged so ratio >= target is the claim."""

    lhs: float
    rhs: float
    ratio: float
    target: float
    integral_errors: tuple

    @property
    def slack(self) -> float:
        return self.ratio - self.target

    @property
    def combined_error(self) -> float:
        return float(sum(self.integral_errors))


def kernel_h(t: ExponentTriple, lam: float, rho: float) -> float:
    """Layer-cake kernel of the extremal-family integral P."""
    p, q = t.p, t.q
    return (
        (lam + rho ** (2 - q)) ** ((2 * p - 2) / (2 - p))
        * rho ** (-(q + 1))
        * (2 * rho ** (2 - q) * (p - q) / (p - 2) + q * lam)
    )


def kernel_g(t: ExponentTriple, lam: float, rho: float) -> float:
    """Layer-cake kernel of the extremal-family integral R."""
    p, q = t.p, t.q
    coeff = (2 * p - 2) / (p - 2) * (2 - q) + 2 * (q - 1)
    return (
        (lam + rho ** (2 - q)) ** ((3 * p - 4) / (2 - p))
        * rho ** (-(2 * q - 1))
        * (rho ** (2 - q) * coeff + 2 * (q - 1) * lam)
    )


def _kernel_profile(t: ExponentTriple, lam: float, kernel) -> RadialProfile:
    """rho^n * kernel(lam, rho) as a profile with its true asymptotics."""
    if kernel is kernel_h:
        sigma = -(t.n - 2 * (t.p - t.q) / (t.p - 2) - 1)
    else:
        # rho^n g ~ rho^(n + (2-q)(3p-4)/(2-p) - (2q-1) + (2-q))
        sigma = -(
            t.n
            + (2 - t.q) * (3 * t.p - 4) / (2 - t.p)
            - (2 * t.q - 1)
            + (2 - t.q)
        )
    return RadialProfile(
        evaluator=lambda r: r**t.n * kernel(t, lam, r),
        decay=DecayClass.algebraic(sigma),
    )


def _spec_for(t: ExponentTriple, spec: QuadratureSpec) -> QuadratureSpec:
    if not t.near_boundary:
        return spec
    return QuadratureSpec(
        relative_tolerance=spec.relative_tolerance,
        max_subdivisions=spec.max_subdivisions * 2,
        mc_samples=spec.mc_samples,
        mc_seed=spec.mc_seed,
    )


def pqr(t: ExponentTriple, lam: float, which: str, spec: QuadratureSpec = QuadratureSpec()) -> IntegralResult:
    """The integrals P, Q, R of the extremal family at parameter lam.

    P = omega_n int rho^n h, R = omega_n int rho^n g,
    Q = ((2-q)/(p-2))^2 * R.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    spec = _spec_for(t, spec)
    omega = ball_volume_constant(t.n)
    if which == "P":
        base = _radial(t, lam, kernel_h, spec)
        return IntegralResult(omega * base.value, omega * base.error_estimate, base.nodes_used)
    if which == "R":
        base = _radial(t, lam, kernel_g, spec)
        return IntegralResult(omega * base.value, omega * base.error_estimate, base.nodes_used)
    if which == "Q":
        r = pqr(t, lam, "R", spec)
        c = (2 - t.q) ** 2 / (t.p - 2) ** 2
        return IntegralResult(c * r.value, c * r.error_estimate, r.nodes_used)
    raise ValueError("selector must be one of P, Q, R")


def _radial(t, lam, kernel, spec):
    from .quadrature import radial_integral

    return radial_integral(_kernel_profile(t, lam, kernel), ("power", 0), spec)


def check_pqr_identity(
    t: ExponentTriple, lam_grid: Sequence[float], spec: QuadratureSpec = QuadratureSpec()
) -> list[InequalityReport]:
    """Q R / P^2 against (n-q)^2 / p^2 on a lambda grid (an equality)."""
    out = []
    for lam in lam_grid:
        P = pqr(t, lam, "P", spec)
        Q = pqr(t, lam, "Q", spec)
        R = pqr(t, lam, "R", spec)
        ratio = Q.value * R.value / P.value**2
        out.append(
            InequalityReport(
                lhs=Q.value * R.value,
                rhs=t.target * P.value**2,
                ratio=ratio,
                target=t.target,
                integral_errors=(
                    P.error_estimate / abs(P.value),
                    Q.error_estimate / abs(Q.value),
                    R.error_estimate / abs(R.value),
                ),
            )
        )
    return out


def check_p_ode(
    t: ExponentTriple, lam_grid: Sequence[float], spec: QuadratureSpec = QuadratureSpec()
) -> list[float]:
    """Relative residual of the first-order ODE satisfied by P."""
    coeff = (1 / (2 - t.q)) * (-t.n + 2 * (t.p - t.q) / (t.p - 2))

    def P(lam):
        return pqr(t, lam, "P", spec).value

    out = []
    for lam in lam_grid:
        res = coeff * P(lam) + lam * fd_derivative(P, lam)
        out.append(res / P(lam))
    return out


def _radial_triple_integrals(
    t: ExponentTriple, u: TestFunction, spec: QuadratureSpec
) -> tuple[IntegralResult, IntegralResult, IntegralResult]:
    """A = int F*(Du)^2, B = int |u|^(2p-2)/rho^(2q-2), C = int |u|^p/rho^q."""
    n, p, q = t.n, t.p, t.q
    prof, du = u.profile, u.derivative
    d = prof.decay

    def scaled(power: float, rho_pow: float, fn) -> RadialProfile:
        if d.kind == "gaussian":
            dec = DecayClass.gaussian(d.rate * power)
        elif d.kind == "compact":
            dec = DecayClass.compact(d.support_radius)
        else:
            dec = DecayClass.algebraic(d.sigma * power - rho_pow)
        return RadialProfile(fn, dec, breakpoints=prof.breakpoints)

    A = flat_radial_volume_integral(scaled(2, 0, lambda r: du(r) ** 2), n, spec)
    B = flat_radial_volume_integral(
        scaled(2 * p - 2, -(2 * q - 2), lambda r: abs(prof(r)) ** (2 * p - 2) / r ** (2 * q - 2)),
        n,
        spec,
    )
    C = flat_radial_volume_integral(
        scaled(p, -q, lambda r: abs(prof(r)) ** p / r**q), n, spec
    )
    return A, B, C


def _general_triple_integrals(norm, t, u, spec):
    """Monte Carlo path: dual norm of the gradient covector, pointwise."""
    n = t.n
    density = bh_density(norm, mc_samples=spec.mc_samples, mc_seed=spec.mc_seed)
    x0 = u.basepoint if u.basepoint is not None else np.zeros(n)

    def grad(pts):
        if u.gradient is not None:
            return u.gradient(pts)
        box = u.support_box
        h = 1e-5 * max(b - a for a, b in box)
        g = np.empty_like(pts)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            g[:, i] = (u.evaluator(pts + e) - u.evaluator(pts - e)) / (2 * h)
        return g

    def fA(pts):
        gs = grad(pts)
        return np.array([dual_norm_value(norm, g) for g in gs]) ** 2 * density

    def dist(pts):
        from .norms import norm_value

        return np.array([norm_value(norm, x - x0) for x in pts])

    def fB(pts):
        return (
            np.abs(u.evaluator(pts)) ** (2 * t.p - 2)
            / dist(pts) ** (2 * t.q - 2)
            * density
        )

    def fC(pts):
        return np.abs(u.evaluator(pts)) ** t.p / dist(pts) ** t.q * density

    box = u.support_box
    return (
        monte_carlo_integral(fA, box, spec),
        monte_carlo_integral(fB, box, spec),
        monte_carlo_integral(fC, box, spec),
    )


def interpolation_report(
    norm: MinkowskiNorm,
    t: ExponentTriple,
    u: TestFunction,
    spec: QuadratureSpec = QuadratureSpec(),
) -> InequalityReport:
    """A * B / C^2 against (n-q)^2/p^2 for one test function."""
    spec = _spec_for(t, spec)
    if u.kind == "radial":
        A, B, C = _radial_triple_integrals(t, u, spec)
    else:
        A, B, C = _general_triple_integrals(norm, t, u, spec)
    ratio = A.value * B.value / C.value**2
    return InequalityReport(
        lhs=A.value * B.value,
        rhs=t.target * C.value**2,
        ratio=ratio,
        target=t.target,
        integral_errors=(
            A.error_estimate / abs(A.value),
            B.error_estimate / abs(B.value),
            C.error_estimate / abs(C.value),
        ),
    )


def extremal_profile(t: ExponentTriple, lam: float) -> TestFunction:
    """The minimizer family (lam + rho^(2-q))^(1/(2-p)) with its derivative."""
    p, q = t.p, t.q
    expo = 1 / (2 - p)
    sigma = -(2 - q) * expo  # algebraic decay rate of the profile

    def w(r):
        return (lam + r ** (2 - q)) ** expo

    def dw(r):
        return expo * (2 - q) * r ** (1 - q) * (lam + r ** (2 - q)) ** (expo - 1)

    return TestFunction.radial(
        RadialProfile(w, DecayClass.algebraic(sigma)), dw
    )


def gaussian_T(n: int, lam: float, spec: QuadratureSpec = QuadratureSpec()) -> dict:
    """Gaussian moment integral, its closed form, and the scaling ODE residual.

    T(lam) = 4 lam omega_n int rho^(n+1) e^(-2 lam rho^2) d rho, which must
    equal 2 (2 lam)^(-n/2) omega_n int t^(n+1) e^(-t^2) dt and satisfy
    -lam T' = (n/2) T.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    omega = ball_volume_constant(n)

    def T(la):
        from .quadrature import radial_integral

        prof = RadialProfile(lambda r: r ** (n + 1), DecayClass.gaussian(2 * la), origin_tau=0.0)
        base = radial_integral(prof, ("gaussian", 2 * la), spec)
        return 4 * la * omega * base.value

    value = T(lam)
    closed = 2 * (2 * lam) ** (-n / 2) * omega * math.gamma(n / 2 + 1) / 2
    ode_res = (-lam * fd_derivative(T, lam) - (n / 2) * value) / value
    return {
        "value": value,
        "closed_form": closed,
        "closed_form_relative_error": abs(value - closed) / closed,
        "ode_relative_residual": ode_res,
    }


def _ratio_report(A, M, L, target) -> InequalityReport:
    """(A * M) / L^2 style report with relative integral errors."""
    ratio = A.value * M.value / L.value**2
    return InequalityReport(
        lhs=A.value * M.value,
        rhs=target * L.value**2,
        ratio=ratio,
        target=target,
        integral_errors=(
            A.error_estimate / abs(A.value),
            M.error_estimate / abs(M.value),
            L.error_estimate / abs(L.value),
        ),
    )


def hpw_report(
    norm: MinkowskiNorm, n: int, u: TestFunction, spec: QuadratureSpec = QuadratureSpec()
) -> InequalityReport:
    """Uncertainty product over the squared mass, against n^2/4."""
    prof, du = u.profile, u.derivative
    d = prof.decay
    if d.kind == "algebraic":
        raise ValueError("gaussian-class decay required for the uncertainty product")

    def dec(power):
        if d.kind == "compact":
            return DecayClass.compact(d.support_radius)
        return DecayClass.gaussian(d.rate * power)

    A = flat_radial_volume_integral(
        RadialProfile(lambda r: du(r) ** 2, dec(2), breakpoints=prof.breakpoints), n, spec
    )
    M = flat_radial_volume_integral(
        RadialProfile(lambda r: r**2 * prof(r) ** 2, dec(2), breakpoints=prof.breakpoints),
        n,
        spec,
    )
    L = flat_radial_volume_integral(
        RadialProfile(lambda r: prof(r) ** 2, dec(2), breakpoints=prof.breakpoints), n, spec
    )
    if L.value == 0:
        raise ValueError("zero test function")
    return _ratio_report(A, M, L, n**2 / 4)


def gaussian_moment_identity(n: int, lam: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Relative defect of 2 lam int F^2 e^(-2 lam F^2) = (n/2) int e^(-2 lam F^2)."""
    left = flat_radial_volume_integral(
        RadialProfile(lambda r: r**2 * math.exp(-2 * lam * r * r), DecayClass.gaussian(2 * lam)),
        n,
        spec,
    )
    right = flat_radial_volume_integral(
        RadialProfile(lambda r: math.exp(-2 * lam * r * r), DecayClass.gaussian(2 * lam)), n, spec
    )
    return abs(2 * lam * left.value - (n / 2) * right.value) / ((n / 2) * right.value)


def hardy_report(
    norm: MinkowskiNorm,
    n: int,
    u: TestFunction,
    c: float = 0.0,
    spec: QuadratureSpec = QuadratureSpec(),
) -> InequalityReport:
    """Dirichlet energy over the Hardy integral, against (n-2)^2/4.

    Flat space has no curvature defect, so c enters only as a guard that the
    caller is on the flat instance (c = 0).
    """
    if n < 3:
        raise ValueError("Hardy needs n >= 3")
    if c > 0:
        raise ValueError("curvature bound must be <= 0")
    prof, du = u.profile, u.derivative
    d = prof.decay

    def dec(power, rho_pow=0.0):
        if d.kind == "compact":
            return DecayClass.compact(d.support_radius)
        if d.kind == "gaussian":
            return DecayClass.gaussian(d.rate * power)
        return DecayClass.algebraic(d.sigma * power - rho_pow)

    A = flat_radial_volume_integral(
        RadialProfile(lambda r: du(r) ** 2, dec(2), breakpoints=prof.breakpoints), n, spec
    )
    H = flat_radial_volume_integral(
        RadialProfile(lambda r: prof(r) ** 2 / r**2, dec(2, -2.0), breakpoints=prof.breakpoints),
        n,
        spec,
    )
    if H.value == 0:
        raise ValueError("zero test function")
    ratio = A.value / H.value
    return InequalityReport(
        lhs=A.value,
        rhs=(n - 2) ** 2 / 4 * H.value,
        ratio=ratio,
        target=(n - 2) ** 2 / 4,
        integral_errors=(
            A.error_estimate / abs(A.value),
            H.error_estimate / abs(H.value),
        ),
    )


def smoothstep_cutoff(r: float, R: float) -> tuple[Callable, Callable]:
    """Quintic smoothstep: 1 on [0, r], 0 on [R, oo), C^2 monotone between.

    Returns (psi, psi') with closed-form derivative.
    """
    if not (0 < r < R):
        raise ValueError("need 0 < r < R")

    def psi(rho):
        if rho <= r:
            return 1.0
        if rho >= R:
            return 0.0
        s = (rho - r) / (R - r)
        return 1 - s**3 * (10 - 15 * s + 6 * s**2)

    def dpsi(rho):
        if rho <= r or rho >= R:
            return 0.0
        s = (rho - r) / (R - r)
        return -(30 * s**2 - 60 * s**3 + 30 * s**4) / (R - r)

    return psi, dpsi


def hardy_sharpness_sweep(
    norm: MinkowskiNorm,
    n: int,
    r: float,
    R: float,
    eps_list: Sequence[float],
    spec: QuadratureSpec = QuadratureSpec(),
) -> dict:
    """Hardy quotient of the capped power family against the cutoff.

    u_eps = min(rho, eps)^(-gamma) capped at eps, gamma = (n-2)/2, multiplied
    by a quintic smoothstep supported in [0, R].  The quotient sequence is
    non-increasing toward (n-2)^2/4; the extrapolated limit comes from an
    affine fit in 1/ln(1/eps).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not all(0 < e < r for e in eps_list):
        raise ValueError("need 0 < eps < r for every eps")
    if not (r < R):
        raise ValueError("need r < R")
    gamma = (n - 2) / 2
    psi, dpsi = smoothstep_cutoff(r, R)
    quotients = []
    for eps in eps_list:

        def u(rho, eps=eps):
            return psi(rho) * (max(eps, rho)) ** (-gamma)

        def du(rho, eps=eps):
            if rho <= eps:
                return 0.0
            return dpsi(rho) * rho ** (-gamma) - gamma * psi(rho) * rho ** (-gamma - 1)

        prof = RadialProfile(
            lambda rho, eps=eps: u(rho),
            DecayClass.compact(R),
            breakpoints=(eps, r),
        )
        I1 = flat_radial_volume_integral(
            RadialProfile(lambda rho, eps=eps: du(rho) ** 2, DecayClass.compact(R), breakpoints=(eps, r)),
            n,
            spec,
        )
        I2 = flat_radial_volume_integral(
            RadialProfile(lambda rho, eps=eps: u(rho) ** 2 / rho**2, DecayClass.compact(R), breakpoints=(eps, r)),
            n,
            spec,
        )
        quotients.append(I1.value / I2.value)
    ell = np.array([math.log(1.0 / e) for e in eps_list])
    y = np.array(quotients)
    if len(eps_list) >= 3:
        # the quotient is exactly A + B/(ln(1/eps) + C); fit the offset form.
        # The residuals reach machine precision, which makes the covariance
        # estimate singular -- expected here, so keep that warning quiet.
        import warnings

        from scipy.optimize import curve_fit, OptimizeWarning

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            (A, B, C), _ = curve_fit(
                lambda l, A, B, C: A + B / (l + C),
                ell,
                y,
                p0=(gamma**2, 1.0, 0.0),
                maxfev=10000,
            )
        limit, coeff = float(A), float(B)
    else:
        coeff, limit = (float(v) for v in np.polyfit(1.0 / ell, y, 1))
    return {
        "eps": list(eps_list),
        "quotients": quotients,
        "extrapolated_limit": limit,
        "fit_coefficient": coeff,
        "target": gamma**2,
    }


def double_hardy_report(
    norm: MinkowskiNorm,
    n: int,
    u: TestFunction,
    R: float,
    uniformity: float = 1.0,
    spec: QuadratureSpec = QuadratureSpec(),
) -> InequalityReport:
    """Hardy with the logarithmic remainder weighted by the uniformity constant.

    Requires the support radius of u strictly inside R; flat instance, so the
    curvature defect vanishes and the remainder is (l/4) int u^2/(rho ln(eR/rho))^2.
    """
    prof, du = u.profile, u.derivative
    if prof.decay.kind != "compact":
        raise ValueError("double Hardy needs compact support")
    if R <= prof.decay.support_radius:
        raise ValueError("R must exceed the support radius")
    if n < 3:
        raise ValueError("need n >= 3")
    sup = prof.decay.support_radius
    A = flat_radial_volume_integral(
        RadialProfile(lambda r: du(r) ** 2, DecayClass.compact(sup), breakpoints=prof.breakpoints),
        n,
        spec,
    )
    H = flat_radial_volume_integral(
        RadialProfile(lambda r: prof(r) ** 2 / r**2, DecayClass.compact(sup), breakpoints=prof.breakpoints),
        n,
        spec,
    )
    if H.value == 0:
        raise ValueError("zero test function")
    Rem = flat_radial_volume_integral(
        RadialProfile(
            lambda r: prof(r) ** 2 / (r * math.log(math.e * R / r)) ** 2,
            DecayClass.compact(sup),
            breakpoints=prof.breakpoints,
        ),
        n,
        spec,
    )
    rhs = (n - 2) ** 2 / 4 * H.value + uniformity / 4 * Rem.value
    return InequalityReport(
        lhs=A.value,
        rhs=rhs,
        ratio=A.value / rhs,
        target=1.0,
        integral_errors=(
            A.error_estimate / abs(A.value),
            H.error_estimate / abs(H.value),
            Rem.error_estimate / max(abs(Rem.value), 1e-300),
        ),
    )
