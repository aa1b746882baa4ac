"""Approximation-theory toolbox: weighted norms, interpolants, and the
empirical weighted-analytic-regularity check for the benchmark solution.

Weighted integrals with an endpoint singularity are computed by factoring
the known endpoint exponent into a Gauss-Jacobi weight; the point count is
doubled until the values stabilize, with one Aitken extrapolation step as a
fallback for slowly converging (merely Hoelder) residual factors.  Inputs
whose weighted integral diverges are detected when that stabilization
fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .basis import DegreeRule, _element_eval, build_dof_map, gauss_lobatto_nodes
from .postproc import exact_solution, solution_constant
from .quadrature import _jacobi01, _rule01

__all__ = [
    "WeightedNormSpec", "DerivativeRecurrence", "DivergentIntegralError",
    "InterpolationBoundResult", "DerivativeNormSequence", "weighted_h1_norm",
    "linear_endpoint_interpolant", "linear_interpolant_half_one",
    "endpoint_interpolation_check", "gauss_lobatto_interpolant",
    "build_hp_interpolant",
    "weighted_derivative_norms", "interpolant_weighted_error",
    "interpolation_error_study",
]


class DivergentIntegralError(RuntimeError):
    """Raised when a weighted integral fails to stabilize under refinement."""


@dataclass(frozen=True)
class WeightedNormSpec:
    """Parameters of the boundary-weighted H^1 norm."""

    beta_prime: float
    epsilon: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.beta_prime < 1.0:
            raise ValueError(f"beta_prime must lie in [0, 1), got {self.beta_prime}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def _stabilized_integral(g, interval, singular_end, exponent,
                         n_start=32, n_max=1024, rtol=1e-9):
    """int over `interval` of dist(x, singular end)^exponent * g(x) dx.

    Gauss-Jacobi with the weight factored out; doubles the point count until
    two successive values agree to rtol.  Slow but settling sequences get a
    single Aitken step; growing ones raise DivergentIntegralError.
    """
    if exponent <= -1.0:
        raise DivergentIntegralError(
            f"weight exponent {exponent} is not integrable")
    a, b = interval
    h = b - a
    vals = []
    n = n_start
    while True:
        if singular_end == "left":
            t, w = _jacobi01(n, exponent, 0.0)
        else:
            t, w = _jacobi01(n, 0.0, exponent)
        x = a + h * t
        vals.append(h ** (exponent + 1.0)
                    * float(w @ np.asarray(g(x), dtype=float)))
        if len(vals) >= 2:
            if abs(vals[-1] - vals[-2]) <= rtol * max(abs(vals[-1]), 1e-300):
                return vals[-1]
        if n >= n_max:
            break
        n *= 2
    d1 = abs(vals[-2] - vals[-3])
    d2 = abs(vals[-1] - vals[-2])
    if d1 > 0.0 and d2 < 0.9 * d1:
        rho = d2 / d1
        return vals[-1] + (vals[-1] - vals[-2]) * rho / (1.0 - rho)
    raise DivergentIntegralError(
        f"weighted integral did not stabilize (last values {vals[-3:]}); "
        "the integrand appears non-integrable")


def weighted_h1_norm(v, dv, spec, domain=(0.0, 1.0)):
    """Boundary-weighted H^1 norm sqrt(int r^2b' (v')^2 + int r^(2b'-2) v^2).

    r is the distance to the domain boundary; the domain is split at its
    midpoint so each half carries a single singular endpoint.  v and dv are
    callables accepting arrays.  Raises DivergentIntegralError when the
    zero-order term diverges (v not vanishing fast enough at an endpoint).
    """
    a, b = float(domain[0]), float(domain[1])
    if not a < b:
        raise ValueError("domain must be a nondegenerate interval")
    bp = spec.beta_prime
    mid = 0.5 * (a + b)
    total = 0.0
    for (lo, hi), end in (((a, mid), "left"), ((mid, b), "right")):
        dist = (lambda x: x - a) if end == "left" else (lambda x: b - x)
        total += _stabilized_integral(
            lambda x: np.asarray(dv(x), dtype=float) ** 2,
            (lo, hi), end, 2.0 * bp)
        if bp > 0.5:
            total += _stabilized_integral(
                lambda x: np.asarray(v(x), dtype=float) ** 2,
                (lo, hi), end, 2.0 * bp - 2.0)
        else:
            total += _stabilized_integral(
                lambda x: (np.asarray(v(x), dtype=float) / dist(x)) ** 2,
                (lo, hi), end, 2.0 * bp)
    return math.sqrt(total)


def linear_endpoint_interpolant(v):
    """Linear interpolant of v at the endpoints of [0, 1]."""
    v0, v1 = float(v(0.0)), float(v(1.0))
    return Polynomial([v0, v1 - v0])


def linear_interpolant_half_one(v):
    """Linear interpolant of v at the points 1/2 and 1."""
    vh, v1 = float(v(0.5)), float(v(1.0))
    slope = 2.0 * (v1 - vh)
    return Polynomial([v1 - slope, slope])


@dataclass(frozen=True)
class InterpolationBoundResult:
    lhs: float
    rhs: float
    ratio: float


def endpoint_interpolation_check(v, dv, d2v, beta_prime, epsilon):
    """Compare the weighted interpolation error of the endpoint interpolant
    against the weighted second-derivative norm on (0, 1].

    lhs = ||x^(b'-1) e|| + ||x^b' e'||  with  e = v - Iv,
    rhs = ||x^min(b'+1, 3/2-eps) v''||.
    """
    spec = WeightedNormSpec(beta_prime, epsilon)  # validates the parameters
    bp, eps = spec.beta_prime, spec.epsilon
    iv = linear_endpoint_interpolant(v)
    slope = iv.coef[1] if len(iv.coef) > 1 else 0.0

    def err_over_x(x):
        return (np.asarray(v(x), dtype=float) - iv(x)) / x

    def derr(x):
        return np.asarray(dv(x), dtype=float) - slope

    val_term = _stabilized_integral(lambda x: err_over_x(x) ** 2,
                                    (0.0, 1.0), "left", 2.0 * bp)
    der_term = _stabilized_integral(lambda x: derr(x) ** 2,
                                    (0.0, 1.0), "left", 2.0 * bp)
    m = min(bp + 1.0, 1.5 - eps)
    rhs_sq = _stabilized_integral(
        lambda x: np.asarray(d2v(x), dtype=float) ** 2,
        (0.0, 1.0), "left", 2.0 * m)
    lhs = math.sqrt(max(0.0, val_term)) + math.sqrt(max(0.0, der_term))
    rhs = math.sqrt(max(0.0, rhs_sq))
    if rhs == 0.0:
        ratio = 0.0 if lhs == 0.0 else math.inf
    else:
        ratio = lhs / rhs
    return InterpolationBoundResult(lhs=lhs, rhs=rhs, ratio=ratio)


@dataclass(frozen=True)
class ElementInterpolant:
    """Polynomial interpolant on one element, in nodal representation."""

    element: tuple
    degree: int
    values: np.ndarray

    def _local(self, x):
        lo, hi = self.element
        return 2.0 * (np.asarray(x, dtype=float) - lo) / (hi - lo) - 1.0

    def __call__(self, x):
        from .basis import _shape_matrix
        return (self.values @ _shape_matrix(self.degree, self._local(x)))[()]

    def deriv(self, x):
        from .basis import _shape_deriv_matrix
        lo, hi = self.element
        vals = self.values @ _shape_deriv_matrix(self.degree, self._local(x))
        return (vals * (2.0 / (hi - lo)))[()]


def gauss_lobatto_interpolant(v, element, p):
    """Degree-p interpolant of v at the mapped Gauss-Lobatto nodes."""
    lo, hi = float(element[0]), float(element[1])
    t = gauss_lobatto_nodes(p)
    x = lo + 0.5 * (hi - lo) * (t + 1.0)
    values = np.array([float(v(xi)) for xi in x])
    return ElementInterpolant(element=(lo, hi), degree=int(p), values=values)


def build_hp_interpolant(u, mesh, p):
    """Nodal coefficients of the hp interpolant: linear on the two boundary
    elements, degree-p Gauss-Lobatto interpolation elsewhere.

    Returns the coefficient vector for the reduced-rule dof map of degree p;
    global continuity holds because shared vertices receive shared values.
    """
    tol = 1e-10 * max(1.0, abs(float(u(0.5 * (mesh.a + mesh.b)))))
    if abs(float(u(mesh.a))) > tol or abs(float(u(mesh.b))) > tol:
        raise ValueError("interpolated function must vanish at the domain "
                         "endpoints")
    dofmap = build_dof_map(mesh, DegreeRule.reduced(p))
    coeffs = np.zeros(dofmap.n_dofs)
    for e in range(mesh.n_elements):
        lo, hi = mesh.element(e + 1)
        pe = int(dofmap.degrees[e])
        t = gauss_lobatto_nodes(pe)
        x = lo + 0.5 * (hi - lo) * (t + 1.0)
        g = dofmap.elem_dofs[e]
        for k in range(pe + 1):
            if g[k] >= 0:
                coeffs[g[k]] = float(u(x[k]))
    return coeffs


@dataclass(frozen=True)
class DerivativeRecurrence:
    """Polynomials q_p with D^p (1-x^2)^s = (1-x^2)^(s-p) q_p(x)."""

    s: float
    polynomials: tuple

    @classmethod
    def build(cls, s, p_max):
        x = Polynomial([0.0, 1.0])
        one_minus_x2 = Polynomial([1.0, 0.0, -1.0])
        qs = [Polynomial([1.0])]
        for p in range(int(p_max)):
            q = qs[-1]
            qs.append(one_minus_x2 * q.deriv() - 2.0 * (s - p) * x * q)
        return cls(s=float(s), polynomials=tuple(qs))

    def derivative(self, p, x):
        """D^p (1-x^2)^s at x (without the benchmark constant c_s)."""
        x = np.asarray(x, dtype=float)
        return ((1.0 - x * x) ** (self.s - p) * self.polynomials[p](x))[()]


@dataclass(frozen=True)
class DerivativeNormSequence:
    """Weighted derivative norms for p = 1..p_max and the fitted growth rate."""

    norms: np.ndarray
    gamma_emp: float


def weighted_derivative_norms(s, p_max, epsilon):
    """||r^(p-1/2-s+eps) D^p u|| for p = 1..p_max, u the benchmark solution.

    The combined endpoint exponent is 2*eps - 1 > -1, absorbed into a
    Gauss-Jacobi weight; the remaining factor is analytic on the half
    interval, and the two halves agree by symmetry.  Also reports
    gamma_emp = sup_p (norm_p / p!)^(1/p).
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    p_max = int(p_max)
    if not 1 <= p_max <= 20:
        raise ValueError(f"p_max must lie in 1..20, got {p_max}")
    rec = DerivativeRecurrence.build(s, p_max)
    c = solution_constant(s)
    norms = np.empty(p_max)
    for p in range(1, p_max + 1):
        q = rec.polynomials[p]
        t, w = _jacobi01(p + 16, 0.0, 2.0 * epsilon - 1.0)
        g = (1.0 + t) ** (2.0 * (s - p)) * q(t) ** 2
        norms[p - 1] = math.sqrt(2.0 * c * c * float(w @ g))
    gammas = [(norms[p - 1] / math.factorial(p)) ** (1.0 / p)
              for p in range(1, p_max + 1)]
    return DerivativeNormSequence(norms=norms, gamma_emp=max(gammas))


def _boundary_error_sq(u, du, dofmap, coeffs, e, beta_p):
    """Weighted error on a boundary element via the substitution r = t^2.

    In the t variable both weighted terms carry the common Jacobi exponent
    4*beta_p - 1 after factoring one power of t out of the error (value
    term) or into the derivative (derivative term); for s = 1/2 the residual
    factors are analytic.
    """
    mesh = dofmap.mesh
    lo, hi = mesh.element(e + 1)
    h = hi - lo
    left = e == 0
    endpoint = mesh.a if left else mesh.b
    sign = 1.0 if left else -1.0

    def phys(t):
        return endpoint + sign * t * t

    def value_integrand(t):
        x = phys(t)
        err = u(x) - _element_eval(dofmap, coeffs, e, x)
        return (err / t) ** 2

    def deriv_integrand(t):
        x = phys(t)
        err = du(x) - _element_eval(dofmap, coeffs, e, x, derivative=True)
        return (t * err) ** 2

    expo = 4.0 * beta_p - 1.0
    total = _stabilized_integral(value_integrand, (0.0, math.sqrt(h)),
                                 "left", expo)
    total += _stabilized_integral(deriv_integrand, (0.0, math.sqrt(h)),
                                  "left", expo)
    return 2.0 * total


def interpolant_weighted_error(s, sigma, L, eps_prime=0.05):
    """Error of the hp interpolant in the weighted H^1 norm with
    beta' = 1 - s - eps_prime, for the benchmark solution on (-1, 1)."""
    from .geomesh import build_geometric_mesh

    beta_p = 1.0 - s - eps_prime
    if not 0.0 < beta_p < 1.0:
        raise ValueError(f"beta' = 1 - s - eps_prime = {beta_p} out of (0, 1)")
    mesh = build_geometric_mesh((-1.0, 1.0), sigma, L)
    u = exact_solution(s)
    c = solution_constant(s)

    def du(x):
        x = np.asarray(x, dtype=float)
        return -2.0 * s * c * x * (1.0 - x * x) ** (s - 1.0)

    coeffs = build_hp_interpolant(u, mesh, L)
    dofmap = build_dof_map(mesh, DegreeRule.reduced(L))
    total = 0.0
    for e in range(mesh.n_elements):
        if e == 0 or e == mesh.n_elements - 1:
            total += _boundary_error_sq(u, du, dofmap, coeffs, e, beta_p)
            continue
        lo, hi = mesh.element(e + 1)
        h = hi - lo
        t, w = _rule01(int(dofmap.degrees[e]) + 24)
        x = lo + h * t
        r = 1.0 - np.abs(x)
        ev = u(x) - _element_eval(dofmap, coeffs, e, x)
        ed = du(x) - _element_eval(dofmap, coeffs, e, x, derivative=True)
        total += h * float(w @ (r ** (2.0 * beta_p) * ed ** 2
                                + r ** (2.0 * beta_p - 2.0) * ev ** 2))
    return math.sqrt(total)


def interpolation_error_study(s, sigma, L_max, eps_prime=0.05):
    """Interpolation-error sweep L = p = 1..L_max; rows match the
    interp-study CSV schema (p, L, sigma, s, weighted_error)."""
    rows = []
    for L in range(1, int(L_max) + 1):
        err = interpolant_weighted_error(s, sigma, L, eps_prime)
        rows.append((L, L, float(sigma), float(s), err))
    return rows
