"""Lagrange shape functions on Gauss-Lobatto nodes and the global dof map.

The discrete space is C^0 piecewise polynomial on a GeometricMesh with a
per-element degree assignment and zero trace at the domain endpoints.  The
local basis is nodal (Lagrange cardinal functions on the Gauss-Lobatto
points), so interpolation at those points is a coefficient read-off.

Global numbering: the 2L+1 interior vertices come first, left to right,
then the element-internal dofs element by element.  The two endpoint
vertex dofs are constrained to zero and carry the sentinel index -1 in the
per-element tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geomesh import GeometricMesh, element_of

__all__ = [
    "DegreeRule", "DofMap", "gauss_lobatto_nodes", "legendre_eval",
    "shape_eval", "shape_deriv", "build_dof_map", "eval_fem_function",
    "eval_fem_derivative",
]


def legendre_eval(n, x):
    """Legendre polynomial P_n(x) via the three-term recurrence."""
    n = int(n)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev[()]
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p[()]


def _legendre_pair(n, x):
    """(P_n(x), P_{n-1}(x)) evaluated together, n >= 1."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p, p_prev


@lru_cache(maxsize=None)
def _lobatto_nodes(p):
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    if p == 1:
        nodes = np.array([-1.0, 1.0])
    else:
        # interior nodes: roots of P_p', Newton from Chebyshev-Lobatto guesses
        x = -np.cos(np.pi * np.arange(1, p) / p)
        for _ in range(100):
            pn, pn1 = _legendre_pair(p, x)
            dp = p * (x * pn - pn1) / (x * x - 1.0)
            d2p = (2.0 * x * dp - p * (p + 1) * pn) / (1.0 - x * x)
            step = dp / d2p
            x -= step
            if np.max(np.abs(step)) < 1e-15:
                break
        x = 0.5 * (x - x[::-1])  # exact symmetry about 0
        nodes = np.concatenate(([-1.0], x, [1.0]))
    nodes.flags.writeable = False
    return nodes


def gauss_lobatto_nodes(p):
    """The p+1 Gauss-Lobatto points of degree p: -1, roots of P_p', 1."""
    return _lobatto_nodes(int(p))


@lru_cache(maxsize=None)
def _bary_weights(p):
    t = _lobatto_nodes(p)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    w.flags.writeable = False
    return w


@lru_cache(maxsize=None)
def _diff_matrix(p):
    """D[i, j] = l_j'(t_i) on the Gauss-Lobatto nodes of degree p."""
    t = _lobatto_nodes(p)
    w = _bary_weights(p)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    D.flags.writeable = False
    return D


def _shape_matrix(p, t):
    """Values of all p+1 cardinal functions at points t; shape (p+1, len(t))."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nodes = _lobatto_nodes(p)
    w = _bary_weights(p)
    d = t[None, :] - nodes[:, None]
    exact = d == 0.0
    hit = exact.any(axis=0)
    terms = w[:, None] / np.where(exact, 1.0, d)
    vals = terms / terms.sum(axis=0)
    if hit.any():
        vals[:, hit] = exact[:, hit]
    return vals


def _shape_deriv_matrix(p, t):
    # l_m' has degree p-1, so interpolating its nodal values is exact
    return _diff_matrix(p).T @ _shape_matrix(p, t)


def shape_eval(p, k, t):
    """k-th Lagrange cardinal function of degree p at t in [-1, 1]."""
    if not 0 <= k <= p:
        raise ValueError(f"local index {k} out of range 0..{p}")
    vals = _shape_matrix(p, t)[k]
    return float(vals[0]) if np.ndim(t) == 0 else vals


def shape_deriv(p, k, t):
    """Derivative of the k-th cardinal function of degree p at t."""
    if not 0 <= k <= p:
        raise ValueError(f"local index {k} out of range 0..{p}")
    vals = _shape_deriv_matrix(p, t)[k]
    return float(vals[0]) if np.ndim(t) == 0 else vals


@dataclass(frozen=True)
class DegreeRule:
    """Per-element degree assignment.

    uniform(p) gives degree p everywhere; reduced(p) lowers the degree to 1
    on the two boundary elements.  reduced(1) coincides with uniform(1).
    """

    kind: str
    p: int

    def __post_init__(self):
        if self.kind not in ("uniform", "reduced"):
            raise ValueError(f"unknown degree rule kind {self.kind!r}")
        if self.p < 1:
            raise ValueError(f"degree must be >= 1, got {self.p}")

    @classmethod
    def uniform(cls, p):
        return cls("uniform", int(p))

    @classmethod
    def reduced(cls, p):
        return cls("reduced", int(p))

    def degrees(self, mesh):
        deg = np.full(mesh.n_elements, self.p, dtype=int)
        if self.kind == "reduced":
            deg[0] = 1
            deg[-1] = 1
        return deg


@dataclass(frozen=True)
class DofMap:
    """Global numbering of the zero-trace C^0 basis on a mesh.

    elem_dofs[e][k] is the global index of local shape k on element e
    (0-based element, local 0 = left vertex, local p = right vertex), or -1
    for a constrained endpoint dof.
    """

    mesh: GeometricMesh
    rule: DegreeRule
    degrees: np.ndarray
    n_dofs: int
    elem_dofs: tuple


def build_dof_map(mesh, rule):
    """Assign global dof indices: interior vertices first, then internals."""
    L = mesh.layers
    degrees = rule.degrees(mesh)
    n_vertex = 2 * L + 1
    tables = []
    next_free = n_vertex
    for e in range(mesh.n_elements):
        p = int(degrees[e])
        tab = np.full(p + 1, -1, dtype=int)
        left, right = e, e + 1  # node indices
        if left > 0:
            tab[0] = left - 1
        if right < 2 * L + 2:
            tab[p] = right - 1
        for k in range(1, p):
            tab[k] = next_free
            next_free += 1
        tab.flags.writeable = False
        tables.append(tab)
    return DofMap(mesh=mesh, rule=rule, degrees=degrees, n_dofs=next_free,
                  elem_dofs=tuple(tables))


def _local_coords(mesh, e, x):
    lo, hi = mesh.element(e + 1)
    return 2.0 * (np.asarray(x, dtype=float) - lo) / (hi - lo) - 1.0


def _element_eval(dofmap, coeffs, e, x, derivative=False):
    """Evaluate the FEM function (or derivative) at points x inside element e."""
    p = int(dofmap.degrees[e])
    t = np.atleast_1d(_local_coords(dofmap.mesh, e, x))
    S = _shape_deriv_matrix(p, t) if derivative else _shape_matrix(p, t)
    g = dofmap.elem_dofs[e]
    active = g >= 0
    vals = coeffs[g[active]] @ S[active]
    if derivative:
        lo, hi = dofmap.mesh.element(e + 1)
        vals *= 2.0 / (hi - lo)
    return vals


def _eval(dofmap, coeffs, x, derivative):
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (dofmap.n_dofs,):
        raise ValueError(f"coefficient vector must have length {dofmap.n_dofs}, "
                         f"got shape {coeffs.shape}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    for idx, xi in enumerate(xs):
        e = element_of(dofmap.mesh, xi) - 1
        out[idx] = _element_eval(dofmap, coeffs, e, xi, derivative)[0]
    return float(out[0]) if scalar else out


def eval_fem_function(dofmap, coeffs, x):
    """Value of sum_k coeffs[k] * phi_k at x; constrained dofs contribute 0."""
    return _eval(dofmap, coeffs, x, derivative=False)


def eval_fem_derivative(dofmap, coeffs, x):
    """Derivative of the FEM function at x (one-sided at mesh nodes)."""
    return _eval(dofmap, coeffs, x, derivative=True)
