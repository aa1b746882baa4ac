"""Geometric meshes on an interval, graded toward both endpoints.

A mesh with grading factor sigma in (0, 1) and L refinement layers has
2L+3 nodes and 2L+2 elements.  On the reference interval (-1, 1) the nodes
are

    -1,  -1 + sigma^L, ..., -1 + sigma,  0,  1 - sigma, ..., 1 - sigma^L,  1

and meshes on a general interval [a, b] are the affine image of this node
set.  The two boundary elements have length (b-a)/2 * sigma^L; every other
element T satisfies diam(T) <= K * dist(T, {a,b}) and
dist(T, {a,b}) <= K * diam(T) with K = max((1-sigma)/sigma, sigma/(1-sigma)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GeometricMesh", "build_geometric_mesh", "element_of"]


@dataclass(frozen=True)
class GeometricMesh:
    """Graded partition of [a, b]; immutable once built.

    Element indices are 1-based throughout the public interface, matching
    the convention that element i is the interval (nodes[i-1], nodes[i]).
    """

    a: float
    b: float
    sigma: float
    layers: int
    nodes: np.ndarray
    # element lengths from the grading formula (no node differencing, so the
    # boundary lengths are (b-a)/2 * sigma^L to full relative precision)
    lengths: np.ndarray
    comparability: float  # K(sigma): diam ~ dist constant for interior elements

    @property
    def domain(self):
        return (self.a, self.b)

    @property
    def n_elements(self):
        return 2 * self.layers + 2

    def element(self, i):
        """Endpoints (x_{i-1}, x_i) of element i, i = 1..2L+2."""
        if not 1 <= i <= self.n_elements:
            raise ValueError(f"element index {i} out of range 1..{self.n_elements}")
        return float(self.nodes[i - 1]), float(self.nodes[i])

    def element_length(self, i):
        if not 1 <= i <= self.n_elements:
            raise ValueError(f"element index {i} out of range 1..{self.n_elements}")
        return float(self.lengths[i - 1])

    @property
    def elements(self):
        """All element intervals in order, as (left, right) pairs."""
        return [(float(self.nodes[i]), float(self.nodes[i + 1]))
                for i in range(self.n_elements)]


def build_geometric_mesh(domain, sigma, layers):
    """Build the geometric mesh with the given grading factor and layer count.

    Parameters
    ----------
    domain : pair of reals (a, b) with a < b
    sigma : grading factor, 0 < sigma < 1
    layers : number L >= 0 of refinement layers toward each endpoint

    L = 0 is the degenerate two-element mesh (bisection at the midpoint).
    """
    a, b = (float(domain[0]), float(domain[1]))
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise ValueError(f"domain must be a nondegenerate interval, got ({a}, {b})")
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"grading factor sigma must lie in (0, 1), got {sigma}")
    layers = int(layers)
    if layers < 0:
        raise ValueError(f"layer count must be nonnegative, got {layers}")

    # powers sigma^k by repeated multiplication, boundary inward
    powers = np.empty(layers + 1)
    powers[0] = 1.0
    for k in range(1, layers + 1):
        powers[k] = powers[k - 1] * sigma

    half = 0.5 * (b - a)
    nodes = np.empty(2 * layers + 3)
    nodes[0] = a
    for i in range(1, layers + 1):
        nodes[i] = a + half * powers[layers - i + 1]
    for m in range(layers + 1):
        nodes[layers + 1 + m] = b - half * powers[m]
    nodes[2 * layers + 2] = b
    nodes.flags.writeable = False

    lengths = np.empty(2 * layers + 2)
    lengths[0] = half * powers[layers]
    for e in range(1, layers + 1):
        lengths[e] = half * powers[layers - e] * (1.0 - sigma)
    lengths[layers + 1:] = lengths[layers::-1]
    lengths.flags.writeable = False

    ratio = (1.0 - sigma) / sigma
    comparability = max(ratio, 1.0 / ratio)
    return GeometricMesh(a=a, b=b, sigma=sigma, layers=layers, nodes=nodes,
                         lengths=lengths, comparability=comparability)


def element_of(mesh, x):
    """Index i (1-based) of the element with x in [x_{i-1}, x_i).

    Ties at shared nodes resolve to the right element; x = b returns the
    rightmost element.
    """
    x = float(x)
    if not mesh.a <= x <= mesh.b:
        raise ValueError(f"point {x} outside domain [{mesh.a}, {mesh.b}]")
    i = int(np.searchsorted(mesh.nodes, x, side="right"))
    return min(i, mesh.n_elements)
