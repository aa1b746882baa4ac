"""hp-FEM solver and analysis toolkit for the 1D integral fractional Laplacian.

Solves (-Delta)^s u = f on a bounded interval with zero exterior condition,
using continuous piecewise polynomials on geometrically graded meshes, and
provides the quadrature, weighted-norm, and interpolation machinery needed
to study the exponential convergence of the method.
"""

from .approx import (DerivativeNormSequence, DerivativeRecurrence,
                     DivergentIntegralError, InterpolationBoundResult,
                     WeightedNormSpec, build_hp_interpolant,
                     endpoint_interpolation_check, gauss_lobatto_interpolant,
                     interpolant_weighted_error, interpolation_error_study,
                     linear_endpoint_interpolant, linear_interpolant_half_one,
                     weighted_derivative_norms, weighted_h1_norm)
from .assembly import (GalerkinSystem, assemble, assemble_load,
                       complement_weight, kernel_constant)
from .basis import (DegreeRule, DofMap, build_dof_map, eval_fem_derivative,
                    eval_fem_function, gauss_lobatto_nodes, legendre_eval,
                    shape_deriv, shape_eval)
from .geomesh import GeometricMesh, build_geometric_mesh, element_of
from .linsolve import NotSPDError, Solution, cholesky_solve
from .postproc import (ConvergenceRecord, convergence_study, energy_error,
                       exact_energy, exact_solution, records_to_csv,
                       solve_problem)
from .quadrature import (PairClass, QuadRule, classify_pair, gauss_jacobi,
                         gauss_legendre, pair_quadrature)

__version__ = "0.1.0"
