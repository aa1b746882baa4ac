"""Benchmark solution, energy-norm error, and the convergence-study driver.

The benchmark is the homogeneous Dirichlet problem on (-1, 1) with f = 1,
whose solution is u(x) = c_s (1 - x^2)^s with
c_s = 2^(-2s) sqrt(pi) / (Gamma(s+1/2) Gamma(1+s)).  Its energy
a(u, u) = <1, u> is available in closed form, so the energy-norm error of a
Galerkin approximation follows from the identity

    a(u - u_N, u - u_N) = a(u, u) - a(u_N, u_N)

without ever evaluating fractional Sobolev norms directly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .assembly import assemble, assemble_load
from .basis import DegreeRule, build_dof_map
from .geomesh import build_geometric_mesh
from .linsolve import cholesky_solve

__all__ = ["ConvergenceRecord", "exact_solution", "exact_energy",
           "energy_error", "solve_problem", "convergence_study",
           "records_to_csv", "CSV_HEADER"]

CSV_HEADER = "s,sigma,L,rule,N,energy_error,discrete_energy,wall_ms"


def _check_s(s):
    if not 0.0 < float(s) < 1.0:
        raise ValueError(f"fractional order s must lie in (0, 1), got {s}")


def solution_constant(s):
    """c_s = 2^(-2s) sqrt(pi) / (Gamma(s+1/2) Gamma(1+s))."""
    _check_s(s)
    return (2.0 ** (-2.0 * s) * math.sqrt(math.pi)
            / (math.gamma(s + 0.5) * math.gamma(1.0 + s)))


def exact_solution(s):
    """The benchmark solution on [-1, 1] for f = 1, as a callable.

    u(x) = c_s (1 - x^2)^s, zero at x = +-1.
    """
    _check_s(s)
    c = solution_constant(s)

    def u(x):
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > 1.0):
            raise ValueError("benchmark solution is defined on [-1, 1]")
        return (c * np.maximum(1.0 - x * x, 0.0) ** s)[()]

    return u


def exact_energy(s):
    """a(u, u) = int u = 2^(-2s) pi / (Gamma(s+1/2) Gamma(s+3/2))."""
    _check_s(s)
    return (2.0 ** (-2.0 * s) * math.pi
            / (math.gamma(s + 0.5) * math.gamma(s + 1.5)))


def energy_error(system, sol, s):
    """sqrt(a(u,u) - a(u_N,u_N)) for the f = 1 benchmark on (-1, 1).

    Clamped at zero to guard against roundoff once the error underflows.
    """
    return math.sqrt(max(0.0, exact_energy(s) - sol.energy))


@dataclass(frozen=True)
class ConvergenceRecord:
    """One study point: configuration, problem size, and energy error."""

    s: float
    sigma: float
    L: int
    degree_rule: DegreeRule
    N: int
    energy_error: float
    discrete_energy: float
    wall_seconds: float


def solve_problem(s, sigma, L, rule, quad_offset=6, threads=1):
    """Assemble and solve the f = 1 benchmark on (-1, 1).

    Returns (mesh, dofmap, system, solution).
    """
    mesh = build_geometric_mesh((-1.0, 1.0), sigma, L)
    dofmap = build_dof_map(mesh, rule)
    system = assemble(mesh, dofmap, s, quad_offset=quad_offset, threads=threads)
    system.load[:] = assemble_load(lambda x: np.ones_like(x), mesh, dofmap,
                                   quad_offset=quad_offset)
    sol = cholesky_solve(system)
    return mesh, dofmap, system, sol


def convergence_study(s_list, sigma, L_max, rule_kind, quad_offset=6, threads=1):
    """Run the L = 1..L_max sweep with p = L for each fractional order.

    rule_kind is 'uniform' (degree L everywhere) or 'reduced' (degree 1 on
    the two boundary elements).  Records are emitted in (s, L) lexicographic
    order.
    """
    if rule_kind not in ("uniform", "reduced"):
        raise ValueError(f"unknown degree rule kind {rule_kind!r}")
    if L_max < 1:
        raise ValueError(f"L_max must be >= 1, got {L_max}")
    records = []
    for s in s_list:
        _check_s(s)
        for L in range(1, L_max + 1):
            rule = DegreeRule(rule_kind, L)
            start = time.perf_counter()
            try:
                _, dofmap, system, sol = solve_problem(
                    s, sigma, L, rule, quad_offset=quad_offset, threads=threads)
            except Exception as exc:
                raise RuntimeError(
                    f"convergence study failed at s={s}, L={L}: {exc}") from exc
            wall = time.perf_counter() - start
            records.append(ConvergenceRecord(
                s=float(s), sigma=float(sigma), L=L, degree_rule=rule,
                N=dofmap.n_dofs, energy_error=energy_error(system, sol, s),
                discrete_energy=sol.energy, wall_seconds=wall))
    return records


def records_to_csv(records):
    """Serialize study records; floats carry 17 significant digits."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            f"{r.s:.17g}", f"{r.sigma:.17g}", str(r.L), r.degree_rule.kind,
            str(r.N), f"{r.energy_error:.17g}", f"{r.discrete_energy:.17g}",
            f"{r.wall_seconds * 1e3:.17g}",
        ]))
    return "\n".join(lines) + "\n"
