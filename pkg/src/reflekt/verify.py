"""Verification harness: projection-equality certification against
brute-force vertex sets, size accounting, chain-condition checks, and
affine-generator spot checks.

Projection equality is certified in two directions: every oracle vertex
must be feasible for the formulation (containment), and for a batch of
seeded random integer objectives the LP optimum over the formulation must
match the brute-force maximum over the oracle vertices (support-function
equality on sampled directions).  In the exact backend both halves are
zero-tolerance, so a passing report is a proof for the sampled data.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Optional, Sequence

from . import lp
from .numeric import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    scalar_to_json,
    scalars_eq,
    dot,
    vectors_eq,
)
from .oracles import VertexSet
from .polyhedra import (
    ExtendedFormulation,
    PolyhedralRelation,
    _witness_blocks,
    projection_checker,
)
from .reflections import apply_preimage_chain, reflect_point

_FIBER_OBJECTIVES = 10


@dataclass
class VerificationReport:
    label: str
    backend: str
    vertex_total: int = 0
    vertex_passed: int = 0
    objective_total: int = 0
    objective_passed: int = 0
    objective_max_deviation: object = 0
    size_expected: Optional[dict] = None
    size_actual: Optional[dict] = None
    size_passed: Optional[bool] = None
    hypothesis_checks: tuple = ()
    seed: int = 0
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        if self.vertex_passed != self.vertex_total:
            return False
        if self.objective_passed != self.objective_total:
            return False
        if self.size_passed is False:
            return False
        return all(ok for _, ok in self.hypothesis_checks)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "label": self.label,
            "backend": self.backend,
            "passed": self.passed,
            "vertex_checks": {"total": self.vertex_total, "passed": self.vertex_passed},
            "objective_checks": {
                "total": self.objective_total,
                "passed": self.objective_passed,
                "max_deviation": scalar_to_json(self.objective_max_deviation),
            },
            "seed": self.seed,
            "hypothesis_checks": [[name, ok] for name, ok in self.hypothesis_checks],
        }
        if self.size_expected is not None:
            out["size_check"] = {
                "expected": self.size_expected,
                "actual": self.size_actual,
                "passed": self.size_passed,
            }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self, include_timing: bool = False) -> str:
        # timing is excluded by default so identical runs serialize identically
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    def to_text(self) -> str:
        rows = [
            ("formulation", self.label),
            ("backend", self.backend),
            ("vertices in projection", f"{self.vertex_passed}/{self.vertex_total}"),
            ("objective optima equal", f"{self.objective_passed}/{self.objective_total}"),
            ("max objective deviation", str(self.objective_max_deviation)),
        ]
        if self.size_expected is not None:
            rows.append(("size check", "pass" if self.size_passed else "FAIL"))
        for name, ok in self.hypothesis_checks:
            rows.append((f"hypothesis: {name}", "pass" if ok else "FAIL"))
        rows.append(("wall time", f"{self.wall_time_s:.3f}s"))
        rows.append(("overall", "PASS" if self.passed else "FAIL"))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def random_objectives(dim: int, count: int, rng: Random, backend: str = EXACT):
    """Seeded integer objectives in [-10,10]^dim, zero vector rejected."""
    out = []
    while len(out) < count:
        c = tuple(rng.randint(-10, 10) for _ in range(dim))
        if any(c):
            if backend == FLOAT:
                c = tuple(float(e) for e in c)
            else:
                c = tuple(Fraction(e) for e in c)
            out.append(c)
    return out


def actual_sizes(ef: ExtendedFormulation, tol: float = DEFAULT_TOL) -> dict:
    """Ledger counts plus the equation-eliminated variable count."""
    out = ef.ledger.to_dict()
    if "reduced_variables" not in out:
        out["reduced_variables"] = projection_checker(ef, tol).n_free
    return out


def size_report(ef: ExtendedFormulation, expected: dict, tol: float = DEFAULT_TOL):
    """Integer comparison of the built sizes against expected counts;
    returns (passed, diff) where diff maps each key to (expected, actual)."""
    actual = actual_sizes(ef, tol)
    diff = {}
    for key, want in expected.items():
        got = actual.get(key)
        if got != want:
            diff[key] = (want, got)
    return not diff, diff


def verify_projection_equality(
    ef: ExtendedFormulation,
    V: VertexSet,
    n_objectives: int = 50,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    expected_sizes: Optional[dict] = None,
    extra_checks: Sequence = (),
    label: Optional[str] = None,
) -> VerificationReport:
    """Certify projection(Q) == conv(V) on sampled data.

    (a) every oracle vertex must lie in the projection;
    (b) for seeded random integer objectives, the LP optimum of <c, pi(z)>
        over Q must equal the brute-force maximum over V -- exactly in the
        rational backend, within ``tol`` in float mode.
    """
    t0 = time.perf_counter()
    backend = ef.backend
    lp_tol = min(tol, DEFAULT_TOL)
    report = VerificationReport(
        label=label or ef.label or "formulation", backend=backend, seed=seed
    )
    checker = projection_checker(ef, lp_tol)

    for v in V.points:
        report.vertex_total += 1
        z = _witness_blocks(ef, v, tol)
        if z is not None and ef.Q.contains(z, tol):
            report.vertex_passed += 1
            checker.seed_from_raw(z, lp_tol)
        elif checker.feasible(v, lp_tol):
            report.vertex_passed += 1

    rng = Random(seed)
    exact = backend == EXACT
    max_dev = Fraction(0) if exact else 0.0
    for c in random_objectives(ef.projection.out_dim, n_objectives, rng, backend):
        report.objective_total += 1
        status, value = checker.maximize_projected(c, "max", lp_tol)
        if status != lp.OPTIMAL:
            continue
        brute = max(dot(c, v) for v in V.points)
        dev = abs(value - brute)
        if dev > max_dev:
            max_dev = dev
        if (dev == 0) if exact else (dev <= tol):
            report.objective_passed += 1
    report.objective_max_deviation = max_dev

    if expected_sizes is not None:
        passed, _ = size_report(ef, expected_sizes, lp_tol)
        report.size_expected = dict(expected_sizes)
        report.size_actual = actual_sizes(ef, lp_tol)
        report.size_passed = passed

    report.hypothesis_checks = tuple(extra_checks)
    report.wall_time_s = time.perf_counter() - t0
    return report


def check_chain_conditions(
    base_points: VertexSet,
    chain_specs: Sequence,
    target: VertexSet,
    tol: float = DEFAULT_TOL,
) -> bool:
    """The two-part certificate that a reflection chain maps the base onto
    the target hull:

    1. the base points lie in conv(target) and each chain reflection maps
       the target points back into conv(target);
    2. the canonical-preimage pass sends every target point into the base.
    """
    target_poly = target.to_vpolytope()
    for point in base_points.points:
        if not lp.in_hull(point, target_poly, tol):
            return False
    for spec in chain_specs:
        for w in target.points:
            if not lp.in_hull(reflect_point(spec, w), target_poly, tol):
                return False
    single = base_points.points[0] if len(base_points.points) == 1 else None
    base_poly = None if single is not None else base_points.to_vpolytope()
    for w in target.points:
        x = apply_preimage_chain(chain_specs, w, tol)
        if x is None:
            return False
        if single is not None:
            if not vectors_eq(x, single, tol):
                return False
        elif not lp.in_hull(x, base_poly, tol):
            return False
    return True


def check_affine_generators(
    rel: PolyhedralRelation,
    samples: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Spot-check that the relation's declared generators really generate
    its fibers: each generator image must lie in the fiber, and random
    fiber optimizations must peak at a generator image."""
    if not rel.generators:
        raise ValueError("relation carries no generators to check")
    rng = Random(seed)
    backend = rel.backend
    exact = backend == EXACT

    def rand_vec(k):
        vals = [rng.randint(-10, 10) for _ in range(k)]
        return tuple(float(v) for v in vals) if backend == FLOAT else tuple(
            Fraction(v) for v in vals
        )

    zero = Fraction(0) if exact else 0.0
    for _ in range(samples):
        x = rel.preimage(rand_vec(rel.m), tol) if rel.preimage else rand_vec(rel.n)
        if x is None:
            x = rand_vec(rel.n)
        images = [g.apply(x) for g in rel.generators]
        for img in images:
            if not rel.body.contains(tuple(x) + tuple(img), tol):
                return False
        pins = [(i, x[i]) for i in range(rel.n)]
        fiber = lp.pinned(rel.body, pins)
        for _ in range(_FIBER_OBJECTIVES):
            c = rand_vec(rel.m)
            objective = (zero,) * rel.n + c
            for sense, pick in (("max", max), ("min", min)):
                res = lp.solve(lp.LPProblem(fiber, objective, sense), min(tol, DEFAULT_TOL))
                if res.status != lp.OPTIMAL:
                    return False
                best = pick(dot(c, img) for img in images)
                if not scalars_eq(res.value, best, tol):
                    return False
    return True
