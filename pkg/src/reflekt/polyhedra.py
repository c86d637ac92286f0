"""Geometric core: H-/V-representations, affine maps, polyhedral relations,
and the block composition that turns a base polytope plus a chain of
relations into an extended formulation.

Conventions fixed here once:

* A relation of type (n, m) lives over R^n x R^m; the first n coordinates of
  its body are the input x, the last m the output y.
* A chain (R_1, .., R_r) is stored in application order: the composed system
  is z0 in P, (z_{i-1}, z_i) in R_i, and the projection returns the last
  block.  Canonical preimages walk the chain from the *last* relation to the
  first (see :mod:`reflekt.reflections`).
* Block variables are named ``z{i}_{j}`` (block i, 1-based coordinate j);
  equation-eliminated formulations fall back to ``x{j}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .numeric import (
    DEFAULT_TOL,
    EXACT,
    BackendError,
    DimensionError,
    affine_solution_space,
    dot,
    identity_matrix,
    infer_backend,
    join_backends,
    kernel_dim,
    leq,
    mat_mul,
    mat_vec,
    matrix,
    scalars_eq,
    vec_add,
    vec_sub,
    vector,
    zero_vector,
)


class EmptyPolyhedronError(ValueError):
    """Raised when an equation system turns out inconsistent."""


@dataclass(frozen=True)
class HPolyhedron:
    """Ax <= b together with Cx = d; inequality and equation counts are
    tracked separately because the size arithmetic counts inequalities only."""

    dim: int
    A: tuple = ()
    b: tuple = ()
    C: tuple = ()
    d: tuple = ()
    backend: str = EXACT
    _sparse: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for rows, name in ((self.A, "A"), (self.C, "C")):
            for row in rows:
                if len(row) != self.dim:
                    raise DimensionError(f"{name} row width != dim {self.dim}")
        if len(self.A) != len(self.b) or len(self.C) != len(self.d):
            raise DimensionError("matrix/rhs row counts differ")

    def _sparse_system(self):
        # block systems are mostly zeros; membership tests walk nonzeros only
        if self._sparse is None:
            ineq = tuple(
                (tuple((j, c) for j, c in enumerate(row) if c != 0), rhs)
                for row, rhs in zip(self.A, self.b)
            )
            eq = tuple(
                (tuple((j, c) for j, c in enumerate(row) if c != 0), rhs)
                for row, rhs in zip(self.C, self.d)
            )
            object.__setattr__(self, "_sparse", (ineq, eq))
        return self._sparse

    @classmethod
    def from_rows(cls, dim, ineqs=(), eqs=(), backend=EXACT):
        """Build from ``(coeffs, rhs)`` pairs."""
        A = matrix((r for r, _ in ineqs), backend)
        b = vector((v for _, v in ineqs), backend)
        C = matrix((r for r, _ in eqs), backend)
        d = vector((v for _, v in eqs), backend)
        return cls(dim, A, b, C, d, backend)

    @classmethod
    def point(cls, coords, backend=EXACT):
        """The single point {coords}, written as dim equations."""
        coords = vector(coords, backend)
        n = len(coords)
        eye = identity_matrix(n, backend)
        return cls(n, (), (), eye, coords, backend)

    @classmethod
    def box(cls, lower, upper, backend=EXACT):
        """Axis-aligned box lower <= x <= upper (2n inequalities)."""
        lower = vector(lower, backend)
        upper = vector(upper, backend)
        n = len(lower)
        rows, rhs = [], []
        eye = identity_matrix(n, backend)
        for i in range(n):
            rows.append(eye[i])
            rhs.append(upper[i])
            rows.append(tuple(-e for e in eye[i]))
            rhs.append(-lower[i])
        return cls(n, tuple(rows), tuple(rhs), (), (), backend)

    @property
    def n_inequalities(self) -> int:
        return len(self.A)

    @property
    def n_equations(self) -> int:
        return len(self.C)

    def contains(self, x, tol: float = DEFAULT_TOL) -> bool:
        if len(x) != self.dim:
            raise DimensionError("point dimension mismatch")
        ineq, eq = self._sparse_system()
        for row, rhs in ineq:
            if not leq(sum(c * x[j] for j, c in row), rhs, tol):
                return False
        for row, rhs in eq:
            if not scalars_eq(sum(c * x[j] for j, c in row), rhs, tol):
                return False
        return True


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of a finite, non-empty vertex list.

    The list may contain redundant (non-extreme) points; nothing here
    assumes minimality.
    """

    dim: int
    vertices: tuple
    backend: str = EXACT

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("VPolytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.dim:
                raise DimensionError("vertex dimension mismatch")

    @classmethod
    def from_points(cls, points, backend=None):
        points = [tuple(p) for p in points]
        if backend is None:
            backend = infer_backend([e for p in points for e in p])
        return cls(len(points[0]), tuple(vector(p, backend) for p in points), backend)


@dataclass(frozen=True)
class AffineMap:
    """x -> Mx + t with strict dimension checking."""

    M: tuple
    t: tuple
    backend: str = EXACT

    def __post_init__(self):
        if len(self.M) != len(self.t):
            raise DimensionError("offset length != output dimension")

    @classmethod
    def from_rows(cls, M, t, backend=EXACT):
        return cls(matrix(M, backend), vector(t, backend), backend)

    @classmethod
    def identity(cls, n, backend=EXACT):
        return cls(identity_matrix(n, backend), zero_vector(n, backend), backend)

    @property
    def in_dim(self) -> int:
        return len(self.M[0]) if self.M else 0

    @property
    def out_dim(self) -> int:
        return len(self.M)

    def apply(self, x):
        if len(x) != self.in_dim:
            raise DimensionError(f"map expects dim {self.in_dim}, got {len(x)}")
        return vec_add(mat_vec(self.M, x), self.t)

    def after(self, other: "AffineMap") -> "AffineMap":
        """Composition self(other(x)); dimensions must chain."""
        join_backends(self.backend, other.backend)
        if other.out_dim != self.in_dim:
            raise DimensionError("composition dimensions do not chain")
        return AffineMap(
            mat_mul(self.M, other.M),
            vec_add(mat_vec(self.M, other.t), self.t),
            self.backend,
        )


def _graph_preimage(f: AffineMap):
    """Generic preimage through the graph of f: solve f(x) = y.

    Returns the particular solution with free coordinates at zero, or None
    when y is not in the image of f.
    """

    def preimage(y, tol: float = DEFAULT_TOL):
        part, _ = affine_solution_space(f.M, vec_sub(y, f.t), tol)
        return part

    return preimage


@dataclass(frozen=True)
class PolyhedralRelation:
    """A non-empty polyhedron over R^n x R^m acting on sets by
    R(X) = {y : (x, y) in R for some x in X}.

    ``generators``, when present, are affine maps whose images generate each
    fiber's convex hull.  ``preimage`` maps y to a canonical x whose fiber
    contains y (used to assemble feasibility witnesses); it may return None.
    Emptiness is checked lazily by the LP layer, never at construction.
    """

    n: int
    m: int
    body: HPolyhedron
    generators: Optional[tuple] = None
    preimage: Optional[Callable] = None
    label: str = ""

    def __post_init__(self):
        if self.body.dim != self.n + self.m:
            raise DimensionError("body dimension != n + m")

    @property
    def backend(self) -> str:
        return self.body.backend


def graph_relation(f: AffineMap, label: str = "") -> PolyhedralRelation:
    """The relation {(x, y) : y = f(x)}: pure equations, no inequalities."""
    n, m = f.in_dim, f.out_dim
    backend = f.backend
    eqs = []
    for i in range(m):
        row = tuple(-e for e in f.M[i]) + tuple(
            (Fraction(1) if backend == EXACT else 1.0) if j == i else
            (Fraction(0) if backend == EXACT else 0.0)
            for j in range(m)
        )
        eqs.append((row, f.t[i]))
    body = HPolyhedron.from_rows(n + m, (), eqs, backend)
    return PolyhedralRelation(
        n, m, body, generators=(f,), preimage=_graph_preimage(f),
        label=label or "graph",
    )


def deltas(rel: PolyhedralRelation, tol: float = DEFAULT_TOL):
    """Fiber dimensions (delta1, delta2) of the relation's affine hull.

    The affine hull is taken to be the body's equation subsystem; for every
    relation this package constructs (reflection relations, graphs of affine
    maps) the equations do define the affine hull, so the computation is
    exact.  Relations whose affine hull is further cut by inequalities are
    outside this contract.
    """
    if not rel.body.C:
        return rel.m, rel.n
    x_block = tuple(row[: rel.n] for row in rel.body.C)
    y_block = tuple(row[rel.n :] for row in rel.body.C)
    return kernel_dim(y_block, tol), kernel_dim(x_block, tol)


@dataclass(frozen=True)
class SizeLedger:
    """Per-formulation size accounting.

    ``inequalities`` is always the base count plus one summand per relation;
    ``reduced_variable_bound`` is min(k0 + sum delta1, kr + sum delta2);
    ``reduced_variables`` is filled by :func:`eliminate_equations`.
    """

    raw_variables: int
    inequalities: int
    equations: int
    reduced_variable_bound: int
    reduced_variables: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "raw_variables": self.raw_variables,
            "inequalities": self.inequalities,
            "equations": self.equations,
            "reduced_variable_bound": self.reduced_variable_bound,
        }
        if self.reduced_variables is not None:
            out["reduced_variables"] = self.reduced_variables
        return out


@dataclass(eq=False)
class ExtendedFormulation:
    """A block-structured polyhedron Q plus the projection onto its last
    block and the size ledger.

    ``base`` and ``relations`` retain the construction provenance when
    available; they let membership queries assemble an explicit feasibility
    witness before falling back to the LP.  ``block_dims`` is None once the
    block structure has been destroyed (after equation elimination).
    """

    Q: HPolyhedron
    projection: AffineMap
    ledger: SizeLedger
    block_dims: Optional[tuple] = None
    base: Optional[HPolyhedron] = None
    relations: Optional[tuple] = None
    label: str = ""
    _checker: object = field(default=None, repr=False, compare=False)

    @property
    def backend(self) -> str:
        return self.Q.backend

    def var_names(self):
        if self.block_dims is None:
            return [f"x{j + 1}" for j in range(self.Q.dim)]
        names = []
        for i, k in enumerate(self.block_dims):
            names.extend(f"z{i}_{j + 1}" for j in range(k))
        return names


def compose_extension(
    P: HPolyhedron,
    rels: Sequence[PolyhedralRelation],
    label: str = "",
    tol: float = DEFAULT_TOL,
) -> ExtendedFormulation:
    """Compose a base polytope with a type-compatible relation chain.

    The result lives over R^{k0 + .. + kr}: P constrains block 0, relation i
    constrains blocks (i-1, i), and the projection selects block r.  With an
    empty chain the result is P itself under the identity projection.
    """
    rels = tuple(rels)
    backend = P.backend
    dims = [P.dim]
    for i, rel in enumerate(rels):
        backend = join_backends(backend, rel.backend)
        if rel.n != dims[-1]:
            raise DimensionError(
                f"relation {i} expects input dim {rel.n}, chain provides {dims[-1]}"
            )
        dims.append(rel.m)
    total = sum(dims)
    offsets = [0]
    for k in dims:
        offsets.append(offsets[-1] + k)

    zero = Fraction(0) if backend == EXACT else 0.0

    def placed(row, start, width):
        out = [zero] * total
        out[start : start + width] = list(row)
        return tuple(out)

    A_rows, b_rhs, C_rows, d_rhs = [], [], [], []
    for row, rhs in zip(P.A, P.b):
        A_rows.append(placed(row, 0, P.dim))
        b_rhs.append(rhs)
    for row, rhs in zip(P.C, P.d):
        C_rows.append(placed(row, 0, P.dim))
        d_rhs.append(rhs)
    for i, rel in enumerate(rels):
        start, width = offsets[i], rel.n + rel.m
        for row, rhs in zip(rel.body.A, rel.body.b):
            A_rows.append(placed(row, start, width))
            b_rhs.append(rhs)
        for row, rhs in zip(rel.body.C, rel.body.d):
            C_rows.append(placed(row, start, width))
            d_rhs.append(rhs)

    Q = HPolyhedron(total, tuple(A_rows), tuple(b_rhs), tuple(C_rows), tuple(d_rhs), backend)

    k_last = dims[-1]
    one = Fraction(1) if backend == EXACT else 1.0
    sel = []
    for j in range(k_last):
        row = [zero] * total
        row[offsets[-2] + j] = one
        sel.append(tuple(row))
    projection = AffineMap(tuple(sel), zero_vector(k_last, backend), backend)

    n_ineq = P.n_inequalities + sum(r.body.n_inequalities for r in rels)
    n_eq = P.n_equations + sum(r.body.n_equations for r in rels)
    assert n_ineq == len(A_rows) and n_eq == len(C_rows)
    delta_pairs = [deltas(r, tol) for r in rels]
    bound = min(
        dims[0] + sum(d1 for d1, _ in delta_pairs),
        dims[-1] + sum(d2 for _, d2 in delta_pairs),
    )
    ledger = SizeLedger(total, n_ineq, n_eq, bound)
    return ExtendedFormulation(
        Q, projection, ledger, tuple(dims), base=P, relations=rels, label=label
    )


def eliminate_equations(
    ef: ExtendedFormulation, tol: float = DEFAULT_TOL
) -> ExtendedFormulation:
    """Equivalent formulation over the free variables of Q's equation system.

    Solves Cz = d, substitutes z = z0 + Nw into the inequalities and the
    projection; the inequality count is unchanged, the equation count drops
    to zero, and the number of free variables must respect the ledger's
    reduced-variable bound.
    """
    Q = ef.Q
    part, basis = affine_solution_space(Q.C, Q.d, tol, dim=Q.dim, backend=Q.backend)
    if part is None:
        raise EmptyPolyhedronError("equation system is inconsistent")
    n_free = len(basis)
    N_cols = basis  # each basis vector is a column of N
    A_red = tuple(
        tuple(dot(row, col) for col in N_cols) for row in Q.A
    )
    b_red = tuple(rhs - dot(row, part) for row, rhs in zip(Q.A, Q.b))
    M_red = tuple(
        tuple(dot(mrow, col) for col in N_cols) for mrow in ef.projection.M
    )
    t_red = vec_add(mat_vec(ef.projection.M, part), ef.projection.t)
    assert n_free <= ef.ledger.reduced_variable_bound, (
        "free variable count exceeds the fiber-dimension bound"
    )
    Q_red = HPolyhedron(n_free, A_red, b_red, (), (), Q.backend)
    ledger = replace(ef.ledger, reduced_variables=n_free)
    return ExtendedFormulation(
        Q_red,
        AffineMap(M_red, t_red, Q.backend),
        ledger,
        block_dims=None,
        label=ef.label,
    )


def _witness_blocks(ef: ExtendedFormulation, y, tol: float):
    """Try to assemble a full chain point projecting to y via canonical
    preimages; returns the flat coordinate vector or None."""
    if ef.relations is None or ef.base is None or ef.block_dims is None:
        return None
    blocks = [tuple(y)]
    current = tuple(y)
    for rel in reversed(ef.relations):
        if rel.preimage is None:
            return None
        prev = rel.preimage(current, tol)
        if prev is None:
            return None
        blocks.append(tuple(prev))
        current = tuple(prev)
    blocks.reverse()
    if not ef.base.contains(blocks[0], tol):
        return None
    flat = tuple(e for blk in blocks for e in blk)
    return flat


def point_in_projection(ef: ExtendedFormulation, y, tol: float = DEFAULT_TOL) -> bool:
    """Membership of y in the projection of Q, i.e. LP feasibility of
    Q together with projection(z) = y.

    When construction provenance is available a canonical-preimage witness
    is assembled and checked against every constraint first -- success is a
    feasibility certificate and skips the LP; any failure falls back to an
    exact (or tolerance-guarded) phase-1 solve.
    """
    if len(y) != ef.projection.out_dim:
        raise DimensionError("point dimension != projection output dimension")
    witness = _witness_blocks(ef, y, tol)
    if witness is not None and ef.Q.contains(witness, tol):
        return True
    checker = projection_checker(ef, tol)
    return checker.feasible(y, tol)


def projection_checker(ef: ExtendedFormulation, tol: float = DEFAULT_TOL):
    """Cached LP-based membership/optimization helper for one formulation."""
    from .lp import ProjectionChecker  # local import: lp builds on these types

    if ef._checker is None:
        ef._checker = ProjectionChecker(ef, tol)
    return ef._checker
