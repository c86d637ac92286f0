"""Reflection relations, canonical preimages, and canonical-form helpers.

A reflection relation for a nonzero normal ``a`` and offset ``beta`` pairs a
point x of the halfspace <a,x> <= beta with every point of the segment from
x to its mirror image across the boundary hyperplane.  Its body consists of
n-1 equations forcing y - x parallel to a plus exactly two inequalities

    <a,x> - <a,y> <= 0      and      <a,x> + <a,y> <= 2*beta,

so chains of these relations contribute two inequalities each to a composed
formulation.  The canonical preimage keeps a point that already satisfies
the halfspace and reflects one that does not; preimage chains apply the
*last* relation's preimage first, matching function-composition order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .numeric import (
    DEFAULT_TOL,
    EXACT,
    DimensionError,
    dot,
    infer_backend,
    leq,
    orthogonal_complement_basis,
    unit_vector,
    vec_add,
    vec_scale,
    vector,
)
from .polyhedra import AffineMap, HPolyhedron, PolyhedralRelation


@dataclass(frozen=True)
class ReflectionSpec:
    """Normal/offset pair (a, beta); positive rescaling defines the same
    relation, so no normalization is ever applied."""

    a: tuple
    beta: object
    backend: str = EXACT

    def __post_init__(self):
        if all(e == 0 for e in self.a):
            raise ValueError("reflection normal must be nonzero")

    @classmethod
    def make(cls, a, beta, backend=None):
        if backend is None:
            backend = infer_backend(list(a) + [beta])
        a = vector(a, backend)
        beta = vector([beta], backend)[0]
        return cls(a, beta, backend)

    @property
    def dim(self) -> int:
        return len(self.a)

    def in_domain(self, x, tol: float = DEFAULT_TOL) -> bool:
        """Whether x lies in the halfspace <a,x> <= beta."""
        return leq(dot(self.a, x), self.beta, tol)


def reflect_point(spec: ReflectionSpec, x):
    """Mirror image of x across the hyperplane <a,x> = beta.

    An involution that fixes the hyperplane pointwise and satisfies
    <a, reflect(x)> = 2*beta - <a,x>.
    """
    if len(x) != spec.dim:
        raise DimensionError("point dimension != reflection dimension")
    a = spec.a
    factor = 2 * (spec.beta - dot(a, x)) / dot(a, a)
    return vec_add(x, vec_scale(factor, a))


def reflection_map(spec: ReflectionSpec) -> AffineMap:
    """The reflection as an affine map (I - 2 a a^T / <a,a>) x + 2 beta a / <a,a>."""
    a = spec.a
    n = spec.dim
    aa = dot(a, a)
    rows = []
    for i in range(n):
        row = list(vec_scale(-2 * a[i] / aa, a))
        row[i] = row[i] + (Fraction(1) if spec.backend == EXACT else 1.0)
        rows.append(tuple(row))
    t = vec_scale(2 * spec.beta / aa, a)
    return AffineMap(tuple(rows), t, spec.backend)


def canonical_preimage(spec: ReflectionSpec, y, tol: float = DEFAULT_TOL):
    """y itself when it satisfies the halfspace, its reflection otherwise;
    the output always lies in the halfspace and its fiber contains y."""
    if spec.in_domain(y, tol):
        return tuple(y)
    return reflect_point(spec, y)


def reflection_relation(spec: ReflectionSpec) -> PolyhedralRelation:
    """Type (n, n) relation whose fiber over a domain point x is the segment
    conv{x, reflect(x)}; empty over points outside the halfspace.

    Generated by the identity map and the reflection.  Uses n-1 explicit
    difference equations from a complement basis rather than an auxiliary
    scalar variable, which keeps block sizes equal to n and makes the
    two-inequalities-per-relation count literal.
    """
    n = spec.dim
    a = spec.a
    backend = spec.backend
    comp = orthogonal_complement_basis(a)
    zero = Fraction(0) if backend == EXACT else 0.0
    eqs = []
    for brow in comp:
        eqs.append((tuple(-e for e in brow) + tuple(brow), zero))
    neg_a = tuple(-e for e in a)
    ineqs = [
        (tuple(a) + neg_a, zero),          # <a,x> <= <a,y>
        (tuple(a) + tuple(a), 2 * spec.beta),  # <a,y> <= 2 beta - <a,x>
    ]
    body = HPolyhedron.from_rows(2 * n, ineqs, eqs, backend)
    gens = (AffineMap.identity(n, backend), reflection_map(spec))

    def preimage(y, tol=DEFAULT_TOL, _spec=spec):
        return canonical_preimage(_spec, y, tol)

    return PolyhedralRelation(
        n, n, body, generators=gens, preimage=preimage,
        label=f"reflect({spec.a}, {spec.beta})",
    )


def sign_spec(k: int, n: int, backend: str = EXACT) -> ReflectionSpec:
    """Normal -e_k, offset 0: domain x_k >= 0, reflection flips coordinate k."""
    if not 1 <= k <= n:
        raise IndexError(f"coordinate {k} out of range 1..{n}")
    a = tuple(-e for e in unit_vector(k - 1, n, backend))
    return ReflectionSpec(a, Fraction(0) if backend == EXACT else 0.0, backend)


def sign_relation(k: int, n: int, backend: str = EXACT) -> PolyhedralRelation:
    return reflection_relation(sign_spec(k, n, backend))


def transposition_spec(k: int, ell: int, n: int, backend: str = EXACT) -> ReflectionSpec:
    """Normal e_k - e_ell, offset 0: domain x_k <= x_ell, reflection swaps
    coordinates k and ell."""
    if k == ell:
        raise ValueError("transposition needs two distinct coordinates")
    if not (1 <= k <= n and 1 <= ell <= n):
        raise IndexError(f"coordinates ({k},{ell}) out of range 1..{n}")
    a = tuple(
        x - y for x, y in zip(unit_vector(k - 1, n, backend), unit_vector(ell - 1, n, backend))
    )
    return ReflectionSpec(a, Fraction(0) if backend == EXACT else 0.0, backend)


def transposition_relation(k: int, ell: int, n: int, backend: str = EXACT) -> PolyhedralRelation:
    return reflection_relation(transposition_spec(k, ell, n, backend))


def even_sign_pair_specs(k: int, ell: int, n: int, backend: str = EXACT):
    """Ordered pair of specs (e_k - e_ell, 0) then (-e_k - e_ell, 0).

    Chained as two consecutive relations; the composed canonical preimage
    (second spec's first, then the first's) lands in {|y_k| <= y_ell}.
    """
    if k == ell:
        raise ValueError("pair needs two distinct coordinates")
    first = transposition_spec(k, ell, n, backend)
    ek = unit_vector(k - 1, n, backend)
    el = unit_vector(ell - 1, n, backend)
    a = tuple(-x - y for x, y in zip(ek, el))
    second = ReflectionSpec(a, Fraction(0) if backend == EXACT else 0.0, backend)
    return first, second


def even_sign_pair(k: int, ell: int, n: int, backend: str = EXACT):
    """The two reflection relations of :func:`even_sign_pair_specs`, in order."""
    s1, s2 = even_sign_pair_specs(k, ell, n, backend)
    return reflection_relation(s1), reflection_relation(s2)


def apply_preimage_chain(chain: Iterable, y, tol: float = DEFAULT_TOL):
    """Fold canonical preimages over a relation chain given in composition
    (application) order of the chain itself: the *last* element's preimage
    is applied first.

    Accepts ReflectionSpec entries or PolyhedralRelation entries carrying a
    ``preimage``; returns None if some preimage is undefined at its input.
    """
    out = tuple(y)
    for item in reversed(list(chain)):
        if isinstance(item, ReflectionSpec):
            out = canonical_preimage(item, out, tol)
        elif getattr(item, "preimage", None) is not None:
            out = item.preimage(out, tol)
            if out is None:
                return None
        else:
            raise TypeError(f"chain entry without a preimage: {item!r}")
    return out


def sort_vec(y) -> tuple:
    """Non-decreasing rearrangement."""
    return tuple(sorted(y))


def abs_vec(y) -> tuple:
    return tuple(abs(e) for e in y)


def sortabs_vec(y) -> tuple:
    return tuple(sorted(abs(e) for e in y))


def dn_canonical(y) -> tuple:
    """Sorted absolute values, with the first entry negated when y has an
    odd number of strictly negative components."""
    out = list(sorted(abs(e) for e in y))
    negatives = sum(1 for e in y if e < 0)
    if negatives % 2 == 1:
        out[0] = -out[0]
    return tuple(out)
