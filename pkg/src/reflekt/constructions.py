"""Builders for the named extended formulations.

Every builder composes a base polytope with a chain of reflection relations
(plus graph relations where a level change or a final affine transform is
needed) and returns an :class:`ExtendedFormulation` whose ledger carries the
advertised size counts.  Hypotheses of the form "the canonical form of every
vertex of P lies in P" cannot be checked from an H-representation; they are
caller obligations here, and the verifier validates the conclusion instead.
"""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi, sin
from typing import Optional, Sequence

from .networks import (
    RELATION,
    ComparatorSeq,
    apply_comparators,
    batcher,
    double_bubble_seq,
    insertion_network,
    is_sorting_network,
    stride_indices,
    stride_seq,
)
from .numeric import EXACT, FLOAT, BackendError, DimensionError
from .polyhedra import (
    AffineMap,
    ExtendedFormulation,
    HPolyhedron,
    PolyhedralRelation,
    compose_extension,
    graph_relation,
)
from .reflections import (
    ReflectionSpec,
    even_sign_pair_specs,
    reflection_relation,
    sign_spec,
    transposition_spec,
)

_VALIDATE_NET_CAP = 16


def ceil_log2(m: int) -> int:
    if m < 1:
        raise ValueError("positive argument required")
    return (m - 1).bit_length()


def sign_chain_specs(n: int, backend: str = EXACT):
    """Sign-change relations for coordinates 1..n, in chain order."""
    return [sign_spec(k, n, backend) for k in range(1, n + 1)]


def transposition_chain_specs(net: ComparatorSeq, backend: str = EXACT):
    """Transposition relations matching a comparator network, in chain
    (relation) order: the network's first-applied comparator becomes the
    last relation, so the chain's preimage pass replays the network in its
    application order."""
    pairs = net.in_order(RELATION).comparators
    return [transposition_spec(k, ell, net.n, backend) for k, ell in pairs]


def even_pair_chain_specs(n: int, backend: str = EXACT):
    """Flattened even-sign-change pairs for (1,2), (2,3), .., (n-1,n)."""
    specs = []
    for k in range(1, n):
        specs.extend(even_sign_pair_specs(k, k + 1, n, backend))
    return specs


def i2_chain_specs(m: int):
    """Halfspace chain for the dihedral symmetry group of the regular
    m-gon: normals (-sin phi, cos phi) at the doubling angles
    phi = pi/m, 2pi/m, 4pi/m, .., 2^r pi/m with r = ceil(log2(m)).

    All r+1 angles are always emitted, even when the doubling march makes
    one relation geometrically redundant; the advertised counts stay
    literal that way.
    """
    if m < 3:
        raise ValueError("an m-gon needs m >= 3")
    r = ceil_log2(m)
    specs = []
    for j in range(r + 1):
        phi = pi * (2 ** j) / m
        specs.append(ReflectionSpec((-sin(phi), cos(phi)), 0.0, FLOAT))
    return specs


def _reflection_chain(specs) -> list:
    return [reflection_relation(s) for s in specs]


def _validated(net: ComparatorSeq, n: int) -> ComparatorSeq:
    # an empty sequence is an explicit opt-out of the sorting stage (used by
    # constructions whose base point is already canonically ordered)
    if net.n != n:
        raise DimensionError(f"network width {net.n} != dimension {n}")
    if len(net) and net.n <= _VALIDATE_NET_CAP and not is_sorting_network(net):
        raise ValueError("comparator sequence does not sort all inputs")
    return net


def make_network(kind: str, n: int) -> ComparatorSeq:
    if kind == "batcher":
        return batcher(n)
    if kind == "insertion":
        return insertion_network(n)
    raise ValueError(f"unknown network kind {kind!r}")


def signing_ef(P: HPolyhedron, n: Optional[int] = None) -> ExtendedFormulation:
    """Extension of the convex hull of all sign-flip images of P.

    Caller obligation: |v| is in P for every vertex v of P.  Adds n fiber
    variables and 2n inequalities on top of P's own description.
    """
    if n is None:
        n = P.dim
    if P.dim != n:
        raise DimensionError(f"base lives in dim {P.dim}, expected {n}")
    chain = _reflection_chain(sign_chain_specs(n, P.backend))
    return compose_extension(P, chain, label=f"signing(n={n})")


def i2_permutahedron_ef(P: HPolyhedron, m: int) -> ExtendedFormulation:
    """Extension of the convex hull of P's orbit under the symmetry group
    of the regular m-gon; float backend only (the halfspace normals are
    irrational up to scaling for every m).

    Caller obligation: the canonical fundamental-domain representative of
    every vertex of P lies in P.
    """
    if P.dim != 2:
        raise DimensionError("dihedral orbits live in the plane")
    if P.backend != FLOAT:
        raise BackendError(
            "m-gon constructions require the float backend; their halfspace "
            "normals are irrational"
        )
    chain = _reflection_chain(i2_chain_specs(m))
    return compose_extension(P, chain, label=f"i2_permutahedron(m={m})")


def mgon_ef(m: int) -> ExtendedFormulation:
    """Regular m-gon with a vertex at (1,0): the one-point base (1,0)
    pushed through the dihedral halfspace chain; 2*ceil(log2 m)+2
    inequalities and ceil(log2 m)+1 variables after equation elimination."""
    base = HPolyhedron.point((1.0, 0.0), FLOAT)
    ef = i2_permutahedron_ef(base, m)
    ef.label = f"mgon(m={m})"
    return ef


def a_permutahedron_ef(
    P: HPolyhedron, n: int, net: ComparatorSeq
) -> ExtendedFormulation:
    """Extension of the convex hull of all coordinate permutations of P.

    Caller obligation: sort(v) in P for each vertex v.  The base point
    (1,..,n) yields the permutahedron with 2|net| inequalities.
    """
    if P.dim != n:
        raise DimensionError(f"base lives in dim {P.dim}, expected {n}")
    net = _validated(net, n)
    chain = _reflection_chain(transposition_chain_specs(net, P.backend))
    return compose_extension(P, chain, label=f"a_permutahedron(n={n})")


def b_permutahedron_ef(
    P: HPolyhedron, n: int, net: ComparatorSeq
) -> ExtendedFormulation:
    """Extension of the convex hull of all signed permutations of P
    (permutations plus arbitrary sign changes).

    Caller obligation: sortabs(v) in P for each vertex v.  Adds
    2|net| + 2n inequalities.
    """
    if P.dim != n:
        raise DimensionError(f"base lives in dim {P.dim}, expected {n}")
    net = _validated(net, n)
    specs = transposition_chain_specs(net, P.backend) + sign_chain_specs(n, P.backend)
    return compose_extension(
        P, _reflection_chain(specs), label=f"b_permutahedron(n={n})"
    )


def d_permutahedron_ef(
    P: HPolyhedron, n: int, net: ComparatorSeq
) -> ExtendedFormulation:
    """Extension of the convex hull of all even-signed permutations of P
    (permutations plus sign changes on an even number of coordinates).

    Caller obligation: the even-sign canonical form of each vertex lies in
    P.  Adds 2|net| + 4(n-1) inequalities.
    """
    if n < 2:
        raise DimensionError("even-signed orbits need dimension >= 2")
    if P.dim != n:
        raise DimensionError(f"base lives in dim {P.dim}, expected {n}")
    net = _validated(net, n)
    specs = transposition_chain_specs(net, P.backend) + even_pair_chain_specs(
        n, P.backend
    )
    return compose_extension(
        P, _reflection_chain(specs), label=f"d_permutahedron(n={n})"
    )


def _affine_unit_remap(n: int, backend: str = EXACT) -> AffineMap:
    """y -> (1 - y) / 2: carries {-1,+1} data onto {0,1} data."""
    half = Fraction(1, 2) if backend == EXACT else 0.5
    rows = []
    for i in range(n):
        row = [Fraction(0) if backend == EXACT else 0.0] * n
        row[i] = -half
        rows.append(tuple(row))
    return AffineMap(tuple(rows), (half,) * n, backend)


def parity_polytope_ef(n: int, parity: str) -> ExtendedFormulation:
    """Convex hull of the 0/1 vectors with an odd (or even) coordinate sum:
    a one-point +-1 base pushed through the even-sign-change pairs, then
    remapped onto 0/1 by a final graph relation so the ledger stays honest.

    4(n-1) inequalities; 2(n-1) variables after equation elimination.
    """
    if n < 2:
        raise ValueError("parity polytopes need n >= 2")
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    first = Fraction(-1) if parity == "odd" else Fraction(1)
    base = HPolyhedron.point((first,) + (Fraction(1),) * (n - 1))
    chain = _reflection_chain(even_pair_chain_specs(n))
    chain.append(graph_relation(_affine_unit_remap(n), label="unit_remap"))
    return compose_extension(base, chain, label=f"parity(n={n},{parity})")


def embedding_map(k: int, backend: str = EXACT) -> AffineMap:
    """Level embedding (x_1,..,x_{k-1}) -> (x_1,..,x_{k-2}, x_{k-1}+1,
    x_{k-1}+1): splits the deepest leaf of a depth vector in two."""
    if k < 3:
        raise ValueError("embedding needs k >= 3")
    one = Fraction(1) if backend == EXACT else 1.0
    zero = Fraction(0) if backend == EXACT else 0.0
    rows = []
    for i in range(k - 2):
        row = [zero] * (k - 1)
        row[i] = one
        rows.append(tuple(row))
    last = [zero] * (k - 1)
    last[k - 2] = one
    rows.append(tuple(last))
    rows.append(tuple(last))
    t = (zero,) * (k - 2) + (one, one)
    return AffineMap(tuple(rows), t, backend)


def _huffman_chain(n: int, level_seq) -> list:
    """Shared Huffman chain: embed one level up, then that level's
    transposition relations, for k = 3..n."""
    chain = []
    for k in range(3, n + 1):
        chain.append(graph_relation(embedding_map(k), label=f"embed({k})"))
        specs = transposition_chain_specs(level_seq(k))
        chain.extend(_reflection_chain(specs))
    return chain


def huffman_ef_quadratic(n: int) -> ExtendedFormulation:
    """Extension of the convex hull of all leaf-depth vectors of full
    binary trees with n leaves, built level by level with the quadratic
    double-bubble sequences: sum over k of 2(2k-3) inequalities."""
    if n < 2:
        raise ValueError("depth vectors need n >= 2")
    base = HPolyhedron.point((Fraction(1), Fraction(1)))
    chain = _huffman_chain(n, double_bubble_seq)
    return compose_extension(base, chain, label=f"huffman_quadratic(n={n})")


def huffman_ef_nlogn(n: int, net: Optional[ComparatorSeq] = None) -> ExtendedFormulation:
    """Size-reduced Huffman extension: inner levels k in {3..n-1} use the
    logarithmic stride sequences, only the top level runs a full sorting
    network over all n coordinates."""
    if n < 2:
        raise ValueError("depth vectors need n >= 2")
    if net is None:
        net = batcher(n)
    if n >= 3:
        net = _validated(net, n)

    def level_seq(k):
        return net if k == n else stride_seq(k)

    base = HPolyhedron.point((Fraction(1), Fraction(1)))
    chain = _huffman_chain(n, level_seq)
    return compose_extension(base, chain, label=f"huffman_nlogn(n={n})")


def huffman_level_images(v, level_seq):
    """Walk a depth vector down the level chain with canonical preimages:
    yields (k, x) for k = n..3, where x in R^k is the image after undoing
    level k's transpositions; between levels the deepest duplicated leaf is
    merged ((x_1,..,x_{k-2}, x_{k-1}-1))."""
    n = len(v)
    x = tuple(v)
    for k in range(n, 2, -1):
        x = apply_comparators(level_seq(k), x, "application")
        yield k, x
        if k > 3:
            x = x[: k - 2] + (x[k - 2] - 1,)


def huffman_pair_property(v, level_seq) -> bool:
    """The invariant that makes the level chain work: at every level k the
    undone image ends with two copies of its running maximum
    (x_{k-1} = x_k = max over the first k entries)."""
    for k, x in huffman_level_images(v, level_seq):
        top = max(x)
        if not (x[k - 2] == top and x[k - 1] == top):
            return False
    return True


def _job_step_map(p: Sequence, k: int) -> AffineMap:
    """One scheduling step: from (completions of jobs 1..k-1, placement
    indicators) to completions of jobs 1..k, where indicator j says job j
    runs after job k."""
    kk = k - 1
    zero = Fraction(0)
    rows = []
    for i in range(kk):
        row = [zero] * (2 * kk)
        row[i] = Fraction(1)
        row[kk + i] = p[k - 1]
        rows.append(tuple(row))
    last = [zero] * kk + [-p[j] for j in range(kk)]
    rows.append(tuple(last))
    t = (zero,) * kk + (sum(p[:kk], zero) + p[k - 1],)
    return AffineMap(tuple(rows), t)


def _job_step_preimage(p: Sequence, k: int):
    """Reconstruct a step input from a completion vector: jobs finishing
    after job k get indicator 1.  Ambiguous under ties (zero processing
    times); the assembled witness is still constraint-checked, and a
    mismatch just falls back to the LP."""

    def preimage(y, tol=1e-9):
        kk = k - 1
        ind = tuple(Fraction(1) if y[j] > y[kk] else Fraction(0) for j in range(kk))
        head = tuple(y[j] - p[k - 1] * ind[j] for j in range(kk))
        return head + ind

    return preimage


def _box_lift_relation(k: int) -> PolyhedralRelation:
    """Pairs x in R^{k-1} with (x, u) for any u in the unit box [0,1]^{k-1}:
    k-1 copy equations plus the 2(k-1) box facets."""
    kk = k - 1
    zero = Fraction(0)
    one = Fraction(1)
    eqs = []
    for j in range(kk):
        row = [zero] * (3 * kk)
        row[j] = Fraction(-1)
        row[kk + j] = one
        eqs.append((tuple(row), zero))
    ineqs = []
    for j in range(kk):
        row = [zero] * (3 * kk)
        row[2 * kk + j] = one
        ineqs.append((tuple(row), one))
        row2 = [zero] * (3 * kk)
        row2[2 * kk + j] = Fraction(-1)
        ineqs.append((tuple(row2), zero))
    body = HPolyhedron.from_rows(3 * kk, ineqs, eqs)

    def preimage(y, tol=1e-9, _kk=kk):
        return tuple(y[:_kk])

    return PolyhedralRelation(kk, 2 * kk, body, preimage=preimage, label=f"box_lift({k})")


def completion_time_ef(p: Sequence) -> ExtendedFormulation:
    """Extension of the convex hull of all completion-time vectors for
    nonnegative processing times p: each step crosses the current polytope
    with a unit box and applies one scheduling step, so the whole thing is
    an affine image of a cube of dimension n(n-1)/2."""
    from .numeric import vector

    p = vector(p, EXACT)
    if any(e < 0 for e in p):
        raise ValueError("processing times must be nonnegative")
    n = len(p)
    if n < 1:
        raise ValueError("at least one job required")
    base = HPolyhedron.point((p[0],))
    chain = []
    for k in range(2, n + 1):
        chain.append(_box_lift_relation(k))
        step = graph_relation(_job_step_map(p, k), label=f"schedule({k})")
        step = PolyhedralRelation(
            step.n, step.m, step.body, generators=step.generators,
            preimage=_job_step_preimage(p, k), label=step.label,
        )
        chain.append(step)
    return compose_extension(base, chain, label=f"completion_time(n={n})")


RECIPES = (
    "signing",
    "mgon",
    "i2_permutahedron",
    "a_permutahedron",
    "b_permutahedron",
    "d_permutahedron",
    "parity",
    "huffman_quadratic",
    "huffman_nlogn",
    "completion_time",
)


def _point_base(params, n, backend=EXACT):
    base = params.get("base")
    if isinstance(base, HPolyhedron):
        return base
    if base is None:
        coords = range(1, n + 1)
    else:
        coords = base
    if backend == FLOAT:
        return HPolyhedron.point([float(c) for c in coords], FLOAT)
    return HPolyhedron.point([Fraction(c) for c in coords])


def build_recipe(name: str, params: dict) -> ExtendedFormulation:
    """Dispatch a named construction from a key->value parameter map; the
    CLI feeds both flag values and JSON recipe documents through here."""
    if name not in RECIPES:
        raise ValueError(f"unknown recipe {name!r}; choose from {', '.join(RECIPES)}")
    net_kind = params.get("network", "batcher")
    if name == "mgon":
        return mgon_ef(int(params["m"]))
    if name == "i2_permutahedron":
        m = int(params["m"])
        base = params.get("base")
        if isinstance(base, HPolyhedron):
            P = base
        elif base is None:
            P = HPolyhedron.point((1.0, 0.0), FLOAT)
        else:
            P = HPolyhedron.point([float(c) for c in base], FLOAT)
        return i2_permutahedron_ef(P, m)
    if name == "signing":
        n = int(params["n"])
        return signing_ef(_point_base(params, n), n)
    if name == "a_permutahedron":
        n = int(params["n"])
        return a_permutahedron_ef(_point_base(params, n), n, make_network(net_kind, n))
    if name == "b_permutahedron":
        n = int(params["n"])
        return b_permutahedron_ef(_point_base(params, n), n, make_network(net_kind, n))
    if name == "d_permutahedron":
        n = int(params["n"])
        return d_permutahedron_ef(_point_base(params, n), n, make_network(net_kind, n))
    if name == "parity":
        return parity_polytope_ef(int(params["n"]), params.get("parity", "odd"))
    if name == "huffman_quadratic":
        return huffman_ef_quadratic(int(params["n"]))
    if name == "huffman_nlogn":
        n = int(params["n"])
        return huffman_ef_nlogn(n, make_network(net_kind, n))
    if name == "completion_time":
        return completion_time_ef([Fraction(str(c)) for c in params["p"]])
    raise AssertionError("unreachable")


def expected_ledger(name: str, params: dict) -> dict:
    """Closed-form size counts for point-based recipes (the golden table)."""
    net_kind = params.get("network", "batcher")
    if name == "mgon" or name == "i2_permutahedron":
        m = int(params["m"])
        r = ceil_log2(m)
        return {"inequalities": 2 * r + 2, "reduced_variables": r + 1}
    if name == "signing":
        n = int(params["n"])
        return {"inequalities": 2 * n, "reduced_variables": n}
    if name in ("a_permutahedron", "b_permutahedron", "d_permutahedron"):
        n = int(params["n"])
        size = len(make_network(net_kind, n))
        if name == "a_permutahedron":
            return {"inequalities": 2 * size, "reduced_variables": size}
        if name == "b_permutahedron":
            return {"inequalities": 2 * size + 2 * n, "reduced_variables": size + n}
        return {
            "inequalities": 2 * size + 4 * (n - 1),
            "reduced_variables": size + 2 * (n - 1),
        }
    if name == "parity":
        n = int(params["n"])
        return {"inequalities": 4 * (n - 1), "reduced_variables": 2 * (n - 1)}
    if name == "huffman_quadratic":
        n = int(params["n"])
        return {
            "inequalities": sum(2 * (2 * k - 3) for k in range(3, n + 1)),
            "reduced_variables": sum(2 * k - 3 for k in range(3, n + 1)),
        }
    if name == "huffman_nlogn":
        n = int(params["n"])
        size = len(make_network(net_kind, n)) if n >= 3 else 0
        inner = sum(2 * len(stride_indices(k)) - 3 for k in range(3, n))
        return {
            "inequalities": 2 * (size + inner),
            "reduced_variables": size + inner,
        }
    if name == "completion_time":
        n = len(params["p"])
        return {
            "inequalities": n * (n - 1),
            "reduced_variables": n * (n - 1) // 2,
        }
    raise ValueError(f"no golden counts for recipe {name!r}")
