import itertools
from fractions import Fraction as F

import pytest

from reflekt.constructions import (
    a_permutahedron_ef,
    even_pair_chain_specs,
    mgon_ef,
    parity_polytope_ef,
    sign_chain_specs,
    signing_ef,
    transposition_chain_specs,
)
from reflekt.networks import ComparatorSeq, batcher
from reflekt.oracles import (
    VertexSet,
    mgon_orbit,
    permutation_orbit,
    sign_flip_orbit,
)
from reflekt.polyhedra import (
    AffineMap,
    HPolyhedron,
    PolyhedralRelation,
    compose_extension,
    graph_relation,
)
from reflekt.reflections import ReflectionSpec, reflection_relation
from reflekt.verify import (
    check_affine_generators,
    check_chain_conditions,
    size_report,
    verify_projection_equality,
)


def perm3_ef():
    return a_permutahedron_ef(HPolyhedron.point((F(1), F(2), F(3))), 3, batcher(3))


class TestProjectionEquality:
    def test_permutahedron_passes(self):
        rep = verify_projection_equality(perm3_ef(), permutation_orbit((1, 2, 3)), 50, seed=7)
        assert rep.passed
        assert (rep.vertex_total, rep.vertex_passed) == (6, 6)
        assert (rep.objective_total, rep.objective_passed) == (50, 50)
        assert rep.objective_max_deviation == 0

    def test_truncated_chain_fails(self):
        ef = perm3_ef()
        mutated = compose_extension(ef.base, ef.relations[:-1])
        rep = verify_projection_equality(mutated, permutation_orbit((1, 2, 3)), 50, seed=7)
        assert not rep.passed
        assert rep.vertex_passed < rep.vertex_total

    def test_mgon_float_mode(self):
        rep = verify_projection_equality(mgon_ef(4), mgon_orbit(4), 25, seed=1, tol=1e-6)
        assert rep.passed
        assert float(rep.objective_max_deviation) <= 1e-6

    def test_deterministic_reports(self):
        a = verify_projection_equality(perm3_ef(), permutation_orbit((1, 2, 3)), 30, seed=5)
        b = verify_projection_equality(perm3_ef(), permutation_orbit((1, 2, 3)), 30, seed=5)
        assert a.to_json() == b.to_json()

    def test_report_shape(self):
        rep = verify_projection_equality(
            perm3_ef(),
            permutation_orbit((1, 2, 3)),
            10,
            seed=2,
            expected_sizes={"inequalities": 6},
            extra_checks=(("chain-conditions", True),),
        )
        data = rep.to_dict()
        assert data["passed"] is True
        assert data["size_check"]["passed"] is True
        assert data["hypothesis_checks"] == [["chain-conditions", True]]
        assert "wall_time_s" not in data
        assert "wall_time_s" in rep.to_dict(include_timing=True)


class TestChainConditions:
    def test_signing_chain(self):
        base = VertexSet(2, ((F(1), F(2)),), "base")
        assert check_chain_conditions(base, sign_chain_specs(2), sign_flip_orbit((1, 2)))

    def test_parity_chain(self):
        base = VertexSet(3, ((F(-1), F(1), F(1)),), "base")
        target_pts = [
            tuple(F(s) for s in signs)
            for signs in itertools.product((1, -1), repeat=3)
            if signs.count(-1) % 2 == 1
        ]
        target = VertexSet(3, tuple(sorted(target_pts)), "odd-signs")
        assert check_chain_conditions(base, even_pair_chain_specs(3), target)

    def test_non_sorting_chain_fails(self):
        base = VertexSet(3, ((F(1), F(2), F(3)),), "base")
        chain = transposition_chain_specs(ComparatorSeq(3, ((1, 2),)))
        assert not check_chain_conditions(base, chain, permutation_orbit((1, 2, 3)))

    def test_polytope_base(self):
        # the base need not be a single point: a segment base works through in_hull
        base = VertexSet(2, ((F(1), F(2)), (F(2), F(2))), "segment")
        target_pts = set()
        for v in base.points:
            for signs in itertools.product((1, -1), repeat=2):
                target_pts.add(tuple(s * e for s, e in zip(signs, v)))
        target = VertexSet(2, tuple(sorted(target_pts)), "orbit")
        assert check_chain_conditions(base, sign_chain_specs(2), target)


class TestAffineGenerators:
    def test_reflection_relation(self):
        rel = reflection_relation(ReflectionSpec((F(1), F(-2), F(1)), F(3)))
        assert check_affine_generators(rel, samples=10, seed=4)

    def test_graph_relation_single_generator(self):
        f = AffineMap.from_rows([[1, 1], [0, 2]], [1, 0])
        assert check_affine_generators(graph_relation(f), samples=10, seed=4)

    def test_triangle_with_wrong_generators_fails(self):
        body = HPolyhedron.from_rows(2, ineqs=[((-1, 1), 0), ((1, 1), 2), ((0, -1), 0)])
        rel = PolyhedralRelation(
            1, 1, body, generators=(AffineMap.identity(1),), label="triangle"
        )
        assert not check_affine_generators(rel, samples=20, seed=4)

    def test_requires_generators(self):
        body = HPolyhedron.from_rows(2, ineqs=[((-1, 1), 0)])
        rel = PolyhedralRelation(1, 1, body)
        with pytest.raises(ValueError):
            check_affine_generators(rel)


class TestSizeReport:
    def test_mgon_eight(self):
        ok, diff = size_report(mgon_ef(8), {"inequalities": 8, "reduced_variables": 4})
        assert ok, diff

    def test_parity_five(self):
        ok, diff = size_report(
            parity_polytope_ef(5, "odd"), {"inequalities": 16, "reduced_variables": 8}
        )
        assert ok, diff

    def test_signing_addition(self):
        ef = signing_ef(HPolyhedron.point((F(1), F(2), F(3))), 3)
        ok, diff = size_report(ef, {"inequalities": 6})
        assert ok, diff

    def test_mismatch_reports_diff(self):
        ok, diff = size_report(mgon_ef(8), {"inequalities": 7})
        assert not ok
        assert diff == {"inequalities": (7, 8)}


class TestMutationSensitivityCharacterization:
    """Regression guard for the verifier's sensitivity: deleting a relation
    must be caught unless the drop provably preserves the projection; the
    known projection-preserving survivor indices are pinned here."""

    def survivors(self, ef, oracle, tol=1e-9):
        out = []
        for i, rel in enumerate(ef.relations):
            if rel.n != rel.m:
                continue  # removal would break the type chain
            rels = ef.relations[:i] + ef.relations[i + 1 :]
            mutated = compose_extension(ef.base, rels)
            rep = verify_projection_equality(mutated, oracle, 40, seed=13, tol=tol)
            if rep.passed:
                out.append(i)
        return out

    def test_permutahedron_all_drops_caught(self):
        assert self.survivors(perm3_ef(), permutation_orbit((1, 2, 3))) == []

    def test_signing_all_drops_caught(self):
        ef = signing_ef(HPolyhedron.point((F(1), F(2), F(3))), 3)
        assert self.survivors(ef, sign_flip_orbit((1, 2, 3))) == []

    def test_parity_known_equivalent_drop(self):
        # dropping the first double-flip relation provably keeps the
        # projection: every vertex still reaches the base through the
        # remaining chain and the generator hull does not grow
        ef = parity_polytope_ef(3, "odd")
        from reflekt.oracles import parity_vertices

        assert self.survivors(ef, parity_vertices(3, "odd")) == [1]

    def test_mgon4_all_drops_caught(self):
        assert self.survivors(mgon_ef(4), mgon_orbit(4), tol=1e-6) == []
