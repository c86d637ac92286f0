import random
from fractions import Fraction as F

import pytest

from reflekt.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPProblem,
    feasible,
    in_hull,
    solve,
)
from reflekt.numeric import FLOAT, dot
from reflekt.oracles import permutation_orbit
from reflekt.polyhedra import HPolyhedron, VPolytope


def box01(n):
    return HPolyhedron.box([0] * n, [1] * n)


class TestSolve:
    def test_max_over_unit_square(self):
        res = solve(LPProblem(box01(2), (F(1), F(1)), "max"))
        assert res.status == OPTIMAL
        assert res.value == 2
        assert res.point == (F(1), F(1))

    def test_unbounded(self):
        Q = HPolyhedron.from_rows(1, ineqs=[((-1,), 0)])
        assert solve(LPProblem(Q, (F(1),), "max")).status == UNBOUNDED

    def test_infeasible(self):
        Q = HPolyhedron.from_rows(1, ineqs=[((1,), -1), ((-1,), 0)])
        assert solve(LPProblem(Q, (F(0),), "max")).status == INFEASIBLE

    def test_min_sense(self):
        res = solve(LPProblem(box01(2), (F(1), F(3)), "min"))
        assert res.status == OPTIMAL
        assert res.value == 0
        assert res.point == (F(0), F(0))

    def test_equations_handled_natively(self):
        Q = HPolyhedron.from_rows(
            2,
            ineqs=[((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)],
            eqs=[((1, 1), 1)],
        )
        res = solve(LPProblem(Q, (F(2), F(1)), "max"))
        assert res.status == OPTIMAL
        assert res.value == 2
        assert res.point == (F(1), F(0))

    def test_free_variables(self):
        # min x st x >= -7 (negative optimum needs the split representation)
        Q = HPolyhedron.from_rows(1, ineqs=[((-1,), 7)])
        res = solve(LPProblem(Q, (F(1),), "min"))
        assert res.value == -7

    def test_optimal_point_is_feasible_and_consistent(self):
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(1, 4)
            rows = []
            rhss = []
            for _ in range(rng.randint(1, 4)):
                rows.append(tuple(F(rng.randint(-4, 4)) for _ in range(n)))
                rhss.append(F(rng.randint(0, 8)))
            for j in range(n):
                e = [F(0)] * n
                e[j] = F(1)
                rows.append(tuple(e))
                rhss.append(F(6))
                e2 = [F(0)] * n
                e2[j] = F(-1)
                rows.append(tuple(e2))
                rhss.append(F(6))
            Q = HPolyhedron(n, tuple(rows), tuple(rhss))
            c = tuple(F(rng.randint(-9, 9)) for _ in range(n))
            res = solve(LPProblem(Q, c, "max"))
            assert res.status == OPTIMAL
            assert Q.contains(res.point)
            assert dot(c, res.point) == res.value

    def test_deterministic(self):
        Q = box01(3)
        c = (F(1), F(-2), F(1))
        r1 = solve(LPProblem(Q, c, "max"))
        r2 = solve(LPProblem(Q, c, "max"))
        assert (r1.value, r1.point) == (r2.value, r2.point)


class TestDualityAudit:
    def test_exact_certificates_on_random_lps(self):
        rng = random.Random(42)
        for _ in range(100):
            n = rng.randint(2, 4)
            rows, rhss = [], []
            for _ in range(rng.randint(2, 5)):
                rows.append(tuple(F(rng.randint(-5, 5)) for _ in range(n)))
                rhss.append(F(rng.randint(0, 10)))
            for j in range(n):
                e = [F(0)] * n
                e[j] = F(1)
                rows.append(tuple(e))
                rhss.append(F(10))
                e2 = [F(0)] * n
                e2[j] = F(-1)
                rows.append(tuple(e2))
                rhss.append(F(10))
            Q = HPolyhedron(n, tuple(rows), tuple(rhss))
            c = tuple(F(rng.randint(-10, 10)) for _ in range(n))
            res = solve(LPProblem(Q, c, "max"), want_duals=True)
            assert res.status == OPTIMAL
            y = res.dual
            assert y is not None
            # dual feasibility, strong duality, complementary slackness: exact
            assert all(yi >= 0 for yi in y)
            for j in range(n):
                assert sum(y[i] * rows[i][j] for i in range(len(rows))) == c[j]
            assert sum(y[i] * rhss[i] for i in range(len(rows))) == res.value
            for i, yi in enumerate(y):
                if yi > 0:
                    assert dot(rows[i], res.point) == rhss[i]


class TestFeasible:
    def test_pin_inside(self):
        assert feasible(box01(2), [(0, F(1, 2))])

    def test_pin_outside(self):
        assert not feasible(box01(2), [(0, F(2))])

    def test_pin_index_range(self):
        with pytest.raises(IndexError):
            feasible(box01(2), [(5, F(0))])


class TestPinnedProjection:
    def test_permutation_vertex_via_pins(self):
        from reflekt.constructions import a_permutahedron_ef
        from reflekt.networks import batcher

        ef = a_permutahedron_ef(HPolyhedron.point((F(1), F(2), F(3))), 3, batcher(3))
        last_block = range(ef.Q.dim - 3, ef.Q.dim)
        target = (F(3), F(2), F(1))
        assert feasible(ef.Q, list(zip(last_block, target)))
        assert not feasible(ef.Q, list(zip(last_block, (F(1), F(1), F(4)))))


class TestInHull:
    def test_triangle_interior(self):
        V = VPolytope.from_points([(0, 0), (1, 0), (0, 1)])
        assert in_hull((F(1, 2), F(1, 2)), V)

    def test_triangle_outside(self):
        V = VPolytope.from_points([(0, 0), (1, 0), (0, 1)])
        assert not in_hull((F(1), F(1)), V)

    def test_permutahedron_centroid(self):
        orb = permutation_orbit((1, 2, 3))
        # mean of all six permutations of (1,2,3)
        centroid = (F(2), F(2), F(2))
        assert in_hull(centroid, orb.to_vpolytope())

    def test_vertices_always_inside(self):
        rng = random.Random(9)
        for _ in range(10):
            n = rng.randint(2, 4)
            pts = [
                tuple(F(rng.randint(-5, 5)) for _ in range(n))
                for _ in range(rng.randint(1, 6))
            ]
            V = VPolytope.from_points(pts)
            for v in V.vertices:
                assert in_hull(v, V)


class TestFloatBackend:
    def test_float_square(self):
        Q = HPolyhedron.box([0.0, 0.0], [1.0, 1.0], backend=FLOAT)
        res = solve(LPProblem(Q, (1.0, 1.0), "max"))
        assert res.status == OPTIMAL
        assert abs(res.value - 2.0) < 1e-9

    def test_float_infeasible(self):
        Q = HPolyhedron.from_rows(
            1, ineqs=[((1.0,), -1.0), ((-1.0,), 0.0)], backend=FLOAT
        )
        assert solve(LPProblem(Q, (0.0,), "max")).status == INFEASIBLE

    def test_float_unbounded(self):
        Q = HPolyhedron.from_rows(1, ineqs=[((-1.0,), 0.0)], backend=FLOAT)
        assert solve(LPProblem(Q, (1.0,), "max")).status == UNBOUNDED
