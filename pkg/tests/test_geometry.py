import json
import math

import numpy as np
import pytest

import solidsum as ss
from solidsum.geometry import half_spaces, normalize_generator

SQRT3 = math.sqrt(3.0)


class TestLoadPolytope:
    def test_sqrt3_triangle(self):
        P = ss.load_polytope(2, [(0, 0), (0, 1), (SQRT3, 0)])
        assert P.n_vertices == 3
        assert np.allclose(P.vertices[2], [SQRT3, 0.0])

    def test_unit_square(self):
        P = ss.load_polytope(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
        assert P.n_vertices == 4

    def test_collinear_rejected(self):
        with pytest.raises(ss.DegenerateInput):
            ss.load_polytope(2, [(0, 0), (1, 1), (2, 2)])

    def test_row_length_mismatch(self):
        with pytest.raises(ss.DimensionMismatch):
            ss.load_polytope(2, [(0, 0), (1, 0, 0), (0, 1)])

    def test_nonextreme_point_dropped_with_warning(self):
        with pytest.warns(UserWarning, match="non-extreme"):
            P = ss.load_polytope(2, [(0, 0), (1, 0), (0.5, 0.25), (1, 1), (0, 1)])
        assert P.n_vertices == 4

    def test_nonfinite_rejected(self):
        with pytest.raises(ss.DegenerateInput):
            ss.load_polytope(2, [(0, 0), (1, 0), (0, math.nan)])

    def test_too_few_vertices(self):
        with pytest.raises(ss.DegenerateInput):
            ss.load_polytope(2, [(0, 0), (1, 0)])


class TestJsonLoader:
    def test_expression_coordinates(self, tmp_path):
        path = tmp_path / "tri.json"
        path.write_text(json.dumps(
            {"dim": 2, "vertices": [["0", "0"], ["0", "2/2"], ["sqrt(3)", "-0.0"]]}))
        P = ss.polytope_from_json(path)
        assert np.allclose(sorted(P.vertices[:, 0]), [0.0, 0.0, SQRT3])
        assert P.coord_sources[2][0] == "sqrt(3)"

    def test_dict_input_and_negatives(self):
        P = ss.polytope_from_json(
            {"dim": 1, "vertices": [["-sqrt(2)"], ["1/2"]]})
        assert np.allclose(sorted(P.vertices[:, 0]), [-math.sqrt(2), 0.5])

    def test_provenance_tracks_surviving_vertices(self):
        with pytest.warns(UserWarning, match="non-extreme"):
            P = ss.polytope_from_json({"dim": 1, "vertices": [["0"], ["1/4"], ["2"]]})
        assert P.n_vertices == 2
        assert P.coord_sources == (("0",), ("2",))

    def test_bad_coordinate(self):
        with pytest.raises(ss.DegenerateInput):
            ss.polytope_from_json({"dim": 1, "vertices": [["sqrt(-1)"], [1]]})

    def test_missing_keys(self):
        with pytest.raises(ss.DegenerateInput):
            ss.polytope_from_json({"vertices": [[0], [1]]})


class TestTangentCones:
    def test_triangle_vertex_generators(self, triangle):
        c0 = ss.vertex_tangent_cone(triangle, 0)
        assert np.allclose(sorted(map(tuple, c0.generators)), [(0, 1), (SQRT3, 0)])
        c1 = ss.vertex_tangent_cone(triangle, 1)
        assert np.allclose(sorted(map(tuple, c1.generators)), [(0, -1), (SQRT3, -1)])
        # raw edge vectors at the second vertex already give |det| = sqrt(3)
        assert abs(abs(np.linalg.det(c1.generators)) - SQRT3) < 1e-12

    def test_square_corner(self, square):
        c = ss.vertex_tangent_cone(square, 0)
        assert np.allclose(sorted(map(tuple, c.generators)), [(0, 1), (1, 0)])

    def test_bad_index(self, triangle):
        with pytest.raises(ss.BadIndex):
            ss.vertex_tangent_cone(triangle, 7)

    def test_canonical_determinants(self, triangle):
        dets = []
        for i in range(3):
            c = ss.vertex_tangent_cone(triangle, i)
            G = np.array([normalize_generator(w) for w in c.generators])
            dets.append(abs(np.linalg.det(G)))
        assert np.allclose(dets, [1.0, SQRT3, 1.0], atol=1e-12)


class TestTriangulateCone:
    def test_simple_2d_passthrough(self):
        pieces = ss.triangulate_cone([0, 0], [[1, 0], [0, 1]])
        assert len(pieces) == 1
        assert abs(pieces[0].det - 1.0) < 1e-12

    def test_simplicial_3d_passthrough(self):
        pieces = ss.triangulate_cone([0, 0, 0], np.eye(3))
        assert len(pieces) == 1

    def test_not_pointed(self):
        with pytest.raises(ss.NotPointed):
            ss.triangulate_cone([0, 0], [[1, 0], [-1, 0]])

    def test_square_cone_split(self):
        gens = np.array([[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=float)
        pieces = ss.triangulate_cone([0, 0, 0], gens)
        assert len(pieces) == 2
        assert abs(sum(abs(p.det) for p in pieces) - 2.0) < 1e-12

    def test_square_cone_partition_mc(self):
        # union of pieces = parent cone {x,y,z >= 0, x+y >= z}, interiors disjoint
        gens = np.array([[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=float)
        pieces = ss.triangulate_cone([0, 0, 0], gens)
        invs = [np.linalg.inv(p.generators) for p in pieces]
        rng = np.random.default_rng(11)
        pts = rng.uniform(-1.5, 1.5, size=(10_000, 3))
        in_pieces = np.zeros(len(pts), dtype=int)
        for inv in invs:
            lam = pts @ inv
            in_pieces += np.all(lam >= 0, axis=1)
        parent = (np.min(pts, axis=1) >= 0) & (pts[:, 0] + pts[:, 1] - pts[:, 2] >= 0)
        # ignore the measure-zero band around all piece boundaries
        band = np.zeros(len(pts), dtype=bool)
        for inv in invs:
            band |= np.any(np.abs(pts @ inv) < 1e-9, axis=1)
        ok = ~band
        assert np.array_equal(in_pieces[ok] > 0, parent[ok])
        assert int(in_pieces[ok].max()) <= 1


class TestLatticePoints:
    def test_square_dilate_two(self, square):
        pts = ss.lattice_points(square, 2.0)
        assert len(pts) == 9
        assert set(map(tuple, pts)) == {(i, j) for i in range(3) for j in range(3)}

    def test_triangle_dilate_one(self, triangle):
        pts = ss.lattice_points(triangle, 1.0)
        assert set(map(tuple, pts)) == {(0, 0), (0, 1), (1, 0)}

    def test_dilate_zero(self, triangle):
        pts = ss.lattice_points(triangle, 0.0)
        assert set(map(tuple, pts)) == {(0, 0)}

    def test_negative_dilation(self, square):
        with pytest.raises(ValueError):
            ss.lattice_points(square, -1.0)

    @pytest.mark.parametrize("t1,t2", [(0.5, 1.0), (1.0, 2.0), (1.3, 2.7)])
    def test_monotone_in_t(self, square, t1, t2):
        small = set(map(tuple, ss.lattice_points(square, t1)))
        large = set(map(tuple, ss.lattice_points(square, t2)))
        assert small <= large


class TestFaces:
    @pytest.mark.parametrize("fixture,count", [
        ("triangle", 7), ("square", 9), ("tetrahedron", 15)])
    def test_counts(self, fixture, count, request):
        P = request.getfixturevalue(fixture)
        assert len(ss.faces(P)) == count

    @pytest.mark.parametrize("fixture", [
        "triangle", "square", "tetrahedron", "golden_segment"])
    def test_euler_relation(self, fixture, request):
        P = request.getfixturevalue(fixture)
        assert sum(f.sign for f in ss.faces(P)) == 1

    def test_unsupported_dimension(self):
        cross = [row for i in range(4) for row in
                 (np.eye(4)[i].tolist(), (-np.eye(4)[i]).tolist())]
        P = ss.load_polytope(4, cross)
        with pytest.raises(ss.UnsupportedDimension):
            ss.faces(P)


def test_half_spaces_contain_vertices(triangle, square, tetrahedron):
    for P in (triangle, square, tetrahedron):
        A, b = half_spaces(P)
        assert np.all(P.vertices @ A.T <= b + 1e-9)
        assert np.allclose(np.linalg.norm(A, axis=1), 1.0)


def test_simple_cone_det_validation():
    with pytest.raises(ss.DegenerateCone):
        ss.simple_cone([0, 0], [[1, 1], [2, 2]])
    c = ss.simple_cone([0, 0], [[0, 1], [SQRT3, -1]])
    assert abs(abs(c.det) - SQRT3) < 1e-12
