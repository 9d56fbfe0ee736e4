import numpy as np
import pytest
import scipy.sparse as sp

from pdethick import analytic, geometry, harness, shapes, solver, thickness
from pdethick.errors import GridError, NonConvergenceError, NonNodalInterfaceError


def _interval_system(n=96, a=0.04):
    shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
    grid = solver.build_interval_grid(shape, 3.0 / n, (-1.0, 2.0))
    return solver.assemble_1d(grid, shape, a), grid, shape


class TestAssemble1d:
    def test_rhs_is_interface_functional(self):
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid = solver.build_interval_grid(shape, 1.0, (-1.0, 2.0))
        system = solver.assemble_1d(grid, shape, 0.5)
        nz = np.flatnonzero(system.rhs)
        nodes = grid.node_coords(0)
        assert len(nz) == 2
        assert dict(zip(nodes[nz], system.rhs[nz])) == {0.0: -1.0, 1.0: 1.0}

    def test_symmetry_exact(self):
        system, _, _ = _interval_system()
        assert system.symmetry_defect() == 0.0

    def test_quadratic_form_positive(self):
        system, _, _ = _interval_system()
        rng = np.random.default_rng(7)
        free = ~system.dirichlet_mask
        A = system.matrix[free][:, free]
        for v in rng.standard_normal((10, A.shape[0])):
            assert v @ (A @ v) > 0

    def test_non_nodal_interface_rejected(self):
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid = geometry.StructuredGrid(dim=1, origin=(-1.02,), h=3.0 / 96, cells=(96,))
        with pytest.raises(NonNodalInterfaceError):
            solver.assemble_1d(grid, shape, 0.04)

    def test_void_only_variant(self):
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid = solver.build_interval_grid(shape, 1.0 / 16, (-1.0, 2.0))
        system = solver.assemble_1d(grid, None, 0.04)
        assert not system.rhs.any()
        assert system.classification.void_mask.all()


class TestAssembleRadial:
    def test_rhs_entries(self):
        shape = shapes.annulus_whole(1.0, 2.0)
        grid = solver.build_radial_grid(shape, 1.0 / 64, R=4.0)
        system = solver.assemble_radial(grid, shape, 0.04)
        nz = np.flatnonzero(system.rhs)
        nodes = grid.node_coords(0)
        vals = dict(zip(np.round(nodes[nz], 12), system.rhs[nz]))
        assert vals == {1.0: -1.0, 2.0: 2.0}

    def test_symmetry_and_spd(self):
        shape = shapes.annulus_whole(1.0, 2.0)
        grid = solver.build_radial_grid(shape, 1.0 / 64, R=4.0)
        system = solver.assemble_radial(grid, shape, 0.04)
        assert system.symmetry_defect() == 0.0
        free = ~system.dirichlet_mask
        A = system.matrix[free][:, free]
        rng = np.random.default_rng(11)
        for v in rng.standard_normal((10, A.shape[0])):
            assert v @ (A @ v) > 0

    def test_axis_resolution_guard(self):
        # f_l lands on a node but sits closer than 10 h to the axis
        shape = shapes.annulus_whole(0.125, 1.125)
        with pytest.raises(GridError):
            solver.build_radial_grid(shape, 1.0 / 16, R=2.0)

    def test_non_nodal_inner_radius_rejected(self):
        shape = shapes.annulus_whole(0.3, 1.3)
        with pytest.raises(NonNodalInterfaceError):
            solver.build_radial_grid(shape, 1.0 / 64, R=2.0)


class TestAssemble2d:
    def test_flat_band_x_rhs_zero(self):
        band = shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
        grid = harness.band_general_grid(band, 1.0 / 16)
        system = solver.assemble_2d(grid, band, 0.04)
        n_nodes = system.n // 2
        assert np.max(np.abs(system.rhs[:n_nodes])) == 0.0

    def test_annulus_y_rhs_sums_to_zero(self):
        ann = shapes.annulus_general(1.0, 2.0, 2.5)
        grid = harness.annulus_general_grid(ann, 0.05)
        system = solver.assemble_2d(grid, ann, 0.04)
        n_nodes = system.n // 2
        assert abs(system.rhs[n_nodes:].sum()) < 1e-12
        assert abs(system.rhs[:n_nodes].sum()) < 1e-12

    def test_symmetry_and_spd(self):
        ann = shapes.annulus_general(1.0, 2.0, 2.5)
        grid = harness.annulus_general_grid(ann, 0.1)
        system = solver.assemble_2d(grid, ann, 0.04)
        assert system.symmetry_defect() == 0.0
        free = ~system.dirichlet_mask
        A = system.matrix[free][:, free]
        rng = np.random.default_rng(3)
        for v in rng.standard_normal((10, A.shape[0])):
            assert v @ (A @ v) > 0

    def test_under_resolved_shape_rejected(self):
        ann = shapes.annulus_general(1.0, 2.0, 2.5)
        grid = harness.annulus_general_grid(ann, 0.5)
        with pytest.raises(GridError):
            solver.assemble_2d(grid, ann, 0.04)


class TestSolveSpd:
    def test_identity_single_iteration(self):
        n = 40
        rng = np.random.default_rng(5)
        b = rng.standard_normal(n)
        system = solver.SparseSystem(
            n=n,
            matrix=sp.identity(n, format="csr"),
            rhs=b,
            dirichlet_mask=np.zeros(n, dtype=bool),
        )
        field = solver.solve_spd(system)
        assert field.iterations == 1
        assert np.allclose(field.components[0], b, rtol=0, atol=1e-14)

    def test_deterministic_iterations_and_bits(self):
        sys1, _, _ = _interval_system()
        sys2, _, _ = _interval_system()
        f1 = solver.solve_spd(sys1)
        f2 = solver.solve_spd(sys2)
        assert f1.iterations == f2.iterations
        assert np.array_equal(f1.components[0], f2.components[0])

    def test_nonconvergence_reported(self):
        system, _, _ = _interval_system(n=384)
        with pytest.raises(NonConvergenceError):
            solver.solve_spd(system, rel_tol=1e-10, max_iterations=3)

    def test_matches_analytic_interval(self):
        a = 0.04
        system, grid, shape = _interval_system(n=512 * 3, a=a)
        field = solver.solve_spd(system)
        sol = analytic.interval_general(0.0, 1.0, -1.0, 2.0, a)
        nodes = grid.node_coords(0)
        exact = np.array([analytic.eval_solution(sol, float(x)).scalar for x in nodes])
        assert np.max(np.abs(field.components[0] - exact)) <= 5e-5

    def test_second_order_convergence(self):
        a = 0.04
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        sol = analytic.interval_general(0.0, 1.0, -1.0, 2.0, a)
        errs = []
        for n in (128, 256, 512):
            grid = solver.build_interval_grid(shape, 1.0 / n, (-1.0, 2.0))
            field = solver.solve_spd(solver.assemble_1d(grid, shape, a))
            nodes = grid.node_coords(0)
            exact = np.array([analytic.eval_solution(sol, float(x)).scalar for x in nodes])
            errs.append((1.0 / n, float(np.max(np.abs(field.components[0] - exact)))))
        order, _ = harness.fit_rate(errs)
        assert 1.7 <= order <= 2.3

    def test_radial_reproduces_p_star(self):
        a = 0.04
        shape = shapes.annulus_whole(1.0, 2.0)
        grid = solver.build_radial_grid(shape, 1.0 / 1024, a=a)
        system = solver.assemble_radial(grid, shape, a)
        field = solver.solve_spd(system)
        p = thickness.divergence(field)
        p_shape = p[system.classification.shape_mask]
        ref = analytic.annulus_whole(1.0, 2.0, a)
        assert abs(p_shape.mean() - ref.p_star) / ref.p_star <= 1e-4
        assert (p_shape.max() - p_shape.min()) / abs(p_shape.mean()) <= 1e-3

    def test_whole_line_truncation(self):
        a = 0.04
        shape = shapes.interval_whole(0.0, 1.0)
        grid = solver.build_interval_grid(shape, 1.0 / 256, solver.whole_line_box(shape, a))
        field = solver.solve_spd(solver.assemble_1d(grid, shape, a))
        sol = analytic.interval_whole(0.0, 1.0, a)
        nodes = grid.node_coords(0)
        exact = np.array([analytic.eval_solution(sol, float(x)).scalar for x in nodes])
        assert np.max(np.abs(field.components[0] - exact)) <= 5e-5


class TestBandReduction:
    def test_flat_band_matches_1d(self):
        a = 0.04
        h = 1.0 / 64
        band = shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
        grid2 = harness.band_general_grid(band, h)
        field2 = solver.solve_spd(solver.assemble_2d(grid2, band, a))
        ishape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid1 = solver.build_interval_grid(ishape, h, (-1.0, 2.0))
        field1 = solver.solve_spd(solver.assemble_1d(grid1, ishape, a))
        sx, sy = field2.components
        scale = max(float(np.max(np.abs(sx))), float(np.max(np.abs(sy))))
        assert np.max(np.abs(sx)) <= 1e-8 * scale
        assert np.max(np.abs(sy - field1.components[0][:, None])) <= 1e-8 * scale


class TestHomogeneousProbes:
    def test_zero_data_gives_zero_field(self):
        system, _, _ = _interval_system()
        field = solver.homogeneous_boundary_probe(system, 0.0)
        assert field.iterations == 0
        assert not np.any(field.components[0])

    def test_constant_data_max_principle(self):
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid = solver.build_interval_grid(shape, 1.0 / 64, (-1.0, 2.0))
        system = solver.assemble_1d(grid, None, 0.04)
        field = solver.homogeneous_boundary_probe(system, 1.0)
        assert np.max(np.abs(field.components[0])) <= 1.0 + 1e-10

    def test_tail_data_max_principle(self):
        a = 0.04
        shape = shapes.interval_general(0.0, 1.0, -1.0, 2.0)
        grid = solver.build_interval_grid(shape, 1.0 / 64, (-1.0, 2.0))
        system = solver.assemble_1d(grid, shape, a)
        tail = analytic.interval_whole(0.0, 1.0, a)
        nodes = grid.node_coords(0)
        data = np.array([analytic.eval_solution(tail, float(x)).scalar for x in nodes])
        field = solver.homogeneous_boundary_probe(system, data)
        boundary_sup = max(abs(data[0]), abs(data[-1]))
        interior = field.components[0][~system.dirichlet_mask]
        assert np.max(np.abs(interior)) <= boundary_sup + 1e-10

    def test_interior_h1_estimate_band(self):
        lhs, rhs, h = harness.interior_h1_check("band")
        assert lhs <= rhs * (1.0 + 10.0 * h)

    def test_interior_h1_estimate_annulus(self):
        lhs, rhs, h = harness.interior_h1_check("annulus")
        assert lhs <= rhs * (1.0 + 10.0 * h / 0.5)


class TestSerialization:
    def test_triplet_dump_is_one_based(self, tmp_path):
        system, _, _ = _interval_system(n=12)
        path = tmp_path / "matrix.txt"
        solver.dump_triplets(system, str(path))
        rows = [line.split() for line in path.read_text().splitlines()]
        coo = system.matrix.tocoo()
        assert len(rows) == coo.nnz
        assert int(rows[0][0]) == coo.row[0] + 1
        assert int(rows[0][1]) == coo.col[0] + 1
        assert float(rows[0][2]) == coo.data[0]

    def test_field_csv_roundtrip_1d(self, tmp_path):
        system, grid, _ = _interval_system(n=24)
        field = solver.solve_spd(system)
        path = tmp_path / "field.csv"
        solver.write_field_csv(field, str(path))
        cols = harness.load_csv(str(path))
        assert np.allclose(cols["x"], grid.node_coords(0), rtol=0, atol=0)
        assert np.allclose(cols["s_x"], field.components[0], rtol=0, atol=0)

    def test_field_csv_roundtrip_2d(self, tmp_path):
        band = shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
        grid = harness.band_general_grid(band, 1.0 / 8)
        field = solver.solve_spd(solver.assemble_2d(grid, band, 0.04))
        path = tmp_path / "field2.csv"
        solver.write_field_csv(field, str(path))
        cols = harness.load_csv(str(path))
        nxn, nyn = grid.node_counts()
        assert len(cols["x"]) == nxn * nyn
        back = np.array(cols["s_y"]).reshape(nyn, nxn)
        assert np.array_equal(back, field.components[1])
