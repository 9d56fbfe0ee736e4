"""Finite element discretization of the weak form in three flavors.

  * 1D intervals: piecewise-linear elements on [b_l, b_r] (or a truncated
    whole line), stiffness a/h, consistent void mass, right-hand side
    +1 / -1 at the interface nodes (the shape functional integrates to the
    boundary values when the interfaces are nodal).
  * Radial annulus: weighted P1 elements on (0, R] with stiffness weight r,
    singular mass weight 1/r and void mass weight r, all by 2-point Gauss
    quadrature per element; right-hand side +f_r / -f_l at the interface
    nodes.  The innermost node sits at r = h and carries a homogeneous
    Dirichlet value (the true solution behaves like r near the axis, and the
    O(h) closure error is exponentially damped before it reaches f_l); the
    grid must satisfy f_l >= 10 h.
  * Full 2D: bilinear quadrilaterals, the two vector components assembled
    block-diagonally (the bilinear form decouples componentwise), cellwise
    characteristic function from the classification, exact per-cell
    integration of the basis gradients over shape cells for the load, and
    Dirichlet values on the box boundary plus every node touching an Outside
    cell (staircase boundary).

Whole-space problems are truncated at distance 28 sqrt(a) beyond the shape
boundary; the homogeneous-equation decay makes the truncation error at most
~exp(-28) < 1e-12, below solver tolerance.

Assembly walks cells in a fixed order into COO triplets (deterministic
regardless of any outer parallelism over distinct systems), and the
conjugate-gradient loop below performs the same floating-point operations on
every run, so repeated solves of one system reproduce bit-identical results
on a fixed platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, TextIO, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .errors import GridError, NonConvergenceError, NonNodalInterfaceError
from .geometry import CellClassification, CellLabel, StructuredGrid, classify_cells
from .shapes import ShapeSpec

#: Truncation distance (in units of sqrt(a)) for whole-space domains.
TRUNCATION_LAYERS = 28.0

#: Minimum number of cells across the shape thickness in 2D.
MIN_CELLS_ACROSS = 4

_GAUSS_OFFSET = 0.5 / math.sqrt(3.0)  # 2-point Gauss offsets from the midpoint


@dataclass
class SparseSystem:
    """Assembled symmetric system with Dirichlet bookkeeping.

    ``matrix`` contains every node; ``dirichlet_mask`` marks constrained
    nodes and ``dirichlet_values`` their prescribed values (zero unless a
    boundary probe sets them).  The reduced matrix after eliminating the
    constrained nodes is symmetric positive definite.
    """

    n: int
    matrix: sp.csr_matrix
    rhs: np.ndarray
    dirichlet_mask: np.ndarray
    grid: Optional[StructuredGrid] = None
    n_components: int = 1
    classification: Optional[CellClassification] = None
    dirichlet_values: Optional[np.ndarray] = None

    def symmetry_defect(self) -> float:
        d = self.matrix - self.matrix.T
        return 0.0 if d.nnz == 0 else float(np.max(np.abs(d.data)))


@dataclass
class DiscreteField:
    """Nodal solution values; one array per vector component.

    2D components are shaped (ny_nodes, nx_nodes); 1D fields hold a single
    flat array.
    """

    grid: Optional[StructuredGrid]
    components: Tuple[np.ndarray, ...]
    iterations: Optional[int] = None

    def flat(self) -> np.ndarray:
        return np.concatenate([c.ravel() for c in self.components])

    def norm_inf(self) -> float:
        return float(max(np.max(np.abs(c)) for c in self.components))


def _locate_node(coords: np.ndarray, value: float, h: float, what: str) -> int:
    idx = int(round((value - coords[0]) / h))
    if idx < 0 or idx >= len(coords) or abs(coords[idx] - value) > 1e-9 * max(h, 1.0):
        raise NonNodalInterfaceError(
            f"{what} = {value} does not coincide with a grid node (h = {h})"
        )
    return idx


def build_interval_grid(shape: ShapeSpec, h_target: float, box: Tuple[float, float]) -> StructuredGrid:
    """1D grid over ``box`` whose nodes hit f_l and f_r exactly.

    h is snapped to divide the shape width; the box ends are moved outward to
    the nearest node if they are not commensurate.
    """
    T = shape.thickness
    n_shape = max(1, round(T / h_target))
    h = T / n_shape
    lo, hi = box
    n_left = max(1, math.ceil((shape.f_l - lo) / h - 1e-9))
    n_right = max(1, math.ceil((hi - shape.f_r) / h - 1e-9))
    origin = shape.f_l - n_left * h
    cells = n_left + n_shape + n_right
    return StructuredGrid(dim=1, origin=(origin,), h=h, cells=(cells,))


def whole_line_box(shape: ShapeSpec, a: float) -> Tuple[float, float]:
    pad = TRUNCATION_LAYERS * math.sqrt(a)
    return (shape.f_l - pad, shape.f_r + pad)


def assemble_1d(grid: StructuredGrid, shape: Optional[ShapeSpec], a: float) -> SparseSystem:
    """P1 assembly of  a int s'u' + int_void s u = u(f_r) - u(f_l).

    ``shape = None`` assembles the all-void homogeneous operator (every cell
    carries the mass term, zero right-hand side), used by boundary probes.
    """
    if a <= 0:
        raise GridError(f"need a > 0, got {a}")
    nodes = grid.node_coords(0)
    n = len(nodes)
    h = grid.h
    if shape is None:
        labels = np.full(grid.cells[0], CellLabel.VOID, dtype=np.uint8)
        cls = CellClassification(grid=grid, labels=labels, chi=np.zeros(grid.cells[0]))
        idx_l = idx_r = None
    else:
        cls = classify_cells(grid, shape)
        idx_l = _locate_node(nodes, shape.f_l, h, "f_l")
        idx_r = _locate_node(nodes, shape.f_r, h, "f_r")

    rows, cols, vals = [], [], []
    stiff = a / h
    for e in range(grid.cells[0]):
        i, j = e, e + 1
        rows += [i, i, j, j]
        cols += [i, j, i, j]
        vals += [stiff, -stiff, -stiff, stiff]
        if cls.labels[e] == CellLabel.VOID:
            m = h / 6.0
            rows += [i, i, j, j]
            cols += [i, j, i, j]
            vals += [2 * m, m, m, 2 * m]
    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    rhs = np.zeros(n)
    if idx_r is not None:
        rhs[idx_r] += 1.0
        rhs[idx_l] -= 1.0

    mask = np.zeros(n, dtype=bool)
    mask[0] = mask[-1] = True
    # nodes flanked only by Outside cells are clamped too
    outside = cls.labels == CellLabel.OUTSIDE
    for i in range(1, n - 1):
        if outside[i - 1] and outside[i]:
            mask[i] = True
    return SparseSystem(
        n=n,
        matrix=matrix,
        rhs=rhs,
        dirichlet_mask=mask,
        grid=grid,
        n_components=1,
        classification=cls,
    )


def build_radial_grid(shape: ShapeSpec, h_target: float, R: Optional[float] = None, a: Optional[float] = None) -> StructuredGrid:
    """Radial grid with nodes at multiples of h, innermost node at r = h.

    Requires f_l and f_r to be integer multiples of the snapped spacing
    (h = T / round(T/h_target)); raises otherwise.  R defaults to
    f_r + 28 sqrt(a).
    """
    T = shape.thickness
    n_shape = max(1, round(T / h_target))
    h = T / n_shape
    ratio = shape.f_l / h
    if abs(ratio - round(ratio)) > 1e-9:
        raise NonNodalInterfaceError(
            f"inner radius {shape.f_l} is not a node multiple of h = {h}"
        )
    if shape.f_l < 10 * h - 1e-12:
        raise GridError(f"grid too coarse near the axis: need f_l >= 10 h, got h = {h}")
    if R is None:
        if a is None:
            raise GridError("need either R or a to size the radial grid")
        R = shape.f_r + TRUNCATION_LAYERS * math.sqrt(a)
    n_total = math.ceil(R / h - 1e-9)
    # nodes at h, 2h, ..., n_total * h
    return StructuredGrid(dim=1, origin=(h,), h=h, cells=(n_total - 1,), radial=True)


def assemble_radial(grid: StructuredGrid, shape: ShapeSpec, a: float) -> SparseSystem:
    """Weighted P1 assembly of the radial weak form.

      a int (r S_r U_r + S U / r) dr + int_void r S U dr
          = f_r U(f_r) - f_l U(f_l)

    with 2-point Gauss quadrature for all three weights.
    """
    if a <= 0:
        raise GridError(f"need a > 0, got {a}")
    if not grid.radial:
        raise GridError("assemble_radial needs a radial grid")
    cls = classify_cells(grid, shape)
    nodes = grid.node_coords(0)
    n = len(nodes)
    h = grid.h
    if shape.f_l < 10 * h - 1e-12:
        raise GridError(f"grid too coarse near the axis: need f_l >= 10 h, got h = {h}")
    idx_l = _locate_node(nodes, shape.f_l, h, "f_l")
    idx_r = _locate_node(nodes, shape.f_r, h, "f_r")

    rows, cols, vals = [], [], []
    for e in range(grid.cells[0]):
        r0, r1 = nodes[e], nodes[e + 1]
        mid = 0.5 * (r0 + r1)
        g = (mid - _GAUSS_OFFSET * h, mid + _GAUSS_OFFSET * h)
        w = 0.5 * h
        # stiffness: a * int r phi_i' phi_j', phi' = -/+ 1/h
        k_fac = a * (w * (g[0] + g[1])) / (h * h)
        local = [[k_fac, -k_fac], [-k_fac, k_fac]]
        # singular mass: a * int (1/r) phi_i phi_j
        for gp in g:
            phi = ((r1 - gp) / h, (gp - r0) / h)
            c = a * w / gp
            for li in range(2):
                for lj in range(2):
                    local[li][lj] += c * phi[li] * phi[lj]
        # void mass: int r phi_i phi_j on void cells
        if cls.labels[e] == CellLabel.VOID:
            for gp in g:
                phi = ((r1 - gp) / h, (gp - r0) / h)
                c = w * gp
                for li in range(2):
                    for lj in range(2):
                        local[li][lj] += c * phi[li] * phi[lj]
        for li, gi in ((0, e), (1, e + 1)):
            for lj, gj in ((0, e), (1, e + 1)):
                rows.append(gi)
                cols.append(gj)
                vals.append(local[li][lj])
    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    rhs = np.zeros(n)
    rhs[idx_r] += shape.f_r
    rhs[idx_l] -= shape.f_l

    mask = np.zeros(n, dtype=bool)
    mask[0] = mask[-1] = True
    return SparseSystem(
        n=n,
        matrix=matrix,
        rhs=rhs,
        dirichlet_mask=mask,
        grid=grid,
        n_components=1,
        classification=cls,
    )


# bilinear element matrices on an h x h cell, node order SW, SE, NE, NW
_K2 = np.array(
    [
        [4.0, -1.0, -2.0, -1.0],
        [-1.0, 4.0, -1.0, -2.0],
        [-2.0, -1.0, 4.0, -1.0],
        [-1.0, -2.0, -1.0, 4.0],
    ]
) / 6.0
_M2 = np.array(
    [
        [4.0, 2.0, 1.0, 2.0],
        [2.0, 4.0, 2.0, 1.0],
        [1.0, 2.0, 4.0, 2.0],
        [2.0, 1.0, 2.0, 4.0],
    ]
) / 36.0
# exact integrals of the basis gradients over one cell, divided by h
_GRAD_X = np.array([-0.5, 0.5, 0.5, -0.5])
_GRAD_Y = np.array([-0.5, -0.5, 0.5, 0.5])


def _node_ids_2d(grid: StructuredGrid) -> Tuple[np.ndarray, int]:
    """(cells, 4) array of global node ids in SW, SE, NE, NW order."""
    nx, ny = grid.cells
    nxn, nyn = grid.node_counts()
    ii = np.arange(nx)
    jj = np.arange(ny)
    if grid.periodic_x:
        i_east = (ii + 1) % nx
    else:
        i_east = ii + 1
    jje = jj + 1
    sw = jj[:, None] * nxn + ii[None, :]
    se = jj[:, None] * nxn + i_east[None, :]
    ne = jje[:, None] * nxn + i_east[None, :]
    nw = jje[:, None] * nxn + ii[None, :]
    conn = np.stack([sw, se, ne, nw], axis=-1).reshape(-1, 4)
    return conn, nxn * nyn


def assemble_2d(grid: StructuredGrid, shape: ShapeSpec, a: float) -> SparseSystem:
    """Bilinear-quad assembly of the vector weak form on a 2D grid.

    The operator decouples componentwise, so the system is block diagonal
    with two copies of  a * stiffness + void mass;  the load integrates the
    basis gradients exactly over shape cells (x gradients for the first
    block, y gradients for the second).
    """
    if a <= 0:
        raise GridError(f"need a > 0, got {a}")
    if grid.dim != 2:
        raise GridError("assemble_2d needs a 2D grid")
    cellsacross = shape.thickness / grid.h
    if cellsacross < MIN_CELLS_ACROSS:
        raise GridError(
            f"under-resolved shape: {cellsacross:.1f} cells across the thickness"
        )
    cls = classify_cells(grid, shape)
    labels = cls.labels.ravel()
    conn, n_nodes = _node_ids_2d(grid)
    h = grid.h

    active = labels != CellLabel.OUTSIDE
    void = labels == CellLabel.VOID
    shape_cells = labels == CellLabel.SHAPE

    # scalar block in COO form, fixed cell order
    k_cells = np.flatnonzero(active)
    v_cells = np.flatnonzero(void)
    blocks = []
    # stiffness on all active cells
    c_k = conn[k_cells]
    rows = np.repeat(c_k, 4, axis=1).ravel()
    cols = np.tile(c_k, (1, 4)).ravel()
    vals = np.tile((a * _K2).ravel(), len(k_cells))
    blocks.append((rows, cols, vals))
    # void mass
    if len(v_cells):
        c_v = conn[v_cells]
        rows = np.repeat(c_v, 4, axis=1).ravel()
        cols = np.tile(c_v, (1, 4)).ravel()
        vals = np.tile((h * h * _M2).ravel(), len(v_cells))
        blocks.append((rows, cols, vals))
    rows = np.concatenate([b[0] for b in blocks])
    cols = np.concatenate([b[1] for b in blocks])
    vals = np.concatenate([b[2] for b in blocks])
    scalar = sp.coo_matrix((vals, (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()
    matrix = sp.block_diag((scalar, scalar), format="csr")

    rhs = np.zeros(2 * n_nodes)
    c_s = conn[shape_cells]
    if len(c_s):
        np.add.at(rhs, c_s.ravel(), np.tile(h * _GRAD_X, len(c_s)))
        np.add.at(rhs[n_nodes:], c_s.ravel(), np.tile(h * _GRAD_Y, len(c_s)))

    # Dirichlet: box boundary + any node of an Outside cell
    nxn, nyn = grid.node_counts()
    mask1 = np.zeros(n_nodes, dtype=bool)
    jj = np.arange(n_nodes) // nxn
    ii = np.arange(n_nodes) % nxn
    mask1 |= (jj == 0) | (jj == nyn - 1)
    if not grid.periodic_x:
        mask1 |= (ii == 0) | (ii == nxn - 1)
    out_cells = np.flatnonzero(labels == CellLabel.OUTSIDE)
    if len(out_cells):
        mask1[np.unique(conn[out_cells].ravel())] = True
    mask = np.concatenate([mask1, mask1])
    return SparseSystem(
        n=2 * n_nodes,
        matrix=matrix,
        rhs=rhs,
        dirichlet_mask=mask,
        grid=grid,
        n_components=2,
        classification=cls,
    )


def _default_max_iterations(system: SparseSystem, n_free: int) -> int:
    grid = system.grid
    if grid is not None and grid.dim == 2:
        return max(200, 50 * math.ceil(math.sqrt(n_free)))
    return max(200, 10 * n_free)


def _field_from_vector(system: SparseSystem, x: np.ndarray, iterations: int) -> DiscreteField:
    grid = system.grid
    if grid is None or grid.dim == 1:
        comps = tuple(
            x[k * (system.n // system.n_components):(k + 1) * (system.n // system.n_components)]
            for k in range(system.n_components)
        )
        return DiscreteField(grid=grid, components=comps, iterations=iterations)
    nxn, nyn = grid.node_counts()
    n_nodes = nxn * nyn
    comps = tuple(
        x[k * n_nodes:(k + 1) * n_nodes].reshape(nyn, nxn) for k in range(system.n_components)
    )
    return DiscreteField(grid=grid, components=comps, iterations=iterations)


def solve_spd(
    system: SparseSystem,
    rel_tol: float = 1e-10,
    max_iterations: Optional[int] = None,
) -> DiscreteField:
    """Jacobi-preconditioned conjugate gradients on the reduced system.

    Iterates until ||r|| <= rel_tol * ||b||; raises
    :class:`NonConvergenceError` after 10 n (1D) or 50 sqrt(n) (2D)
    iterations, which indicates an assembly bug or an indefinite system.
    The iteration count is deterministic for fixed inputs.
    """
    mask = system.dirichlet_mask
    free = ~mask
    A = system.matrix
    n_free = int(np.count_nonzero(free))
    x_full = np.zeros(system.n)
    if system.dirichlet_values is not None:
        x_full[mask] = system.dirichlet_values[mask]
    b = system.rhs[free]
    if system.dirichlet_values is not None and np.any(x_full[mask] != 0.0):
        b = b - A[free][:, mask] @ x_full[mask]
    if n_free == 0:
        return _field_from_vector(system, x_full, 0)
    A_ff = A[free][:, free]
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return _field_from_vector(system, x_full, 0)
    diag = A_ff.diagonal()
    if np.any(diag <= 0):
        raise NonConvergenceError("nonpositive diagonal entry; system not SPD")
    inv_diag = 1.0 / diag
    if max_iterations is None:
        max_iterations = _default_max_iterations(system, n_free)

    x = np.zeros(n_free)
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        Ap = A_ff @ p
        pAp = float(p @ Ap)
        if pAp <= 0:
            raise NonConvergenceError("nonpositive curvature; system not SPD")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        if float(np.linalg.norm(r)) <= rel_tol * b_norm:
            break
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    else:
        raise NonConvergenceError(
            f"CG did not reach {rel_tol} in {max_iterations} iterations"
        )
    x_full[free] = x
    return _field_from_vector(system, x_full, iterations)


def homogeneous_boundary_probe(
    system: SparseSystem,
    boundary_values: Union[float, np.ndarray],
    rel_tol: float = 1e-10,
) -> DiscreteField:
    """Solve the homogeneous equation with prescribed Dirichlet data.

    ``boundary_values`` is either a constant or a full-length nodal vector;
    only the entries at constrained nodes are used.  The right-hand side is
    zeroed, which turns the assembled system into the homogeneous equation
    used by the maximum-principle and interior-estimate checks.
    """
    values = np.zeros(system.n)
    if np.isscalar(boundary_values):
        values[:] = float(boundary_values)
    else:
        flat = np.asarray(boundary_values, dtype=float).ravel()
        if flat.size != system.n:
            raise GridError(
                f"boundary data length {flat.size} does not match system size {system.n}"
            )
        values = flat
    probe = SparseSystem(
        n=system.n,
        matrix=system.matrix,
        rhs=np.zeros(system.n),
        dirichlet_mask=system.dirichlet_mask,
        grid=system.grid,
        n_components=system.n_components,
        classification=system.classification,
        dirichlet_values=values,
    )
    return solve_spd(probe, rel_tol=rel_tol)


def dump_triplets(system: SparseSystem, target: Union[str, TextIO]) -> None:
    """Debug dump ``row col value`` with 1-based indices."""
    coo = system.matrix.tocoo()
    close = False
    if isinstance(target, str):
        handle = open(target, "w")
        close = True
    else:
        handle = target
    try:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            handle.write(f"{r + 1} {c + 1} {v:.17g}\n")
    finally:
        if close:
            handle.close()


def write_field_csv(field: DiscreteField, target: Union[str, TextIO]) -> None:
    """CSV dump ``x[,y],s_x[,s_y]`` over nodes, 17 significant digits."""
    grid = field.grid
    if grid is None:
        raise GridError("field has no grid attached")
    close = False
    if isinstance(target, str):
        handle = open(target, "w")
        close = True
    else:
        handle = target
    try:
        if grid.dim == 1:
            handle.write("x,s_x\n")
            x = grid.node_coords(0)
            s = field.components[0]
            for i in range(len(x)):
                handle.write(f"{x[i]:.17g},{s[i]:.17g}\n")
        else:
            handle.write("x,y,s_x,s_y\n")
            xs = grid.node_coords(0)
            ys = grid.node_coords(1)
            sx, sy = field.components
            for j in range(len(ys)):
                for i in range(len(xs)):
                    handle.write(
                        f"{xs[i]:.17g},{ys[j]:.17g},{sx[j, i]:.17g},{sy[j, i]:.17g}\n"
                    )
    finally:
        if close:
            handle.close()
