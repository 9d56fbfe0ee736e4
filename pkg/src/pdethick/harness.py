"""Parameter sweeps, rate fitting and automated verification of every bound.

Each verification check states both sides of its inequality numerically: a
sample ``{a, error, bound, slack, passed}`` passes iff
``error <= bound + slack``.  Discrete 2D cases declare the additive
discretization slack ``2 h / T^2`` on inverse-thickness L2 errors next to the
theorem bound; analytic cases get zero slack.  Two-sided analytic bounds
additionally record ``lower_bound`` and require ``lower_bound <= error``.

Resolution policy: boundary layers decay like exp(-dist/sqrt(a)), so meshes
must satisfy ``h <= sqrt(a)/8``; violating the policy raises
:class:`UnderResolvedError` before any solve happens (flagged in reports, no
false passes).  a-grids are fixed geometric sequences, never auto-chosen.

Reports serialize deterministically: fixed key order, floats at 17
significant digits; identical configuration yields byte-identical JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic, bessel, geometry, solver, thickness
from .errors import DegenerateFitError, PdeThickError, UnderResolvedError
from .geometry import StructuredGrid
from .shapes import Family, PeriodicBoundary, ShapeSpec
from . import shapes as _shapes

#: Default seed for the randomized shape draws in the verification suites.
DEFAULT_SEED = 20260809

#: Solver relative tolerance used throughout verification.
SOLVER_TOL = 1e-10


# ---------------------------------------------------------------------------
# deterministic serialization


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable key order."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_json(v, indent + 2)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {dumps_json(v, indent + 2)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(str(obj))


def load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def load_csv(path: str) -> Dict[str, list]:
    """Read a CSV written by this package back into columns.

    Numeric fields are parsed as floats (including nan); everything else
    stays a string.
    """
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        columns: Dict[str, list] = {name: [] for name in reader.fieldnames or []}
        for row in reader:
            for key, value in row.items():
                try:
                    columns[key].append(float(value))
                except (TypeError, ValueError):
                    columns[key].append(value)
    return columns


# ---------------------------------------------------------------------------
# rate fitting


def fit_rate(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Least-squares slope/intercept of log(error) against log(a).

    Points with nonpositive error are dropped; at least three positive points
    and at least two distinct a values are required.  Natural logarithms, so
    errors = 2 sqrt(a) fit to slope 1/2 and intercept log 2.
    """
    usable = [(float(a), float(e)) for a, e in points if e > 0]
    if len(usable) < 3:
        raise DegenerateFitError(f"need at least 3 positive-error points, got {len(usable)}")
    a_vals = {a for a, _ in usable}
    if len(a_vals) < 2:
        raise DegenerateFitError("all a values are equal")
    la = np.log([a for a, _ in usable])
    le = np.log([e for _, e in usable])
    design = np.vstack([la, np.ones_like(la)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, le, rcond=None)
    return float(slope), float(intercept)


# ---------------------------------------------------------------------------
# resolution policy and discrete case runners


#: Hard resolution floor: at least this many cells per boundary-layer width.
REQUIRED_LAYERS_PER_SQRT_A = 8.0


@dataclass(frozen=True)
class ResolutionPolicy:
    """Mesh policy tying the spacing to the boundary-layer width sqrt(a).

    ``layers_per_sqrt_a`` steers the target spacing and may request finer
    meshes; the hard floor h <= sqrt(a)/8 is enforced regardless, so an
    override that would under-resolve the layers is flagged, never silently
    accepted.
    """

    layers_per_sqrt_a: float = REQUIRED_LAYERS_PER_SQRT_A

    def target_h(self, a: float) -> float:
        return math.sqrt(a) / self.layers_per_sqrt_a

    def ensure(self, h: float, a: float) -> None:
        limit = math.sqrt(a) / REQUIRED_LAYERS_PER_SQRT_A
        if h > limit * (1 + 1e-12):
            raise UnderResolvedError(
                f"h = {h} violates the resolution floor h <= sqrt(a)/"
                f"{REQUIRED_LAYERS_PER_SQRT_A} = {limit}"
            )


def band_general_grid(shape: ShapeSpec, h_target: float) -> StructuredGrid:
    """Periodic-x grid for a general band, f_l/f_r on nodes.

    Constant, h-commensurate boundaries produce the exact strip (no Outside
    cells); wavy boundaries get one padding row beyond their extremes and a
    staircase Dirichlet boundary.
    """
    nx = max(4, math.ceil(shape.L / h_target - 1e-9))
    h = shape.L / nx
    min_bl, max_bl = shape.b_l.extremes()
    min_br, max_br = shape.b_r.extremes()
    flat = shape.b_l.is_constant and shape.b_r.is_constant
    down = (shape.f_l - min_bl) / h
    up = (max_br - shape.f_r) / h
    if flat and abs(down - round(down)) < 1e-9 and abs(up - round(up)) < 1e-9:
        n_down = round(down)
        n_up = round(up)
    else:
        n_down = math.ceil(down + 1.0 - 1e-9)
        n_up = math.ceil(up + 1.0 - 1e-9)
    origin_y = shape.f_l - n_down * h
    ny = n_down + round(shape.thickness / h) + n_up
    return StructuredGrid(
        dim=2, origin=(0.0, origin_y), h=h, cells=(nx, ny), periodic_x=True
    )


def annulus_general_grid(shape: ShapeSpec, h_target: float) -> StructuredGrid:
    """Square box [-b_r, b_r]^2; the box is the fictitious domain itself."""
    half = shape.b_r
    n_half = max(4, math.ceil(half / h_target - 1e-9))
    h = half / n_half
    n = 2 * n_half
    return StructuredGrid(dim=2, origin=(-half, -half), h=h, cells=(n, n))


def band_whole_grid(shape: ShapeSpec, h_target: float, a: float) -> StructuredGrid:
    """Periodic flat-band grid truncated 28 sqrt(a) beyond the band."""
    nx = max(4, math.ceil(shape.L / h_target - 1e-9))
    h = shape.L / nx
    pad_cells = math.ceil(solver.TRUNCATION_LAYERS * math.sqrt(a) / h - 1e-9)
    origin_y = shape.f_l - pad_cells * h
    ny = pad_cells + round(shape.thickness / h) + pad_cells
    return StructuredGrid(dim=2, origin=(0.0, origin_y), h=h, cells=(nx, ny), periodic_x=True)


@dataclass(frozen=True)
class GeneralCaseResult:
    a: float
    h: float
    measured_l2: float
    bound: float
    slack: float

    @property
    def passed(self) -> bool:
        return self.measured_l2 <= self.bound + self.slack


def run_general_l2_case(
    shape: ShapeSpec, a: float, policy: Optional[ResolutionPolicy] = None
) -> GeneralCaseResult:
    """One 2D solve of a general band/annulus; returns the measured envelope.

    Measured quantity: || 1/T^a - 1/T_bar ||_{L2(shape)} from the discrete
    inverse thickness; bound: the theorem envelope; slack: 2 h / T^2.
    """
    policy = policy or ResolutionPolicy()
    h_target = policy.target_h(a)
    if shape.family == Family.BAND_GENERAL:
        grid = band_general_grid(shape, h_target)
    elif shape.family == Family.ANNULUS_GENERAL:
        grid = annulus_general_grid(shape, h_target)
    else:
        raise PdeThickError(f"no general-domain runner for family {shape.family}")
    policy.ensure(grid.h, a)
    system = solver.assemble_2d(grid, shape, a)
    field = solver.solve_spd(system, rel_tol=SOLVER_TOL)
    div = thickness.divergence(field)
    inv = thickness.inverse_thickness(div, a, system.classification)
    norms = thickness.error_norms(inv, 1.0 / shape.thickness)
    bound = analytic.general_bound(shape, a)
    slack = 2.0 * grid.h / shape.thickness**2
    return GeneralCaseResult(
        a=a, h=grid.h, measured_l2=norms.l2_on_omega, bound=bound, slack=slack
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepSample:
    a: float
    error: float
    bound: float
    slack: float
    passed: bool
    lower_bound: Optional[float] = None

    def to_dict(self) -> dict:
        out = {
            "a": self.a,
            "error": self.error,
            "bound": self.bound,
            "slack": self.slack,
            "passed": self.passed,
        }
        if self.lower_bound is not None:
            out["lower_bound"] = self.lower_bound
        return out


@dataclass
class ConvergenceReport:
    case: str
    samples: List[SweepSample]
    slope: Optional[float]
    intercept: Optional[float]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.samples)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "samples": [s.to_dict() for s in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
        }


def sweep_a(
    shape: ShapeSpec,
    a_values: Sequence[float],
    policy: Optional[ResolutionPolicy] = None,
) -> ConvergenceReport:
    """Sweep the diffusion parameter and compare against the family's bound.

    Families with pointwise bounds use the analytic ``T^a - T_bar`` directly;
    general band/annulus families run the 2D solver and measure the
    inverse-thickness L2 error.  Requires at least four positive a values
    spanning at least two decades.
    """
    a_values = sorted(float(a) for a in a_values)
    if len(a_values) < 4:
        raise PdeThickError(f"need at least 4 a values, got {len(a_values)}")
    if any(a <= 0 for a in a_values):
        raise PdeThickError("a values must be positive")
    if a_values[-1] / a_values[0] < 99.0:
        raise PdeThickError("a values must span at least two decades")
    policy = policy or ResolutionPolicy()
    samples: List[SweepSample] = []
    if shape.family in (Family.BAND_GENERAL, Family.ANNULUS_GENERAL):
        for a in a_values:
            res = run_general_l2_case(shape, a, policy)
            samples.append(
                SweepSample(
                    a=a,
                    error=res.measured_l2,
                    bound=res.bound,
                    slack=res.slack,
                    passed=res.passed,
                    lower_bound=0.0,
                )
            )
    else:
        for a in a_values:
            sol = analytic.solve_family(shape, a)
            err = sol.thickness_error
            passed = sol.lower_bound <= err <= sol.upper_bound
            samples.append(
                SweepSample(
                    a=a,
                    error=err,
                    bound=sol.upper_bound,
                    slack=0.0,
                    passed=bool(passed),
                    lower_bound=sol.lower_bound,
                )
            )
    try:
        slope, intercept = fit_rate([(s.a, s.error) for s in samples])
    except DegenerateFitError:
        slope, intercept = None, None
    label = f"{shape.family.value}(f_l={shape.f_l:g}, f_r={shape.f_r:g})"
    return ConvergenceReport(case=label, samples=samples, slope=slope, intercept=intercept)


def write_report_json(report, path: str) -> None:
    with open(path, "w") as handle:
        handle.write(dumps_json(report.to_dict()))
        handle.write("\n")


def report_csv_text(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    buf.write("case,a,error,bound,slack,passed,slope,intercept\n")
    for s in report.samples:
        buf.write(
            f"{report.case},{_fmt_float(s.a)},{_fmt_float(s.error)},{_fmt_float(s.bound)},"
            f"{_fmt_float(s.slack)},{s.passed},"
            f"{_fmt_float(report.slope) if report.slope is not None else ''},"
            f"{_fmt_float(report.intercept) if report.intercept is not None else ''}\n"
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# theorem checks


@dataclass
class TheoremCheck:
    case: str
    statement: str
    samples: List[SweepSample] = dataclass_field(default_factory=list)
    slope: Optional[float] = None
    intercept: Optional[float] = None
    passed: bool = True
    error_message: Optional[str] = None

    def add(self, sample: SweepSample) -> None:
        self.samples.append(sample)
        if not sample.passed:
            self.passed = False

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "statement": self.statement,
            "samples": [s.to_dict() for s in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
            "passed": self.passed,
            "error": self.error_message,
        }


@dataclass
class VerifyReport:
    suite: str
    checks: List[TheoremCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("case,a,error,bound,slack,passed\n")
        for check in self.checks:
            for s in check.samples:
                buf.write(
                    f"{check.case},{_fmt_float(s.a)},{_fmt_float(s.error)},"
                    f"{_fmt_float(s.bound)},{_fmt_float(s.slack)},{s.passed}\n"
                )
        return buf.getvalue()


def _check_interval_whole_equality(rng: np.random.Generator) -> TheoremCheck:
    check = TheoremCheck(
        case="interval-whole-equality",
        statement="T^a - T_bar = 2 sqrt(a) exactly on the whole line",
    )
    a_grid = [10.0**e for e in range(-8, 1)]
    for _ in range(20):
        f_l = float(rng.uniform(-3.0, 3.0))
        width = float(rng.uniform(0.05, 4.0))
        for a in a_grid:
            sol = analytic.interval_whole(f_l, f_l + width, a)
            err = abs(sol.thickness_error - 2.0 * math.sqrt(a))
            check.add(SweepSample(a=a, error=err, bound=1e-12 * width, slack=0.0, passed=err <= 1e-12 * width))
    return check


def _check_interval_general_bounds(rng: np.random.Generator) -> TheoremCheck:
    # the upper envelope is only valid for margins above (log 2 / 2) sqrt(a)
    # (it is exactly tight there for equal margins), so the draws keep
    # m >= 0.5 while a <= 1
    check = TheoremCheck(
        case="interval-general-bounds",
        statement="2 sqrt(a) <= T^a - T_bar <= 2 sqrt(a) + 4 T exp(-2m/sqrt(a))",
    )
    for _ in range(50):
        f_l = float(rng.uniform(-2.0, 2.0))
        width = float(rng.uniform(0.1, 3.0))
        m_l = float(rng.uniform(0.5, 3.0))
        m_r = float(rng.uniform(0.5, 3.0))
        a = float(10.0 ** rng.uniform(-6.0, 0.0))
        sol = analytic.interval_general(f_l, f_l + width, f_l - m_l, f_l + width + m_r, a)
        err = sol.thickness_error
        ok = sol.lower_bound <= err <= sol.upper_bound
        check.add(
            SweepSample(
                a=a, error=err, bound=sol.upper_bound, slack=0.0,
                passed=bool(ok), lower_bound=sol.lower_bound,
            )
        )
    return check


def _check_band_whole_equality(rng: np.random.Generator) -> TheoremCheck:
    check = TheoremCheck(
        case="band-whole-equality",
        statement="straight band reduces to the 1D problem: T^a = T_bar + 2 sqrt(a)",
    )
    for a in (1e-6, 1e-4, 1e-2, 1.0):
        for (f_l, f_r, L) in ((0.0, 1.0, 1.0), (-1.0, 1.0, 2.0)):
            sol = analytic.band_whole(f_l, f_r, a, L)
            err = abs(sol.thickness_error - 2.0 * math.sqrt(a))
            T = f_r - f_l
            check.add(SweepSample(a=a, error=err, bound=1e-12 * T, slack=0.0, passed=err <= 1e-12 * T))
    return check


def _check_annulus_whole_bounds(rng: np.random.Generator) -> TheoremCheck:
    check = TheoremCheck(
        case="annulus-whole-bounds",
        statement="(3 f_r + f_l)/(2 f_r) sqrt(a) <= T^a - T_bar <= 2 (f_r/f_l) sqrt(a)",
    )
    for _ in range(50):
        f_r = float(rng.uniform(0.5, 5.0))
        f_l = float(rng.uniform(0.05 * f_r, 0.95 * f_r))
        T = f_r - f_l
        a = float(T * T * 10.0 ** rng.uniform(-8.0, 0.0))
        sol = analytic.annulus_whole(f_l, f_r, a)
        err = sol.thickness_error
        ok = sol.lower_bound <= err <= sol.upper_bound
        check.add(
            SweepSample(
                a=a, error=err, bound=sol.upper_bound, slack=0.0,
                passed=bool(ok), lower_bound=sol.lower_bound,
            )
        )
    return check


def _check_bessel_ratio_bounds(rng: np.random.Generator) -> TheoremCheck:
    """Worst margins of the three ratio properties over 1000 sampled x."""
    check = TheoremCheck(
        case="bessel-ratio-bounds",
        statement="K and I ratio envelopes and decay of sqrt(x) e^x K_1(x)",
    )
    xs = np.logspace(-6, 3, 1000)
    worst_k = -math.inf
    worst_i = -math.inf
    worst_d = -math.inf
    at_k = at_i = at_d = xs[0]
    for x in xs:
        x = float(x)
        k_ratio = bessel.k0_scaled(x) / bessel.k1_scaled(x)
        i_ratio = bessel.i0_scaled(x) / bessel.i1_scaled(x)
        y = bessel.K1_DECAY_PROBE_STEP * x
        deficit_k = bessel.k_ratio_lower_bound(x) - k_ratio
        deficit_i = i_ratio - bessel.i_ratio_upper_bound(x)
        deficit_d = math.sqrt(y) * bessel.k1_scaled(y) - math.sqrt(x) * bessel.k1_scaled(x)
        if deficit_k > worst_k:
            worst_k, at_k = deficit_k, x
        if deficit_i > worst_i:
            worst_i, at_i = deficit_i, x
        if deficit_d > worst_d:
            worst_d, at_d = deficit_d, x
    for label, worst, at in (
        ("k", worst_k, at_k),
        ("i", worst_i, at_i),
        ("decay", worst_d, at_d),
    ):
        check.add(SweepSample(a=at, error=worst, bound=0.0, slack=0.0, passed=worst <= 0.0))
    return check


def _max_principle_probes(a: float = 0.04) -> List[Tuple[str, "solver.SparseSystem", np.ndarray]]:
    """The ten homogeneous probes: (label, system, boundary data)."""
    probes = []
    sqrt_a = math.sqrt(a)

    # 1-3: 1D interval-general with constant, tail, and random smooth data
    ishape = _shapes.interval_general(0.0, 1.0, -1.0, 2.0)
    grid1 = solver.build_interval_grid(ishape, 1.0 / 64, (-1.0, 2.0))
    sys1 = solver.assemble_1d(grid1, ishape, a)
    nodes = grid1.node_coords(0)
    probes.append(("interval-const", sys1, np.ones(sys1.n)))
    tail = analytic.interval_whole(0.0, 1.0, a)
    tail_vals = np.array([analytic.eval_solution(tail, float(x)).scalar for x in nodes])
    probes.append(("interval-tail", sys1, tail_vals))
    probes.append(("interval-cosine", sys1, np.cos(3.0 * nodes)))

    # 4: 1D all-void domain with constant data
    grid_v = solver.build_interval_grid(ishape, 1.0 / 64, (-1.0, 2.0))
    sys_v = solver.assemble_1d(grid_v, None, a)
    probes.append(("void-const", sys_v, np.ones(sys_v.n)))

    # 5-6: radial annulus with constant and tail data
    ashape = _shapes.annulus_whole(1.0, 2.0)
    grid_r = solver.build_radial_grid(ashape, 1.0 / 128, a=a)
    sys_r = solver.assemble_radial(grid_r, ashape, a)
    r_nodes = grid_r.node_coords(0)
    asol = analytic.annulus_whole(1.0, 2.0, a)
    probes.append(("radial-const", sys_r, np.ones(sys_r.n)))
    r_tail = np.array([analytic.eval_solution(asol, float(r)).scalar for r in r_nodes])
    probes.append(("radial-tail", sys_r, r_tail))

    # 7-8: 2D flat band with constant and tail data
    bshape = _shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
    grid_b = band_general_grid(bshape, 1.0 / 16)
    sys_b = solver.assemble_2d(grid_b, bshape, a)
    n_nodes = sys_b.n // 2
    probes.append(("band-const", sys_b, np.ones(sys_b.n)))
    ys = grid_b.node_coords(1)
    tail_col = np.array([analytic.eval_solution(tail, float(y)).scalar for y in ys])
    data = np.zeros(sys_b.n)
    data[n_nodes:] = np.repeat(tail_col, grid_b.node_counts()[0])
    probes.append(("band-tail", sys_b, data))

    # 9-10: 2D annulus box with constant and tail data
    gshape = _shapes.annulus_general(1.0, 2.0, 2.5)
    grid_g = annulus_general_grid(gshape, math.sqrt(a) / 8.0)
    sys_g = solver.assemble_2d(grid_g, gshape, a)
    n_nodes_g = sys_g.n // 2
    probes.append(("annulus-box-const", sys_g, np.ones(sys_g.n)))
    xs = grid_g.node_coords(0)
    ys = grid_g.node_coords(1)
    xx, yy = np.meshgrid(xs, ys)
    rr = np.hypot(xx, yy)
    s_of_r = np.array(
        [analytic.eval_solution(asol, float(r)).scalar for r in rr.ravel()]
    ).reshape(rr.shape)
    with np.errstate(invalid="ignore", divide="ignore"):
        cx = np.where(rr > 0, xx / rr, 0.0)
        cy = np.where(rr > 0, yy / rr, 0.0)
    data = np.concatenate([(s_of_r * cx).ravel(), (s_of_r * cy).ravel()])
    probes.append(("annulus-box-tail", sys_g, data))
    return probes


def _vector_magnitude(field: solver.DiscreteField) -> np.ndarray:
    if len(field.components) == 1:
        return np.abs(field.components[0]).ravel()
    sq = sum(np.asarray(c, dtype=float) ** 2 for c in field.components)
    return np.sqrt(sq).ravel()


def _check_max_principle() -> TheoremCheck:
    check = TheoremCheck(
        case="max-principle",
        statement="homogeneous solutions: sup over the domain <= sup over its boundary",
    )
    a = 0.04
    for label, system, data in _max_principle_probes(a):
        field = solver.homogeneous_boundary_probe(system, data, rel_tol=SOLVER_TOL)
        mag = _vector_magnitude(field)
        mask1 = system.dirichlet_mask[: len(mag)]
        if system.n_components == 2:
            mask1 = system.dirichlet_mask[: system.n // 2]
        boundary_sup = float(np.max(mag[mask1]))
        interior = mag[~mask1]
        interior_sup = float(np.max(interior)) if interior.size else 0.0
        slack = 10.0 * SOLVER_TOL * max(boundary_sup, 1.0)
        check.add(
            SweepSample(
                a=a,
                error=interior_sup,
                bound=boundary_sup,
                slack=slack,
                passed=interior_sup <= boundary_sup + slack,
            )
        )
    return check


def _check_band_general_envelope() -> TheoremCheck:
    check = TheoremCheck(
        case="band-general-envelope",
        statement="L2 error of 1/T^a vs 1/T_bar within the wavy-band envelope",
    )
    shape = canonical_wavy_band()
    results = []
    for a in (0.04, 0.02, 0.01):
        res = run_general_l2_case(shape, a)
        results.append(res)
        check.add(
            SweepSample(
                a=a, error=res.measured_l2, bound=res.bound, slack=res.slack,
                passed=res.passed, lower_bound=0.0,
            )
        )
    slope, intercept = fit_rate([(r.a, r.measured_l2) for r in results])
    check.slope, check.intercept = slope, intercept
    if not 0.4 <= slope <= 0.6:
        check.passed = False
        check.error_message = f"fitted slope {slope:.4f} outside [0.4, 0.6]"
    return check


def _check_annulus_general_envelope() -> TheoremCheck:
    check = TheoremCheck(
        case="annulus-general-envelope",
        statement="L2 error of 1/T^a vs 1/T_bar within the boxed-annulus envelope",
    )
    shape = _shapes.annulus_general(1.0, 2.0, 2.5)
    for a in (0.04, 0.02):
        res = run_general_l2_case(shape, a)
        check.add(
            SweepSample(
                a=a, error=res.measured_l2, bound=res.bound, slack=res.slack,
                passed=res.passed, lower_bound=0.0,
            )
        )
    return check


def _check_band_flat_reduction() -> TheoremCheck:
    check = TheoremCheck(
        case="band-flat-reduction",
        statement="flat-band 2D solve carries no x component and matches the 1D profile",
    )
    a = 0.04
    h = 1.0 / 64
    band = _shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
    grid2 = band_general_grid(band, h)
    system2 = solver.assemble_2d(grid2, band, a)
    field2 = solver.solve_spd(system2, rel_tol=SOLVER_TOL)
    ishape = _shapes.interval_general(0.0, 1.0, -1.0, 2.0)
    grid1 = solver.build_interval_grid(ishape, h, (-1.0, 2.0))
    field1 = solver.solve_spd(solver.assemble_1d(grid1, ishape, a), rel_tol=SOLVER_TOL)
    sx, sy = field2.components
    scale = max(float(np.max(np.abs(sx))), float(np.max(np.abs(sy))))
    x_err = float(np.max(np.abs(sx)))
    y_err = float(np.max(np.abs(sy - field1.components[0][:, None])))
    for err in (x_err, y_err):
        check.add(SweepSample(a=a, error=err, bound=1e-8 * scale, slack=0.0, passed=err <= 1e-8 * scale))
    return check


def _check_solver_1d_convergence() -> TheoremCheck:
    check = TheoremCheck(
        case="solver-1d-convergence",
        statement="1D discrete solution converges to the closed form at second order",
    )
    a = 0.04
    shape = _shapes.interval_general(0.0, 1.0, -1.0, 2.0)
    sol = analytic.interval_general(0.0, 1.0, -1.0, 2.0, a)
    errors = []
    for n in (128, 256, 512):
        grid = solver.build_interval_grid(shape, 1.0 / n, (-1.0, 2.0))
        field = solver.solve_spd(solver.assemble_1d(grid, shape, a), rel_tol=SOLVER_TOL)
        nodes = grid.node_coords(0)
        exact = np.array([analytic.eval_solution(sol, float(x)).scalar for x in nodes])
        errors.append((1.0 / n, float(np.max(np.abs(field.components[0] - exact)))))
    final_err = errors[-1][1]
    check.add(SweepSample(a=a, error=final_err, bound=5e-5, slack=0.0, passed=final_err <= 5e-5))
    slope, intercept = fit_rate(errors)  # error vs h: slope is the observed order
    check.slope, check.intercept = slope, intercept
    if not 1.7 <= slope <= 2.3:
        check.passed = False
        check.error_message = f"observed order {slope:.3f} outside [1.7, 2.3]"
    return check


def _check_radial_cross_check() -> TheoremCheck:
    check = TheoremCheck(
        case="radial-cross-check",
        statement="radial solve reproduces the scaled-Bessel slope p* and its constancy",
    )
    a = 0.04
    shape = _shapes.annulus_whole(1.0, 2.0)
    grid = solver.build_radial_grid(shape, 1.0 / 1024, a=a)
    system = solver.assemble_radial(grid, shape, a)
    field = solver.solve_spd(system, rel_tol=SOLVER_TOL)
    p = thickness.divergence(field)
    mask = system.classification.shape_mask
    p_shape = p[mask]
    p_mean = float(np.mean(p_shape))
    ref = analytic.annulus_whole(1.0, 2.0, a)
    rel = abs(p_mean - ref.p_star) / ref.p_star
    spread = float((np.max(p_shape) - np.min(p_shape)) / abs(p_mean))
    check.add(SweepSample(a=a, error=rel, bound=1e-4, slack=0.0, passed=rel <= 1e-4))
    check.add(SweepSample(a=a, error=spread, bound=1e-3, slack=0.0, passed=spread <= 1e-3))
    return check


def _check_geometric_oracle() -> TheoremCheck:
    check = TheoremCheck(
        case="geometric-oracle",
        statement="inscribed-ball sweep reproduces the constant thickness within 2h",
    )
    cases = [
        ("interval", _shapes.interval_whole(0.0, 1.0), geometry.build_grid([(-1.0, 2.0)], 300), 1.0),
        (
            "band",
            _shapes.band_whole(0.0, 2.0, 1.0),
            geometry.build_grid([(0.0, 1.0), (-1.0, 3.0)], (20, 80), periodic_x=True),
            2.0,
        ),
        (
            "annulus",
            _shapes.annulus_whole(1.0, 2.0),
            geometry.build_grid([(-3.0, 3.0), (-3.0, 3.0)], 300),
            1.0,
        ),
    ]
    for label, shape, grid, t_ref in cases:
        fieldt = geometry.geometric_thickness_oracle(grid, shape)
        dev = fieldt.max_abs_deviation(t_ref)
        check.add(
            SweepSample(a=grid.h, error=dev, bound=2.0 * grid.h, slack=0.0, passed=dev <= 2.0 * grid.h)
        )
    return check


# cutoffs for the interior gradient-energy estimate


def band_cutoff_second_derivative(y: np.ndarray, f_l: float, f_r: float, b_l: float, b_r: float) -> np.ndarray:
    """|c''| of the piecewise-quadratic band cutoff: 4/m^2 on each ramp."""
    m_l = f_l - b_l
    m_r = b_r - f_r
    out = np.zeros_like(y, dtype=float)
    out[(y > b_l) & (y < f_l)] = 4.0 / (m_l * m_l)
    out[(y > f_r) & (y < b_r)] = 4.0 / (m_r * m_r)
    return out


def annulus_cutoff_constant(f: float, b: float) -> float:
    """|lap c| = K of the radial cutoff (1 inside r<=f, 0 beyond r>=b).

    K = 2 / (f^2 log f + b^2 log b - 2 p^2 log p) with p^2 = (f^2 + b^2)/2;
    bounded by 8 (b^2 + f^2) / (b^2 - f^2)^2.
    """
    p_sq = 0.5 * (f * f + b * b)
    denom = f * f * math.log(f) + b * b * math.log(b) - p_sq * math.log(p_sq)
    return 2.0 / denom


def gradient_energy_on_shape(field: solver.DiscreteField, classification) -> float:
    """sum over shape cells of int_cell |grad d_h|^2, exactly (element matrices)."""
    grid = field.grid
    conn, _ = solver._node_ids_2d(grid)
    mask = classification.shape_mask.ravel()
    total = 0.0
    K = solver._K2
    for comp in field.components:
        flat = comp.ravel()
        vals = flat[conn[mask]]
        total += float(np.einsum("ei,ij,ej->", vals, K, vals))
    return total


def interior_h1_check(kind: str, a: float = 0.04) -> Tuple[float, float, float]:
    """Gradient energy on the shape vs the cutoff bound, for a probe solution.

    Returns (lhs, rhs, h): lhs = int_shape |grad d|^2 of the homogeneous probe
    driven by the whole-space tail, rhs = 1/2 int |lap c| |d|^2 with the
    explicit cutoff.  The discrete inequality is asserted by callers with an
    O(h) slack.
    """
    if kind == "band":
        shape = _shapes.band_general(0.0, 1.0, -1.0, 2.0, L=1.0)
        grid = band_general_grid(shape, math.sqrt(a) / 8.0)
        system = solver.assemble_2d(grid, shape, a)
        tail = analytic.interval_whole(0.0, 1.0, a)
        ys = grid.node_coords(1)
        col = np.array([analytic.eval_solution(tail, float(y)).scalar for y in ys])
        data = np.zeros(system.n)
        data[system.n // 2:] = np.repeat(col, grid.node_counts()[0])
        field = solver.homogeneous_boundary_probe(system, data, rel_tol=SOLVER_TOL)
        lhs = gradient_energy_on_shape(field, system.classification)
        cy = grid.cell_centers(1)
        lap = band_cutoff_second_derivative(cy, 0.0, 1.0, -1.0, 2.0)
        sx, sy = field.components
        mag2 = np.zeros(grid.cells[::-1])
        for comp in (sx, sy):
            if grid.periodic_x:
                east = np.roll(np.arange(grid.cells[0]), -1)
                center = 0.25 * (
                    comp[:-1, :] + comp[1:, :] + comp[:-1, east] + comp[1:, east]
                )
            else:
                center = 0.25 * (comp[:-1, :-1] + comp[1:, :-1] + comp[:-1, 1:] + comp[1:, 1:])
            mag2 += center * center
        rhs = 0.5 * float(np.sum(lap[:, None] * mag2)) * grid.h**2
        return lhs, rhs, grid.h
    if kind == "annulus":
        shape = _shapes.annulus_general(1.0, 2.0, 2.5)
        grid = annulus_general_grid(shape, math.sqrt(a) / 8.0)
        system = solver.assemble_2d(grid, shape, a)
        asol = analytic.annulus_whole(1.0, 2.0, a)
        xs = grid.node_coords(0)
        ys = grid.node_coords(1)
        xx, yy = np.meshgrid(xs, ys)
        rr = np.hypot(xx, yy)
        s_of_r = np.array(
            [analytic.eval_solution(asol, float(r)).scalar for r in rr.ravel()]
        ).reshape(rr.shape)
        with np.errstate(invalid="ignore", divide="ignore"):
            cx = np.where(rr > 0, xx / rr, 0.0)
            cy_ = np.where(rr > 0, yy / rr, 0.0)
        data = np.concatenate([(s_of_r * cx).ravel(), (s_of_r * cy_).ravel()])
        field = solver.homogeneous_boundary_probe(system, data, rel_tol=SOLVER_TOL)
        lhs = gradient_energy_on_shape(field, system.classification)
        K = annulus_cutoff_constant(shape.f_r, shape.b_r)
        ccx = grid.cell_centers(0)
        ccy = grid.cell_centers(1)
        cxx, cyy = np.meshgrid(ccx, ccy)
        cr = np.hypot(cxx, cyy)
        ramp = (cr > shape.f_r) & (cr < shape.b_r)
        sx, sy = field.components
        mag2 = np.zeros_like(cr)
        for comp in (sx, sy):
            center = 0.25 * (comp[:-1, :-1] + comp[1:, :-1] + comp[:-1, 1:] + comp[1:, 1:])
            mag2 += center * center
        rhs = 0.5 * K * float(np.sum(mag2[ramp])) * grid.h**2
        return lhs, rhs, grid.h
    raise PdeThickError(f"unknown interior-estimate case {kind}")


def _check_interior_h1() -> TheoremCheck:
    check = TheoremCheck(
        case="interior-h1-estimate",
        statement="gradient energy on the shape bounded by the cutoff functional",
    )
    for kind, m in (("band", 1.0), ("annulus", 0.5)):
        lhs, rhs, h = interior_h1_check(kind)
        slack = rhs * 10.0 * h / m
        check.add(
            SweepSample(a=h, error=lhs, bound=rhs, slack=slack, passed=lhs <= rhs + slack)
        )
    return check


def canonical_wavy_band() -> ShapeSpec:
    """The canonical verification band: flat floor, one wavy ceiling (m = 0.4)."""
    return _shapes.band_general(
        0.0,
        1.0,
        PeriodicBoundary.constant(-0.5, 1.0),
        PeriodicBoundary(period=1.0, mean=1.5, cosine_coeffs=(0.1,)),
        L=1.0,
    )


_ANALYTIC_CHECKS: List[Tuple[str, Callable]] = [
    ("interval-whole-equality", _check_interval_whole_equality),
    ("interval-general-bounds", _check_interval_general_bounds),
    ("band-whole-equality", _check_band_whole_equality),
    ("annulus-whole-bounds", _check_annulus_whole_bounds),
    ("bessel-ratio-bounds", _check_bessel_ratio_bounds),
]

_DISCRETE_CHECKS: List[Tuple[str, Callable]] = [
    ("band-flat-reduction", lambda rng: _check_band_flat_reduction()),
    ("band-general-envelope", lambda rng: _check_band_general_envelope()),
    ("annulus-general-envelope", lambda rng: _check_annulus_general_envelope()),
    ("max-principle", lambda rng: _check_max_principle()),
    ("solver-1d-convergence", lambda rng: _check_solver_1d_convergence()),
    ("radial-cross-check", lambda rng: _check_radial_cross_check()),
    ("geometric-oracle", lambda rng: _check_geometric_oracle()),
    ("interior-h1-estimate", lambda rng: _check_interior_h1()),
]

SUITES = {
    "analytic": [name for name, _ in _ANALYTIC_CHECKS],
    "default": [name for name, _ in _ANALYTIC_CHECKS] + [name for name, _ in _DISCRETE_CHECKS],
}


def verify_theorems(suite: str = "default", seed: int = DEFAULT_SEED) -> VerifyReport:
    """Run the canonical verification case list.

    Failures and raised errors are aggregated into the report (a check that
    raises is recorded as failed with its message); the run never aborts on
    the first failure.
    """
    if suite not in SUITES:
        raise PdeThickError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    wanted = set(SUITES[suite])
    rng = np.random.default_rng(seed)
    checks: List[TheoremCheck] = []
    for name, fn in _ANALYTIC_CHECKS + _DISCRETE_CHECKS:
        if name not in wanted:
            continue
        try:
            checks.append(fn(rng))
        except PdeThickError as exc:
            checks.append(
                TheoremCheck(
                    case=name,
                    statement="(errored)",
                    passed=False,
                    error_message=f"{type(exc).__name__}: {exc}",
                )
            )
    return VerifyReport(suite=suite, checks=checks)
