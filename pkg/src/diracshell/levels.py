"""Perturbed energy levels of the delta-shell Dirac oscillator.

The levels are the real roots of

    D(E) = det[ I + sin(lam) G + (cos(lam) - 1) G J ],    J = [[0, -1], [1, 0]]

with G = green_matrix(osc, E, R, R, Side.ABOVE).  D == 1 identically at
lam = 0 and D == -1 at lam = pi (the shell is transparent at integer
multiples of pi and the spectrum is pi-periodic in the coupling); between
consecutive poles of G (the unperturbed levels) D changes sign exactly once
for generic coupling, with the root sliding onto a pole as lam -> 0.

Root finding scans each pole-free subinterval on a uniform grid plus a
geometric ladder that approaches every pole down to 1e-10*m, so roots sitting
within a whisker of an unperturbed level (tiny coupling) are still bracketed.
Brackets never contain a pole.  Near-pole roots make |D| at the closest
representable float as large as slope * ulp, so acceptance uses a
slope-aware residual bound instead of a bare threshold.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import PoleError, SingularPrefactorError
from .green import OscillatorParams, Side, green_matrix

log = logging.getLogger(__name__)

_J = np.array([[0.0, -1.0], [1.0, 0.0]])
_I2 = np.eye(2)

#: half-width of the scan exclusion window around poles and E = +-m
POLE_WINDOW = 1e-6
#: closest ladder approach to a pole, in units of m
LADDER_FLOOR = 1e-11
#: reduced couplings below this are treated as exactly transparent
TRANSPARENT_TOL = 1e-14


@dataclass(frozen=True)
class ShellParams:
    """Shell radius (units 1/m) and dimensionless coupling strength.

    The reduced coupling in (-pi/2, pi/2] and the pi-winding number are
    derived on construction; determinant evaluations use the coupling as
    given, so the pi-periodicity of the spectrum stays a testable property
    rather than an input normalisation.
    """

    radius: float
    coupling: float
    reduced_coupling: float = field(init=False)
    winding: int = field(init=False)

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"shell radius must be positive, got {self.radius}")
        ell = math.floor(self.coupling / math.pi + 0.5)
        red = self.coupling - ell * math.pi
        if red <= -math.pi / 2.0:
            red += math.pi
            ell -= 1
        object.__setattr__(self, "reduced_coupling", red)
        object.__setattr__(self, "winding", ell)

    @property
    def transparent(self) -> bool:
        return abs(self.reduced_coupling) < TRANSPARENT_TOL


@dataclass(frozen=True)
class UnperturbedLevel:
    """One unperturbed oscillator level: radial index n, energy-sign branch
    and the energy itself."""

    n: int
    sign: int
    energy: float


@dataclass
class LevelRecord:
    """One accepted root of the determinant condition."""

    energy: float
    bracket: tuple[float, float]
    residual: float
    nearest_unperturbed: UnperturbedLevel
    residual_bound: float = 0.0
    transparent: bool = False


def unperturbed_levels(osc: OscillatorParams, n_max: int
                       ) -> list[UnperturbedLevel]:
    """All unperturbed levels with radial index n = 0..n_max, both energy
    signs, excluding E = -m.

    The squared energies are the pole positions of the Green matrix:
    E^2 - m^2 = 4 m w n for kappa < 0 and 4 m w (n + kappa + 1/2) for
    kappa > 0, confirmed by direct integration of the radial system.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    out = []
    for n in range(n_max + 1):
        e2 = osc.m ** 2 + osc.m * osc.omega * _pole_x(osc.kappa, n)
        e0 = math.sqrt(e2)
        out.append(UnperturbedLevel(n, +1, e0))
        if e0 != osc.m:  # E = -m is not an eigenvalue
            out.append(UnperturbedLevel(n, -1, -e0))
    out.sort(key=lambda lv: lv.energy)
    return out


def _pole_x(kappa: int, n: int) -> float:
    """(E^2 - m^2)/(m w) of the n-th pole."""
    if kappa < 0:
        return 4.0 * n
    return 4.0 * n + 4.0 * kappa + 2.0


def _levels_in_window(osc: OscillatorParams, e_min: float, e_max: float,
                      pad: float = 0.0) -> list[UnperturbedLevel]:
    emax_abs = max(abs(e_min), abs(e_max)) + pad
    x_max = (emax_abs ** 2 - osc.m ** 2) / (osc.m * osc.omega)
    n_max = max(0, int(math.ceil(x_max / 4.0)) + 1)
    return [lv for lv in unperturbed_levels(osc, n_max)
            if e_min - pad <= lv.energy <= e_max + pad]


def level_matrix(osc: OscillatorParams, shell: ShellParams,
                 energy: float) -> np.ndarray:
    """The 2x2 matrix inside the determinant condition; its null vector at a
    root is the (rotated-frame) spinor at the outside of the shell."""
    g = green_matrix(osc, energy, shell.radius, shell.radius, Side.ABOVE)
    lam = shell.coupling
    return _I2 + math.sin(lam) * g + (math.cos(lam) - 1.0) * (g @ _J)


def det_function(osc: OscillatorParams, shell: ShellParams,
                 energy: float) -> float:
    """Real determinant whose roots are the perturbed levels."""
    return float(np.linalg.det(level_matrix(osc, shell, energy)))


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _singular_points(osc: OscillatorParams, e_min: float, e_max: float
                     ) -> list[float]:
    """Pole energies plus E = +-m inside the window, deduplicated."""
    pts = [lv.energy for lv in _levels_in_window(osc, e_min, e_max)]
    for pm in (-osc.m, osc.m):
        if e_min < pm < e_max:
            pts.append(pm)
    pts.sort()
    out: list[float] = []
    for p in pts:
        if not out or p - out[-1] > 1e-9 * osc.m:
            out.append(p)
    return out


def _scan_points(lo: float, hi: float, n_grid: int, m: float,
                 ladder_lo: bool, ladder_hi: bool,
                 extra_offsets: tuple[float, ...] = ()) -> np.ndarray:
    """Uniform grid over [lo+w, hi-w] plus geometric ladders running into
    each excluded pole window down to LADDER_FLOOR.  `extra_offsets` adds
    pole-relative points (used to straddle the ~|sin lam| * residue offset
    of near-pole roots at tiny coupling)."""
    w = POLE_WINDOW * m
    offs = sorted({LADDER_FLOOR * m * 10.0 ** k for k in range(5)}
                  | {o for o in extra_offsets
                     if LADDER_FLOOR * m < o < 0.25 * (hi - lo)})
    pts = list(np.linspace(lo + w, hi - w, n_grid))
    if ladder_lo:
        pts = [lo + o for o in offs] + pts
    if ladder_hi:
        pts = pts + [hi - o for o in reversed(offs)]
    return np.array(sorted(pts))


def _nearest_level(levels: list[UnperturbedLevel], energy: float
                   ) -> UnperturbedLevel:
    return min(levels, key=lambda lv: abs(lv.energy - energy))


def _refine_bracket(f, lo, hi, flo, fhi, root_tol, m_unit):
    """Brent refinement plus slope-aware residual acceptance.  xtol sits at
    the ulp scale: near-pole roots have slopes ~1/d^2 and need the bracket
    driven to machine granularity before the residual can clear its bound."""
    root = brentq(f, lo, hi, xtol=1e-15, maxiter=256)
    res = abs(f(root))
    h = max(1e-10 * max(abs(root), m_unit), (hi - lo) * 1e-3)
    try:
        slope = abs(f(root + h) - f(root - h)) / (2.0 * h)
    except (PoleError, SingularPrefactorError):
        slope = abs(fhi - flo) / (hi - lo)
    granularity = 4.0 * 2.220446049250313e-16 * max(abs(root), m_unit)
    bound = max(root_tol, 8.0 * slope * granularity)
    if res > bound:
        return None
    return root, res, bound


def find_levels(osc: OscillatorParams, shell: ShellParams, e_min: float,
                e_max: float, *, grid_points: int = 2000,
                root_tol: float = 1e-8) -> list[LevelRecord]:
    """All determinant roots in (e_min, e_max), as bracketed, refined and
    residual-checked records sorted by energy.

    At exactly transparent coupling (reduced coupling 0 within 1e-14) the
    determinant has no roots and the unperturbed levels are returned,
    labelled transparent.
    """
    if not e_min < e_max:
        raise ValueError("need e_min < e_max")
    near = _levels_in_window(osc, e_min, e_max, pad=2.0 * osc.m)
    if shell.transparent:
        return [LevelRecord(lv.energy, (lv.energy, lv.energy), 0.0, lv,
                            transparent=True)
                for lv in near if e_min < lv.energy < e_max]

    sing = _singular_points(osc, e_min, e_max)
    edges = [e_min] + sing + [e_max]
    f = lambda e: det_function(osc, shell, e)
    s = abs(math.sin(shell.reduced_coupling))
    extra = tuple(s * g * osc.m for g in (0.02, 0.1, 0.5, 2.5, 12.5)) \
        if 0.0 < s < 1e-4 else ()
    roots: list[LevelRecord] = []
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        if hi - lo < 4.0 * POLE_WINDOW * osc.m:
            continue
        pts = _scan_points(lo, hi, grid_points, osc.m,
                           ladder_lo=(i > 0), ladder_hi=(i < len(edges) - 2),
                           extra_offsets=extra)
        roots.extend(_scan_subinterval(f, pts, near, root_tol, osc.m))
    roots.sort(key=lambda rec: rec.energy)
    return roots


def _scan_subinterval(f, pts, near_levels, root_tol, m_unit
                      ) -> list[LevelRecord]:
    vals = []
    for e in pts:
        try:
            vals.append(f(e))
        except (PoleError, SingularPrefactorError):
            vals.append(math.nan)
    out: list[LevelRecord] = []
    brackets = _sign_change_cells(pts, vals)
    cells = {c for c, *_ in brackets}
    have_adjacent = any(j + 1 in cells for j, *_ in brackets)
    if have_adjacent:
        warnings.warn("two sign changes in adjacent scan cells; refining "
                      "the local grid x10", RuntimeWarning, stacklevel=2)
        brackets = _refine_adjacent(f, pts, vals, brackets)
    for _, lo, hi, flo, fhi in brackets:
        got = _refine_bracket(f, lo, hi, flo, fhi, root_tol, m_unit)
        if got is None:
            log.info("rejected bracket (%g, %g): residual above bound", lo, hi)
            continue
        root, res, bound = got
        out.append(LevelRecord(root, (lo, hi), res,
                               _nearest_level(near_levels, root), bound))
    return out


def _sign_change_cells(pts, vals):
    cells = []
    for j in range(len(pts) - 1):
        a, b = vals[j], vals[j + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0.0:
            a = 1e-300  # exact zero on a grid point: let the bracket catch it
        if a * b < 0.0:
            cells.append((j, pts[j], pts[j + 1], a, b))
    return cells


def _refine_adjacent(f, pts, vals, brackets):
    """Re-scan each bracketed cell pair on a 10x denser local grid, once."""
    refined = []
    for j, lo, hi, flo, fhi in brackets:
        sub = np.linspace(lo, hi, 11)
        subv = []
        for e in sub:
            try:
                subv.append(f(e))
            except (PoleError, SingularPrefactorError):
                subv.append(math.nan)
        got = _sign_change_cells(sub, subv)
        refined.extend(got if got else [(j, lo, hi, flo, fhi)])
    return refined


# ---------------------------------------------------------------------------
# parameter sweeps with branch tracking
# ---------------------------------------------------------------------------

@dataclass
class SweepTable:
    """Levels along a parameter axis with nearest-neighbour branch
    continuation.  branches[k][i] is the energy of branch k at axis point i
    (nan where the branch is not present); ambiguities lists
    (axis_index, E_low, E_high) pairs that came closer than the tracking
    tolerance and were flagged rather than silently reordered."""

    axis_name: str
    axis: np.ndarray
    records: list[list[LevelRecord]]
    branches: list[list[float]]
    ambiguities: list[tuple[int, float, float]]

    def branch_array(self) -> np.ndarray:
        return np.array(self.branches)


AMBIGUITY_TOL = 1e-4


def _match_branches(prev_ids, prev_es, new_es):
    """Order-preserving nearest matching of sorted level lists; returns
    list of (branch_id or None, energy) for the new column."""
    if len(prev_es) == len(new_es):
        return list(zip(prev_ids, new_es))
    matched = []
    i = j = 0
    while i < len(prev_es) and j < len(new_es):
        rem_prev = len(prev_es) - i
        rem_new = len(new_es) - j
        if rem_prev == rem_new:
            matched.append((prev_ids[i], new_es[j]))
            i += 1
            j += 1
        elif rem_prev > rem_new:
            # previous branch i may have ended: skip it if it is the worse fit
            if abs(prev_es[i] - new_es[j]) <= abs(prev_es[i + 1] - new_es[j]):
                matched.append((prev_ids[i], new_es[j]))
                j += 1
            i += 1
        else:
            if abs(new_es[j] - prev_es[i]) <= abs(new_es[j + 1] - prev_es[i]):
                matched.append((prev_ids[i], new_es[j]))
                i += 1
            else:
                matched.append((None, new_es[j]))
            j += 1
    matched.extend((None, e) for e in new_es[j:])
    return matched


def _sweep(osc, axis_name, axis, make_shell, e_min, e_max, *, scan_points,
           rescan_every, root_tol):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or len(axis) == 0:
        raise ValueError("sweep axis must be a nonempty 1-d grid")
    if np.any(np.diff(axis) <= 0.0):
        raise ValueError("sweep axis must be strictly increasing")

    records: list[list[LevelRecord]] = []
    branches: dict[int, list[float]] = {}
    ambiguities: list[tuple[int, float, float]] = []
    next_id = 0
    prev_ids: list[int] = []

    for idx, x in enumerate(axis):
        shell = make_shell(float(x))
        full_scan = (idx == 0) or (idx % rescan_every == 0)
        if shell.transparent or full_scan or not records[-1]:
            recs = find_levels(osc, shell, e_min, e_max,
                               grid_points=scan_points, root_tol=root_tol)
        else:
            recs = _track_step(osc, shell, records[-1], e_min, e_max,
                               scan_points, root_tol)
        records.append(recs)
        energies = [r.energy for r in recs]
        for a, b in zip(energies, energies[1:]):
            if b - a < AMBIGUITY_TOL * osc.m:
                ambiguities.append((idx, a, b))
                log.info("%s sweep: levels %.9g and %.9g within tracking "
                         "tolerance at %s=%.6g", axis_name, a, b, axis_name, x)
        matched = _match_branches(prev_ids, [branches[p][-1] for p in prev_ids]
                                  if prev_ids else [], energies)
        new_ids = []
        for bid, e in matched:
            if bid is None:
                bid = next_id
                next_id += 1
                branches[bid] = [math.nan] * idx
                log.info("%s sweep: new branch %d at %s=%.6g (E=%.6g)",
                         axis_name, bid, axis_name, x, e)
            branches[bid].append(e)
            new_ids.append(bid)
        for bid in set(prev_ids) - set(new_ids):
            log.info("%s sweep: branch %d left the window at %s=%.6g",
                     axis_name, bid, axis_name, x)
        for bid in branches:
            if len(branches[bid]) < idx + 1:
                branches[bid].append(math.nan)
        prev_ids = new_ids

    ordered = [branches[k] for k in sorted(branches)]
    return SweepTable(axis_name, axis, records, ordered, ambiguities)


def _track_step(osc, shell, prev_recs, e_min, e_max, scan_points, root_tol
                ) -> list[LevelRecord]:
    """Re-locate each previous root locally; fall back to a full scan on any
    loss (branches can enter or leave only through the window edges, which
    periodic rescans catch)."""
    sing = _singular_points(osc, e_min, e_max)
    near = _levels_in_window(osc, e_min, e_max, pad=2.0 * osc.m)
    prev_es = [r.energy for r in prev_recs]
    f = lambda e: det_function(osc, shell, e)
    out = []
    for k, rec in enumerate(prev_recs):
        lo_lim = max([e_min] + [s for s in sing if s < rec.energy])
        hi_lim = min([e_max] + [s for s in sing if s > rec.energy])
        if k > 0:
            lo_lim = max(lo_lim, 0.5 * (prev_es[k - 1] + rec.energy))
        if k + 1 < len(prev_es):
            hi_lim = min(hi_lim, 0.5 * (rec.energy + prev_es[k + 1]))
        got = _local_root(f, rec.energy, lo_lim, hi_lim, osc.m, root_tol)
        if got is None:
            log.info("track lost root near E=%.9g; rescanning", rec.energy)
            return find_levels(osc, shell, e_min, e_max,
                               grid_points=scan_points, root_tol=root_tol)
        root, res, bound, lo, hi = got
        out.append(LevelRecord(root, (lo, hi), res,
                               _nearest_level(near, root), bound))
    out.sort(key=lambda r: r.energy)
    return out


def _local_root(f, e0, lo_lim, hi_lim, m_unit, root_tol):
    """Expanding bracket search around e0 inside (lo_lim, hi_lim); the
    approach to either limit is geometric so roots hugging a pole stay
    reachable."""
    floor = LADDER_FLOOR * m_unit

    def ladder(limit, direction):
        # geometric approach to `limit` from the e0 side; direction = +1
        # when limit > e0, -1 when limit < e0
        gap = abs(limit - e0)
        seq = []
        d = gap / 3.0
        while d > floor:
            seq.append(limit - direction * d)
            d /= 6.0
        seq.append(limit - direction * floor)
        return seq

    try:
        f0 = f(e0)
    except (PoleError, SingularPrefactorError):
        return None
    # candidate points sweeping outward, then geometric toward the limits
    deltas = [2e-6, 2e-5, 2e-4, 2e-3]
    lows = [e0 - d * m_unit for d in deltas if e0 - d * m_unit > lo_lim]
    lows += ladder(lo_lim, +1)
    highs = [e0 + d * m_unit for d in deltas if e0 + d * m_unit < hi_lim]
    highs += ladder(hi_lim, -1)

    def probe(seq):
        prev_e, prev_f = e0, f0
        for e in seq:
            try:
                fe = f(e)
            except (PoleError, SingularPrefactorError):
                break
            if prev_f * fe < 0.0:
                return (min(prev_e, e), max(prev_e, e),
                        prev_f if prev_e < e else fe,
                        fe if prev_e < e else prev_f)
            prev_e, prev_f = e, fe
        return None

    hit = probe(highs) or probe(lows)
    if hit is None:
        return None
    lo, hi, flo, fhi = hit
    got = _refine_bracket(f, lo, hi, flo, fhi, root_tol, m_unit)
    if got is None:
        return None
    root, res, bound = got
    return root, res, bound, lo, hi


def sweep_lambda(osc: OscillatorParams, radius: float, lambda_grid,
                 e_window: tuple[float, float] = (-6.0, 6.0), *,
                 scan_points: int = 512, rescan_every: int = 25,
                 root_tol: float = 1e-8) -> SweepTable:
    """Levels as a function of the coupling at fixed shell radius."""
    return _sweep(osc, "lambda", lambda_grid,
                  lambda lam: ShellParams(radius, lam),
                  e_window[0], e_window[1], scan_points=scan_points,
                  rescan_every=rescan_every, root_tol=root_tol)


def sweep_radius(osc: OscillatorParams, coupling: float, radius_grid,
                 e_window: tuple[float, float] = (-6.0, 6.0), *,
                 scan_points: int = 512, rescan_every: int = 25,
                 root_tol: float = 1e-8) -> SweepTable:
    """Levels as a function of the shell radius at fixed coupling."""
    return _sweep(osc, "radius", radius_grid,
                  lambda r: ShellParams(r, coupling),
                  e_window[0], e_window[1], scan_points=scan_points,
                  rescan_every=rescan_every, root_tol=root_tol)
