"""Hilbert-Mumford stability tests.

Torus actions are decided exactly with a rational LP.  For SU(2) and small
SU(n) the verdict is tri-state with certificates: an explicit group element
and separating functional for instability, a flow endpoint below the
smallest nonzero critical value of |mu| for semistability, and convergence
to mu = 0 with injective infinitesimal action for stability.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import moment as mm
from .lp import feasible

OUTSIDE = "OutsideHull"
BOUNDARY = "OnBoundary"
INTERIOR = "InInterior"

UNSTABLE = "Unstable"
SEMISTABLE = "Semistable"
STABLE = "Stable"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class HullVerdict:
    """Position of 0 relative to conv(weights).

    ``separating_functional`` f satisfies f.w < 0 for every weight when the
    tag is OutsideHull and f.w <= 0 (with equality somewhere) for OnBoundary.
    """

    tag: str
    separating_functional: tuple[Fraction, ...] | None = None

    @property
    def semistable(self) -> bool:
        return self.tag != OUTSIDE

    @property
    def stable(self) -> bool:
        return self.tag == INTERIOR


def _as_fraction_vectors(weights) -> list[tuple[Fraction, ...]]:
    out = []
    for w in weights:
        if isinstance(w, (int, Fraction)):
            w = (w,)
        elif hasattr(w, "coords"):
            w = w.coords
        out.append(tuple(Fraction(c) for c in w))
    return out


def _normalise(f: Sequence[Fraction]) -> tuple[Fraction, ...]:
    m = max(abs(c) for c in f)
    return tuple(c / m for c in f)


def hull_contains_zero(weights, trace_zero: bool | None = None) -> HullVerdict:
    """Exact decision of 0 in conv(weights): outside, on the boundary, or interior.

    With ``trace_zero`` (auto-detected when every weight sums to zero) the
    last coordinate is dropped so "interior" refers to the trace-zero
    hyperplane.  Returned functionals are in the original coordinates.
    """
    ws = _as_fraction_vectors(weights)
    if not ws:
        raise ValueError("empty weight list")
    dim = len(ws[0])
    if any(len(w) != dim for w in ws):
        raise ValueError("weights have different lengths")
    if trace_zero is None:
        trace_zero = dim > 1 and all(sum(w) == 0 for w in ws)
    red = [w[:-1] for w in ws] if trace_zero else ws
    d = len(red[0])

    def lift(f):
        f = _normalise(f)
        return f + (Fraction(0),) if trace_zero else f

    if d == 1:
        vals = [w[0] for w in red]
        lo, hi = min(vals), max(vals)
        if lo > 0:
            return HullVerdict(OUTSIDE, lift((Fraction(-1),)))
        if hi < 0:
            return HullVerdict(OUTSIDE, lift((Fraction(1),)))
        if lo == 0:
            return HullVerdict(BOUNDARY, lift((Fraction(-1),)))
        if hi == 0:
            return HullVerdict(BOUNDARY, lift((Fraction(1),)))
        return HullVerdict(INTERIOR)

    cols = len(red)
    # lambda >= 0, sum lambda = 1, sum lambda w = 0
    a = [[w[k] for w in red] for k in range(d)] + [[Fraction(1)] * cols]
    b = [Fraction(0)] * d + [Fraction(1)]
    res = feasible(a, b)
    if not res.feasible:
        return HullVerdict(OUTSIDE, lift(res.farkas[:d]))
    # interior iff the weights' cone is all of R^d, i.e. +-e_k in cone(W)
    a = [[w[k] for w in red] for k in range(d)]
    for k in range(d):
        for s in (1, -1):
            target = [Fraction(0)] * d
            target[k] = Fraction(s)
            res = feasible(a, target)
            if not res.feasible:
                return HullVerdict(BOUNDARY, lift(res.farkas))
    return HullVerdict(INTERIOR)


def check_functional(weights, verdict: HullVerdict) -> bool:
    """Exact re-check of a hull certificate against the weights."""
    if verdict.separating_functional is None:
        return verdict.tag == INTERIOR
    ws = _as_fraction_vectors(weights)
    f = verdict.separating_functional
    vals = [sum(a * b for a, b in zip(f, w)) for w in ws]
    if verdict.tag == OUTSIDE:
        return all(v < 0 for v in vals)
    return all(v <= 0 for v in vals) and any(v == 0 for v in vals)


# ---------------------------------------------------------------------------
# torus tests


def _present(x: Sequence, rel: float = mm.ZERO_REL) -> list[bool]:
    if all(isinstance(c, (int, Fraction)) for c in x):
        return [c != 0 for c in x]
    a = np.abs(np.asarray(x, complex))
    top = a.max()
    if top == 0:
        raise ValueError("all coordinates are zero")
    return list(a > rel * top)


def torus_semistable(action: mm.TorusDiagonal, x) -> HullVerdict:
    if len(x) != len(action.weights):
        raise ValueError("one coordinate per weight required")
    mask = _present(x)
    if not any(mask):
        raise ValueError("all coordinates are zero")
    return hull_contains_zero([w for w, p in zip(action.weights, mask) if p])


def present_segre_weights(action: mm.ProductAction, x) -> list[tuple[Fraction, ...]]:
    """Weights l_1 w_1 + ... + l_m w_m over nonzero coordinates of each factor."""
    acc = {tuple(Fraction(0) for _ in range(action.n))}
    for f, v in zip(action.factors, x):
        ws = {tuple(f.multiplicity * c for c in w) for w, p in zip(f.weights, _present(v)) if p}
        acc = {tuple(a + b for a, b in zip(u, w)) for u in acc for w in ws}
    return sorted(acc)


def all_segre_weights(action: mm.ProductAction) -> list[tuple[Fraction, ...]]:
    return present_segre_weights(action, [np.ones(f.dim) for f in action.factors])


def product_torus_test(action: mm.ProductAction, x) -> HullVerdict:
    return hull_contains_zero(present_segre_weights(action, x), trace_zero=True)


def beta_min(action: mm.ProductAction, limit: int = 200_000) -> float | None:
    """Smallest nonzero distance from 0 to conv(S), S a subset of the weights, in |mu| units.

    Critical values of |mu| lie in this set, so a flow point with smaller
    norm certifies semistability.  Returns None if the enumeration would
    exceed ``limit`` subsets.
    """
    ws = np.array([[float(c) for c in w] for w in all_segre_weights(action)]) * mm.MOMENT_SCALE
    n = action.n
    if sum(math.comb(len(ws), k) for k in range(1, min(n, len(ws)) + 1)) > limit:
        return None
    best = math.inf
    for k in range(1, min(n, len(ws)) + 1):
        for sub in itertools.combinations(range(len(ws)), k):
            p = ws[list(sub)]
            if k == 1:
                q = p[0]
                lam = np.ones(1)
            else:
                # min |p0 + D t| over the affine hull
                dmat = (p[1:] - p[0]).T
                if np.linalg.matrix_rank(dmat, tol=1e-9) < k - 1:
                    continue
                t, *_ = np.linalg.lstsq(dmat, -p[0], rcond=None)
                lam = np.concatenate([[1 - t.sum()], t])
                q = p[0] + dmat @ t
            if lam.min() < -1e-12:
                continue
            r = float(np.linalg.norm(q))
            if r > 1e-9:
                best = min(best, r)
    return best if math.isfinite(best) else None


# ---------------------------------------------------------------------------
# reductive groups


@dataclass(frozen=True)
class Budget:
    samples: int = 4
    seed: int = 0
    step: float = 0.1
    max_iter: int = 2000
    tol: float = 1e-9
    sigma_threshold: float = 1e-3
    margin: float = 0.05


@dataclass
class StabilityVerdict:
    tag: str
    group_element: mm.GroupElement | None = None
    functional: tuple[Fraction, ...] | None = None
    final_norm: float | None = None
    sigma_min: float | None = None
    beta_min: float | None = None
    flow: mm.FlowResult | None = field(default=None, repr=False)
    report: dict = field(default_factory=dict)

    @property
    def semistable(self) -> bool:
        return self.tag in (SEMISTABLE, STABLE)


def _weyl_lifts(n: int) -> list[np.ndarray]:
    """SU(n) lifts of every permutation, as products of 90-degree rotations."""
    simple = []
    for j in range(n - 1):
        s = np.eye(n, dtype=complex)
        s[j, j] = s[j + 1, j + 1] = 0
        s[j, j + 1], s[j + 1, j] = -1, 1
        simple.append(s)
    seen = {tuple(range(n)): np.eye(n, dtype=complex)}
    frontier = [tuple(range(n))]
    while frontier:
        nxt = []
        for p in frontier:
            for s in simple:
                m = s @ seen[p]
                key = tuple(int(np.argmax(np.abs(m[:, i]))) for i in range(n))
                if key not in seen:
                    seen[key] = m
                    nxt.append(key)
        frontier = nxt
    return list(seen.values())


def _unitary_sending_to_north(p: np.ndarray) -> np.ndarray:
    """k in SU(2) with k p proportional to e1."""
    a, b = p / np.linalg.norm(p)
    return np.array([[a.conjugate(), b.conjugate()], [-b, a]])


def _majorana_points(v: np.ndarray, k: int, cluster: float = 1e-4) -> list[np.ndarray]:
    """Distinct p_j with v proportional to the symmetric product of the p_j, clustered.

    v corresponds to the binary form sum_i v_i sqrt(C(k,i)) x^{k-i} y^i =
    prod_j (p_j0 x + p_j1 y), so a root [X:Y] gives the point [Y:-X].
    """
    c = np.array([v[i] * math.sqrt(math.comb(k, i)) for i in range(k + 1)])
    nz = np.nonzero(np.abs(c) > mm.ZERO_REL * np.abs(c).max())[0]
    deg = nz.max()
    pts = []
    if deg < k:
        pts.append(np.array([0, 1], complex))
    if deg > 0:
        for t in np.roots(c[: deg + 1][::-1]):
            pts.append(np.array([1, t]) / math.sqrt(1 + abs(t) ** 2))
    out: list[list[np.ndarray]] = []
    for p in pts:
        for group in out:
            if abs(group[0][0] * p[1] - group[0][1] * p[0]) < cluster:
                group.append(p * np.vdot(p, group[0]) / abs(np.vdot(p, group[0])))
                break
        else:
            out.append([p])
    roots = [sum(g) / np.linalg.norm(sum(g)) for g in out]
    return [np.array([r[1], -r[0]]) for r in roots]


def _su2_axes(action: mm.ProductAction, x) -> list[np.ndarray]:
    axes = []
    for f, v in zip(action.factors, x):
        if f.sym_blocks is None:
            continue
        o = 0
        for k in f.sym_blocks:
            block = v[o : o + k + 1]
            o += k + 1
            if k == 0 or np.abs(block).max() <= mm.ZERO_REL * np.abs(v).max():
                continue
            axes.extend(_majorana_points(block, k))
    return axes


def _moment_aligners(action: mm.ProductAction, x) -> list[np.ndarray]:
    """Unitaries diagonalising mu(x), in every Weyl order."""
    mu = mm.fubini_study_moment(action, x)
    _, v = np.linalg.eigh(1j * mu)
    k = v.conj().T
    k = k / np.linalg.det(k) ** (1.0 / action.n)
    return [w @ k for w in _weyl_lifts(action.n)]


def _candidates(action: mm.ProductAction, x, budget: Budget) -> list[np.ndarray]:
    n = action.n
    cands = list(_weyl_lifts(n))
    if action.is_su2:
        swap = _weyl_lifts(2)[1]
        for p in _su2_axes(action, x):
            k = _unitary_sending_to_north(p)
            cands += [k, swap @ k]
    cands += _moment_aligners(action, x)
    rng = np.random.default_rng(budget.seed)
    cands += [mm.random_su(n, rng) for _ in range(budget.samples)]
    return cands


def _lift(action: mm.ProductAction, k: np.ndarray) -> mm.GroupElement:
    return mm.from_unitary(action, k)


def reductive_semistability(action: mm.ProductAction, x, budget: Budget | None = None) -> StabilityVerdict:
    """Tri-state Hilbert-Mumford verdict for SU(2) or small SU(n) on a product of projective spaces."""
    budget = budget or Budget()
    x = mm.normalize(mm.as_point(action, x))
    report: dict = {"candidates": 0, "boundary_hits": 0}
    boundary = None

    def sweep(point, base: mm.GroupElement | None, unitaries):
        nonlocal boundary
        for k in unitaries:
            g = _lift(action, k)
            y = mm.apply(g, point)
            verdict = product_torus_test(action, y)
            report["candidates"] += 1
            if base is not None:
                g = mm.compose(g, base)
            if verdict.tag == OUTSIDE:
                return g, verdict
            if verdict.tag == BOUNDARY:
                report["boundary_hits"] += 1
                boundary = boundary or (g, verdict)
        return None

    hit = sweep(x, None, _candidates(action, x, budget))
    if hit:
        return StabilityVerdict(UNSTABLE, group_element=hit[0], functional=hit[1].separating_functional, report=report)

    beta = beta_min(action)
    threshold = beta * (1 - budget.margin) if beta is not None else None
    flow = mm.norm_square_flow(
        action,
        x,
        step=budget.step,
        max_iter=budget.max_iter,
        tol=budget.tol,
        stop_below=threshold if boundary is not None else None,
    )
    report["flow_iterations"] = flow.iterations
    common = dict(final_norm=flow.final_norm, beta_min=beta, flow=flow, report=report)
    semistable_cert = flow.converged or (threshold is not None and flow.final_norm < threshold)

    if not semistable_cert:
        # the flow endpoint carries the optimal destabilising direction
        end = flow.final_point
        hit = sweep(end, flow.group_element, _moment_aligners(action, end))
        if hit:
            return StabilityVerdict(
                UNSTABLE, group_element=hit[0], functional=hit[1].separating_functional, **common
            )
        return StabilityVerdict(INCONCLUSIVE, **common)

    sig = mm.infinitesimal_singular_values(action, flow.final_point)
    sigma_min = float(sig[-1]) if len(sig) == action.lie_basis.shape[0] else 0.0
    common["sigma_min"] = sigma_min
    if boundary is not None:
        return StabilityVerdict(SEMISTABLE, group_element=boundary[0], functional=boundary[1].separating_functional, **common)
    if flow.converged and sigma_min > budget.sigma_threshold:
        end_test = product_torus_test(action, flow.final_point)
        if end_test.tag == INTERIOR:
            return StabilityVerdict(STABLE, **common)
    if flow.converged and sigma_min <= budget.sigma_threshold:
        return StabilityVerdict(SEMISTABLE, **common)
    return StabilityVerdict(INCONCLUSIVE, **common)


def verify_unstable(action: mm.ProductAction, x, verdict: StabilityVerdict) -> bool:
    """Re-apply the certificate group element and re-check the functional exactly."""
    if verdict.tag != UNSTABLE or verdict.group_element is None:
        return False
    y = mm.apply(verdict.group_element, mm.normalize(mm.as_point(action, x)))
    ws = present_segre_weights(action, y)
    cert = HullVerdict(OUTSIDE, verdict.functional)
    return hull_contains_zero(ws, trace_zero=True).tag == OUTSIDE and check_functional(ws, cert)


# ---------------------------------------------------------------------------
# four points on the projective line

COINCIDENCE_TOL = 1e-12


def p1_vector(z) -> np.ndarray:
    """Unit vector for a point of P^1: complex z -> [1:z], 'inf' -> [0:1], or a pair."""
    if isinstance(z, str):
        if z.strip().lower() in ("inf", "infinity", "oo"):
            return np.array([0, 1], complex)
        z = complex(z.replace(" ", ""))
    if isinstance(z, (list, tuple, np.ndarray)):
        v = np.asarray(z, complex).ravel()
        if v.shape != (2,) or np.linalg.norm(v) == 0:
            raise ValueError("homogeneous coordinates need two entries, not both zero")
    elif isinstance(z, (int, float, complex, np.number)) and np.isinf(abs(z)):
        v = np.array([0, 1], complex)
    else:
        v = np.array([1, complex(z)])
    return v / np.linalg.norm(v)


def _bracket(a: np.ndarray, b: np.ndarray) -> complex:
    return a[0] * b[1] - a[1] * b[0]


def _coincide(a: np.ndarray, b: np.ndarray, tol: float = COINCIDENCE_TOL) -> bool:
    return abs(_bracket(a, b)) < tol


def coincidence_pattern(config, tol: float = COINCIDENCE_TOL) -> list[int]:
    """Label of each point's coincidence class (transitive closure)."""
    pts = [p1_vector(z) for z in config]
    parent = list(range(len(pts)))

    def root(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(pts)), 2):
        if _coincide(pts[i], pts[j], tol):
            parent[root(j)] = root(i)
    return [root(i) for i in range(len(pts))]


def p1p4_oracle(config) -> str:
    if len(config) != 4:
        raise ValueError("need four points")
    labels = coincidence_pattern(config)
    top = max(labels.count(v) for v in set(labels))
    if top == 1:
        return "stable"
    if top == 2:
        return "strictly_semistable"
    return "unstable"


def cross_ratio(config) -> complex:
    """(z1, z2; z3, z4) normalised so that (0, 1, inf, t) -> t."""
    if len(config) != 4:
        raise ValueError("need four points")
    z1, z2, z3, z4 = (p1_vector(z) for z in config)
    for a, b in itertools.combinations((z1, z2, z3, z4), 2):
        if _coincide(a, b):
            raise ValueError("cross-ratio needs four distinct points")
    return complex(_bracket(z4, z1) * _bracket(z2, z3) / (_bracket(z2, z1) * _bracket(z4, z3)))


def p1p4_action() -> mm.ProductAction:
    return mm.product_p1(4)


def p1p4_verdict(config, budget: Budget | None = None) -> StabilityVerdict:
    return reductive_semistability(p1p4_action(), [p1_vector(z) for z in config], budget)


def set_partitions(n: int) -> list[tuple[int, ...]]:
    """All coincidence patterns of n points as restricted-growth label strings."""
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for lab in range(top + 2):
            grow(prefix + [lab], max(top, lab))

    grow([], -1)
    return out


def random_p1_config(labels: Sequence[int], rng: np.random.Generator) -> list[np.ndarray]:
    """Points on P^1 realising a coincidence pattern, one Haar-random point per class.

    Each point gets an independent random rescaling so that equal points are
    not equal as vectors.
    """
    reps = {}
    for lab in labels:
        if lab not in reps:
            reps[lab] = mm.random_su(2, rng)[:, 0]
    out = []
    for lab in labels:
        c = rng.standard_normal(2)
        out.append(reps[lab] * complex(c[0], c[1]) * (0.5 + rng.random()))
    return out


# ---------------------------------------------------------------------------
# products P(C + C^2) x P(sum Sym^k)


def default_level(blocks: Sequence[int]) -> int:
    return 10 * max(1, max(blocks))


def cplus_action(blocks: Sequence[int], level: int) -> mm.ProductAction:
    return mm.sl2_sym_product([[0, 1], list(blocks)], [level, 1])


CPLUS_BASEPOINT = np.array([1, 1, 0], complex) / math.sqrt(2)


def cplus_pn_semistable(blocks: Sequence[int], x, level: int | None = None, budget: Budget | None = None) -> StabilityVerdict:
    """Stability of ({basepoint} x x) in P^2 x P^n with SL(2) acting by sum of Sym^{k_j}.

    The linearisation is O(level) on the first factor and O(1) on the second.
    """
    blocks = [int(k) for k in blocks]
    x = np.asarray(x, complex).ravel()
    if sum(k + 1 for k in blocks) != x.shape[0]:
        raise ValueError(f"block sizes {blocks} do not match a point with {x.shape[0]} coordinates")
    level = default_level(blocks) if level is None else int(level)
    if level < 1:
        raise ValueError("level must be positive")
    action = cplus_action(blocks, level)
    return reductive_semistability(action, (CPLUS_BASEPOINT, x), budget)
