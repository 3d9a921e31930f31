"""Moment maps for linear SU(n)-actions on products of projective spaces.

Conventions
-----------
* k = su(n) is identified with k* through <A, B> = -trace(AB); ``su_basis``
  returns an orthonormal basis, Cartan elements first.
* The Fubini-Study moment map is

      mu(x) . a = c * sum_f l_f * xhat_f^* rho_f(a) xhat_f / (i |xhat_f|^2)

  with l_f the linearisation power of factor f and c = sqrt(2).  This
  constant makes SU(2) acting on P^1 land exactly on the unit sphere.
* Torus weights are stored exactly, in trace-zero coordinates of Q^n, in the
  scale of the defining representation; the torus part of mu at a weight
  vector of weight w is sqrt(2) * w.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

MOMENT_SCALE = math.sqrt(2.0)
ZERO_REL = 1e-10


class FlowError(FloatingPointError):
    """Raised when the norm-square flow produces non-finite values."""


# ---------------------------------------------------------------------------
# Lie algebra helpers


def su_basis(n: int) -> np.ndarray:
    """Orthonormal basis of su(n) for <A,B> = -tr(AB); the first n-1 are diagonal."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for k in range(1, n):
        h = np.zeros(n)
        h[:k] = 1.0
        h[k] = -k
        out.append(np.diag(1j * h / math.sqrt(k * (k + 1))))
    for i in range(n):
        for j in range(i + 1, n):
            a = np.zeros((n, n), complex)
            a[i, j], a[j, i] = 1, -1
            out.append(a / math.sqrt(2))
            b = np.zeros((n, n), complex)
            b[i, j] = b[j, i] = 1j
            out.append(b / math.sqrt(2))
    return np.array(out)


def inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(-np.trace(a @ b).real)


def lie_norm(a: np.ndarray) -> float:
    return math.sqrt(max(inner(a, a), 0.0))


def traceless(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    return a - np.trace(a) / n * np.eye(n)


def coefficients(basis: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Coordinates of x in an orthonormal basis (complex-linear for x in sl(n))."""
    return -np.einsum("kij,ji->k", basis, x)


def random_su(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(n)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.linalg.det(q) ** (1.0 / n)


def _expm_skew(a: np.ndarray) -> np.ndarray:
    """exp of a skew-Hermitian (or Hermitian times i) matrix via eigh."""
    lam, v = np.linalg.eigh(-1j * a)
    return (v * np.exp(1j * lam)) @ v.conj().T


def _expm_herm(h: np.ndarray, s: float = 1.0) -> np.ndarray:
    lam, v = np.linalg.eigh(h)
    return (v * np.exp(s * lam)) @ v.conj().T


def unitary_log(k: np.ndarray) -> np.ndarray:
    """A skew-Hermitian traceless logarithm of k in SU(n)."""
    # complex Schur form of a normal matrix is diagonal with unitary z
    t, z = scipy.linalg.schur(np.asarray(k, complex), output="complex")
    theta = np.angle(np.diag(t))
    # det k = 1 makes the angle sum a multiple of 2 pi; shift angles to zero it
    m = int(round(theta.sum() / (2 * math.pi)))
    if m:
        order = np.argsort(-theta) if m > 0 else np.argsort(theta)
        for idx in order[: abs(m)]:
            theta[idx] -= 2 * math.pi * np.sign(m)
    return (z * (1j * theta)) @ z.conj().T


# ---------------------------------------------------------------------------
# representations


def sym_power_generators(k: int, basis: np.ndarray) -> np.ndarray:
    """rho_*(a) on Sym^k(C^2) in the orthonormal basis sqrt(C(k,i)) x^{k-i} y^i."""
    c = np.array([math.sqrt(math.comb(k, i)) for i in range(k + 1)])
    out = np.zeros((len(basis), k + 1, k + 1), complex)
    for idx, a in enumerate(basis):
        m = np.zeros((k + 1, k + 1), complex)
        for i in range(k + 1):
            m[i, i] += (k - i) * a[0, 0] + i * a[1, 1]
            if i + 1 <= k:
                m[i + 1, i] += (k - i) * a[1, 0]
            if i - 1 >= 0:
                m[i - 1, i] += i * a[0, 1]
        out[idx] = m * c[None, :] / c[:, None]
    return out


def sym_power_matrix(g: np.ndarray, k: int) -> np.ndarray:
    """Action of g in GL(2) on Sym^k(C^2) (same basis as ``sym_power_generators``)."""
    c = np.array([math.sqrt(math.comb(k, i)) for i in range(k + 1)])
    m = np.zeros((k + 1, k + 1), complex)
    lx = np.array([g[0, 0], g[1, 0]])  # image of x as a polynomial in (x, y): coeffs of x, y
    ly = np.array([g[0, 1], g[1, 1]])
    for i in range(k + 1):
        poly = np.array([1.0 + 0j])
        for _ in range(k - i):
            poly = np.convolve(poly, lx)
        for _ in range(i):
            poly = np.convolve(poly, ly)
        # poly[j] is the coefficient of x^{k-j} y^j
        m[:, i] = poly * c[i] / c
    return m


def _block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[-1] for m in mats)
    lead = mats[0].shape[:-2]
    out = np.zeros(lead + (n, n), complex)
    o = 0
    for m in mats:
        d = m.shape[-1]
        out[..., o : o + d, o : o + d] = m
        o += d
    return out


@dataclass(frozen=True, eq=False)
class Factor:
    """One projective factor P(V) of the product, with its K-representation.

    ``rep[k]`` is rho_*(a_k) for the k-th orthonormal basis element of k;
    ``weights[c]`` is the exact torus weight of coordinate c.
    ``sym_blocks`` lists the degrees k_j when V = (+)_j Sym^{k_j}(C^2).
    """

    rep: np.ndarray
    weights: tuple[tuple[Fraction, ...], ...]
    multiplicity: int = 1
    sym_blocks: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return self.rep.shape[-1]


def sym_factor(blocks: Sequence[int], multiplicity: int = 1) -> Factor:
    """SU(2) acting on P((+)_j Sym^{k_j}(C^2))."""
    blocks = tuple(int(b) for b in blocks)
    if not blocks or any(b < 0 for b in blocks):
        raise ValueError("blocks must be a nonempty list of nonnegative integers")
    basis = su_basis(2)
    rep = _block_diag([sym_power_generators(k, basis) for k in blocks])
    weights = tuple(
        (Fraction(k - 2 * i, 2), Fraction(-(k - 2 * i), 2)) for k in blocks for i in range(k + 1)
    )
    return Factor(rep=rep, weights=weights, multiplicity=int(multiplicity), sym_blocks=blocks)


def _weights_from_rep(basis: np.ndarray, rep: np.ndarray, n: int) -> tuple[tuple[Fraction, ...], ...]:
    cartan = basis[: n - 1]
    theta = np.array([np.diag(h).imag for h in cartan])  # orthonormal in trace-zero R^n
    diag = np.array([np.diag(r) for r in rep[: n - 1]])
    off = max(np.abs(r - np.diag(np.diag(r))).max() for r in rep[: n - 1])
    if off > 1e-9:
        raise ValueError("the maximal torus must act diagonally in the given coordinates")
    vals = diag.imag  # (n-1, N): w_c . theta_k
    w = theta.T @ vals  # (n, N)
    return tuple(tuple(Fraction(float(x)).limit_denominator(1000) for x in w[:, c]) for c in range(rep.shape[-1]))


@dataclass(frozen=True, eq=False)
class ProductAction:
    """SU(n) acting linearly on a product of projective spaces.

    ``kind`` is one of "matrix" (single factor given by generators),
    "p1_power" (SU(2) on (P^1)^m) or "sl2_sym" (SU(2) on products of
    P(sum Sym^k)).
    """

    kind: str
    lie_basis: np.ndarray
    factors: tuple[Factor, ...]
    _groups: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        groups: dict[int, list[int]] = {}
        for i, f in enumerate(self.factors):
            groups.setdefault(id(f.rep), []).append(i)
        for idx in groups.values():
            self._groups.append(
                (self.factors[idx[0]].rep, np.array(idx), np.array([self.factors[i].multiplicity for i in idx], float))
            )

    @property
    def n(self) -> int:
        return self.lie_basis.shape[-1]

    @property
    def is_su2(self) -> bool:
        return self.n == 2


@dataclass(frozen=True)
class TorusDiagonal:
    """A torus acting diagonally on P^n with the given coordinate weights."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __init__(self, weights):
        ws = []
        for w in weights:
            w = (w,) if np.isscalar(w) or isinstance(w, Fraction) else tuple(w)
            ws.append(tuple(Fraction(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**9) for c in w))
        if not ws or len({len(w) for w in ws}) != 1:
            raise ValueError("weights must be a nonempty list of equal-length vectors")
        object.__setattr__(self, "weights", tuple(ws))


LinearizedAction = ProductAction | TorusDiagonal


def matrix_generators(rep: np.ndarray, lie_basis: np.ndarray | None = None) -> ProductAction:
    """Single-factor action given by rho_*(a_k) for an orthonormal basis a_k of su(n)."""
    rep = np.asarray(rep, complex)
    if lie_basis is None:
        dim_k = rep.shape[0]
        n = int(round(math.sqrt(dim_k + 1)))
        lie_basis = su_basis(n)
    lie_basis = np.asarray(lie_basis, complex)
    if rep.shape[0] != lie_basis.shape[0]:
        raise ValueError("need one representation matrix per basis element")
    for m in (*lie_basis, *rep):
        if np.abs(m + m.conj().T).max() > 1e-10:
            raise ValueError("generators must be skew-Hermitian")
    for m in lie_basis:
        if abs(np.trace(m)) > 1e-10:
            raise ValueError("Lie algebra basis must be traceless")
    flat = rep.reshape(rep.shape[0], -1)
    if np.linalg.matrix_rank(np.hstack([flat.real, flat.imag]), tol=1e-9) < rep.shape[0]:
        raise ValueError("generators must be linearly independent")
    n = lie_basis.shape[-1]
    f = Factor(rep=rep, weights=_weights_from_rep(lie_basis, rep, n))
    return ProductAction("matrix", lie_basis, (f,))


def defining_action(n: int) -> ProductAction:
    basis = su_basis(n)
    return matrix_generators(basis.copy(), basis)


def product_p1(m: int) -> ProductAction:
    """SU(2) acting diagonally on (P^1)^m by Moebius transformations."""
    if m < 1:
        raise ValueError("need at least one factor")
    f = sym_factor([1])
    return ProductAction("p1_power", su_basis(2), tuple(f for _ in range(m)))


def sl2_sym_product(factor_blocks: Sequence[Sequence[int]], multiplicities: Sequence[int]) -> ProductAction:
    factors = tuple(sym_factor(b, m) for b, m in zip(factor_blocks, multiplicities, strict=True))
    return ProductAction("sl2_sym", su_basis(2), factors)


# ---------------------------------------------------------------------------
# points


def as_point(action: ProductAction, x) -> tuple[np.ndarray, ...]:
    """Normalise user input to a tuple of factor vectors."""
    if isinstance(x, np.ndarray) and x.ndim == 1:
        x = (x,)
    elif isinstance(x, np.ndarray) and x.ndim == 2:
        x = tuple(x)
    pts = tuple(np.asarray(v, complex).ravel() for v in x)
    if len(pts) != len(action.factors):
        raise ValueError(f"expected {len(action.factors)} factor vectors, got {len(pts)}")
    for v, f in zip(pts, action.factors):
        if v.shape != (f.dim,):
            raise ValueError(f"factor vector has length {v.shape[0]}, expected {f.dim}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite coordinates")
        if np.linalg.norm(v) == 0:
            raise ValueError("zero vector does not define a projective point")
    return pts


def normalize(x: tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
    return tuple(v / np.linalg.norm(v) for v in x)


# ---------------------------------------------------------------------------
# moment maps


def _stack(action: ProductAction, x):
    return [np.stack([x[i] for i in idx]) for _, idx, _ in action._groups]


def _unstack(action: ProductAction, groups) -> tuple[np.ndarray, ...]:
    out = [None] * len(action.factors)
    for (_, idx, _), arr in zip(action._groups, groups):
        for j, i in enumerate(idx):
            out[i] = arr[j]
    return tuple(out)


def _coeffs_stacked(action: ProductAction, groups) -> np.ndarray:
    mu = np.zeros(action.lie_basis.shape[0])
    for (rep, _, mult), xs in zip(action._groups, groups):
        nrm = np.einsum("fi,fi->f", xs.conj(), xs).real
        vals = np.einsum("fi,kij,fj->fk", xs.conj(), rep, xs).imag
        mu += (mult / nrm) @ vals
    return MOMENT_SCALE * mu


def moment_coefficients(action: ProductAction, x) -> np.ndarray:
    """Coordinates of mu(x) in the orthonormal basis ``action.lie_basis``."""
    x = as_point(action, x)
    return _coeffs_stacked(action, _stack(action, x))


def fubini_study_moment(action: ProductAction, x) -> np.ndarray:
    """mu(x) as a skew-Hermitian traceless n x n matrix."""
    if isinstance(action, TorusDiagonal):
        raise TypeError("use torus_moment for diagonal torus actions")
    c = moment_coefficients(action, x)
    return np.einsum("k,kij->ij", c, action.lie_basis)


def torus_projection(value: np.ndarray) -> np.ndarray:
    """Diagonal part of a k-value as a real trace-zero vector (i diag(theta) -> theta)."""
    return np.diag(value).imag.copy()


def torus_moment(action: TorusDiagonal, x) -> np.ndarray:
    """sum |x_i|^2 alpha_i / sum |x_i|^2."""
    x = np.asarray(x, complex).ravel()
    w = np.array([[float(c) for c in wi] for wi in action.weights])
    if x.shape[0] != w.shape[0]:
        raise ValueError("one coordinate per weight required")
    p = np.abs(x) ** 2
    s = p.sum()
    if s == 0:
        raise ValueError("zero vector does not define a projective point")
    return (p / s) @ w


def torus_weights_mu(action: ProductAction, factor: int) -> np.ndarray:
    """Torus weights of a factor's coordinates in moment units (trace-zero coords)."""
    f = action.factors[factor]
    return MOMENT_SCALE * np.array([[float(c) for c in w] for w in f.weights])


def end_moment(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Traceless parts of (i M M^*, i M^* M)."""
    m = np.asarray(m, complex)
    return traceless(1j * m @ m.conj().T), traceless(1j * m.conj().T @ m)


# ---------------------------------------------------------------------------
# group elements


@dataclass(frozen=True, eq=False)
class GroupElement:
    """g in SL(n, C) together with its matrices on each factor."""

    defining: np.ndarray
    factor_mats: tuple[np.ndarray, ...]


def identity(action: ProductAction) -> GroupElement:
    return GroupElement(np.eye(action.n, dtype=complex), tuple(np.eye(f.dim, dtype=complex) for f in action.factors))


def rep_of(factor: Factor, basis: np.ndarray, x: np.ndarray) -> np.ndarray:
    """rho_*(x) for x in sl(n) (complex-linear extension)."""
    return np.einsum("k,kij->ij", coefficients(basis, x), factor.rep)


def exp_element(action: ProductAction, x: np.ndarray) -> GroupElement:
    """exp(x) for x in sl(n); x must be skew-Hermitian or Hermitian for exactness."""

    mats = tuple(scipy.linalg.expm(rep_of(f, action.lie_basis, x)) for f in action.factors)
    return GroupElement(scipy.linalg.expm(x), mats)


def from_sl2(action: ProductAction, g: np.ndarray) -> GroupElement:
    """Lift g in SL(2) to every Sym-type factor directly."""
    if not action.is_su2 or any(f.sym_blocks is None for f in action.factors):
        raise ValueError("direct lifting needs SU(2) factors of Sym type")
    mats = tuple(_block_diag([sym_power_matrix(g, k) for k in f.sym_blocks]) for f in action.factors)
    return GroupElement(np.asarray(g, complex), mats)


def from_unitary(action: ProductAction, k: np.ndarray) -> GroupElement:
    if action.is_su2 and all(f.sym_blocks is not None for f in action.factors):
        return from_sl2(action, k)
    return exp_element(action, unitary_log(k))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement(g.defining @ h.defining, tuple(a @ b for a, b in zip(g.factor_mats, h.factor_mats)))


def apply(g: GroupElement, x) -> tuple[np.ndarray, ...]:
    return tuple(m @ v for m, v in zip(g.factor_mats, x))


# ---------------------------------------------------------------------------
# infinitesimal action / stabiliser


def infinitesimal_singular_values(action: ProductAction, x) -> np.ndarray:
    """Singular values of a -> (a_x) from k to the tangent space of the product.

    Each factor is weighted by sqrt(l_f); a zero singular value marks a
    positive-dimensional stabiliser (dmu not surjective).
    """
    x = normalize(as_point(action, x))
    cols = []
    for f, v in zip(action.factors, x):
        rv = np.einsum("kij,j->ki", f.rep, v)
        rv = rv - np.outer(rv @ v.conj(), v)
        cols.append(math.sqrt(f.multiplicity) * rv)
    m = np.hstack(cols)  # (d, sum N)
    real = np.hstack([m.real, m.imag])
    return np.linalg.svd(real, compute_uv=False)


# ---------------------------------------------------------------------------
# norm-square flow


@dataclass
class FlowResult:
    final_point: tuple[np.ndarray, ...]
    final_norm: float
    iterations: int
    trace: list[float]
    group_element: GroupElement
    converged: bool
    stalled: bool


def norm_square_flow(
    action: ProductAction,
    x0,
    step: float = 0.1,
    max_iter: int = 10_000,
    tol: float = 1e-9,
    armijo: float = 1e-4,
    min_step: float = 1e-14,
    stop_below: float | None = None,
) -> FlowResult:
    """Steepest descent of |mu|^2 along exp(i s mu) with Armijo backtracking.

    Each iteration starts from ``step`` and halves until the sufficient
    decrease condition holds.  Points are renormalised after every step, and
    the accumulated group element g (with final_point = g . x0 up to scale)
    is tracked.  ``stop_below`` ends the run early once |mu| drops under it.
    """
    x = normalize(as_point(action, x0))
    groups = _stack(action, x)
    basis = action.lie_basis
    mu = _coeffs_stacked(action, groups)
    f = float(mu @ mu)
    trace = [math.sqrt(f)]
    g_def = np.eye(action.n, dtype=complex)
    g_fac = [np.eye(rep.shape[-1], dtype=complex) for rep, _, _ in action._groups]
    g_fac = [np.broadcast_to(m, (len(idx),) + m.shape).copy() for m, (_, idx, _) in zip(g_fac, action._groups)]
    it = 0
    stalled = False
    floor = tol if stop_below is None else max(tol, stop_below)
    while trace[-1] > floor and it < max_iter:
        # Hermitian directions rho_*(i mu) on each group, and the derivative of f
        herm = [1j * np.einsum("k,kij->ij", mu, rep) for rep, _, _ in action._groups]
        dmu = np.zeros_like(mu)
        for (rep, _, mult), xs, h in zip(action._groups, groups, herm):
            u = xs @ h.T
            rx = np.einsum("kij,fj->fki", rep, xs)
            a = np.einsum("fi,fki->fk", u.conj(), rx).imag
            b = np.einsum("fi,fki->fk", xs.conj(), rx).imag
            re_xu = np.einsum("fi,fi->f", xs.conj(), u).real
            dmu += mult @ (2 * a - 2 * b * re_xu[:, None])
        deriv = 2.0 * MOMENT_SCALE * float(mu @ dmu)
        if not math.isfinite(deriv):
            raise FlowError(f"non-finite derivative at iteration {it}")
        if deriv >= 0:
            stalled = True
            break
        eig = [np.linalg.eigh(h) for h in herm]
        s = step
        while True:
            expo = [(v * np.exp(s * lam)) @ v.conj().T for lam, v in eig]
            cand = [xs @ e.T for xs, e in zip(groups, expo)]
            cand = [c / np.linalg.norm(c, axis=1, keepdims=True) for c in cand]
            mu_c = _coeffs_stacked(action, cand)
            fc = float(mu_c @ mu_c)
            if not math.isfinite(fc):
                raise FlowError(f"non-finite |mu|^2 at iteration {it}, step {s}")
            if fc <= f + armijo * s * deriv:
                break
            s *= 0.5
            if s < min_step:
                stalled = True
                break
        if stalled:
            break
        g_def = _expm_herm(1j * np.einsum("k,kij->ij", mu, basis), s) @ g_def
        groups, mu, f = cand, mu_c, fc
        g_fac = [e[None] @ gm for e, gm in zip(expo, g_fac)]
        it += 1
        trace.append(math.sqrt(f))
    converged = trace[-1] <= tol
    fac = [None] * len(action.factors)
    for (_, idx, _), mats in zip(action._groups, g_fac):
        for j, i in enumerate(idx):
            fac[i] = mats[j]
    g = GroupElement(g_def, tuple(fac))
    return FlowResult(
        final_point=_unstack(action, groups),
        final_norm=trace[-1],
        iterations=it,
        trace=trace,
        group_element=g,
        converged=converged,
        stalled=stalled,
    )
