"""The (r+1) x r matrix model of the imploded cotangent bundle for SL(r+1).

A pair (k, zeta) with k in SU(r+1) and zeta = (xi, i*lam_{r+1}) in the
parabolic cone is sent to M = k . iota . alpha, where iota: C^r -> C^{r+1}
is the standard inclusion and alpha is the positive square root of
xi/i - lam_{r+1}.  Then traceless(i M M^*) = Ad(k) zeta and i M^* M =
xi - i lam_{r+1} I_r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import implosion as imp
from . import lie_core as lc
from .moment import su_basis, traceless

CLAMP_EPS = 1e-10


@dataclass(frozen=True, eq=False)
class ImplosionPoint:
    k: np.ndarray
    zeta: imp.ConeElement

    def __post_init__(self):
        k = np.asarray(self.k, complex)
        n = self.zeta.rank + 1
        if k.shape != (n, n):
            raise ValueError(f"k must be {n} x {n}")
        if np.abs(k.conj().T @ k - np.eye(n)).max() > 1e-10 or abs(np.linalg.det(k) - 1) > 1e-10:
            raise ValueError("k must be special unitary")
        object.__setattr__(self, "k", k)


def f_max_unipotent(rs: lc.RootSystemData, lam: lc.Weight) -> list[float]:
    """Coefficients sqrt(lam(alpha_j^vee) / pi) on the highest weight vectors."""
    p = lc.simple_pairings(rs, lam if isinstance(lam, lc.Weight) else lc.Weight(lam))
    if any(v < 0 for v in p):
        raise ValueError("weight is not dominant")
    return [math.sqrt(float(v) / math.pi) for v in p]


def gl_r_cone_element(spectrum, frame: np.ndarray | None = None) -> imp.ConeElement:
    """Cone element for the Levi GL(r); ``frame`` may be the r x r upper block."""
    r = len(spectrum) - 1
    pd = imp.gl_r_parabolic(r)
    if frame is not None and np.asarray(frame).shape == (r, r):
        full = np.eye(r + 1, dtype=complex)
        full[:r, :r] = frame
        frame = full
    return imp.cone_element(spectrum, pd, frame)


def hermitian_sqrt_factor(zeta: imp.ConeElement, eps: float = CLAMP_EPS) -> np.ndarray:
    """alpha = V diag(sqrt(lam_j - lam_{r+1})) V^*, V the upper block of the frame."""
    lam = np.array([float(v) for v in zeta.spectrum])
    d = lam[:-1] - lam[-1]
    if d.min() < -eps:
        raise ValueError("cone violation: an eigenvalue lies below the last one")
    d = np.clip(d, 0.0, None)
    v = zeta.frame[:-1, :-1]
    return (v * np.sqrt(d)) @ v.conj().T


def inclusion(r: int) -> np.ndarray:
    return np.vstack([np.eye(r), np.zeros((1, r))]).astype(complex)


def pair_to_matrix(p: ImplosionPoint) -> np.ndarray:
    r = p.zeta.rank
    return p.k @ inclusion(r) @ hermitian_sqrt_factor(p.zeta)


def _complete_to_special_unitary(cols: np.ndarray, n: int) -> np.ndarray:
    """Extend orthonormal columns to an SU(n) matrix deterministically.

    Standard basis vectors are added by Gram-Schmidt in index order and the
    last column is rescaled by a phase so that det = 1.
    """
    basis = [c for c in cols.T]
    for i in range(n):
        if len(basis) == n:
            break
        e = np.zeros(n, complex)
        e[i] = 1
        for b in basis:
            e = e - np.vdot(b, e) * b
        nrm = np.linalg.norm(e)
        if nrm > 1e-6:
            basis.append(e / nrm)
    k = np.array(basis).T
    d = np.linalg.det(k)
    k[:, -1] *= np.conj(d) / abs(d)
    return k


def matrix_to_pair(m: np.ndarray, eps: float = 1e-9) -> ImplosionPoint:
    """Inverse of ``pair_to_matrix`` up to the stabiliser ambiguity."""
    m = np.asarray(m, complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] + 1:
        raise ValueError("expected an (r+1) x r matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("non-finite matrix entries")
    n, r = m.shape
    # singular vectors are accurate even where M^* M has a degenerate kernel
    uu, s, wh = np.linalg.svd(m, full_matrices=False)
    v = wh.conj().T
    phase = np.conj(np.linalg.det(v))  # det V = 1 keeps det k = 1
    v[:, -1] *= phase
    uu[:, -1] *= phase
    w = s**2
    lam_last = -w.sum() / n
    spectrum = tuple(float(x) for x in (w + lam_last)) + (float(lam_last),)
    scale = max(1.0, s.max() if len(s) else 1.0)
    good = s > eps * scale
    # on the positive part the columns of k iota V are (M V)_j / s_j = u_j
    u = uu[:, good]
    head = _complete_to_special_unitary(u, n)
    frame = np.eye(n, dtype=complex)
    frame[:r, :r] = v
    k = head @ np.conj(frame.T)
    pd = imp.gl_r_parabolic(r)
    zeta = imp.ConeElement(spectrum, frame, pd)
    return ImplosionPoint(k, zeta)


def equivalent_points(p1: ImplosionPoint, p2: ImplosionPoint, eps: float = 1e-8) -> bool:
    return float(np.linalg.norm(pair_to_matrix(p1) - pair_to_matrix(p2))) <= eps


def matrix_stratum(m: np.ndarray, eps: float = 1e-8) -> imp.StratumDescriptor:
    p = matrix_to_pair(m)
    rs = p.zeta.parabolic.root_system
    st = imp.kp_cone_classify(p.zeta, eps)
    face = lc.face_of_dominant(rs, lc.Weight(p.zeta.spectrum), eps=eps)
    return imp.StratumDescriptor(face, st)


def stabilizer_dim_oracle(m: np.ndarray, tol: float = 1e-9) -> int:
    """Real dimension of {A in su(r+1) : A M = 0} by a nullspace computation."""
    m = np.asarray(m, complex)
    n = m.shape[0]
    basis = su_basis(n)
    cols = np.array([(a @ m).ravel() for a in basis]).T
    real = np.vstack([cols.real, cols.imag])
    if real.size == 0:
        return len(basis)
    sv = np.linalg.svd(real, compute_uv=False)
    top = max(1.0, np.abs(m).max())
    rank = int((sv > tol * top).sum())
    return len(basis) - rank


def left_moment(m: np.ndarray) -> np.ndarray:
    return traceless(1j * m @ m.conj().T)


def section_check(zeta: imp.ConeElement) -> float:
    """|traceless(i M M^*) - zeta| for M = pair_to_matrix(I, zeta)."""
    n = zeta.rank + 1
    m = pair_to_matrix(ImplosionPoint(np.eye(n, dtype=complex), zeta))
    return float(np.linalg.norm(left_moment(m) - zeta.matrix()))


def right_moment_residual(p: ImplosionPoint) -> float:
    """|i M^* M - (xi - i lam_{r+1} I_r)| in the frame-independent form."""
    m = pair_to_matrix(p)
    r = p.zeta.rank
    xi = p.zeta.matrix()[:r, :r]
    lam_last = float(p.zeta.spectrum[-1])
    return float(np.linalg.norm(1j * m.conj().T @ m - (xi - 1j * lam_last * np.eye(r))))


def random_cone_element(r: int, rng: np.random.Generator, face: lc.FaceDescriptor | None = None) -> imp.ConeElement:
    """A random point of the cone, optionally on a prescribed chamber face, with a random U(r) frame."""
    rs = lc.build_type_a(r)
    if face is None:
        lam = np.sort(rng.standard_normal(r + 1))[::-1]
        lam -= lam.mean()
    else:
        c = [0.0 if j in face.vanishing else rng.uniform(0.2, 2.0) for j in range(1, r + 1)]
        lam = sum(ci * np.array([float(x) for x in rs.fundamental_weights[j]]) for j, ci in enumerate(c))
        lam = np.asarray(lam, float) if np.ndim(lam) else np.zeros(r + 1)
    z = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    q, _ = np.linalg.qr(z)
    return gl_r_cone_element(tuple(float(x) for x in lam), q)


def exact_spectrum(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)
