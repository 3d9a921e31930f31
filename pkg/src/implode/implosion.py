"""Parabolic cones, stabiliser types and strata of imploded cross-sections.

Type A only for the matrix-level operations.  A cone element is a
skew-Hermitian traceless matrix zeta = frame . diag(i*spectrum) . frame^*
whose frame respects the Levi blocks of the parabolic; for the parabolic
with Levi GL(r) (S_P = {1..r-1}) this means the last coordinate is fixed
and the last spectral value is the minimal one.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import lie_core as lc

DEFAULT_EPS = 1e-8
DEFAULT_SHIFT = Fraction(1, 100)


@dataclass(frozen=True, eq=False)
class ConeElement:
    """Spectrum (descending within Levi blocks) and a block-diagonal unitary frame."""

    spectrum: tuple
    frame: np.ndarray
    parabolic: lc.ParabolicData

    @property
    def rank(self) -> int:
        return len(self.spectrum) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.spectrum)

    @property
    def bottom(self):
        return self.spectrum[-1]

    def matrix(self) -> np.ndarray:
        lam = np.array([float(v) for v in self.spectrum])
        return (self.frame * (1j * lam)) @ self.frame.conj().T

    def upper_hermitian(self) -> np.ndarray:
        """xi / i as an r x r Hermitian matrix (upper-left block of zeta / i)."""
        return (-1j * self.matrix())[:-1, :-1]


def gl_r_parabolic(rank: int) -> lc.ParabolicData:
    rs = lc.build_type_a(rank)
    return lc.weyl_subgroup(rs, lc.gl_r_parabolic(rank))


def parabolic(rank: int, s_p: Iterable[int]) -> lc.ParabolicData:
    return lc.weyl_subgroup(lc.build_type_a(rank), s_p)


def _blocks(pd: lc.ParabolicData) -> list[list[int]]:
    return lc.levi_blocks(pd.rank, pd.levi_simple_roots)


def _is_dominant(rs: lc.RootSystemData, zeta: lc.Weight) -> bool:
    return all(v >= 0 for v in lc.simple_pairings(rs, zeta))


def cone_element(spectrum: Sequence, pd: lc.ParabolicData, frame: np.ndarray | None = None) -> ConeElement:
    """Build and validate a cone element from its spectrum (and optional frame)."""
    spec = tuple(lc._frac(v) for v in spectrum)
    n = pd.rank + 1
    if len(spec) != n:
        raise ValueError(f"spectrum must have {n} entries")
    total = sum(spec)
    exact = all(isinstance(v, Fraction) for v in spec)
    if (total != 0) if exact else abs(total) > DEFAULT_EPS:
        raise ValueError("spectrum must sum to zero")
    frame = np.eye(n, dtype=complex) if frame is None else np.asarray(frame, complex)
    if frame.shape != (n, n) or np.abs(frame.conj().T @ frame - np.eye(n)).max() > 1e-9:
        raise ValueError("frame must be a unitary matrix")
    blocks = _blocks(pd)
    for b in blocks:
        outside = [i for i in range(n) if i not in b]
        if outside and np.abs(frame[np.ix_(b, outside)]).max() > 1e-9:
            raise ValueError("frame does not respect the Levi block structure")
    ce = ConeElement(spec, frame, pd)
    if not cone_spectrum_ok(spec, blocks):
        raise ValueError("spectrum is outside the parabolic cone")
    return ce


def cone_spectrum_ok(spec: Sequence, blocks: list[list[int]], eps: float = DEFAULT_EPS) -> bool:
    """Within-block descending order and min(block b) >= max(block b+1)."""
    exact = all(isinstance(v, Fraction) for v in spec)
    tol = 0 if exact else eps
    for b in blocks:
        vals = [spec[i] for i in b]
        if any(vals[i] < vals[i + 1] - tol for i in range(len(vals) - 1)):
            return False
    for b, c in zip(blocks, blocks[1:]):
        if min(spec[i] for i in b) < max(spec[i] for i in c) - tol:
            return False
    return True


# ---------------------------------------------------------------------------
# cone membership


def parabolic_cone_contains(pd: lc.ParabolicData, zeta: lc.Weight) -> tuple[bool, lc.WeylElement | None]:
    """Is w^{-1} zeta dominant for some w in W^(P)?  Returns the first such w."""
    rs = pd.root_system
    if rs is None:
        raise ValueError("parabolic data carries no root system")
    zeta = zeta if isinstance(zeta, lc.Weight) else lc.Weight(zeta)
    for w in pd.weyl_subgroup_elements:
        if _is_dominant(rs, lc.act(rs, lc.inverse(rs, w), zeta)):
            return True, w
    return False, None


def gl_r_cone_inequality(zeta: Sequence) -> bool:
    """zeta_j >= zeta_{r+1} for all j: the cone for the Levi GL(r)."""
    return all(z >= zeta[-1] for z in zeta[:-1])


# ---------------------------------------------------------------------------
# faces and stabiliser types


def sigma0P(face: lc.FaceDescriptor, pd: lc.ParabolicData) -> lc.FaceDescriptor:
    """Face cut out by the roots vanishing on ``face`` that are not Levi roots.

    Roots vanishing on the face are the connected subsets of Z; a component
    of Z inside S_P imposes nothing, any other component forces all its
    simple roots to vanish on the dominant chamber.
    """
    rs = pd.root_system
    comps = lc.dynkin_components(rs, face.vanishing)
    keep = [j for c in comps if not set(c) <= pd.levi_simple_roots for j in c]
    return lc.FaceDescriptor(keep)


def _coincidence_runs(values: Sequence, eps: float) -> list[int]:
    exact = all(isinstance(v, Fraction) for v in values)
    runs: list[int] = []
    for i, v in enumerate(values):
        if i and ((v == values[i - 1]) if exact else abs(v - values[i - 1]) <= eps):
            runs[-1] += 1
        else:
            runs.append(1)
    return runs


def _type_label(components: list[tuple[str, int]]) -> str:
    if not components:
        return "Trivial"
    names = []
    for letter, rank in components:
        names.append(f"SU({rank + 1})" if letter == "A" else f"{letter}{rank}")
    return " x ".join(names)


@dataclass(frozen=True)
class StabilizerType:
    """Coincidence data of a cone element.

    ``bottom_multiplicity`` m counts the spectrum values equal to the last
    one; ``upper_composition`` lists the run lengths of the other values in
    descending order (the face of the chamber is determined by it).
    ``commutator_type`` names [K_zeta(P), K_zeta(P)].
    """

    bottom_multiplicity: int
    upper_composition: tuple[int, ...]
    commutator_type: str
    commutator_components: tuple[tuple[str, int], ...]
    unitary_blocks: tuple[int, ...]

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(sorted(self.upper_composition, reverse=True))

    @property
    def commutator_dim(self) -> int:
        dims = {"A": lambda r: r * (r + 2), "B": lambda r: r * (2 * r + 1), "C": lambda r: r * (2 * r + 1),
                "D": lambda r: r * (2 * r - 1), "E": lambda r: {6: 78, 7: 133, 8: 248}[r],
                "F": lambda r: 52, "G": lambda r: 14}
        return sum(dims[t](r) for t, r in self.commutator_components)

    @property
    def center_torus_rank(self) -> int:
        return len(self.unitary_blocks) - 1


def kp_cone_classify(zeta: ConeElement, eps: float = DEFAULT_EPS) -> StabilizerType:
    pd = zeta.parabolic
    blocks = _blocks(pd)
    if not cone_spectrum_ok(zeta.spectrum, blocks, eps):
        raise ValueError("cone element is outside the parabolic cone")
    rs = pd.root_system
    spec = zeta.spectrum
    # the cone condition makes the spectrum descending, i.e. dominant
    dom = lc.Weight(spec)
    face = lc.face_of_dominant(rs, dom, eps=eps)
    comm = sigma0P(face, pd)
    components = tuple(lc.levi_type_of_face(rs, comm))
    runs = _coincidence_runs(list(dom), eps)
    m = runs[-1]
    return StabilizerType(
        bottom_multiplicity=m,
        upper_composition=tuple(runs[:-1]),
        commutator_type=_type_label(list(components)),
        commutator_components=components,
        unitary_blocks=tuple(runs),
    )


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class Desingularisation:
    epsilon: Fraction
    lambda0: lc.Weight
    torus_rank: int


@dataclass(frozen=True)
class StratumDescriptor:
    face: lc.FaceDescriptor
    group_type: StabilizerType
    desing: Desingularisation | None = None

    @property
    def quotient_group(self) -> str:
        if self.desing is not None:
            return "Trivial" if self.desing.torus_rank == 0 else f"T^{self.desing.torus_rank}"
        return self.group_type.commutator_type

    def to_json(self) -> dict:
        out = {
            "face": list(self.face.sorted()),
            "m": self.group_type.bottom_multiplicity,
            "pi": list(self.group_type.upper_composition),
            "group_type": self.group_type.commutator_type,
            "torus_rank": self.desing.torus_rank if self.desing else 0,
        }
        if self.desing is not None:
            out["epsilon"] = str(self.desing.epsilon)
            out["lambda0"] = [str(c) for c in self.desing.lambda0]
            out["quotient_group"] = self.quotient_group
        return out


def strata_enumerate(pd: lc.ParabolicData) -> list[StratumDescriptor]:
    """One stratum per face of the dominant chamber, ordered by (|Z|, Z)."""
    rs = pd.root_system
    if rs is None or rs.realization != lc.TYPE_A:
        raise ValueError("strata are enumerated for type A only")
    out = []
    for face in lc.enumerate_faces(rs):
        rep = lc.face_representative(rs, face)
        ce = ConeElement(tuple(rep), np.eye(rs.dim, dtype=complex), pd)
        out.append(StratumDescriptor(face, kp_cone_classify(ce)))
    return out


def lambda0(rank: int) -> lc.Weight:
    return lc.Weight([1] * rank + [-rank])


def desing_strata(pd: lc.ParabolicData, epsilon=DEFAULT_SHIFT) -> list[StratumDescriptor]:
    """Strata of the epsilon-shifted cone: the SU(m) quotient becomes its maximal torus."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    lam0 = lambda0(pd.rank)
    return [
        replace(s, desing=Desingularisation(eps, lam0, s.group_type.bottom_multiplicity - 1))
        for s in strata_enumerate(pd)
    ]


def strata_report(strata: Sequence[StratumDescriptor]) -> list[dict]:
    return [s.to_json() for s in strata]


# ---------------------------------------------------------------------------
# points


def cone_element_from_matrix(zeta: np.ndarray, pd: lc.ParabolicData, eps: float = DEFAULT_EPS) -> ConeElement | None:
    """Spectrum and frame of a skew-Hermitian matrix, or None if it is outside the cone.

    The matrix must be block diagonal for the Levi blocks; each block is
    diagonalised with descending eigenvalues.
    """
    zeta = np.asarray(zeta, complex)
    n = pd.rank + 1
    if zeta.shape != (n, n):
        raise ValueError(f"expected a {n} x {n} matrix")
    h = -1j * zeta
    scale = max(1.0, np.abs(h).max())
    if np.abs(h - h.conj().T).max() > eps * scale:
        raise ValueError("matrix is not skew-Hermitian")
    if abs(np.trace(h)) > eps * scale * n:
        raise ValueError("matrix is not traceless")
    blocks = _blocks(pd)
    frame = np.zeros((n, n), complex)
    spec = np.zeros(n)
    for b in blocks:
        outside = [i for i in range(n) if i not in b]
        if outside and np.abs(h[np.ix_(b, outside)]).max() > eps * scale:
            return None
        w, v = np.linalg.eigh(h[np.ix_(b, b)])
        w, v = w[::-1], v[:, ::-1]
        spec[b] = w
        frame[np.ix_(b, b)] = v
    if not cone_spectrum_ok(list(spec), blocks, eps * scale):
        return None
    return ConeElement(tuple(float(v) for v in spec), frame, pd)


def classify_implosion_point(mu_value: np.ndarray, pd: lc.ParabolicData, eps: float = DEFAULT_EPS):
    """(in_cone, stratum) for a moment value."""
    ce = cone_element_from_matrix(mu_value, pd, eps)
    if ce is None:
        return False, None
    st = kp_cone_classify(ce, eps * max(1.0, np.abs(mu_value).max()))
    rs = pd.root_system
    dom = lc.Weight(sorted(ce.spectrum, reverse=True))
    face = lc.face_of_dominant(rs, dom, eps=eps * max(1.0, np.abs(mu_value).max()))
    return True, StratumDescriptor(face, st)


# ---------------------------------------------------------------------------
# consistency with the two extreme parabolics


def special_case_checks(pd: lc.ParabolicData, samples_per_face: int = 3, seed: int = 0) -> dict:
    """Compare the classification with the chamber faces when K^(P) = T or K^(P) = K."""
    rs = pd.root_system
    full = frozenset(range(1, rs.rank + 1))
    if pd.levi_simple_roots == frozenset():
        case = "torus"
    elif pd.levi_simple_roots == full:
        case = "full"
    else:
        raise ValueError("special cases are S_P empty or S_P = all simple roots")
    rng = np.random.default_rng(seed)
    mismatches = []
    checked = 0
    for face in lc.enumerate_faces(rs):
        for s in range(samples_per_face + 1):
            # a random exact point of the open face
            coeffs = [0 if j in face.vanishing else (1 if s == 0 else int(rng.integers(1, 10))) for j in range(1, rs.rank + 1)]
            zeta = lc.Weight([0] * rs.dim)
            for j, c in enumerate(coeffs):
                zeta = zeta + rs.fundamental_weights[j].scale(c)
            st = kp_cone_classify(ConeElement(tuple(zeta), np.eye(rs.dim, dtype=complex), pd))
            expected = lc.levi_type_of_face(rs, face) if case == "torus" else []
            checked += 1
            if list(st.commutator_components) != list(expected):
                mismatches.append({"face": list(face.sorted()), "got": st.commutator_type, "expected": _type_label(expected)})
    return {"case": case, "rank": rs.rank, "checked": checked, "consistent": not mismatches, "mismatches": mismatches}
