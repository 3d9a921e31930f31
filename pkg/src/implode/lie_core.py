"""Exact root-system data, Weyl groups and faces of the dominant chamber.

Everything here uses :class:`fractions.Fraction` so that face and wall
membership is decided without tie-breaking.  Type A is realised in the
trace-zero hyperplane of Q^{r+1}; any other finite Cartan matrix is realised
in the basis of fundamental weights (only the chamber combinatorics is
supported for those).
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

TYPE_A = "A"
GENERIC = "generic"

DEFAULT_EPS = 1e-9
DEFAULT_WEYL_BOUND = 10080


def _frac(x) -> Fraction | float:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) or isinstance(x, str):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class Weight:
    """A covector in t*, stored as a tuple of exact rationals (or floats)."""

    coords: tuple

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_frac(c) for c in coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(a + b for a, b in zip(self.coords, other.coords, strict=True))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(a - b for a, b in zip(self.coords, other.coords, strict=True))

    def __neg__(self) -> "Weight":
        return Weight(-a for a in self.coords)

    def scale(self, c) -> "Weight":
        c = _frac(c)
        return Weight(c * a for a in self.coords)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def __repr__(self):
        return "Weight(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class RootSystemData:
    cartan_matrix: tuple[tuple[int, ...], ...]
    simple_roots: tuple[Weight, ...]
    coroots: tuple[Weight, ...]
    fundamental_weights: tuple[Weight, ...]
    weyl_order: int
    realization: str
    gram: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def dim(self) -> int:
        """Length of a coordinate vector."""
        return len(self.gram)


# ---------------------------------------------------------------------------
# construction


def _type_a_cartan(rank: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank))
        for i in range(rank)
    )


def build_type_a(rank: int) -> RootSystemData:
    """Root system of SU(rank+1) in trace-zero coordinates of Q^{rank+1}."""
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    n = rank + 1
    roots = []
    for i in range(rank):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        roots.append(Weight(v))
    fund = []
    for i in range(1, rank + 1):
        fund.append(Weight(Fraction(int(k < i)) - Fraction(i, n) for k in range(n)))
    gram = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return RootSystemData(
        cartan_matrix=_type_a_cartan(rank),
        simple_roots=tuple(roots),
        coroots=tuple(roots),
        fundamental_weights=tuple(fund),
        weyl_order=math.factorial(n),
        realization=TYPE_A,
        gram=gram,
    )


def _mat_inverse(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular Cartan matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _root_lengths(cartan: Sequence[Sequence[int]]) -> list[Fraction]:
    """Squared lengths l_i with a_ij l_i = a_ji l_j; longest root in each component has l = 2."""
    r = len(cartan)
    lengths: list[Fraction | None] = [None] * r
    for start in range(r):
        if lengths[start] is not None:
            continue
        lengths[start] = Fraction(1)
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j != i and cartan[i][j] != 0 and lengths[j] is None:
                    lengths[j] = lengths[i] * Fraction(cartan[i][j], cartan[j][i])
                    comp.append(j)
                    queue.append(j)
        top = max(lengths[i] for i in comp)
        for i in comp:
            lengths[i] = 2 * lengths[i] / top
    return lengths  # type: ignore[return-value]


def from_cartan(cartan: Sequence[Sequence[int]]) -> RootSystemData:
    """Root system for a finite-type Cartan matrix a_ij = <alpha_i^vee, alpha_j>.

    Coordinates are with respect to the fundamental weights.
    """
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    r = len(cartan)
    if r == 0 or any(len(row) != r for row in cartan):
        raise ValueError("Cartan matrix must be square and nonempty")
    for i in range(r):
        if cartan[i][i] != 2:
            raise ValueError("Cartan matrix must have 2 on the diagonal")
        for j in range(r):
            if i != j and (cartan[i][j] > 0 or (cartan[i][j] == 0) != (cartan[j][i] == 0)):
                raise ValueError("not a Cartan matrix")
    lengths = _root_lengths(cartan)
    inv = _mat_inverse(cartan)
    gram = tuple(tuple(inv[i][j] * lengths[i] / 2 for j in range(r)) for i in range(r))
    if any(gram[i][j] != gram[j][i] for i in range(r) for j in range(r)):
        raise ValueError("Cartan matrix is not symmetrisable")
    roots = tuple(Weight(cartan[i][j] for i in range(r)) for j in range(r))
    coroots = tuple(roots[j].scale(Fraction(2) / lengths[j]) for j in range(r))
    fund = tuple(Weight(int(i == j) for i in range(r)) for j in range(r))
    order = 1
    for comp in _components(cartan, range(r)):
        order *= _component_weyl_order(_classify_component(cartan, comp, lengths))
    return RootSystemData(
        cartan_matrix=cartan,
        simple_roots=roots,
        coroots=coroots,
        fundamental_weights=fund,
        weyl_order=order,
        realization=GENERIC,
        gram=gram,
    )


# ---------------------------------------------------------------------------
# pairings


def pair(rs: RootSystemData, a: Weight, b: Weight):
    """Invariant inner product a . b."""
    g = rs.gram
    if len(a) != rs.dim or len(b) != rs.dim:
        raise ValueError(f"weights must have {rs.dim} coordinates")
    if rs.realization == TYPE_A:
        return sum((x * y for x, y in zip(a, b)), Fraction(0))
    return sum((a[i] * g[i][j] * b[j] for i in range(rs.dim) for j in range(rs.dim)), Fraction(0))


def coroot(rs: RootSystemData, j: int) -> Weight:
    """alpha_j^vee = 2 alpha_j / (alpha_j . alpha_j), with j 1-based."""
    if not 1 <= j <= rs.rank:
        raise IndexError(f"simple root index {j} out of range 1..{rs.rank}")
    a = rs.simple_roots[j - 1]
    return a.scale(Fraction(2) / pair(rs, a, a))


def simple_pairings(rs: RootSystemData, zeta: Weight) -> list:
    """The list zeta . alpha_j^vee for j = 1..r."""
    _check_weight(rs, zeta)
    if rs.realization == GENERIC:
        return list(zeta.coords)
    return [zeta[j] - zeta[j + 1] for j in range(rs.rank)]


def _check_weight(rs: RootSystemData, zeta: Weight, eps: float = DEFAULT_EPS) -> None:
    if len(zeta) != rs.dim:
        raise ValueError(f"expected {rs.dim} coordinates, got {len(zeta)}")
    if rs.realization == TYPE_A:
        s = sum(zeta.coords)
        if (s != 0) if zeta.is_exact else abs(s) > eps:
            raise ValueError(f"type A weights must have coordinate sum 0 (got {s})")


# ---------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element.

    Type A elements are permutations: ``perm[i]`` is the position that
    coordinate ``i`` is moved to.  Other types carry a reduced word in the
    simple reflections (1-based) together with the integer matrix of the
    action on fundamental-weight coordinates.
    """

    perm: tuple[int, ...] | None = None
    word: tuple[int, ...] | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None

    @property
    def key(self):
        return self.perm if self.perm is not None else self.matrix


def identity_element(rs: RootSystemData) -> WeylElement:
    if rs.realization == TYPE_A:
        return WeylElement(perm=tuple(range(rs.dim)))
    r = rs.rank
    return WeylElement(word=(), matrix=tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


def simple_reflection(rs: RootSystemData, j: int) -> WeylElement:
    if not 1 <= j <= rs.rank:
        raise IndexError(f"simple root index {j} out of range")
    if rs.realization == TYPE_A:
        p = list(range(rs.dim))
        p[j - 1], p[j] = j, j - 1
        return WeylElement(perm=tuple(p))
    r = rs.rank
    a = rs.cartan_matrix
    # s_j(c) = c - c_j * (column j of A)
    m = tuple(
        tuple(int(row == col) - (a[row][j - 1] if col == j - 1 else 0) for col in range(r))
        for row in range(r)
    )
    return WeylElement(word=(j,), matrix=m)


def compose(rs: RootSystemData, u: WeylElement, v: WeylElement) -> WeylElement:
    """The element u*v (apply v first)."""
    if rs.realization == TYPE_A:
        return WeylElement(perm=tuple(u.perm[v.perm[i]] for i in range(len(v.perm))))
    r = rs.rank
    m = tuple(
        tuple(sum(u.matrix[i][k] * v.matrix[k][j] for k in range(r)) for j in range(r))
        for i in range(r)
    )
    return WeylElement(word=u.word + v.word, matrix=m)


def inverse(rs: RootSystemData, w: WeylElement) -> WeylElement:
    if rs.realization == TYPE_A:
        inv = [0] * len(w.perm)
        for i, p in enumerate(w.perm):
            inv[p] = i
        return WeylElement(perm=tuple(inv))
    e = identity_element(rs)
    for j in reversed(w.word):
        e = compose(rs, e, simple_reflection(rs, j))
    return e


def act(rs: RootSystemData, w: WeylElement, zeta: Weight) -> Weight:
    if rs.realization == TYPE_A:
        out = [None] * len(zeta)
        for i, p in enumerate(w.perm):
            out[p] = zeta[i]
        return Weight(out)
    r = rs.rank
    return Weight(sum(w.matrix[i][k] * zeta[k] for k in range(r)) for i in range(r))


def dominant_representative(rs: RootSystemData, zeta: Weight) -> tuple[Weight, WeylElement]:
    """Return (zeta_plus, w) with w . zeta = zeta_plus dominant."""
    _check_weight(rs, zeta)
    if rs.realization == TYPE_A:
        order = sorted(range(rs.dim), key=lambda i: (-zeta[i], i))
        perm = [0] * rs.dim
        for pos, i in enumerate(order):
            perm[i] = pos
        w = WeylElement(perm=tuple(perm))
        return act(rs, w, zeta), w
    w = identity_element(rs)
    cur = zeta
    while True:
        neg = next((j for j, c in enumerate(cur.coords) if c < 0), None)
        if neg is None:
            return cur, w
        s = simple_reflection(rs, neg + 1)
        cur = act(rs, s, cur)
        w = compose(rs, s, w)


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class FaceDescriptor:
    """Open face {zeta dominant : zeta . alpha_j^vee = 0 iff j in Z}."""

    vanishing: frozenset[int]
    ambient: str = "dominant"
    levi: frozenset[int] | None = None

    def __init__(self, vanishing: Iterable[int], ambient: str = "dominant", levi: Iterable[int] | None = None):
        object.__setattr__(self, "vanishing", frozenset(vanishing))
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "levi", None if levi is None else frozenset(levi))

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.vanishing))


def face_of_dominant(rs: RootSystemData, zeta_plus: Weight, eps: float = DEFAULT_EPS) -> FaceDescriptor:
    """Face of the dominant chamber containing ``zeta_plus``.

    Exact weights are classified with eps ignored; float weights use the
    absolute tolerance ``eps`` on the pairings.
    """
    p = simple_pairings(rs, zeta_plus)
    exact = zeta_plus.is_exact
    z = set()
    for j, v in enumerate(p, start=1):
        if (v == 0) if exact else abs(v) <= eps:
            z.add(j)
        elif (v < 0) if exact else v < -eps:
            raise ValueError(f"weight is not dominant: pairing with coroot {j} is {v}")
    return FaceDescriptor(z)


def enumerate_faces(rs: RootSystemData) -> list[FaceDescriptor]:
    """All 2^r open faces, ordered by (|Z|, Z)."""
    r = rs.rank
    return [
        FaceDescriptor(c)
        for k in range(r + 1)
        for c in itertools.combinations(range(1, r + 1), k)
    ]


def face_representative(rs: RootSystemData, face: FaceDescriptor) -> Weight:
    """Exact point of the open face: sum of fundamental weights not in Z."""
    out = Weight([0] * rs.dim)
    for j in range(1, rs.rank + 1):
        if j not in face.vanishing:
            out = out + rs.fundamental_weights[j - 1]
    return out


def _components(cartan, nodes: Iterable[int]) -> list[list[int]]:
    nodes = sorted(set(nodes))
    seen: set[int] = set()
    comps = []
    for s in nodes:
        if s in seen:
            continue
        comp, queue = [], deque([s])
        seen.add(s)
        while queue:
            i = queue.popleft()
            comp.append(i)
            for j in nodes:
                if j not in seen and cartan[i][j] != 0:
                    seen.add(j)
                    queue.append(j)
        comps.append(sorted(comp))
    return comps


def _classify_component(cartan, comp: list[int], lengths) -> tuple[str, int]:
    n = len(comp)
    if n == 1:
        return ("A", 1)
    edges = {}
    for a, b in itertools.combinations(comp, 2):
        if cartan[a][b] != 0:
            edges[(a, b)] = cartan[a][b] * cartan[b][a]
    if len(edges) != n - 1:
        raise ValueError("Dynkin diagram is not a tree (affine or indefinite type)")
    deg = {i: 0 for i in comp}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    mult = sorted(edges.values())
    if mult[-1] >= 4 or max(deg.values()) > 3:
        raise ValueError("not of finite type")
    if mult[-1] == 3:
        if n != 2:
            raise ValueError("not of finite type")
        return ("G", 2)
    if mult[-1] == 2:
        if mult.count(2) > 1 or max(deg.values()) > 2:
            raise ValueError("not of finite type")
        if n == 2:
            return ("B", 2)
        (a, b) = next(e for e, m in edges.items() if m == 2)
        if deg[a] == 2 and deg[b] == 2:
            if n == 4:
                return ("F", 4)
            raise ValueError("not of finite type")
        end = a if deg[a] == 1 else b
        other = b if end == a else a
        return ("B", n) if lengths[end] < lengths[other] else ("C", n)
    branch = [i for i in comp if deg[i] == 3]
    if not branch:
        return ("A", n)
    if len(branch) > 1:
        raise ValueError("not of finite type")
    c = branch[0]
    adj = {i: [j for j in comp if j != i and cartan[i][j] != 0] for i in comp}
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", n)
    raise ValueError("not of finite type")


def _component_weyl_order(t: tuple[str, int]) -> int:
    letter, n = t
    if letter == "A":
        return math.factorial(n + 1)
    if letter in "BC":
        return 2**n * math.factorial(n)
    if letter == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[t]


def levi_type_of_face(rs: RootSystemData, face: FaceDescriptor | Iterable[int]) -> list[tuple[str, int]]:
    """Simple types of the Dynkin subdiagram on Z, i.e. of [K_sigma, K_sigma].

    Returned in order of the smallest node of each component.
    """
    z = face.vanishing if isinstance(face, FaceDescriptor) else frozenset(face)
    if any(not 1 <= j <= rs.rank for j in z):
        raise IndexError("face index out of range")
    lengths = _root_lengths(rs.cartan_matrix)
    comps = _components(rs.cartan_matrix, [j - 1 for j in z])
    return [_classify_component(rs.cartan_matrix, c, lengths) for c in comps]


def dynkin_components(rs: RootSystemData, nodes: Iterable[int]) -> list[list[int]]:
    """Connected components (1-based node lists) of the subdiagram on ``nodes``."""
    return [[i + 1 for i in c] for c in _components(rs.cartan_matrix, [j - 1 for j in nodes])]


@dataclass(frozen=True)
class ParabolicData:
    levi_simple_roots: frozenset[int]
    weyl_subgroup_elements: tuple[WeylElement, ...] = field(repr=False)
    rank: int = 0
    root_system: RootSystemData | None = field(default=None, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.weyl_subgroup_elements)


def weyl_subgroup(rs: RootSystemData, s_p: Iterable[int], bound: int = DEFAULT_WEYL_BOUND) -> ParabolicData:
    """Explicit elements of the subgroup generated by reflections in S_P.

    Breadth-first search, so generic-type words are reduced.
    """
    s_p = frozenset(s_p)
    if any(not 1 <= j <= rs.rank for j in s_p):
        raise IndexError("S_P must be a subset of 1..r")
    gens = [simple_reflection(rs, j) for j in sorted(s_p)]
    e = identity_element(rs)
    seen = {e.key: e}
    order = [e]
    queue = deque([e])
    while queue:
        w = queue.popleft()
        for s in gens:
            u = compose(rs, w, s)
            if u.key not in seen:
                if rs.realization == GENERIC and len(seen) >= bound:
                    raise ValueError(f"Weyl subgroup exceeds bound {bound}")
                seen[u.key] = u
                order.append(u)
                queue.append(u)
    return ParabolicData(levi_simple_roots=s_p, weyl_subgroup_elements=tuple(order), rank=rs.rank, root_system=rs)


def levi_blocks(rank: int, s_p: Iterable[int]) -> list[list[int]]:
    """Type A coordinate blocks (0-based) of the Levi for S_P."""
    s_p = set(s_p)
    blocks, cur = [], [0]
    for j in range(1, rank + 1):
        if j in s_p:
            cur.append(j)
        else:
            blocks.append(cur)
            cur = [j]
    blocks.append(cur)
    return blocks


def gl_r_parabolic(rank: int) -> frozenset[int]:
    """S_P = {alpha_1..alpha_{r-1}}: Levi GL(r), unipotent radical (C^+)^r."""
    return frozenset(range(1, rank))
