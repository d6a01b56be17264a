"""Lifting modules to F_q[t]/(t^n) and counting deformations.

A lift replaces each arrow matrix by a polynomial in t whose constant
term is the original matrix, subject to the relations holding over the
truncated polynomial ring.  Lifts are enumerated level by level: the
t^k coefficients satisfy an affine system whose homogeneous part is
independent of k, so each consistent branch fans out by the same
nullspace.  Deformations are orbits under conjugation by invertible
vertex maps congruent to the identity mod t.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .homext import DEFAULT_BUDGET, BudgetExceededError, end_is_trivial
from .linalg import LinearSystem, Presolved, nullspace, rank, rref
from .presentation import Presentation
from .strings import FinModule


@dataclass(frozen=True)
class CoeffRing:
    """The test ring F_q[t]/(t^n); n = 1 is the base field."""

    q: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.q < 2 or any(self.q % d == 0 for d in range(2, self.q)):
            raise ValueError("q must be prime")

    def label(self) -> str:
        return f"F_{self.q}[t]/(t^{self.n})"


@dataclass
class Lift:
    """Arrow actions over a CoeffRing; coeffs[a] has shape (n, rows, cols)."""

    module: FinModule
    ring: CoeffRing
    coeffs: dict[str, np.ndarray]

    def validate(self) -> list[str]:
        problems = []
        p = self.module.presentation
        q, n = self.ring.q, self.ring.n
        for a in p.quiver.arrow_names:
            if ((self.coeffs[a][0] - self.module.action[a]) % q).any():
                problems.append(f"arrow {a}: constant term differs from V")
        for beta, alpha in p.relations:
            prod = _poly_matmul(self.coeffs[beta], self.coeffs[alpha], q, n)
            if prod.size and prod.any():
                problems.append(
                    f"relation {beta}*{alpha} fails over {self.ring.label()}")
        return problems


@dataclass
class LiftCensus:
    """Deformation counts per level with the ring descriptors they match."""

    q: int
    census: list[tuple[int, int]]
    matches: list[str]
    reduction_surjective: dict[int, bool] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"q": self.q,
               "census": [[n, c] for n, c in self.census],
               "matches": list(self.matches)}
        if self.reduction_surjective:
            out["reduction_surjective"] = {
                str(n): bool(v) for n, v in self.reduction_surjective.items()}
        return out


def _poly_matmul(A: np.ndarray, B: np.ndarray, q: int, n: int) -> np.ndarray:
    """Truncated product of matrix polynomials with level as first axis."""
    rows, cols = A.shape[1], B.shape[2]
    out = np.zeros((n, rows, cols), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            out[i + j] += A[i] @ B[j]
    return out % q


def _arrow_layout(V: FinModule):
    p = V.presentation
    layout = []
    off = 0
    for a in p.quiver.arrow_names:
        shape = (V.dims[p.target(a)], V.dims[p.source(a)])
        layout.append((a, off, shape))
        off += shape[0] * shape[1]
    return layout, off


def _level_system(V: FinModule):
    """Homogeneous system for one new coefficient level, plus equation layout.

    The unknown X ranges over arrow tuples; for each relation b*a the
    equation is A0(b) X(a) + X(b) A0(a) = rhs, with rhs depending on the
    already-fixed lower levels.
    """
    p, q = V.presentation, V.q
    sys = LinearSystem(q)
    for a in p.quiver.arrow_names:
        sys.add_unknown(a, (V.dims[p.target(a)], V.dims[p.source(a)]))
    eq_layout = []
    for beta, alpha in p.relations:
        rows = V.dims[p.target(beta)]
        cols = V.dims[p.source(alpha)]
        if rows * cols == 0:
            continue
        terms = []
        if sys.size_of(alpha):
            terms.append((V.action[beta], alpha,
                          np.eye(V.dims[p.source(alpha)], dtype=np.int64)))
        if sys.size_of(beta):
            terms.append((np.eye(V.dims[p.target(beta)], dtype=np.int64),
                          beta, V.action[alpha]))
        if not terms:
            continue
        sys.add_equation(terms)
        eq_layout.append((beta, alpha, (rows, cols)))
    return sys.matrix(), eq_layout


def _slice(C: np.ndarray, level: int, off: int, shape: tuple[int, int]):
    r, c = shape
    return C[:, level, off:off + r * c].reshape(C.shape[0], r, c)


def _level_rhs(C: np.ndarray, k: int, q: int, layout, eq_layout) -> np.ndarray:
    """Right-hand sides -(sum of cross terms) for level k, one column per lift."""
    slots = {a: (off, shape) for a, off, shape in layout}
    blocks = []
    for beta, alpha, (rows, cols) in eq_layout:
        acc = np.zeros((C.shape[0], rows, cols), dtype=np.int64)
        boff, bshape = slots[beta]
        aoff, ashape = slots[alpha]
        for i in range(1, k):
            fb = _slice(C, i, boff, bshape)
            fa = _slice(C, k - i, aoff, ashape)
            if fb.size and fa.size:
                acc += np.einsum("lij,ljk->lik", fb, fa)
        blocks.append((-acc % q).reshape(C.shape[0], rows * cols))
    if not blocks:
        return np.zeros((0, C.shape[0]), dtype=np.int64)
    return np.concatenate(blocks, axis=1).T


def _mixed_radix(count: int, width: int, q: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)[:, None]
    weights = q ** np.arange(width, dtype=np.int64)
    return (idx // weights) % q


def _enumerate_coeff_rows(V: FinModule, ring: CoeffRing,
                          budget: int) -> np.ndarray:
    """All lifts as an array of shape (count, n, width of arrow tuple)."""
    q, n = ring.q, ring.n
    layout, width = _arrow_layout(V)
    M, eq_layout = _level_system(V)
    base = np.zeros((1, n, width), dtype=np.int64)
    for a, off, shape in layout:
        base[0, 0, off:off + shape[0] * shape[1]] = V.action[a].reshape(-1)
    C = base
    if n == 1:
        return C
    ns = nullspace(M, q)
    z = ns.shape[0]
    if q ** z > budget:
        raise BudgetExceededError(f"{q}^{z} branches per level exceed budget")
    combos = _mixed_radix(q ** z, z, q) @ ns % q if z else \
        np.zeros((1, width), dtype=np.int64)
    pre = Presolved(M, q)
    for k in range(1, n):
        rhs = _level_rhs(C, k, q, layout, eq_layout)
        X, ok = pre.solve_many(rhs)
        C = C[ok]
        if C.shape[0] * combos.shape[0] > budget:
            raise BudgetExceededError(
                f"level {k} would enumerate more than {budget} lifts")
        C = np.repeat(C, combos.shape[0], axis=0)
        level = (np.repeat(X.T[ok], combos.shape[0], axis=0)
                 + np.tile(combos, (int(ok.sum()), 1))) % q
        C[:, k, :] = level
    return C


def _rows_to_lift(V: FinModule, ring: CoeffRing, row: np.ndarray) -> Lift:
    layout, _ = _arrow_layout(V)
    coeffs = {}
    for a, off, (r, c) in layout:
        coeffs[a] = row[:, off:off + r * c].reshape(ring.n, r, c).copy()
    return Lift(module=V, ring=ring, coeffs=coeffs)


def enumerate_lifts(p: Presentation, V: FinModule, ring: CoeffRing,
                    budget: int = DEFAULT_BUDGET) -> list[Lift]:
    """Every action tuple over the ring reducing to V and killing the relations."""
    if p != V.presentation:
        raise ValueError("module does not live over this presentation")
    if ring.q != V.q:
        raise ValueError("ring and module use different q")
    C = _enumerate_coeff_rows(V, ring, budget)
    return [_rows_to_lift(V, ring, C[i]) for i in range(C.shape[0])]


def _poly_inverse(U: np.ndarray, q: int) -> np.ndarray:
    """Inverse of a matrix polynomial whose constant term is the identity."""
    n, d = U.shape[0], U.shape[1]
    X = np.zeros_like(U)
    X[0] = np.eye(d, dtype=np.int64)
    for k in range(1, n):
        acc = np.zeros((d, d), dtype=np.int64)
        for i in range(1, k + 1):
            acc += U[i] @ X[k - i]
        X[k] = -acc % q
    return X


def _unit_generators(V: FinModule, ring: CoeffRing):
    """Congruent-to-identity conjugations that generate the whole group.

    One generator per vertex, matrix entry, level >= 1, and nonzero
    scalar; the filtration argument shows these generate every vertex
    map U with U = I mod t.
    """
    q, n = ring.q, ring.n
    gens = []
    for v in V.presentation.quiver.vertices:
        d = V.dims[v]
        for i, j in itertools.product(range(d), repeat=2):
            for k in range(1, n):
                for c in range(1, q):
                    U = np.zeros((n, d, d), dtype=np.int64)
                    U[0] = np.eye(d, dtype=np.int64)
                    U[k, i, j] = (U[k, i, j] + c) % q
                    gens.append((v, U))
    return gens


def _generator_count(V: FinModule, ring: CoeffRing) -> int:
    squares = sum(V.dims[v] ** 2 for v in V.presentation.quiver.vertices)
    return (ring.q - 1) * (ring.n - 1) * squares


class _Orbits:
    """Union-find partition of enumerated lifts under unit conjugation."""

    def __init__(self, V: FinModule, ring: CoeffRing, C: np.ndarray):
        self.V = V
        self.ring = ring
        self.C = C
        self.layout, self.width = _arrow_layout(V)
        self.index = {self._key_of_row(C[i]): i for i in range(C.shape[0])}
        self.parent = np.arange(C.shape[0], dtype=np.int64)
        self._partition()

    def _key_of_row(self, row: np.ndarray) -> bytes:
        return row[1:].astype(np.int8).tobytes()

    def _find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def _union(self, x: int, y: int) -> None:
        rx, ry = self._find(x), self._find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def _partition(self) -> None:
        p, q, n = self.V.presentation, self.ring.q, self.ring.n
        C = self.C
        L = C.shape[0]
        for v, U in _unit_generators(self.V, self.ring):
            Uinv = _poly_inverse(U, q)
            D = C.copy()
            for a, off, (r, c) in self.layout:
                if r * c == 0:
                    continue
                A = C[:, :, off:off + r * c].reshape(L, n, r, c)
                if p.target(a) == v:
                    A = _batch_left(U, A, q)
                if p.source(a) == v:
                    A = _batch_right(A, Uinv, q)
                D[:, :, off:off + r * c] = A.reshape(L, n, r * c)
            for l in range(L):
                other = self.index.get(self._key_of_row(D[l]))
                if other is None:
                    raise AssertionError(
                        "conjugation left the enumerated set; enumeration bug")
                self._union(l, other)

    def roots(self) -> np.ndarray:
        return np.array([self._find(i) for i in range(self.C.shape[0])])

    def class_count(self) -> int:
        return np.unique(self.roots()).size


def _batch_left(U: np.ndarray, A: np.ndarray, q: int) -> np.ndarray:
    """U(t) @ A(t) truncated, with A carrying a leading lift axis."""
    L, n = A.shape[0], A.shape[1]
    out = np.zeros_like(A)
    for i in range(n):
        if not U[i].any():
            continue
        for j in range(n - i):
            out[:, i + j] += np.einsum("ij,ljk->lik", U[i], A[:, j])
    return out % q


def _batch_right(A: np.ndarray, U: np.ndarray, q: int) -> np.ndarray:
    L, n = A.shape[0], A.shape[1]
    out = np.zeros_like(A)
    for i in range(n):
        if not U[i].any():
            continue
        for j in range(n - i):
            out[:, i + j] += np.einsum("ljk,ki->lji", A[:, j], U[i])
    return out % q


def _coboundary_rows(V: FinModule) -> np.ndarray:
    """Span of the conjugation directions at level one, as flat rows."""
    p, q = V.presentation, V.q
    layout, width = _arrow_layout(V)
    rows = []
    for v in p.quiver.vertices:
        d = V.dims[v]
        for i, j in itertools.product(range(d), repeat=2):
            g = np.zeros((d, d), dtype=np.int64)
            g[i, j] = 1
            row = np.zeros(width, dtype=np.int64)
            for a, off, (r, c) in layout:
                if r * c == 0:
                    continue
                block = np.zeros((r, c), dtype=np.int64)
                if p.target(a) == v:
                    block += g @ V.action[a]
                if p.source(a) == v:
                    block -= V.action[a] @ g
                row[off:off + r * c] = block.reshape(-1) % q
            rows.append(row)
    if not rows:
        return np.zeros((0, width), dtype=np.int64)
    return np.stack(rows)


def _tangent_line_reps(V: FinModule, M: np.ndarray) -> np.ndarray:
    """One level-one coefficient per conjugation coset, as flat rows."""
    q = V.q
    Z = nullspace(M, q)
    B = _coboundary_rows(V)
    z = Z.shape[0]
    if z == 0:
        return np.zeros((1, Z.shape[1]), dtype=np.int64)
    if rank(np.concatenate([Z, B]), q) != z:
        raise AssertionError("conjugation directions escape the cocycle space")
    coords, ok = Presolved(Z.T, q).solve_many(B.T)
    if not ok.all():
        raise AssertionError("coboundary coordinates unsolvable")
    _, pivots = rref(coords.T, q)
    free = [j for j in range(z) if j not in pivots]
    combos = _mixed_radix(q ** len(free), len(free), q)
    return combos @ Z[free] % q if free else \
        np.zeros((1, Z.shape[1]), dtype=np.int64)


def _census_level2_linear(V: FinModule) -> int:
    """Class count over the dual numbers without enumeration.

    Every level-one coefficient in the cocycle space is a lift, and two
    are conjugate iff they differ by a conjugation direction, so the
    count is the number of cosets.
    """
    q = V.q
    M, _ = _level_system(V)
    z = nullspace(M, q).shape[0]
    b = rank(_coboundary_rows(V), q)
    return q ** (z - b)


def _census_level3_linear(V: FinModule, budget: int) -> int:
    """Class count over F_q[t]/(t^3) without enumerating every lift.

    Requires End(V) = k.  Level-one coefficients split into conjugation
    cosets; a coset contributes iff its level-two system is consistent,
    and then contributes q^(cocycle dim - coboundary rank) classes.
    """
    q = V.q
    layout, width = _arrow_layout(V)
    M, eq_layout = _level_system(V)
    Z = nullspace(M, q)
    B = _coboundary_rows(V)
    b = rank(B, q)
    reps = _tangent_line_reps(V, M)
    if reps.shape[0] * max(width, 1) > budget:
        raise BudgetExceededError("too many tangent cosets for the budget")
    pre = Presolved(M, q)
    extendable = 0
    for rep in reps:
        C = np.zeros((1, 3, width), dtype=np.int64)
        for a, off, shape in layout:
            C[0, 0, off:off + shape[0] * shape[1]] = V.action[a].reshape(-1)
        C[0, 1] = rep
        rhs = _level_rhs(C, 2, q, layout, eq_layout)
        _, ok = pre.solve_many(rhs)
        if ok.all():
            extendable += 1
    return extendable * q ** (Z.shape[0] - b)


def count_deformations(p: Presentation, V: FinModule, ring: CoeffRing,
                       budget: int = DEFAULT_BUDGET,
                       method: str = "auto") -> int:
    """Number of isomorphism classes of lifts of V over the ring.

    V must have trivial endomorphisms, so isomorphism of lifts reduces
    to conjugation by vertex maps congruent to the identity mod t.
    `method` picks the engine: "enumerate" partitions the full lift set
    by exhaustive conjugation, "linear" (n = 2 and 3) counts cosets
    level by level, "auto" chooses by projected cost.
    """
    if not end_is_trivial(V):
        raise ValueError("count_deformations requires End(V) = k")
    if ring.q != V.q:
        raise ValueError("ring and module use different q")
    if ring.n == 1:
        return 1
    if method not in ("auto", "enumerate", "linear"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        M, _ = _level_system(V)
        z = nullspace(M, V.q).shape[0]
        projected = ring.q ** ((ring.n - 1) * z) * max(
            _generator_count(V, ring), 1)
        if projected <= budget:
            method = "enumerate"
        elif ring.n in (2, 3):
            method = "linear"
        else:
            raise BudgetExceededError(
                f"projected cost {projected} exceeds budget {budget} "
                f"and no linear route exists at n = {ring.n}")
    if method == "linear":
        if ring.n == 2:
            return _census_level2_linear(V)
        if ring.n == 3:
            return _census_level3_linear(V, budget)
        raise ValueError("the linear engine only covers n = 2 and 3")
    C = _enumerate_coeff_rows(V, ring, budget)
    cost = C.shape[0] * max(_generator_count(V, ring), 1)
    if cost > 32 * budget:
        raise BudgetExceededError(
            f"orbit pass needs {cost} conjugations, over budget {budget}")
    return _Orbits(V, ring, C).class_count()


def tangent_dim_via_lifts(p: Presentation, V: FinModule, q: int,
                          budget: int = DEFAULT_BUDGET) -> int:
    """log_q of the deformation count over the dual numbers."""
    if q != V.q:
        raise ValueError("module was built over a different q")
    count = count_deformations(p, V, CoeffRing(q, 2), budget=budget,
                               method="enumerate")
    k, c = 0, count
    while c > 1 and c % q == 0:
        c //= q
        k += 1
    if c != 1:
        raise AssertionError(
            f"deformation count {count} is not a power of {q}")
    return k


_TRUNCATED = re.compile(r"^k\[\[?t\]\]?/\(t\^(\d+)\)$")


def count_ring_morphisms(descriptor: str, ring: CoeffRing) -> int:
    """Local k-algebra morphisms from the named ring into F_q[t]/(t^n).

    Counted by enumerating images of t among the maximal-ideal elements
    rather than via a closed form.
    """
    q, n = ring.q, ring.n
    if descriptor == "k":
        return 1
    free = n - 1
    images = np.zeros((q ** free, n), dtype=np.int64)
    if free:
        images[:, 1:] = _mixed_radix(q ** free, free, q)
    if descriptor == "k[[t]]":
        return images.shape[0]
    m = _TRUNCATED.match(descriptor)
    if m is None:
        raise ValueError(f"unsupported ring descriptor {descriptor!r}")
    power = int(m.group(1))
    acc = images
    for _ in range(power - 1):
        acc = _poly_scalar_mul(acc, images, q)
    return int((~acc.any(axis=1)).sum())


def _poly_scalar_mul(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    n = A.shape[1]
    out = np.zeros_like(A)
    for i in range(n):
        for j in range(n - i):
            out[:, i + j] += A[:, i] * B[:, j]
    return out % q


def fingerprint(p: Presentation, V: FinModule, q: int, n_max: int,
                budget: int = DEFAULT_BUDGET,
                extra_candidates: tuple[str, ...] = ()) -> LiftCensus:
    """Deformation census for n = 1..n_max matched against candidate rings.

    Also reports, for the levels where the full enumeration ran,
    whether reduction one level down is surjective on deformations.
    """
    if q != V.q:
        raise ValueError("module was built over a different q")
    census = []
    per_level = {}
    for n in range(1, n_max + 1):
        ring = CoeffRing(q, n)
        orbits = None
        if n == 1:
            count = 1
        else:
            count = count_deformations(p, V, ring, budget=budget,
                                       method="auto")
            M, _ = _level_system(V)
            z = nullspace(M, q).shape[0]
            if q ** ((n - 1) * z) * max(_generator_count(V, ring), 1) <= budget:
                C = _enumerate_coeff_rows(V, ring, budget)
                orbits = _Orbits(V, ring, C)
        census.append((n, count))
        per_level[n] = orbits
    reduction = {}
    for n in range(2, n_max + 1):
        top, down = per_level[n], per_level.get(n - 1)
        if top is None or (n > 2 and down is None):
            continue
        covered = set()
        roots = top.roots()
        for rep in np.unique(roots):
            row = top.C[rep][: n - 1]
            if n == 2:
                covered.add(0)
            else:
                idx = down.index[row[1:].astype(np.int8).tobytes()]
                covered.add(down._find(idx))
        total = 1 if n == 2 else down.class_count()
        reduction[n] = len(covered) == total
    candidates = ["k", "k[[t]]/(t^2)", "k[[t]]"]
    for extra in extra_candidates:
        if extra not in candidates:
            candidates.append(extra)
    matches = []
    for label in candidates:
        expected = [count_ring_morphisms(label, CoeffRing(q, n))
                    for n in range(1, n_max + 1)]
        if expected == [c for _, c in census]:
            matches.append(label)
    return LiftCensus(q=q, census=census, matches=matches,
                      reduction_surjective=reduction)
