"""Quadratic / symmetric bilinear forms over F_p, p odd, up to congruence.

Over an odd prime field a symmetric form is determined up to congruence
Q -> A^T Q A by its rank and the square class of the discriminant (product of
the nonzero diagonal entries after symmetric diagonalization).  This module
computes that invariant, the 2n+1 diagonal representatives in dimension n,
and the unit h for which h*z1^2 + z2^2 is *not* congruent to z1*z2.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .modular import inverse_mod, least_nonsquare, legendre, primitive_root

SQUARE = "square"
NONSQUARE = "nonsquare"


@dataclass(frozen=True)
class QuadForm:
    """Symmetric n x n matrix over F_p, entries stored reduced mod p."""

    p: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.p == 2 or self.p < 2:
            raise ValueError("odd prime field required")
        m = self.matrix
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("matrix must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise ValueError("matrix must be symmetric")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @staticmethod
    def from_matrix(mat, p: int) -> "QuadForm":
        rows = tuple(tuple(int(x) % p for x in row) for row in mat)
        return QuadForm(p, rows)

    @staticmethod
    def diagonal(entries, p: int) -> "QuadForm":
        n = len(entries)
        mat = [[entries[i] % p if i == j else 0 for j in range(n)] for i in range(n)]
        return QuadForm.from_matrix(mat, p)

    @staticmethod
    def from_poly(n: int, p: int, coeffs: dict) -> "QuadForm":
        """Build from polynomial coefficients {(i, j): c} of c * z_i z_j, i <= j.

        Cross terms pick up the 1/2 polarization factor, so z1*z2 becomes
        off-diagonal entries of value 1/2 mod p.
        """
        half = inverse_mod(2, p)
        mat = [[0] * n for _ in range(n)]
        for (i, j), c in coeffs.items():
            if i == j:
                mat[i][i] = (mat[i][i] + c) % p
            else:
                mat[i][j] = (mat[i][j] + c * half) % p
                mat[j][i] = mat[i][j]
        return QuadForm.from_matrix(mat, p)


@dataclass(frozen=True)
class CongruenceInvariant:
    rank: int
    disc_class: str | None  # SQUARE / NONSQUARE, None for rank 0


def congruence_invariant(q: QuadForm) -> CongruenceInvariant:
    """Rank and discriminant square-class by symmetric Gaussian elimination."""
    p = q.p
    m = [list(row) for row in q.matrix]
    n = q.n
    diag = []
    rows = list(range(n))
    start = 0
    while start < n:
        # find a nonzero pivot on the diagonal, fixing one up if necessary
        piv = next((i for i in range(start, n) if m[i][i] % p), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(start, n) for j in range(i + 1, n) if m[i][j] % p),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # add row/col j into i: new diagonal entry 2*m[i][j] != 0 (p odd)
            for k in range(n):
                m[i][k] = (m[i][k] + m[j][k]) % p
            for k in range(n):
                m[k][i] = (m[k][i] + m[k][j]) % p
            piv = i
        if piv != start:
            m[piv], m[start] = m[start], m[piv]
            for row in m:
                row[piv], row[start] = row[start], row[piv]
        d = m[start][start] % p
        diag.append(d)
        dinv = inverse_mod(d, p)
        for i in range(start + 1, n):
            f = m[i][start] * dinv % p
            if f:
                for k in range(n):
                    m[i][k] = (m[i][k] - f * m[start][k]) % p
                for k in range(n):
                    m[k][i] = (m[k][i] - f * m[k][start]) % p
        start += 1
    rank = len(diag)
    if rank == 0:
        return CongruenceInvariant(0, None)
    disc = 1
    for d in diag:
        disc = disc * d % p
    cls = SQUARE if legendre(disc, p) == 1 else NONSQUARE
    return CongruenceInvariant(rank, cls)


def are_congruent(q1: QuadForm, q2: QuadForm) -> bool:
    """True iff q2 = A^T q1 A for some invertible A (decided by invariants)."""
    if q1.p != q2.p:
        raise ValueError("forms live over different primes")
    if q1.n != q2.n:
        raise ValueError("dimension mismatch")
    return congruence_invariant(q1) == congruence_invariant(q2)


def congruent_by_search(q1: QuadForm, q2: QuadForm) -> bool:
    """Brute-force oracle: search all invertible A for A^T q1 A = q2.

    Only feasible for n <= 2 at small p; kept deliberately independent of the
    invariant computation.
    """
    if q1.p != q2.p or q1.n != q2.n:
        raise ValueError("incomparable forms")
    p, n = q1.p, q1.n
    m1 = np.array(q1.matrix, dtype=np.int64)
    m2 = np.array(q2.matrix, dtype=np.int64)
    for entries in product(range(p), repeat=n * n):
        a = np.array(entries, dtype=np.int64).reshape(n, n)
        if round(np.linalg.det(a)) % p == 0:
            continue
        if np.array_equal((a.T @ m1 @ a) % p, m2):
            return True
    return False


def congruence_orbit_ids(n: int, p: int) -> dict[tuple, int]:
    """Exhaustive congruence classification of all symmetric n x n matrices.

    Closes the whole space under A -> G^T A G for a generating set of GL(n,p);
    the resulting partition is exactly the congruence relation.  Serves as the
    brute-force oracle in dimensions where per-pair search is too slow.
    """
    gens = _gl_generators(n, p)
    ids: dict[tuple, int] = {}
    all_forms = [
        tuple(map(tuple, _sym_from_upper(upper, n, p)))
        for upper in product(range(p), repeat=n * (n + 1) // 2)
    ]
    next_id = 0
    for form in all_forms:
        if form in ids:
            continue
        oid = next_id
        next_id += 1
        stack = [form]
        ids[form] = oid
        while stack:
            cur = np.array(stack.pop(), dtype=np.int64)
            for g in gens:
                moved = (g.T @ cur @ g) % p
                nxt = tuple(tuple(int(v) for v in row) for row in moved)
                if nxt not in ids:
                    ids[nxt] = oid
                    stack.append(nxt)
    return ids


def _sym_from_upper(upper, n, p):
    mat = [[0] * n for _ in range(n)]
    it = iter(upper)
    for i in range(n):
        for j in range(i, n):
            v = next(it)
            mat[i][j] = mat[j][i] = v % p
    return mat


def _gl_generators(n: int, p: int) -> list[np.ndarray]:
    diag = np.eye(n, dtype=np.int64)
    diag[0, 0] = primitive_root(p)
    mats = [diag]
    if n > 1:
        perm = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            perm[i, (i + 1) % n] = 1
        shear = np.eye(n, dtype=np.int64)
        shear[0, 1] = 1
        mats += [perm, shear]
    return mats


def count_congruence_classes(n: int, p: int) -> int:
    """Exact class count: vectorized orbit closure over all n x n symmetric forms.

    The congruence action of GL(n, p) is linearized on the n(n+1)/2 polynomial
    coefficients and closed with the shared BFS engine, so this stays feasible
    through p = 13 in dimension 3.
    """
    from .orbits import enumerate_orbit_ids

    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    gens = _gl_generators(n, p)
    mats = []
    for g in gens:
        cols = []
        for (i, j) in pairs:
            base = QuadForm.from_poly(n, p, {(i, j): 1})
            img = (g.T @ np.array(base.matrix, dtype=np.int64) @ g) % p
            col = []
            for (k, l) in pairs:
                col.append(int(img[k, l]) if k == l else int(2 * img[k, l]) % p)
            cols.append(col)
        mats.append(np.array(cols, dtype=np.int64).T)
    _, seeds, _ = enumerate_orbit_ids([p] * len(pairs), mats)
    return len(seeds)


def representatives(n: int, p: int) -> list[QuadForm]:
    """The 2n+1 diagonal congruence representatives 0, z1^2, g*z1^2, ..."""
    if n > 3:
        raise ValueError("dimensions above 3 not supported")
    g = least_nonsquare(p)
    reps = [QuadForm.diagonal([0] * n, p)]
    for r in range(1, n + 1):
        for lead in (1, g):
            entries = [0] * n
            entries[0] = lead
            for i in range(1, r):
                entries[i] = 1
            reps.append(QuadForm.diagonal(entries, p))
    return reps


def select_h(p: int) -> int:
    """The h in {1, g} with h*z1^2 + z2^2 not congruent to z1*z2."""
    g = least_nonsquare(p)
    z1z2 = QuadForm.from_poly(2, p, {(0, 1): 1})
    for h in (1, g):
        cand = QuadForm.diagonal([h, 1], p)
        if not are_congruent(cand, z1z2):
            return h
    raise AssertionError("one of the two rank-2 classes must avoid z1*z2")
