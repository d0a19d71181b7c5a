"""Dense complex matrices and the finite-dimensional *-algebra toolkit.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``.  A
subalgebra of ``M_d`` is carried by :class:`AlgebraBasis`, whose basis is
orthonormal for the normalized-trace inner product ``<x, y> = ntr(y^* x)``.

Superoperators act on column-stacked coordinates, so that
``vec(A X B) = (B^T (x) A) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PIVOT_TOL = 1e-8
UNITARY_TOL = 1e-10


def as_cmat(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_cmat(a), as_cmat(b))


def kron_all(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_cmat(m))
    return out


def dagger(a) -> np.ndarray:
    return as_cmat(a).conj().T


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def matrix_unit(i: int, j: int, n: int) -> np.ndarray:
    """``E_ij`` in ``M_n`` (0-indexed)."""
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def ntr(a) -> complex:
    """Normalized trace ``(1/d) sum_i a_ii``."""
    m = as_cmat(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"ntr needs a square matrix, got {m.shape}")
    return complex(np.trace(m) / m.shape[0])


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = as_cmat(u)
    if u.shape[0] != u.shape[1]:
        return False
    return max_norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def ad(u, x) -> np.ndarray:
    """``Ad_u(x) = u x u^*``."""
    u = as_cmat(u)
    return u @ as_cmat(x) @ u.conj().T


def eig_hermitian(a) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = as_cmat(a)
    if m.shape[0] != m.shape[1] or max_norm(m - m.conj().T) > 1e-8:
        raise ValueError("eig_hermitian needs a Hermitian matrix")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def vec(x) -> np.ndarray:
    """Column-stacking vectorization."""
    return as_cmat(x).reshape(-1, order="F")


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v, dtype=np.complex128).reshape(d, d, order="F")


def conjugation_superop(u) -> np.ndarray:
    """Matrix of ``x -> u x u^*`` on column-stacked coordinates."""
    u = as_cmat(u)
    return np.kron(u.conj(), u)


# -- matrix JSON ---------------------------------------------------------------


def matrix_to_json(a) -> dict:
    m = as_cmat(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    m = re + 1j * im
    if m.shape != (obj["rows"], obj["cols"]):
        raise ValueError(
            f"matrix JSON declares {obj['rows']}x{obj['cols']} but holds {m.shape}"
        )
    return m


# -- orthonormal bases ---------------------------------------------------------


def _orthonormal_extend(q: np.ndarray, candidates: Iterable[np.ndarray], tol: float):
    """Two-pass Gram-Schmidt of unit-normalized ``candidates`` against ``q``.

    Candidates whose own norm is below ``tol`` are roundoff (e.g. a product
    that vanishes exactly) and are dropped before normalization.
    Returns the enlarged column matrix and the number of accepted vectors.
    """
    cols = [q[:, i] for i in range(q.shape[1])]
    added = 0
    for c in candidates:
        nrm = np.linalg.norm(c)
        if nrm <= tol:
            continue
        w = c / nrm
        for _ in range(2):
            if cols:
                basis = np.stack(cols, axis=1)
                w = w - basis @ (basis.conj().T @ w)
        r = np.linalg.norm(w)
        if r > tol:
            cols.append(w / r)
            added += 1
    n = q.shape[0]
    if not cols:
        return np.zeros((n, 0), dtype=np.complex128), 0
    return np.stack(cols, axis=1), added


@dataclass(frozen=True)
class AlgebraBasis:
    """Orthonormal basis of a *-subalgebra of ``M_d``.

    ``basis`` has shape ``(m, d, d)`` with ``ntr(b_j^* b_i) = delta_ij``.
    """

    ambient_dim: int
    basis: np.ndarray
    contains_identity: bool

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @cached_property
    def vectors(self) -> np.ndarray:
        """Euclidean-orthonormal column-stacked vectors, shape ``(d^2, m)``."""
        d = self.ambient_dim
        if self.dim == 0:
            return np.zeros((d * d, 0), dtype=np.complex128)
        v = self.basis.transpose(0, 2, 1).reshape(self.dim, d * d).T
        return v / np.sqrt(d)

    @cached_property
    def projector(self) -> np.ndarray:
        q = self.vectors
        return q @ q.conj().T

    @classmethod
    def from_vectors(cls, q: np.ndarray, d: int) -> "AlgebraBasis":
        """Wrap Euclidean-orthonormal column-stacked vectors."""
        q = np.asarray(q, dtype=np.complex128).reshape(d * d, -1)
        mats = np.sqrt(d) * q.T.reshape(-1, d, d).transpose(0, 2, 1)
        ident = vec(np.eye(d)) / np.sqrt(d)
        res = np.linalg.norm(ident - q @ (q.conj().T @ ident))
        return cls(d, np.ascontiguousarray(mats), bool(res <= 1e-9))

    def residual(self, x) -> float:
        """Max-norm distance from ``x`` to the span."""
        x = as_cmat(x)
        return max_norm(x - cond_exp(self, x, _check_unital=False))

    def contains(self, x, tol: float = 1e-8) -> bool:
        return self.residual(x) <= tol


def algebra_from_span(mats: Sequence, d: int) -> AlgebraBasis:
    """Orthonormalize the span of matrices already known to form a *-algebra."""
    cands = [vec(m) for m in mats]
    q, _ = _orthonormal_extend(np.zeros((d * d, 0), dtype=np.complex128), cands, PIVOT_TOL)
    return AlgebraBasis.from_vectors(q, d)


def tensor(a: AlgebraBasis, b: AlgebraBasis) -> AlgebraBasis:
    """``A (x) B`` inside ``M_{d_a d_b}``; ``ntr`` is multiplicative so the basis stays orthonormal."""
    mats = np.einsum("iab,jcd->ijacbd", a.basis, b.basis)
    d = a.ambient_dim * b.ambient_dim
    return AlgebraBasis(d, mats.reshape(a.dim * b.dim, d, d),
                        a.contains_identity and b.contains_identity)


def conjugate(a: AlgebraBasis, u) -> AlgebraBasis:
    """``Ad_u(A)`` for a unitary ``u``."""
    u = as_cmat(u)
    mats = u @ a.basis @ u.conj().T
    return AlgebraBasis(a.ambient_dim, mats, a.contains_identity)


def algebra_closure(generators: Sequence, ambient_dim: int) -> AlgebraBasis:
    """Smallest unital *-subalgebra of ``M_d`` containing ``generators``.

    Words in the generators and their adjoints are accumulated by left
    multiplication until no new direction survives the pivot threshold.
    """
    d = ambient_dim
    gens = []
    for g in generators:
        g = as_cmat(g)
        if g.shape != (d, d):
            raise ValueError(f"generator of shape {g.shape} is not in M_{d}")
        nrm = np.linalg.norm(g)
        if nrm > 0:
            g = g / nrm
            gens.extend([g, g.conj().T])
    q, _ = _orthonormal_extend(
        np.zeros((d * d, 0), dtype=np.complex128), [vec(np.eye(d))], PIVOT_TOL
    )
    frontier = [unvec(q[:, 0], d)]
    while frontier:
        cands = [vec(g @ b) for g in gens for b in frontier]
        n0 = q.shape[1]
        q, added = _orthonormal_extend(q, cands, PIVOT_TOL)
        frontier = [unvec(q[:, i], d) for i in range(n0, n0 + added)]
    return AlgebraBasis.from_vectors(q, d)


def commutant(a: AlgebraBasis, chunk: int = 8) -> AlgebraBasis:
    """``{x in M_d : x b = b x for all b}`` as the nullspace of the stacked commutators."""
    d = a.ambient_dim
    eye = np.eye(d)
    r = np.zeros((0, d * d), dtype=np.complex128)
    mats = a.basis / np.sqrt(d)
    for start in range(0, a.dim, chunk):
        blocks = [np.kron(eye, b) - np.kron(b.T, eye) for b in mats[start:start + chunk]]
        stacked = np.vstack([r] + blocks)
        r = np.linalg.qr(stacked, mode="r")
    if r.shape[0] == 0:
        return AlgebraBasis.from_vectors(np.eye(d * d, dtype=np.complex128), d)
    _, s, vh = np.linalg.svd(r)
    s_full = np.zeros(d * d)
    s_full[: s.size] = s
    null = vh.conj().T[:, s_full <= PIVOT_TOL]
    return AlgebraBasis.from_vectors(null, d)


def intersect(a: AlgebraBasis, b: AlgebraBasis) -> AlgebraBasis:
    """Subspace intersection of two subalgebras of the same ``M_d``."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: M_{a.ambient_dim} vs M_{b.ambient_dim}"
        )
    d = a.ambient_dim
    qa, qb = a.vectors, b.vectors
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return AlgebraBasis(d, np.zeros((0, d, d), dtype=np.complex128), False)
    # singular values of (I - P_b) Q_a are the sines of the principal angles
    resid = qa - qb @ (qb.conj().T @ qa)
    _, s, vh = np.linalg.svd(resid, full_matrices=True)
    s_full = np.zeros(qa.shape[1])
    s_full[: s.size] = s
    coeffs = vh.conj().T[:, s_full <= PIVOT_TOL]
    return AlgebraBasis.from_vectors(qa @ coeffs, d)


def same_span(a: AlgebraBasis, b: AlgebraBasis) -> float:
    """Residual of span equality; ``inf`` when the dimensions differ."""
    if a.ambient_dim != b.ambient_dim or a.dim != b.dim:
        return float("inf")
    qa, qb = a.vectors, b.vectors
    return max_norm(qb - qa @ (qa.conj().T @ qb))


def cond_exp(a: AlgebraBasis, x, _check_unital: bool = True) -> np.ndarray:
    """Trace-preserving conditional expectation ``E(x) = sum_i ntr(b_i^* x) b_i``."""
    if _check_unital and not a.contains_identity:
        raise ValueError("conditional expectation needs a unital subalgebra")
    d = a.ambient_dim
    q = a.vectors
    return unvec(q @ (q.conj().T @ vec(x)), d)


@dataclass(frozen=True)
class SuperOp:
    """Linear map on ``M_d`` as a ``d^2 x d^2`` matrix on column-stacked coordinates."""

    dim: int
    matrix: np.ndarray

    def __call__(self, x) -> np.ndarray:
        return unvec(self.matrix @ vec(x), self.dim)

    def __matmul__(self, other: "SuperOp") -> "SuperOp":
        return SuperOp(self.dim, self.matrix @ other.matrix)

    def __sub__(self, other: "SuperOp") -> "SuperOp":
        return SuperOp(self.dim, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "SuperOp":
        return SuperOp(self.dim, scalar * self.matrix)

    __rmul__ = __mul__


def superop_of_cond_exp(a: AlgebraBasis) -> SuperOp:
    if not a.contains_identity:
        raise ValueError("conditional expectation needs a unital subalgebra")
    return SuperOp(a.ambient_dim, a.projector)


def scalars(d: int) -> AlgebraBasis:
    """``C . I`` inside ``M_d``."""
    return AlgebraBasis(d, np.eye(d, dtype=np.complex128)[None], True)


def full_matrix_algebra(d: int) -> AlgebraBasis:
    mats = np.zeros((d * d, d, d), dtype=np.complex128)
    i, j = np.divmod(np.arange(d * d), d)
    mats[np.arange(d * d), i, j] = np.sqrt(d)
    return AlgebraBasis(d, mats, True)


def diagonal_masa(d: int) -> AlgebraBasis:
    """``Delta_d``, the diagonal matrices."""
    mats = np.zeros((d, d, d), dtype=np.complex128)
    mats[np.arange(d), np.arange(d), np.arange(d)] = np.sqrt(d)
    return AlgebraBasis(d, mats, True)
