"""Unitaries of the basic-construction tower and the block permutations ``W_{2k}``.

Embeddings follow ``x -> I_n (x) x``: the newest tensor factor is on the right
of the old algebra, so ``M_3`` sits inside ``M_3 (x) M_3`` as block-diagonal
copies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cmatrix import (
    AlgebraBasis,
    as_cmat,
    conjugate,
    diagonal_masa,
    full_matrix_algebra,
    kron_all,
    matrix_unit,
    max_norm,
    scalars,
    tensor,
)
from .exceptions import VerificationError
from .hadamard import PhasePair, build_uv, fourier

MAX_LEVEL = 7
MAX_W_K = 3


def _mat(u) -> np.ndarray:
    return as_cmat(getattr(u, "mat", u))


def _eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def sigma1() -> np.ndarray:
    """Cyclic permutation ``E21 + E32 + E13`` (1-indexed), i.e. ``(123)``."""
    return matrix_unit(1, 0, 3) + matrix_unit(2, 1, 3) + matrix_unit(0, 2, 3)


def sigma2() -> np.ndarray:
    """``E31 + E12 + E23`` (1-indexed), i.e. ``(132)``."""
    return matrix_unit(2, 0, 3) + matrix_unit(0, 1, 3) + matrix_unit(1, 2, 3)


def gamma1() -> np.ndarray:
    """Transposition ``(23)``: ``E11 + E23 + E32``."""
    return matrix_unit(0, 0, 3) + matrix_unit(1, 2, 3) + matrix_unit(2, 1, 3)


def gamma2() -> np.ndarray:
    """``E12 + E23 + E31``."""
    return matrix_unit(0, 1, 3) + matrix_unit(1, 2, 3) + matrix_unit(2, 0, 3)


def d_matrix(u) -> np.ndarray:
    """``D_u = sqrt(n) sum_ij conj(u_ij) E_ii (x) E_jj``."""
    u = _mat(u)
    n = u.shape[0]
    return np.sqrt(n) * np.diag(u.conj().reshape(-1))


@dataclass(frozen=True)
class TowerUnitary:
    level: int
    mat: np.ndarray

    @property
    def size(self) -> int:
        return self.mat.shape[0]


def tower_unitary(u, m: int) -> TowerUnitary:
    """``u_m`` from ``u_0 = u``, ``u_{2k+1} = (I (x) u_{2k})(D_u (x) I^(k))``,
    ``u_{2k} = u_{2k-1}(u (x) I^(k))``.

    ``u_m`` has size ``3^(ceil(m/2) + 1)`` for ``n = 3``.
    """
    if not 0 <= m <= MAX_LEVEL:
        raise ValueError(f"tower level must lie in 0..{MAX_LEVEL}, got {m}")
    u = _mat(u)
    n = u.shape[0]
    du = d_matrix(u)
    cur = u
    for level in range(1, m + 1):
        k = (level - 1) // 2
        if level % 2:
            cur = np.kron(_eye(n), cur) @ np.kron(du, _eye(n**k))
        else:
            cur = cur @ np.kron(u, _eye(n ** (k + 1)))
    return TowerUnitary(m, cur)


def w_block(k: int) -> np.ndarray:
    """``W_2 = bl-diag(I, sigma1, sigma2)`` and
    ``W_{2k} = prod_{j=0}^{k-1} I^(k-1-j) (x) W_2 (x) I^(j)``, left to right."""
    if not 1 <= k <= MAX_W_K:
        raise ValueError(f"w_block needs 1 <= k <= {MAX_W_K}, got {k}")
    w2 = np.zeros((9, 9), dtype=np.complex128)
    w2[0:3, 0:3] = _eye(3)
    w2[3:6, 3:6] = sigma1()
    w2[6:9, 6:9] = sigma2()
    out = _eye(3 ** (k + 1))
    for j in range(k):
        out = out @ kron_all(_eye(3 ** (k - 1 - j)), w2, _eye(3**j))
    return out


def flip(n: int) -> np.ndarray:
    """Swap on ``C^n (x) C^n``: ``sum_ij E_ij (x) E_ji``."""
    v = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            v[i * n + j, j * n + i] = 1.0
    return v


def q_split(x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split ``x`` by cyclic diagonals: ``Q0`` keeps ``j - i = 0``, ``Q1`` keeps ``j - i = 1``,
    ``Q2`` keeps ``j - i = 2`` (mod 3)."""
    x = as_cmat(x)
    if x.shape != (3, 3):
        raise ValueError("q_split needs a 3x3 matrix")
    i, j = np.indices((3, 3))
    shift = (j - i) % 3
    return tuple(np.where(shift == s, x, 0) for s in range(3))


def circulant_conjugation(x) -> np.ndarray:
    """``(F3^* (x) I) D_F^* (I (x) x) D_F (F3 (x) I)``, with its block-circulant form checked."""
    x = as_cmat(x)
    f = fourier(3).mat
    df = d_matrix(f)
    left = np.kron(f, _eye(3))
    out = left.conj().T @ df.conj().T @ np.kron(_eye(3), x) @ df @ left
    q = q_split(x)
    expected = np.block([[q[0], q[1], q[2]], [q[2], q[0], q[1]], [q[1], q[2], q[0]]])
    if max_norm(out - expected) > 1e-10:
        raise VerificationError(
            "circulant conjugation lost its block structure (check the root-of-unity sign)"
        )
    return out


def tower_identity_residual(p: PhasePair, k: int) -> float:
    """Max-norm of ``u_{2k}^* v_{2k} - W_{2k} (u^* v (x) I^(k)) W_{2k}^*``."""
    u, v, _ = build_uv(p)
    u2k = tower_unitary(u, 2 * k).mat
    v2k = tower_unitary(v, 2 * k).mat
    w = w_block(k)
    rhs = w @ np.kron(u.mat.conj().T @ v.mat, _eye(3**k)) @ w.conj().T
    return max_norm(u2k.conj().T @ v2k - rhs)


def verify_tower_identity(p: PhasePair, k: int) -> bool:
    return tower_identity_residual(p, k) <= 1e-9


# -- algebras of the tower ------------------------------------------------------


def masa_of(u) -> AlgebraBasis:
    """``Ad_u(Delta_n)``."""
    u = _mat(u)
    return conjugate(diagonal_masa(u.shape[0]), u)


def even_algebra(u, k: int) -> AlgebraBasis:
    """``B_{2k} = Ad_{u_{2k}}(Delta_3 (x) M_3^(k))``."""
    base = tensor(diagonal_masa(3), full_matrix_algebra(3**k)) if k else diagonal_masa(3)
    return conjugate(base, tower_unitary(u, 2 * k).mat)


def left_scalar_algebra(n: int, m: int) -> AlgebraBasis:
    """``C (x) M_m`` in ``M_{nm}``."""
    return tensor(scalars(n), full_matrix_algebra(m))


def right_scalar_algebra(n: int, m: int) -> AlgebraBasis:
    """``M_n (x) C`` in ``M_{nm}``."""
    return tensor(full_matrix_algebra(n), scalars(m))


def slice_algebra(u) -> AlgebraBasis:
    """``Ad_{u_2 W_2}(C (x) M_3)``, the intersection at level two."""
    return conjugate(left_scalar_algebra(3, 3), tower_unitary(u, 2).mat @ w_block(1))

