"""Independent brute-force reference computations used as test oracles.

Nothing here goes through ``AlgebraBasis``; spans are handled with plain
entry arrays, loops and least squares.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

W = cmath.exp(-2j * math.pi / 3)


def fourier3() -> np.ndarray:
    return np.array([[W ** (j * k) for k in range(3)] for j in range(3)]) / math.sqrt(3)


def diag_phases(a1: float, a2: float) -> np.ndarray:
    return np.diag([1, cmath.exp(1j * a1), cmath.exp(1j * a2)])


def uv(a1, a2, b1, b2):
    f = fourier3()
    return diag_phases(a1, a2) @ f, diag_phases(b1, b2) @ f


def random_matrix(rng, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_matrix(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def span_projection(mats, x) -> np.ndarray:
    """Frobenius-orthogonal projection of ``x`` onto span(mats) by least squares."""
    a = np.stack([m.reshape(-1) for m in mats], axis=1)
    c, *_ = np.linalg.lstsq(a, x.reshape(-1), rcond=None)
    return (a @ c).reshape(x.shape)


def span_rank(mats, tol=1e-8) -> int:
    a = np.stack([m.reshape(-1) for m in mats], axis=1)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def commutant_dim_real(mats, d: int, tol=1e-8) -> int:
    """Nullspace dimension of ``x -> ([x, b])_b`` over real coordinates of ``M_d``."""
    cols = []
    for part in (1, 1j):
        for i in range(d):
            for j in range(d):
                x = np.zeros((d, d), dtype=complex)
                x[i, j] = part
                img = np.concatenate([(x @ b - b @ x).reshape(-1) for b in mats])
                cols.append(np.concatenate([img.real, img.imag]))
    a = np.stack(cols, axis=1)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s <= tol * max(1.0, s[0]))) + (a.shape[1] - len(s))


def masa_projector(u: np.ndarray) -> np.ndarray:
    """Projector on column-stacked ``M_3`` onto ``u Delta u^*``."""
    vecs = []
    for i in range(3):
        e = np.zeros((3, 3), dtype=complex)
        e[i, i] = 1
        vecs.append((u @ e @ u.conj().T).reshape(-1, order="F"))
    q = np.stack(vecs, axis=1)
    return q @ q.conj().T


def s0(a1, a2, b1, b2) -> np.ndarray:
    u, v = uv(a1, a2, b1, b2)
    pu, pv = masa_projector(u), masa_projector(v)
    one = np.eye(3).reshape(-1, order="F")[:, None] / math.sqrt(3)
    return pu @ pv @ pu - one @ one.conj().T


def zeta(a1, a2, b1, b2) -> complex:
    t1 = cmath.exp(1j * (a1 - b1))
    t2 = cmath.exp(-1j * (a2 - b2))
    t3 = cmath.exp(-1j * (a1 - b1)) * cmath.exp(1j * (a2 - b2))
    return (t1 + t2 + t3) / 3


def eta(t: float) -> float:
    return 0.0 if t <= 1e-300 else -t * math.log(t)


def entropy_entries(a1, a2, b1, b2) -> float:
    u, v = uv(a1, a2, b1, b2)
    total = 0.0
    for i in range(3):
        for j in range(3):
            entry = sum(u[k, i].conjugate() * v[k, j] for k in range(3))
            total += eta(min(abs(entry) ** 2, 1.0))
    return total / 3


def cos_from_entries(a1, a2, b1, b2) -> float:
    u, v = uv(a1, a2, b1, b2)
    m = np.abs(u.conj().T @ v) ** 2
    return 0.5 * float(np.sum(m**2)) - 0.5


def block_transpose_loops(u: np.ndarray, n: int, k: int) -> np.ndarray:
    out = np.zeros_like(u)
    for al, a, be, b in itertools.product(range(n), range(k), range(n), range(k)):
        out[al * k + a, be * k + b] = u[be * k + a, al * k + b]
    return out


def is_unitary(u, tol=1e-10) -> bool:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


def all_permutation_matrices(size: int):
    for perm in itertools.permutations(range(size)):
        m = np.zeros((size, size), dtype=complex)
        m[list(perm), range(size)] = 1
        yield m


def valid_rho_lam(n: int):
    """All ``(rho, lam)`` (1-indexed) whose ``pi`` is a bijection, by exhaustive search."""
    perms = list(itertools.permutations(range(1, n + 1)))
    for rho in itertools.product(perms, repeat=n):
        for lam in itertools.product(perms, repeat=n):
            images = {(rho[l][j], lam[j][l]) for j in range(n) for l in range(n)}
            if len(images) == n * n:
                yield rho, lam
