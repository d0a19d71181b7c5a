"""Bi-unitary matrices, permutation bi-unitaries and the vertex-model witness.

An element ``u^{alpha a}_{beta b}`` of ``M_n (x) M_k`` sits at flat row
``alpha*k + a`` and column ``beta*k + b`` (0-indexed).  Permutations in a
:class:`PermBiunitary` are tuples of 1-indexed images.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .cmatrix import as_cmat, is_unitary, max_norm
from .exceptions import NotDistinctError, NotProductFormError, VerificationError
from .hadamard import PhasePair, build_uv, fourier
from .tower import flip, tower_unitary, w_block

Perm = tuple[int, ...]


def block_transpose(u, n: int, k: int) -> np.ndarray:
    """Swap the ``M_n`` row and column indices: ``u~^{alpha a}_{beta b} = u^{beta a}_{alpha b}``."""
    u = as_cmat(u)
    if u.shape != (n * k, n * k):
        raise ValueError(f"block_transpose expects {n*k}x{n*k}, got {u.shape}")
    return u.reshape(n, k, n, k).transpose(2, 1, 0, 3).reshape(n * k, n * k)


def is_biunitary(u, n: int, k: int) -> bool:
    u = as_cmat(u)
    return is_unitary(u, 1e-10) and is_unitary(block_transpose(u, n, k), 1e-10)


def _is_perm(p: Perm, n: int) -> bool:
    return sorted(p) == list(range(1, n + 1))


@dataclass(frozen=True)
class PermBiunitary:
    """``(rho, lam)`` with ``pi(j, l) = (rho_l(j), lam_j(l))`` a bijection of ``Omega_n^2``."""

    n: int
    rho: tuple[Perm, ...]
    lam: tuple[Perm, ...]

    def __post_init__(self):
        rho = tuple(tuple(int(x) for x in r) for r in self.rho)
        lam = tuple(tuple(int(x) for x in l) for l in self.lam)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "lam", lam)
        n = self.n
        if len(rho) != n or len(lam) != n:
            raise ValueError(f"need {n} permutations in each of rho and lam")
        if not all(_is_perm(r, n) for r in rho + lam):
            raise ValueError("rho and lam entries must be permutations of 1..n")
        if len(set(self.pi().values())) != n * n:
            raise ValueError("pi(j, l) = (rho_l(j), lam_j(l)) is not a bijection")

    def pi(self) -> dict[tuple[int, int], tuple[int, int]]:
        n = self.n
        return {
            (j, l): (self.rho[l - 1][j - 1], self.lam[j - 1][l - 1])
            for j in range(1, n + 1)
            for l in range(1, n + 1)
        }

    def to_dict(self) -> dict:
        return {"n": self.n, "rho": [list(r) for r in self.rho], "lam": [list(l) for l in self.lam]}

    @classmethod
    def from_dict(cls, obj: dict) -> "PermBiunitary":
        return cls(int(obj["n"]), obj["rho"], obj["lam"])


def identity_codec(n: int) -> PermBiunitary:
    ident = tuple(range(1, n + 1))
    return PermBiunitary(n, (ident,) * n, (ident,) * n)


def w2_codec() -> PermBiunitary:
    """``rho = (id, id, id)``, ``lam = (id, (123), (132))``."""
    ident = (1, 2, 3)
    return PermBiunitary(3, (ident,) * 3, (ident, (2, 3, 1), (3, 1, 2)))


def perm_encode(pb: PermBiunitary) -> np.ndarray:
    """``u^{ik}_{jl} = delta_{i, rho_l(j)} delta_{k, lam_j(l)}``."""
    n = pb.n
    u = np.zeros((n * n, n * n), dtype=np.complex128)
    for (j, l), (i, k) in pb.pi().items():
        u[(i - 1) * n + (k - 1), (j - 1) * n + (l - 1)] = 1.0
    return u


def perm_decode(u, n: int) -> PermBiunitary:
    u = as_cmat(u)
    if u.shape != (n * n, n * n):
        raise ValueError(f"perm_decode expects {n*n}x{n*n}, got {u.shape}")
    ones = np.isclose(u, 1.0, atol=1e-10)
    zeros = np.isclose(u, 0.0, atol=1e-10)
    if not (np.all(ones | zeros) and np.all(ones.sum(0) == 1) and np.all(ones.sum(1) == 1)):
        raise ValueError("matrix is not a permutation matrix")
    rows = ones.argmax(axis=0)
    rho = [[0] * n for _ in range(n)]
    lam = [[0] * n for _ in range(n)]
    for col, row in enumerate(rows):
        j, l = divmod(col, n)
        i, k = divmod(int(row), n)
        rho[l][j] = i + 1
        lam[j][l] = k + 1
    if not all(_is_perm(tuple(p), n) for p in rho + lam):
        raise NotProductFormError(
            "permutation matrix is not of the form delta_{i,rho_l(j)} delta_{k,lam_j(l)}"
        )
    return PermBiunitary(n, rho, lam)


def enumerate_perm_biunitaries(n: int) -> Iterator[PermBiunitary]:
    """Every valid ``(rho, lam)`` by brute force over ``S_n^n x S_n^n``."""
    perms = list(itertools.permutations(range(1, n + 1)))
    for rho in itertools.product(perms, repeat=n):
        for lam in itertools.product(perms, repeat=n):
            pi = {(rho[l][j], lam[j][l]) for j in range(n) for l in range(n)}
            if len(pi) == n * n:
                yield PermBiunitary(n, rho, lam)


@dataclass(frozen=True)
class VertexWitness:
    biunitary: np.ndarray
    factor_check: bool
    factor_residual: float
    perm_part: PermBiunitary


def vertex_witness(p: PhasePair) -> VertexWitness:
    """Exhibit ``u_2 W_2 V_2 = (F3^* (x) u) W_2`` and decode the permutation part ``W_2``."""
    u, _, distinct = build_uv(p)
    if not distinct:
        raise NotDistinctError("u ~ v: the pair does not generate distinct subfactors")
    w2 = w_block(1)
    bu = tower_unitary(u, 2).mat @ w2 @ flip(3)
    factored = np.kron(fourier(3).mat.conj().T, u.mat) @ w2
    resid = max_norm(bu - factored)
    if not is_biunitary(bu, 3, 3) or resid > 1e-10:
        raise VerificationError(
            f"u_2 W_2 V_2 failed the bi-unitary factorization (residual {resid:.3e})"
        )
    return VertexWitness(bu, True, resid, perm_decode(w2, 3))


@dataclass(frozen=True)
class PrincipalGraph:
    upper: tuple[str, ...]
    lower: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    root: str
    depth: int

    def to_dict(self) -> dict:
        return {
            "upper": list(self.upper),
            "lower": list(self.lower),
            "edges": [list(e) for e in self.edges],
            "root": self.root,
            "depth": self.depth,
        }


def _eccentricity(root: str, edges) -> int:
    adj: dict[str, set[str]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return max(dist.values())


def depth2_report(pb: PermBiunitary) -> PrincipalGraph:
    """Principal graph for the ``W_2`` codec: ``K_{3,3}`` rooted at an upper vertex.

    Only this codec is supported; other permutation bi-unitaries raise ``ValueError``.
    """
    if pb != w2_codec():
        raise ValueError("principal graph is only pinned for the W_2 codec")
    upper = ("*", "a1", "a2")
    lower = ("p1", "p2", "p3")
    edges = tuple((a, b) for a in upper for b in lower)
    return PrincipalGraph(upper, lower, edges, "*", _eccentricity("*", edges))
