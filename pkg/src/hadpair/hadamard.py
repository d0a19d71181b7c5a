"""Complex Hadamard matrices of order 3 and the pairs ``u = D1 F3``, ``v = D2 F3``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .cmatrix import as_cmat, is_unitary, max_norm

TWO_PI = 2 * math.pi
HADAMARD_TOL = 1e-10
PATTERN_TOL = 1e-10

Angle = Union[float, int, str, Fraction]


def omega(n: int = 3) -> complex:
    """Primitive root ``e^{-2 pi i / n}``."""
    return complex(np.exp(-2j * np.pi / n))


def parse_angle(value: Angle) -> float:
    """Radians from a float, or from a ``"p/q"`` string meaning ``(p/q) pi``."""
    if isinstance(value, Fraction):
        return float(value) * math.pi
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            try:
                frac = Fraction(s)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad rational-of-pi angle {value!r}") from exc
            return float(frac) * math.pi
        try:
            return float(s)
        except ValueError as exc:
            raise ValueError(f"bad angle {value!r}") from exc
    return float(value)


def _canon(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class PhasePair:
    """Angles of ``D1 = diag(1, e^{i a1}, e^{i a2})`` and ``D2 = diag(1, e^{i b1}, e^{i b2})``.

    Values are canonicalized to ``[0, 2 pi)``.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            object.__setattr__(self, name, _canon(parse_angle(getattr(self, name))))

    @property
    def d1(self) -> np.ndarray:
        return np.diag([1.0, np.exp(1j * self.alpha1), np.exp(1j * self.alpha2)])

    @property
    def d2(self) -> np.ndarray:
        return np.diag([1.0, np.exp(1j * self.beta1), np.exp(1j * self.beta2)])

    @property
    def z(self) -> tuple[complex, complex]:
        """``(e^{i(a1-b1)}, e^{i(a2-b2)})``."""
        return (
            complex(np.exp(1j * (self.alpha1 - self.beta1))),
            complex(np.exp(1j * (self.alpha2 - self.beta2))),
        )

    def swapped(self) -> "PhasePair":
        return PhasePair(self.beta1, self.beta2, self.alpha1, self.alpha2)

    def to_dict(self) -> dict:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta1": self.beta1,
            "beta2": self.beta2,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PhasePair":
        try:
            return cls(obj["alpha1"], obj["alpha2"], obj["beta1"], obj["beta2"])
        except KeyError as exc:
            raise ValueError(f"PhasePair JSON is missing {exc.args[0]!r}") from exc

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PhasePair":
        return cls(*rng.uniform(0.0, TWO_PI, size=4))


@dataclass(frozen=True)
class HadamardMatrix:
    """Unitary matrix whose entries all have modulus ``1/sqrt(n)``."""

    n: int
    mat: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.mat)
        if m.shape != (self.n, self.n):
            raise ValueError(f"expected {self.n}x{self.n}, got {m.shape}")
        if not is_complex_hadamard(m):
            raise ValueError("matrix is not a complex Hadamard matrix")
        object.__setattr__(self, "mat", m)


def fourier(n: int) -> HadamardMatrix:
    """``F_n`` with entry ``(j, k) = w^{jk} / sqrt(n)``, ``w = e^{-2 pi i/n}``."""
    if n < 1:
        raise ValueError("fourier needs n >= 1")
    j = np.arange(n)
    m = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    return HadamardMatrix(n, m)


def is_complex_hadamard(u) -> bool:
    u = as_cmat(u)
    n = u.shape[0]
    if u.shape[1] != n:
        raise ValueError("is_complex_hadamard needs a square matrix")
    if not is_unitary(u, HADAMARD_TOL):
        return False
    return max_norm(np.abs(u) - 1 / np.sqrt(n)) <= HADAMARD_TOL


def hamming(w) -> int:
    """Number of entries of modulus above ``1e-10``."""
    w = np.asarray(w, dtype=np.complex128).ravel()
    count = int(np.count_nonzero(np.abs(w) > 1e-10))
    if count == 0:
        raise ValueError("hamming number of the zero vector is undefined")
    return count


def lambda_masas(u) -> Fraction:
    """Pimsner-Popa number ``lambda(Delta_n, U Delta_n U^*) = min_i 1/h((U^*)_i)``."""
    u = as_cmat(u)
    if not is_unitary(u, HADAMARD_TOL):
        raise ValueError("lambda_masas needs a unitary matrix")
    ud = u.conj().T
    return min(Fraction(1, hamming(ud[:, i])) for i in range(ud.shape[1]))


def dj_patterns() -> list[np.ndarray]:
    """The diagonals ``I``, ``diag(1, w, w^2)``, ``diag(1, w^2, w)``."""
    w = omega(3)
    return [
        np.array([1, 1, 1], dtype=np.complex128),
        np.array([1, w, w * w], dtype=np.complex128),
        np.array([1, w * w, w], dtype=np.complex128),
    ]


def _diagonal_unitary(d) -> np.ndarray:
    d = as_cmat(d)
    if d.shape != (3, 3):
        raise ValueError("expected a 3x3 diagonal unitary")
    if max_norm(d - np.diag(np.diag(d))) > PATTERN_TOL:
        raise ValueError("matrix is not diagonal")
    diag = np.diag(d)
    if max_norm(np.abs(diag) - 1) > PATTERN_TOL:
        raise ValueError("diagonal matrix is not unitary")
    return diag


def sim_equiv3(d1, d2) -> bool:
    """Whether ``D1 F3 ~ D2 F3``, i.e. ``D2^* D1`` is a unimodular multiple of some ``D_j``."""
    ratio = np.conj(_diagonal_unitary(d2)) * _diagonal_unitary(d1)
    ratio = ratio / ratio[0]
    return any(max_norm(ratio - p) <= PATTERN_TOL for p in dj_patterns())


class UVPair(NamedTuple):
    u: HadamardMatrix
    v: HadamardMatrix
    distinct: bool


def build_uv(p: PhasePair) -> UVPair:
    f = fourier(3).mat
    u = HadamardMatrix(3, p.d1 @ f)
    v = HadamardMatrix(3, p.d2 @ f)
    return UVPair(u, v, not sim_equiv3(p.d1, p.d2))


def is_distinct(p: PhasePair) -> bool:
    return not sim_equiv3(p.d1, p.d2)
