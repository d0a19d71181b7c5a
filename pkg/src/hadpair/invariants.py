"""Invariants of a pair ``u = D1 F3``, ``v = D2 F3``: Pimsner-Popa number, angles,
relative entropy, commuting-square and commuting-cube checks, relative commutant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .biunitary import depth2_report, vertex_witness
from .cmatrix import (
    AlgebraBasis,
    SuperOp,
    commutant,
    cond_exp,
    diagonal_masa,
    eig_hermitian,
    intersect,
    kron,
    max_norm,
    ntr,
    same_span,
    scalars,
    superop_of_cond_exp,
    tensor,
)
from .exceptions import NotDistinctError, VerificationError
from .hadamard import PhasePair, build_uv, is_distinct, lambda_masas, omega
from .tower import (
    even_algebra,
    left_scalar_algebra,
    masa_of,
    sigma1,
    slice_algebra,
    tower_identity_residual,
)

CS_MARKER = "π/2 (commuting square)"
SQUARE_TOL = 1e-9
PATTERN_TOL = 1e-10
LN3 = math.log(3)


def _require_distinct(p: PhasePair) -> None:
    if not is_distinct(p):
        raise NotDistinctError("u ~ v: the pair does not generate distinct subfactors")


def eta(t: float) -> float:
    """``-t log t`` on ``[0, 1]`` with ``eta(0) = 0``; rounding outside the interval is clipped."""
    t = min(t, 1.0)
    return 0.0 if t <= 0.0 else -t * math.log(t)


def zeta(p: PhasePair) -> complex:
    z1, z2 = p.z
    return (z1 + z2.conjugate() + z1.conjugate() * z2) / 3


@dataclass(frozen=True)
class GammaCoeffs:
    gamma0: complex
    gamma1: complex
    gamma2: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.gamma0, self.gamma1, self.gamma2)

    def norm_sq(self) -> float:
        return sum(abs(g) ** 2 for g in self.as_tuple())

    def reconstruct(self) -> np.ndarray:
        """``g0 I + g1 diag(1, w, w^2) + g2 diag(1, w^2, w)``."""
        w = omega(3)
        k = np.arange(3)
        return np.diag(self.gamma0 + self.gamma1 * w**k + self.gamma2 * w ** (2 * k))


def gamma_coeffs(p: PhasePair) -> GammaCoeffs:
    """Coefficients of ``D1^* D2`` in the basis ``I, diag(1,w,w^2), diag(1,w^2,w)``."""
    w = omega(3)
    z1, z2 = p.z
    d1, d2 = z1.conjugate(), z2.conjugate()
    return GammaCoeffs(
        (1 + d1 + d2) / 3,
        (1 + d1 * w * w + d2 * w) / 3,
        (1 + d1 * w + d2 * w * w) / 3,
    )


def _overlap(p: PhasePair) -> np.ndarray:
    """``|(u^* v)_ij|^2``."""
    u, v, _ = build_uv(p)
    return np.abs(u.mat.conj().T @ v.mat) ** 2


@dataclass(frozen=True)
class InteriorAngle:
    cos_closed: float
    cos_basis: float

    @property
    def residual(self) -> float:
        return abs(self.cos_closed - self.cos_basis)


def interior_angle(p: PhasePair) -> InteriorAngle:
    """Cosine of the interior angle by the closed form and by the Masa-basis sum.

    The exterior angle coincides with the interior one for these pairs.
    """
    _require_distinct(p)
    z1, z2 = p.z
    closed = abs(z1.conjugate() + z2 + z1 * z2.conjugate()) ** 2 / 9
    u, v, _ = build_uv(p)
    lam = [u.mat @ (np.sqrt(3) * np.diag(e)) @ u.mat.conj().T for e in np.eye(3)]
    mu = [v.mat @ (np.sqrt(3) * np.diag(e)) @ v.mat.conj().T for e in np.eye(3)]
    total = sum(
        (ntr(a.conj().T @ b) * ntr(b.conj().T @ a)).real for a in lam for b in mu
    )
    return InteriorAngle(float(closed), float(total / 2 - 0.5))


def s0_build(p: PhasePair) -> SuperOp:
    """``E_u E_v E_u - E_C`` on ``M_3``, with ``E_u`` the expectation onto ``Ad_u(Delta_3)``."""
    _require_distinct(p)
    u, v, _ = build_uv(p)
    eu = superop_of_cond_exp(masa_of(u))
    ev = superop_of_cond_exp(masa_of(v))
    return eu @ ev @ eu - superop_of_cond_exp(scalars(3))


@dataclass(frozen=True)
class SWCheck:
    angle: Union[float, str]
    zeta_abs: float
    idempotency_residual: float
    spectrum: tuple[float, ...]
    spectrum_residual: float


def sw_check(p: PhasePair) -> SWCheck:
    """Sano-Watatani angle with the ``S0^2 = |zeta|^2 S0`` and spectral cross-checks."""
    s0 = s0_build(p).matrix
    za = abs(zeta(p))
    idem = max_norm(s0 @ s0 - za**2 * s0)
    eigs = eig_hermitian(s0)
    if max_norm(s0) <= SQUARE_TOL:
        return SWCheck(CS_MARKER, za, idem, tuple(float(e) for e in eigs), 0.0)
    if idem > 1e-6:
        raise VerificationError(f"S0^2 != |zeta|^2 S0 (residual {idem:.3e})")
    nonzero = eigs[eigs > za**2 / 2]
    spec_res = float(np.max(np.abs(nonzero - za**2))) if nonzero.size else float("inf")
    if spec_res > 1e-8:
        raise VerificationError(f"nonzero spectrum of S0 is not {{|zeta|^2}} ({spec_res:.3e})")
    return SWCheck(float(math.acos(min(za, 1.0))), za, idem, tuple(float(e) for e in eigs), spec_res)


def sw_angle(p: PhasePair) -> Union[float, str]:
    return sw_check(p).angle


@dataclass(frozen=True)
class EntropyForms:
    closed: float
    matrix: float

    @property
    def residual(self) -> float:
        return abs(self.closed - self.matrix)


def entropy_forms(p: PhasePair) -> EntropyForms:
    closed = sum(eta(abs(g) ** 2) for g in gamma_coeffs(p).as_tuple())
    matrix = sum(eta(float(t)) for t in _overlap(p).ravel()) / 3
    return EntropyForms(float(closed), float(matrix))


def entropy_h(p: PhasePair) -> float:
    """Relative entropy ``h(R_u | R_v) = (1/3) sum_ij eta(|(u^* v)_ij|^2)``."""
    forms = entropy_forms(p)
    if forms.residual > 1e-6:
        raise VerificationError(
            f"entropy closed form and matrix form disagree by {forms.residual:.3e}"
        )
    return forms.matrix


_CS_PATTERNS = (("4/3", "4/3"), ("2/3", "2/3"), ("0", "4/3"), ("0", "2/3"), ("4/3", "0"), ("2/3", "0"))


def commuting_square_pairs() -> list[PhasePair]:
    """The six pairs with ``(e^{i(a1-b1)}, e^{i(a2-b2)})`` in
    ``{(w,w), (w^2,w^2), (1,w), (1,w^2), (w,1), (w^2,1)}``, realized with ``beta = 0``."""
    return [PhasePair(a1, a2, 0, 0) for a1, a2 in _CS_PATTERNS]


def is_commuting_square_pair(p: PhasePair) -> bool:
    w = omega(3)
    targets = [(w, w), (w * w, w * w), (1, w), (1, w * w), (w, 1), (w * w, 1)]
    z1, z2 = p.z
    return any(abs(z1 - a) <= PATTERN_TOL and abs(z2 - b) <= PATTERN_TOL for a, b in targets)


def _contained(small: AlgebraBasis, big: AlgebraBasis, tol: float = 1e-8) -> bool:
    q = small.vectors
    return max_norm(q - big.projector @ q) <= tol


def commuting_square_residual(n: AlgebraBasis, p: AlgebraBasis, q: AlgebraBasis) -> float:
    """``max(|E_P E_Q - E_N|, |E_Q E_P - E_N|)`` after checking ``N`` sits in ``P`` and ``Q``."""
    if not (_contained(n, p) and _contained(n, q)):
        raise ValueError("commuting-square check needs N inside both P and Q")
    ep, eq, en = p.projector, q.projector, n.projector
    return max(max_norm(ep @ eq - en), max_norm(eq @ ep - en))


def check_commuting_square(n: AlgebraBasis, p: AlgebraBasis, q: AlgebraBasis, m_dim: int) -> bool:
    if {n.ambient_dim, p.ambient_dim, q.ambient_dim} != {m_dim}:
        raise ValueError(f"all algebras must live in M_{m_dim}")
    return commuting_square_residual(n, p, q) <= SQUARE_TOL


def floor_square_residual(p: PhasePair) -> float:
    u, v, _ = build_uv(p)
    return commuting_square_residual(scalars(3), masa_of(u), masa_of(v))


@dataclass(frozen=True)
class CubeCheck:
    adjacent_faces: bool
    slice: bool
    floor: bool
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "adjacent_faces": self.adjacent_faces,
            "slice": self.slice,
            "floor": self.floor,
        }


def check_commuting_cube(p: PhasePair) -> CubeCheck:
    """Adjacent faces ``(B_0 ⊂ A_0, B_1 ⊂ A_1)`` for ``u`` and ``v``, the slice
    ``(C_0 ⊂ A_0, C_1 ⊂ A_1)`` and the floor ``(C ⊂ Ad_u Delta, Ad_v Delta ⊂ M_3)``.

    At the first level ``A_0 = C (x) M_3``, ``A_1 = M_3 (x) M_3``,
    ``B_0 = C (x) Ad_u(Delta_3)``, ``B_1 = Ad_{u_2}(Delta_3 (x) M_3)``,
    ``C_0 = C`` and ``C_1 = Ad_{u_2 W_2}(C (x) M_3)``.
    """
    _require_distinct(p)
    u, v, _ = build_uv(p)
    a0 = left_scalar_algebra(3, 3)
    res = {}
    for name, w in (("u", u), ("v", v)):
        b0 = tensor(scalars(3), masa_of(w))
        b1 = even_algebra(w, 1)
        res[f"face_{name}"] = commuting_square_residual(b0, b1, a0)
    res["slice"] = commuting_square_residual(scalars(9), slice_algebra(u), a0)
    res["floor"] = floor_square_residual(p)
    return CubeCheck(
        adjacent_faces=max(res["face_u"], res["face_v"]) <= SQUARE_TOL,
        slice=res["slice"] <= SQUARE_TOL,
        floor=res["floor"] <= SQUARE_TOL,
        residuals=res,
    )


def relative_commutant(p: PhasePair) -> AlgebraBasis:
    """``Ad_{u_2 W_2}(C (x) M_3)' ∩ (C (x) M_3)``, read back in ``M_3``."""
    _require_distinct(p)
    u, _, _ = build_uv(p)
    inter = intersect(commutant(slice_algebra(u)), left_scalar_algebra(3, 3))
    inner = AlgebraBasis(3, np.ascontiguousarray(inter.basis[:, :3, :3]), inter.contains_identity)
    if inner.dim != 3:
        raise VerificationError(f"relative commutant has dimension {inner.dim}, expected 3")
    return inner


def circulant_residual(p: PhasePair, alg: AlgebraBasis) -> float:
    """How far ``u^* x u`` is from circulant for ``x`` in ``alg``."""
    u = build_uv(p).u.mat
    worst = 0.0
    for x in alg.basis:
        y = u.conj().T @ x @ u
        r0, r1, r2 = y[0, 0], y[0, 1], y[0, 2]
        circ = np.array([[r0, r1, r2], [r2, r0, r1], [r1, r2, r0]])
        worst = max(worst, max_norm(y - circ))
    return worst


@dataclass(frozen=True)
class ConjugacyWitness:
    w: np.ndarray
    span_residuals: tuple[float, ...]
    commutant_residual: float


def conjugacy_witness(p: PhasePair, levels: tuple[int, ...] = (1, 2)) -> ConjugacyWitness:
    """``w = D1 D2^*`` carries ``B^v_{2k}`` onto ``B^u_{2k}`` and lies in the relative commutant."""
    _require_distinct(p)
    u, v, _ = build_uv(p)
    w = p.d1 @ p.d2.conj().T
    res = []
    for k in levels:
        lift = kron(np.eye(3**k), w)
        bv = even_algebra(v, k)
        moved = AlgebraBasis(bv.ambient_dim, lift @ bv.basis @ lift.conj().T, True)
        res.append(same_span(moved, even_algebra(u, k)))
    comm = relative_commutant(p).residual(w)
    if max(res) > 1e-8 or comm > 1e-8:
        raise VerificationError(
            f"D1 D2^* fails to conjugate the towers (span {max(res):.3e}, commutant {comm:.3e})"
        )
    return ConjugacyWitness(w, tuple(res), comm)


@dataclass(frozen=True)
class ExpectationConstants:
    k1: complex
    k2: complex
    k3: complex
    residual: float


def _coefficient(target: np.ndarray, image: np.ndarray) -> tuple[complex, float]:
    k = ntr(target.conj().T @ image) / ntr(target.conj().T @ target)
    return complex(k), max_norm(image - k * target)


def expectation_constants(p: PhasePair, x: Optional[np.ndarray] = None) -> ExpectationConstants:
    """``E_u(Q_2(x)) = k1 Ad_{D1}(s1)``, ``E_v(Ad_{D1} s1) = k2 Ad_{D2}(s1)``,
    ``E_u(Ad_{D2} s1) = k3 Ad_{D1}(s1)``; ``residual`` also covers ``E_u(Ad_{D1} s1) = Ad_{D1} s1``."""
    u, v, _ = build_uv(p)
    eu, ev = masa_of(u), masa_of(v)
    if x is None:
        x = np.arange(1, 10, dtype=np.complex128).reshape(3, 3)
    i, j = np.indices((3, 3))
    q2 = np.where((j - i) % 3 == 2, x, 0)
    s1u = p.d1 @ sigma1() @ p.d1.conj().T
    s1v = p.d2 @ sigma1() @ p.d2.conj().T
    fixed = max_norm(cond_exp(eu, s1u) - s1u)
    k1, r1 = _coefficient(s1u, cond_exp(eu, q2))
    k2, r2 = _coefficient(s1v, cond_exp(ev, s1u))
    k3, r3 = _coefficient(s1u, cond_exp(eu, s1v))
    return ExpectationConstants(k1, k2, k3, max(fixed, r1, r2, r3))


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    residual: float

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "residual": float(self.residual)}


def _verdict(name: str, residual: float, tol: float) -> Verdict:
    return Verdict(name, bool(residual <= tol), float(residual))


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


@dataclass(frozen=True)
class InvariantReport:
    phase_pair: PhasePair
    distinct: bool
    pp_lambda: Fraction
    entropy_h: float
    cos_interior: Optional[float] = None
    angle_sw: Union[float, str, None] = None
    zeta: Optional[complex] = None
    commuting_square: Optional[bool] = None
    rel_commutant_dim: Optional[int] = None
    verdicts: tuple[Verdict, ...] = ()

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        lam = self.pp_lambda
        return {
            "phase_pair": self.phase_pair.to_dict(),
            "distinct": self.distinct,
            "pp_lambda": f"{lam.numerator}/{lam.denominator}" if lam != 1 else "1",
            "zeta": None if self.zeta is None else _complex_json(self.zeta),
            "cos_interior": self.cos_interior,
            "cos_exterior": self.cos_interior,
            "angle_sw": self.angle_sw,
            "entropy_h": self.entropy_h,
            "entropy_h_log3": self.entropy_h / LN3,
            "H_bounds": [self.entropy_h, LN3],
            "commuting_square": self.commuting_square,
            "rel_commutant_dim": self.rel_commutant_dim,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def full_report(p: PhasePair) -> InvariantReport:
    u, v, distinct = build_uv(p)
    lam = lambda_masas(u.mat.conj().T @ v.mat)
    forms = entropy_forms(p)
    if not distinct:
        return InvariantReport(p, False, lam, forms.matrix)

    verdicts = [
        Verdict("pp_lambda_one_third", lam == Fraction(1, 3), 0.0),
        _verdict("entropy_forms_agree", forms.residual, 1e-9),
    ]
    angle = interior_angle(p)
    z = zeta(p)
    verdicts.append(_verdict("interior_angle_forms_agree", angle.residual, 1e-9))
    verdicts.append(_verdict("cos_interior_is_zeta_sq", abs(angle.cos_closed - abs(z) ** 2), 1e-9))
    sw = sw_check(p)
    verdicts.append(_verdict("s0_square_law", sw.idempotency_residual, 1e-9))
    verdicts.append(_verdict("s0_spectrum", sw.spectrum_residual, 1e-8))
    for k in (1, 2):
        verdicts.append(_verdict(f"tower_identity_k{k}", tower_identity_residual(p, k), 1e-9))
    wit = vertex_witness(p)
    verdicts.append(_verdict("vertex_witness_factorization", wit.factor_residual, 1e-10))
    graph = depth2_report(wit.perm_part)
    verdicts.append(Verdict("principal_graph_edges_equal_index", len(graph.edges) == 9, 0.0))
    cube = check_commuting_cube(p)
    verdicts.append(_verdict("cube_adjacent_faces", max(cube.residuals["face_u"], cube.residuals["face_v"]), SQUARE_TOL))
    verdicts.append(_verdict("cube_slice", cube.residuals["slice"], SQUARE_TOL))
    cs = is_commuting_square_pair(p)
    verdicts.append(Verdict("floor_square_iff_pattern", cube.floor == cs, 0.0))
    rc = relative_commutant(p)
    rc_res = same_span(rc, diagonal_masa(3))
    verdicts.append(_verdict("relative_commutant_is_diagonal", rc_res, 1e-8))
    conj = conjugacy_witness(p)
    verdicts.append(_verdict("conjugacy_witness", max(conj.span_residuals + (conj.commutant_residual,)), 1e-8))

    return InvariantReport(
        phase_pair=p,
        distinct=True,
        pp_lambda=lam,
        entropy_h=forms.matrix,
        cos_interior=angle.cos_closed,
        angle_sw=sw.angle,
        zeta=z,
        commuting_square=cs,
        rel_commutant_dim=rc.dim,
        verdicts=tuple(verdicts),
    )
