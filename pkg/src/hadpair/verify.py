"""Seeded verification suite: every identity checked on fixed and random pairs."""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .biunitary import perm_decode, w2_codec
from .cmatrix import max_norm
from .exceptions import NotProductFormError
from .hadamard import PhasePair, is_distinct
from .invariants import (
    CS_MARKER,
    LN3,
    Verdict,
    circulant_residual,
    commuting_square_pairs,
    expectation_constants,
    floor_square_residual,
    full_report,
    is_commuting_square_pair,
    relative_commutant,
    s0_build,
    zeta,
)
from .tower import flip, w_block

SPOT = PhasePair("1/1", "1/1", 0, 0)
SPOT_ENTROPY = 2 * math.log(3) - 16 / 9 * math.log(2)


def random_distinct_pairs(rng: np.random.Generator, count: int) -> Iterator[PhasePair]:
    produced = 0
    while produced < count:
        p = PhasePair.random(rng)
        if is_distinct(p):
            produced += 1
            yield p


@dataclass(frozen=True)
class SuiteResult:
    samples: int
    seed: int
    verdicts: tuple[Verdict, ...]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


class _Collector:
    """Merges repeated checks of the same name: all must pass, residual is the worst."""

    def __init__(self):
        self._seen: OrderedDict[str, tuple[bool, float]] = OrderedDict()

    def add(self, name: str, passed: bool, residual: float = 0.0) -> None:
        ok, worst = self._seen.get(name, (True, 0.0))
        self._seen[name] = (ok and bool(passed), max(worst, float(residual)))

    def within(self, name: str, residual: float, tol: float) -> None:
        self.add(name, residual <= tol, residual)

    def verdicts(self) -> tuple[Verdict, ...]:
        return tuple(Verdict(n, ok, r) for n, (ok, r) in self._seen.items())


def _fixed_checks(out: _Collector) -> None:
    rep = full_report(SPOT)
    out.within("spot_cos_interior", abs(rep.cos_interior - 1 / 9), 1e-10)
    out.within("spot_sw_angle", abs(rep.angle_sw - math.acos(1 / 3)), 1e-9)
    out.within("spot_entropy", abs(rep.entropy_h - SPOT_ENTROPY), 1e-9)
    out.add("spot_all_verdicts", rep.all_passed)

    for p in commuting_square_pairs():
        rep = full_report(p)
        out.within("cs_pairs_cos_zero", abs(rep.cos_interior), 1e-10)
        out.within("cs_pairs_entropy_ln3", abs(rep.entropy_h - LN3), 1e-12)
        out.add("cs_pairs_sw_marker", rep.angle_sw == CS_MARKER)
        out.add("cs_pairs_floor_square", rep.commuting_square and floor_square_residual(p) <= 1e-9)

    out.add("w2_decodes_to_codec", perm_decode(w_block(1), 3) == w2_codec())
    try:
        perm_decode(flip(3), 3)
        out.add("flip_rejected_by_decoder", False)
    except NotProductFormError:
        out.add("flip_rejected_by_decoder", True)

    out.add("trivial_pair_not_distinct", not full_report(PhasePair(0, 0, 0, 0)).distinct)


def _sample_checks(out: _Collector, p: PhasePair) -> None:
    rep = full_report(p)
    for v in rep.verdicts:
        out.add(v.name, v.passed, v.residual)
    z = zeta(p)
    out.within("entropy_bounds", max(-rep.entropy_h, rep.entropy_h - LN3 - 1e-12, 0.0), 0.0)

    s0 = s0_build(p)
    cs_votes = (
        is_commuting_square_pair(p),
        abs(z) <= 1e-10,
        max_norm(s0.matrix) <= 1e-9,
        floor_square_residual(p) <= 1e-9,
    )
    out.add("commuting_square_predicates_agree", len(set(cs_votes)) == 1)

    k = expectation_constants(p)
    out.within("expectation_constants_k2_k3", max(abs(k.k2 - z), abs(k.k3 - z.conjugate()), k.residual), 1e-9)
    out.within("relative_commutant_circulant", circulant_residual(p, relative_commutant(p)), 1e-9)


def run_suite(samples: int = 20, seed: int = 0) -> SuiteResult:
    out = _Collector()
    _fixed_checks(out)
    rng = np.random.default_rng(seed)
    for p in random_distinct_pairs(rng, samples):
        _sample_checks(out, p)
    return SuiteResult(samples, seed, out.verdicts())
