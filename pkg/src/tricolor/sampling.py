"""Deterministic admissible evaluation points.

Points come from SplitMix64 (Steele, Lea and Flood's 64-bit generator).  It
is used instead of :mod:`random` so the point stream for a given
(seed, n, index) is a few lines to reproduce in any language.
"""

from __future__ import annotations

from gmpy2 import mpq

from .exactalg import CycScalar, DegeneratePointError
from .lattice import EvaluationPoint

MASK64 = (1 << 64) - 1
MAX_COMPONENT = 64


class SamplingError(RuntimeError):
    pass


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            v = self.next()
            if v < limit:
                return v % bound


def point_seed(seed: int, n: int, index: int) -> int:
    """Mix (seed, n, index) into the 64-bit seed of one point's stream."""
    state = SplitMix64(seed).next()
    for word in (n, index):
        state = SplitMix64(state ^ (word & MASK64)).next()
    return state


def _rational(rng: SplitMix64) -> CycScalar:
    num = rng.below(MAX_COMPONENT) + 1
    den = rng.below(MAX_COMPONENT) + 1
    sign = -1 if rng.next() & 1 else 1
    return CycScalar(mpq(sign * num, den))


def _shifts_admissible(pt: EvaluationPoint) -> bool:
    """Shifted, negated and specialized variants of pt must also be admissible."""
    from .detform import specialize

    try:
        for mu, value in enumerate(pt.u):
            for factor in (CycScalar.a_pow(2), CycScalar.a_pow(4), CycScalar(-1)):
                pt.with_slot(mu, factor * value)
        if pt.n >= 2:
            specialize(pt)
            specialize(pt, CycScalar.a_pow(1))
    except DegeneratePointError:
        return False
    return True


def _b_admissible(b: CycScalar) -> bool:
    try:
        EvaluationPoint(b, (CycScalar(1),), (CycScalar(2),))
    except DegeneratePointError:
        return False
    return True


def sample_point(
    n: int,
    seed: int,
    index: int,
    *,
    b: CycScalar | None = None,
    max_retries: int = 1000,
) -> EvaluationPoint:
    """Admissible point with random rationals +-p/q, 1 <= p, q <= 64.

    Coordinates are drawn in the order b, x_1, y_1, x_2, y_2, ...; a rejected
    draw is simply repeated.  A fixed ``b`` may be supplied, in which case the
    stream starts at x_1.
    """
    if b is not None and not _b_admissible(b):
        raise SamplingError(f"b = {b} is degenerate")
    rng = SplitMix64(point_seed(seed, n, index))
    budget = max_retries

    def reject() -> None:
        nonlocal budget
        budget -= 1
        if budget <= 0:
            raise SamplingError(f"no admissible point for n={n}, seed={seed}, index={index}")

    def draw(accept) -> CycScalar:
        while True:
            cand = _rational(rng)
            if accept(cand):
                return cand
            reject()

    while True:
        bb = b if b is not None else draw(_b_admissible)
        u: list[CycScalar] = []
        squares: set[CycScalar] = set()
        for _ in range(2 * n):
            v = draw(lambda c: c * c not in squares)
            u.append(v)
            squares.add(v * v)
        pt = EvaluationPoint.from_u(bb, u)
        if _shifts_admissible(pt):
            return pt
        reject()
