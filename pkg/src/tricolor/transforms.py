"""The F, W and V functions and the identities they satisfy.

F^r_n is Z^r_n times the sigma products and the b-dependent prefactor, W^r_n is
its discrete Fourier transform over Z_3, and V^r_n is W^r_n times
prod x_i^r y_i^-r.  Every function here evaluates numerically at an
:class:`EvaluationPoint`, or as a :class:`UniPoly` in one designated slot u_mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .detform import det_PQ, exponent_sets
from .exactalg import CycScalar, UniPoly, product_of, sigma
from .lattice import EvaluationPoint, WeightFn, partial_partition, spectral_values, trig_weight

FAMILIES = ("F", "W", "V")
SIDES = ("x", "y")


def _dft_kernel(k: int) -> CycScalar:
    return CycScalar.a_pow(2 * k)


def dft3(values: Sequence):
    """W^r = sum_s a^(-2rs) F^s."""
    return [sum((_dft_kernel(-r * s) * values[s] for s in (1, 2)), values[0]) for r in range(3)]


def idft3(values: Sequence):
    """F^r = (1/3) sum_s a^(2rs) W^s."""
    third = CycScalar(1, 0) / 3
    return [sum((_dft_kernel(r * s) * values[s] for s in (1, 2)), values[0]) * third for r in range(3)]


def slot_of(side: str, k: int) -> int:
    """Index into u of x_{k+1} (side 'x') or y_{k+1} (side 'y')."""
    if side not in SIDES:
        raise ValueError(f"side must be 'x' or 'y', not {side!r}")
    return 2 * k + (side == "y")


@dataclass
class FWVContext:
    """Point plus cached partial partition functions.

    With ``symbolic`` set to a slot of u, every value is a UniPoly in that slot.
    """

    pt: EvaluationPoint
    symbolic: int | None = None
    weight: WeightFn = trig_weight
    _z: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.pt.n

    def z(self, r: int):
        r %= 3
        if r not in self._z:
            self._z[r] = partial_partition(self.n, r, self.pt, symbolic=self.symbolic, weight=self.weight)
        return self._z[r]

    def values(self) -> list:
        return spectral_values(self.pt, self.symbolic)

    def shifted(self, mu: int, value) -> "FWVContext":
        if self.symbolic is not None:
            raise ValueError("shifts are evaluated on numeric contexts only")
        return FWVContext(self.pt.with_slot(mu, value), None, self.weight)

    def sigma_products(self):
        if "sigma" not in self._cache:
            self._cache["sigma"] = self._sigma_products()
        return self._cache["sigma"]

    def _sigma_products(self):
        u = self.values()
        x, y = u[0::2], u[1::2]
        n = self.n
        factors = [sigma(x[i] * x[j] ** -1) for i in range(n) for j in range(i + 1, n)]
        factors += [sigma(x[i] * y[j] ** -1) for i in range(n) for j in range(n)]
        factors += [sigma(y[i] * y[j] ** -1) for i in range(n) for j in range(i + 1, n)]
        return product_of(factors)


def f_prefactor(n: int, r: int, b: CycScalar) -> CycScalar:
    """a^(2(r+n)) b / sigma(a^(2(r+n)) b)."""
    z = CycScalar.a_pow(2 * (r + n)) * b
    return z / sigma(z)


def f_function(ctx: FWVContext, r: int):
    return ctx.z(r) * ctx.sigma_products() * f_prefactor(ctx.n, r, ctx.pt.b)


def f_all(ctx: FWVContext) -> list:
    if "F" not in ctx._cache:
        ctx._cache["F"] = [f_function(ctx, r) for r in range(3)]
    return ctx._cache["F"]


def fourier_w(ctx: FWVContext, r: int):
    if "W" not in ctx._cache:
        ctx._cache["W"] = dft3(f_all(ctx))
    return ctx._cache["W"][r % 3]


def fourier_inverse(ctx: FWVContext, r: int):
    """F^r recovered from the three W^s by the inverse transform."""
    return idft3(dft3(f_all(ctx)))[r % 3]


def v_prefactor(ctx: FWVContext, r: int):
    r %= 3
    u = ctx.values()
    return product_of(u[2 * i] ** r * u[2 * i + 1] ** -r for i in range(ctx.n))


def v_function(ctx: FWVContext, r: int):
    return fourier_w(ctx, r) * v_prefactor(ctx, r)


def shift_factor(family: str, side: str, s: int) -> CycScalar:
    # the V family uses a^(2s) on both sides; reindexing s -> -s over Z_3 makes it equivalent
    if side == "y" and family != "V":
        return CycScalar.a_pow(-2 * s)
    return CycScalar.a_pow(2 * s)


def funceq_residual(ctx: FWVContext, r: int, side: str, k: int, family: str = "F", cache: dict | None = None):
    """Left-hand side of the three-term functional equation; exactly zero when it holds.

    F: sum_s F^{r+s}(u -> c_s u); W: sum_s a^(2rs) W^r(u -> c_s u); V: sum_s V^r(u -> c_s u),
    with u = x_{k+1} or y_{k+1} and c_s = a^(2s) on the x side, a^(-2s) on the
    y side (a^(2s) for V).  ``cache`` may be shared between calls at the same
    (ctx, side, k) to reuse the shifted contexts.
    """
    mu = slot_of(side, k)
    base = ctx.pt.u[mu]
    cache = {} if cache is None else cache
    total = None
    for s in range(3):
        c = shift_factor(family, side, s)
        if c not in cache:
            cache[c] = ctx.shifted(mu, c * base)
        sub = cache[c]
        if family == "F":
            term = f_function(sub, r + s)
        elif family == "W":
            term = fourier_w(sub, r) * CycScalar.a_pow(2 * r * s)
        else:
            term = v_function(sub, r)
        total = term if total is None else total + term
    return total


def funceq_residuals(ctx: FWVContext, side: str, k: int) -> dict[tuple[str, int], object]:
    """Residuals for every family and color at one (side, k)."""
    cache: dict = {}
    return {
        (family, r): funceq_residual(ctx, r, side, k, family, cache)
        for family in FAMILIES
        for r in range(3)
    }


def parity_signs(n: int, r: int, side: str) -> dict[str, int]:
    r %= 3
    v_exp = 3 * n + r if side == "x" else 3 * n - r
    return {"W": (-1) ** n, "V": (-1) ** v_exp}


def parity_residuals(ctx: FWVContext, r: int, side: str, k: int) -> dict[str, object]:
    """W(-u_mu) - (-1)^n W(u_mu) and the analogous V difference."""
    mu = slot_of(side, k)
    neg = ctx.shifted(mu, -ctx.pt.u[mu])
    signs = parity_signs(ctx.n, r, side)
    return {
        "W": fourier_w(neg, r) - fourier_w(ctx, r) * signs["W"],
        "V": v_function(neg, r) - v_function(ctx, r) * signs["V"],
    }


def parity_check(ctx: FWVContext, r: int, side: str, k: int) -> bool:
    return not any(parity_residuals(ctx, r, side, k).values())


def determinant_kind(r: int) -> str:
    return "Q" if r % 3 == 1 else "P"


@dataclass
class SupportReport:
    r: int
    mu: int
    support: list[int]
    allowed: list[int]
    in_window: bool
    no_multiple_of_3: bool
    uniform_parity: bool
    vanishes: dict[str, bool]

    @property
    def passed(self) -> bool:
        return self.in_window and self.no_multiple_of_3 and self.uniform_parity and all(self.vanishes.values())


def support_report(ctx: FWVContext, r: int) -> SupportReport:
    mu = ctx.symbolic
    if mu is None:
        raise ValueError("support checks need a context with a symbolic slot")
    n = ctx.n
    poly = v_function(ctx, r)
    if not isinstance(poly, UniPoly):
        poly = UniPoly(ctx.values()[mu].symbol, {0: poly})
    support = sorted(poly.support(), reverse=True)
    allowed = list(exponent_sets(determinant_kind(r), n).exponents)
    bound = max(allowed)
    vanishes = {}
    for nu, value in enumerate(ctx.pt.u):
        if nu == mu:
            continue
        for sign, label in ((1, "+"), (-1, "-")):
            vanishes[f"{label}u{nu + 1}"] = not poly.evaluate(value * sign)
    return SupportReport(
        r=r % 3,
        mu=mu,
        support=support,
        allowed=allowed,
        in_window=all(abs(e) <= bound for e in support) and set(support) <= set(allowed),
        no_multiple_of_3=all(e % 3 for e in support),
        uniform_parity=len({e % 2 for e in support}) <= 1,
        vanishes=vanishes,
    )


def support_check(ctx: FWVContext, r: int) -> bool:
    return support_report(ctx, r).passed


def proportionality_ratio(pt: EvaluationPoint, r: int, weight: WeightFn = trig_weight) -> CycScalar:
    """V^r / det P_n (r = 0, 2) or V^1 / det Q_n at one point."""
    value = v_function(FWVContext(pt, weight=weight), r)
    return value.scalar_part() / det_PQ(determinant_kind(r), pt.u)


def proportionality_ratios(points: Sequence[EvaluationPoint], r: int) -> list[CycScalar]:
    bs = {pt.b for pt in points}
    if len(bs) != 1:
        raise ValueError("proportionality is tested at a fixed b")
    return [proportionality_ratio(pt, r) for pt in points]


__all__ = [
    "FAMILIES",
    "SIDES",
    "FWVContext",
    "SupportReport",
    "dft3",
    "idft3",
    "f_function",
    "f_prefactor",
    "fourier_inverse",
    "fourier_w",
    "funceq_residual",
    "funceq_residuals",
    "parity_check",
    "parity_residuals",
    "parity_signs",
    "proportionality_ratio",
    "proportionality_ratios",
    "slot_of",
    "support_check",
    "support_report",
    "v_function",
    "v_prefactor",
]
