import pytest

from tricolor.exactalg import A, CycScalar, sigma
from tricolor.lattice import VertexKind, partial_partition, perturbed_weight
from tricolor.sampling import sample_point
from tricolor.transforms import (
    FWVContext,
    dft3,
    f_function,
    f_prefactor,
    fourier_inverse,
    fourier_w,
    funceq_residual,
    funceq_residuals,
    idft3,
    parity_check,
    parity_residuals,
    parity_signs,
    proportionality_ratios,
    slot_of,
    support_check,
    support_report,
    v_function,
    v_prefactor,
)


def ctx_for(n, index, seed=21, **kw):
    return FWVContext(sample_point(n, seed, index), **kw)


def test_cube_root_sums():
    for m in range(-4, 5):
        total = sum((CycScalar.a_pow(2 * m * s) for s in range(3)), CycScalar(0))
        assert total == (3 if m % 3 == 0 else 0)


def test_dft_roundtrip_on_scalars():
    vals = [CycScalar(1, 2), CycScalar(-3), CycScalar(0, 5)]
    assert idft3(dft3(vals)) == vals
    assert dft3(vals)[0] == vals[0] + vals[1] + vals[2]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fourier_roundtrip(n):
    ctx = ctx_for(n, 0)
    f = [f_function(ctx, r) for r in range(3)]
    assert [fourier_inverse(ctx, r) for r in range(3)] == f


def test_f_n1():
    ctx = ctx_for(1, 1)
    x, y = ctx.pt.x[0], ctx.pt.y[0]
    for r in range(3):
        expected = partial_partition(1, r, ctx.pt) * sigma(x / y) * f_prefactor(1, r, ctx.pt.b)
        assert f_function(ctx, r) == expected


def test_v_prefactor_examples():
    ctx = ctx_for(1, 2)
    x, y = ctx.pt.x[0], ctx.pt.y[0]
    assert v_function(ctx, 0) == fourier_w(ctx, 0)
    assert v_prefactor(ctx, 1) == x / y
    assert v_function(ctx, 1) == fourier_w(ctx, 1) * (x / y)


def test_slot_of():
    assert [slot_of("x", 0), slot_of("y", 0), slot_of("x", 2)] == [0, 1, 4]
    with pytest.raises(ValueError):
        slot_of("z", 0)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("side", ["x", "y"])
def test_funceq_all_families(n, side):
    for index in range(3):
        ctx = ctx_for(n, index)
        for k in range(n):
            res = funceq_residuals(ctx, side, k)
            assert len(res) == 9
            assert not any(res.values()), res


def test_funceq_n3_one_point():
    ctx = ctx_for(3, 0)
    for side in ("x", "y"):
        for k in range(3):
            assert not any(funceq_residuals(ctx, side, k).values())


@pytest.mark.parametrize("n", [2, 3])
def test_funceq_negative_control(n):
    pt = sample_point(n, 21, 0)
    ctx = FWVContext(pt, weight=perturbed_weight(VertexKind.ALPHA, 2))
    assert any(funceq_residual(ctx, r, "x", 0) for r in range(3))


def test_funceq_negative_control_n1():
    pt = sample_point(1, 21, 0)
    ctx = FWVContext(pt, weight=perturbed_weight(VertexKind.GAMMA, 2, r=0))
    assert any(funceq_residual(ctx, r, "x", 0) for r in range(3))


def test_parity_sign_examples():
    assert parity_signs(1, 0, "x")["W"] == -1
    assert parity_signs(2, 0, "x")["W"] == 1
    assert parity_signs(1, 1, "x")["V"] == 1
    assert parity_signs(1, 1, "y")["V"] == 1
    assert parity_signs(2, 1, "y")["V"] == -1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_parity(n):
    ctx = ctx_for(n, 4)
    for r in range(3):
        for side in ("x", "y"):
            for k in range(n):
                assert parity_check(ctx, r, side, k)


def test_parity_wrong_sign_is_nonzero():
    ctx = ctx_for(1, 4)
    assert not parity_residuals(ctx, 0, "x", 0)["W"]
    negated = ctx.shifted(0, -ctx.pt.x[0])
    assert fourier_w(negated, 0) - fourier_w(ctx, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_support(n):
    pt = sample_point(n, 21, 5)
    for mu in range(2 * n):
        ctx = FWVContext(pt, symbolic=mu)
        for r in range(3):
            assert support_check(ctx, r), support_report(ctx, r)


def test_support_examples():
    pt = sample_point(1, 21, 6)
    assert set(support_report(FWVContext(pt, symbolic=0), 0).support) <= {1, -1}
    assert set(support_report(FWVContext(pt, symbolic=0), 1).support) <= {2, -2}
    pt2 = sample_point(2, 21, 6)
    rep = support_report(FWVContext(pt2, symbolic=1), 0)
    assert set(rep.support) <= {4, 2, -2, -4}
    assert rep.passed


def test_support_requires_symbolic_slot():
    with pytest.raises(ValueError):
        support_report(ctx_for(1, 0), 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_proportionality(n):
    base = sample_point(n, 21, 0)
    points = [sample_point(n, 21, i, b=base.b) for i in range(5)]
    for r in range(3):
        ratios = proportionality_ratios(points, r)
        assert len(set(ratios)) == 1
        assert ratios[0]


def test_proportionality_requires_fixed_b():
    pts = [sample_point(1, 21, i) for i in range(2)]
    with pytest.raises(ValueError):
        proportionality_ratios(pts, 0)


def test_symbolic_shift_rejected():
    with pytest.raises(ValueError):
        ctx_for(1, 0, symbolic=0).shifted(0, A)
