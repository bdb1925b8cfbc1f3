import random
from fractions import Fraction

import pytest

from tricolor.exactalg import A, AlgebraElement, CycScalar, DegeneratePointError, sigma
from tricolor.lattice import (
    ASM_COUNTS,
    ClassificationError,
    ColorGrid,
    EvaluationPoint,
    StateCache,
    VertexClass,
    VertexKind,
    boundary_colors,
    classify_vertex,
    enumerate_states,
    gamma_balance,
    gamma_balance_ok,
    partial_partition,
    read_states,
    state_is_s_free,
    state_s_exponents,
    total_partition,
    trig_weight,
    vertex_weight,
    write_states,
)
from tricolor.sampling import sample_point

K = VertexKind


def test_boundary_n4_r2():
    bnd = boundary_colors(4, 2)
    assert bnd.top == (2, 0, 1, 2, 0)
    assert bnd.left == (2, 0, 1, 2, 0)
    assert bnd.bottom == (0, 2, 1, 0, 2)
    assert bnd.right == (0, 2, 1, 0, 2)


def test_single_face_grid():
    (g,) = enumerate_states(1, 0)
    assert g.faces == ((0, 1), (1, 0))


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("r", range(3))
def test_bottom_right_corner(n, r):
    bnd = boundary_colors(n, r)
    assert bnd.bottom[-1] == bnd.right[-1] == r


@pytest.mark.parametrize("n", range(1, 6))
def test_state_counts(n):
    counts = [len(enumerate_states(n, r)) for r in range(3)]
    assert counts == [ASM_COUNTS[n]] * 3


def test_states_are_valid_and_distinct():
    states = enumerate_states(4, 1)
    assert len({g.faces for g in states}) == len(states)
    for g in states:
        g.validate()
        assert g.corner == 1


def test_enumeration_order_is_deterministic():
    assert enumerate_states(3, 2) == enumerate_states(3, 2)


def test_n2_states():
    centers = sorted(g.faces[1][1] for g in enumerate_states(2, 0))
    assert centers == [0, 2]


def test_invalid_grid_rejected():
    with pytest.raises(ValueError):
        ColorGrid.from_json({"n": 1, "faces": [[0, 0], [1, 0]]})
    with pytest.raises(ValueError):
        ColorGrid.from_json({"n": 1, "faces": [[0, 2], [2, 0]]})


class TestClassify:
    def test_examples(self):
        assert classify_vertex(2, 0, 1, 0) == VertexClass(K.ALPHA, 0)
        assert classify_vertex(0, 1, 0, 1) == VertexClass(K.GAMMA, 0)
        with pytest.raises(ClassificationError):
            classify_vertex(0, 0, 1, 2)

    @pytest.mark.parametrize("r", range(3))
    def test_all_kinds(self, r):
        assert classify_vertex(r + 2, r, r + 1, r) == VertexClass(K.ALPHA, r)
        assert classify_vertex(r + 1, r, r + 2, r) == VertexClass(K.ALPHA_P, r)
        assert classify_vertex(r, r + 2, r, r + 1) == VertexClass(K.BETA, r)
        assert classify_vertex(r, r + 1, r, r + 2) == VertexClass(K.BETA_P, r)
        assert classify_vertex(r, r + 1, r, r + 1) == VertexClass(K.GAMMA, r)
        assert classify_vertex(r, r + 2, r, r + 2) == VertexClass(K.GAMMA_P, r)

    def test_exactly_eighteen_patterns(self):
        hits = 0
        for code in range(81):
            faces = [(code // 3 ** k) % 3 for k in range(4)]
            try:
                classify_vertex(*faces)
                hits += 1
            except ClassificationError:
                pass
        assert hits == 18


class TestGammaBalance:
    def test_n1(self):
        (g,) = enumerate_states(1, 1)
        assert gamma_balance(g) == [(1, 0)]

    def test_n2(self):
        for g in enumerate_states(2, 0):
            report = gamma_balance(g)
            if g.faces[1][1] == 0:
                assert g.vertices()[0][0] == VertexClass(K.GAMMA, 0)
                assert g.vertices()[1][0] == VertexClass(K.BETA, 1)
                assert report[0] == (1, 0)
            else:
                assert report == [(1, 0), (1, 0)]

    @pytest.mark.parametrize("n", range(1, 6))
    def test_every_state(self, n):
        assert all(gamma_balance_ok(g) for r in range(3) for g in enumerate_states(n, r))


def test_s_exponents_counts_beta_vertices():
    g = next(g for g in enumerate_states(2, 0) if g.faces[1][1] == 0)
    # beta'_1 and beta_1: each contributes s_0 s_2
    assert state_s_exponents(g) == (2, 0, 2)
    assert state_is_s_free(g)


# independent weights written straight from the formulas


def _w_alpha(w):
    return sigma(A / w) / sigma(A ** 2)


def _w_beta(ctx, r, w):
    t = ctx.t
    s = [AlgebraElement.generator(ctx, c) for c in range(3)]
    return s[(r - 1) % 3] * s[(r + 1) % 3] * (sigma(A * w) / (sigma(A ** 2) * t[r % 3]))


def _w_gamma(ctx, r, w):
    b, t = ctx.b, ctx.t
    return CycScalar.a_pow(-1) / w * sigma(CycScalar.a_pow(2 * r + 1) * b * w) / t[r % 3]


def _w_gamma_p(ctx, r, w):
    b, t = ctx.b, ctx.t
    return A * w * sigma(CycScalar.a_pow(2 * r - 1) * b / w) / t[r % 3]


POINTS = [sample_point(2, 11, i) for i in range(5)]


class TestWeights:
    def test_alpha_zero(self):
        pt = POINTS[0]
        w = trig_weight(VertexClass(K.ALPHA, 1), A, pt.ctx)
        assert not w

    def test_gamma0_explicit(self):
        pt = POINTS[0]
        b, w = pt.b, CycScalar(Fraction(5, 3), 1)
        expected = A ** -1 / w * (A * b * w - 1 / (A * b * w)) / (b - 1 / b)
        assert trig_weight(VertexClass(K.GAMMA, 0), w, pt.ctx) == AlgebraElement.scalar(pt.ctx, expected)

    @pytest.mark.parametrize("r", range(3))
    def test_against_formulas(self, r):
        pt = POINTS[1]
        ctx, w = pt.ctx, pt.x[0] / pt.y[1]
        scalar = lambda c: AlgebraElement.scalar(ctx, c)
        assert trig_weight(VertexClass(K.ALPHA, r), w, ctx) == scalar(_w_alpha(w))
        assert trig_weight(VertexClass(K.ALPHA_P, r), w, ctx) == scalar(_w_alpha(w))
        assert trig_weight(VertexClass(K.BETA, r), w, ctx) == _w_beta(ctx, r, w)
        assert trig_weight(VertexClass(K.BETA_P, r), w, ctx) == _w_beta(ctx, r, w)
        assert trig_weight(VertexClass(K.GAMMA, r), w, ctx) == scalar(_w_gamma(ctx, r, w))
        assert trig_weight(VertexClass(K.GAMMA_P, r), w, ctx) == scalar(_w_gamma_p(ctx, r, w))

    def test_vertex_weight_uses_ratio(self):
        pt = POINTS[2]
        vc = VertexClass(K.GAMMA, 2)
        assert vertex_weight(vc, 1, 0, pt) == trig_weight(vc, pt.x[1] / pt.y[0], pt.ctx)


class TestPartition:
    @pytest.mark.parametrize("r", range(3))
    def test_n1(self, r):
        pt = sample_point(1, 3, r)
        z = partial_partition(1, r, pt)
        assert z == AlgebraElement.scalar(pt.ctx, _w_gamma(pt.ctx, r, pt.x[0] / pt.y[0]))

    @pytest.mark.parametrize("r", range(3))
    @pytest.mark.parametrize("pt", POINTS)
    def test_n2_hand_expansion(self, r, pt):
        ctx = pt.ctx
        (x1, x2), (y1, y2) = pt.x, pt.y
        q = r + 1
        first = _w_beta(ctx, q, x1 / y2) * _w_beta(ctx, q, x2 / y1) * (
            _w_gamma(ctx, r, x1 / y1) * _w_gamma(ctx, r, x2 / y2)
        )
        second = _w_alpha(x1 / y1) * _w_gamma(ctx, q, x1 / y2) * _w_gamma(ctx, q, x2 / y1) * _w_alpha(x2 / y2)
        z = partial_partition(2, r, pt)
        assert z == first + second
        assert z.is_scalar()

    def test_order_invariance(self):
        pt = sample_point(4, 5, 0)
        states = enumerate_states(4, 1)
        shuffled = states[:]
        random.Random(7).shuffle(shuffled)
        assert partial_partition(4, 1, pt, states=shuffled) == partial_partition(4, 1, pt, states=states)

    def test_total_is_sum(self):
        pt = sample_point(3, 5, 1)
        parts = [partial_partition(3, r, pt) for r in range(3)]
        assert total_partition(3, pt) == parts[0] + parts[1] + parts[2]

    def test_symbolic_slot_matches_numeric(self):
        pt = sample_point(2, 5, 2)
        poly = partial_partition(2, 0, pt, symbolic=1)
        assert poly.evaluate(pt.y[0]) == partial_partition(2, 0, pt)

    def test_wrong_states_rejected(self):
        pt = sample_point(2, 5, 3)
        with pytest.raises(ValueError):
            partial_partition(2, 0, pt, states=enumerate_states(2, 1))


class TestEvaluationPoint:
    def test_rejects_degenerate(self):
        with pytest.raises(DegeneratePointError):
            EvaluationPoint(CycScalar(1), (CycScalar(2),), (CycScalar(3),))
        with pytest.raises(DegeneratePointError):
            EvaluationPoint(CycScalar(2), (CycScalar(0),), (CycScalar(3),))
        with pytest.raises(DegeneratePointError):
            EvaluationPoint(CycScalar(2), (CycScalar(3),), (CycScalar(-3),))

    def test_distinct_flag(self):
        pt = EvaluationPoint(CycScalar(2), (CycScalar(3),), (CycScalar(3),), distinct=False)
        assert pt.n == 1

    def test_json_roundtrip(self):
        pt = POINTS[3]
        assert EvaluationPoint.from_json(pt.to_json()) == pt

    def test_u_order(self):
        pt = POINTS[4]
        assert pt.u == (pt.x[0], pt.y[0], pt.x[1], pt.y[1])


class TestStateCache:
    def test_jsonl_roundtrip(self, tmp_path):
        states = enumerate_states(3, 2)
        path = tmp_path / "s.jsonl"
        assert write_states(path, states) == 7
        assert read_states(path) == states

    def test_cache_file(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        cache = StateCache(path)
        first = cache.get(3, 1)
        cache.save()
        assert path.exists()
        assert StateCache(path).get(3, 1) == first
