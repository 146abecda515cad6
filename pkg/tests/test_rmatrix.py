import math
import random

import numpy as np
import pytest

from cyclink.arith import make_context
from cyclink.errors import ChargeSumViolation
from cyclink.rmatrix import (
    RSymbolArgs,
    r_inverse,
    r_matrix,
    r_symbol,
    rtensor_from_json,
    rtensor_to_json,
    verify_inverse,
    verify_kink,
    verify_symmetries,
    verify_ybe,
    weight_w,
)


def test_weight_w_all_zero_args():
    for N in (2, 3, 5):
        assert abs(weight_w(make_context(N), 0, 0, 0, 0) - N) < 1e-12


def test_weight_w_vanishes_on_window_overflow():
    ctx = make_context(2)
    assert weight_w(ctx, 1, 0, 1, 0) == 0


def test_weight_w_periodic():
    rng = random.Random(0)
    for N in (2, 3, 5, 6):
        ctx = make_context(N)
        for _ in range(50):
            k, l, m, n = (rng.randrange(-8, 8) for _ in range(4))
            base = weight_w(ctx, k, l, m, n)
            for shifted in (
                weight_w(ctx, k + N, l, m, n),
                weight_w(ctx, k, l + N, m, n),
                weight_w(ctx, k, l, m + N, n),
                weight_w(ctx, k, l, m, n - N),
            ):
                assert abs(shifted - base) < 1e-9 * max(1, abs(base))


def test_r_symbol_hand_value():
    # r(0,0,0,0|1,0,0,0) at N=2 reduces to omega * N / poch(N-1) = -1
    ctx = make_context(2)
    assert abs(r_symbol(ctx, 0, 0, 0, 0, 1, 0, 0, 0) - (-1)) < 1e-12


def test_r_symbol_charge_validation():
    ctx = make_context(3)
    with pytest.raises(ChargeSumViolation):
        r_symbol(ctx, 0, 0, 0, 0, 1, 1, 0, 0)
    assert RSymbolArgs(0, 0, 0, 0, 1, 0, 0, 0).charges_valid(3)
    assert not RSymbolArgs(0, 0, 0, 0, 1, 1, 0, 0).charges_valid(3)


def test_r_symbol_periodic_in_indices():
    rng = random.Random(1)
    for N in (2, 3, 5):
        ctx = make_context(N)
        for _ in range(60):
            i, j, k, l = (rng.randrange(-6, 6) for _ in range(4))
            a, b, c = (rng.randrange(N) for _ in range(3))
            d = (1 - a - b - c) % N
            base = r_symbol(ctx, i, j, k, l, a, b, c, d)
            for args in (
                (i + N, j, k, l),
                (i, j + N, k, l),
                (i, j, k + N, l),
                (i, j, k, l - N),
            ):
                assert abs(r_symbol(ctx, *args, a, b, c, d) - base) < 1e-9 * max(
                    1, abs(base)
                )


@pytest.mark.parametrize("N", (2, 3, 4))
def test_symmetries_exhaustive(N):
    rot, flip = verify_symmetries(make_context(N))
    assert rot < 1e-12
    assert flip < 1e-12


def test_symmetries_sampled_n5():
    rot, flip = verify_symmetries(make_context(5), samples=20_000, seed=7)
    assert rot < 1e-12
    assert flip < 1e-12


def test_r_matrix_entry_and_finiteness():
    ent = r_matrix(make_context(2)).entries
    assert abs(ent[0, 0] - (-1)) < 1e-12
    for N in range(2, 8):
        mat = r_matrix(make_context(N)).entries
        assert np.all(np.isfinite(mat.view(float)))


@pytest.mark.parametrize("N", range(2, 8))
def test_inverse_two_sided(N):
    ctx = make_context(N)
    R = r_matrix(ctx).entries
    Rbar = r_inverse(ctx).entries
    eye = np.eye(N * N)
    assert np.max(np.abs(R @ Rbar - eye)) < 1e-9
    assert np.max(np.abs(Rbar @ R - eye)) < 1e-9


def test_inverse_matches_numerical_inversion():
    ctx = make_context(2)
    R = r_matrix(ctx).entries
    assert np.max(np.abs(r_inverse(ctx).entries - np.linalg.inv(R))) < 1e-9


def test_inverse_is_not_transpose():
    # the (i,l)/(k,j) slot convention is genuinely different from
    # transposition
    ctx = make_context(3)
    R = r_matrix(ctx).entries
    Rbar = r_inverse(ctx).entries
    assert np.max(np.abs(Rbar - R.T)) > 0.1


@pytest.mark.parametrize("N,k", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_ybe_spot(N, k):
    assert verify_ybe(make_context(N, k)) < 1e-9


def test_kink_identity():
    for N in (2, 3):
        assert verify_kink(make_context(N)) < 1e-9
    # off-diagonal entries vanish on their own
    ctx = make_context(4)
    for i in range(4):
        for l in range(4):
            if i == l:
                continue
            s = sum(
                ctx.omega_pow(j) * r_symbol(ctx, i, j, j, l, 0, 1, 0, 0)
                for j in range(4)
            )
            assert abs(s) < 1e-9


def test_rtensor_json_roundtrip():
    t = r_matrix(make_context(3, 2))
    back = rtensor_from_json(rtensor_to_json(t))
    assert back.level == 3 and back.root_exponent == 2
    assert np.max(np.abs(back.entries - t.entries)) == 0
