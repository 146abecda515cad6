import cmath
import random

import pytest

from cyclink.arith import make_context
from cyclink.errors import EvenLevel, FermatViolation, GluingInconsistency, PoleError
from cyclink.tetra import (
    BALL_COMPLEX,
    FermatTriple,
    TetraData,
    fermat_w,
    fermat_w_pair,
    half_omega,
    nth_root,
    octahedron_check,
    psi,
    solve_ball_charges,
    t_symbol,
    tbar_symbol,
    validate_complex,
)


def _random_triple(ctx, rng):
    N = ctx.level
    while True:
        x = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        y = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        z = cmath.exp(cmath.log(x**N + y**N) / N)
        f = FermatTriple(x, y, z)
        try:
            f.validate(ctx)
            return f
        except (FermatViolation, PoleError):
            continue


def test_half_omega():
    ctx = make_context(3)
    assert abs(half_omega(ctx) - ctx.omega**2) < 1e-12
    for N in (3, 5, 7, 9):
        ctx = make_context(N)
        assert abs(half_omega(ctx) ** 2 - ctx.omega) < 1e-12
    with pytest.raises(EvenLevel):
        half_omega(make_context(2))


def test_fermat_w_basics():
    ctx = make_context(5)
    f = _random_triple(ctx, random.Random(3))
    assert fermat_w(ctx, f, 0) == 1


@pytest.mark.parametrize("N", (3, 5, 7))
def test_fermat_w_periodicity(N):
    ctx = make_context(N)
    rng = random.Random(N)
    for _ in range(40):
        f = _random_triple(ctx, rng)
        n = rng.randrange(-3 * N, 3 * N)
        a, b = fermat_w(ctx, f, n + N), fermat_w(ctx, f, n)
        assert abs(a - b) < 1e-9 * max(1, abs(b))


def test_fermat_w_two_argument_form():
    ctx = make_context(5)
    rng = random.Random(9)
    hw = half_omega(ctx)
    for _ in range(30):
        f = _random_triple(ctx, rng)
        m, n = rng.randrange(-6, 6), rng.randrange(-6, 6)
        lhs = fermat_w_pair(ctx, f, m, n)
        rhs = fermat_w(ctx, f, m - n) * hw ** (n * n % (2 * ctx.level))
        # hw^(n^2) is omega^((N+1)n^2/2); both reduce identically mod N
        rhs2 = fermat_w(ctx, f, m - n) * ctx.omega_pow((ctx.level + 1) // 2 * n * n)
        assert abs(lhs - rhs2) < 1e-9 * max(1, abs(lhs))
        assert abs(rhs - rhs2) < 1e-9 * max(1, abs(rhs))


def test_fermat_w_pole():
    ctx = make_context(3)
    f = FermatTriple(1.0, 0.0, ctx.omega)  # z = x*omega
    with pytest.raises(PoleError):
        fermat_w(ctx, f, 2)


def test_pole_detected_in_validate():
    ctx = make_context(3)
    with pytest.raises(PoleError):
        FermatTriple(1.0, 0.0, ctx.omega).validate(ctx)
    with pytest.raises(FermatViolation):
        FermatTriple(1.0, 1.0, 7.0).validate(ctx)


def test_composite_fermat_identity():
    # (z0-z3)(z1-z2) + (z0-z1)(z2-z3) = (z0-z2)(z1-z3) for any numbers,
    # so the tetrahedral root triple always satisfies the curve equation
    ctx = make_context(5)
    rng = random.Random(4)
    for _ in range(100):
        z = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4)]
        if len({v for v in z}) != 4:
            continue
        x = {(i, j): nth_root(ctx, z[i] - z[j]) for i in range(4) for j in range(4) if i < j}
        lhs = (x[(0, 3)] * x[(1, 2)]) ** 5 + (x[(0, 1)] * x[(2, 3)]) ** 5
        rhs = (x[(0, 2)] * x[(1, 3)]) ** 5
        assert abs(lhs - rhs) < 1e-9 * max(1, abs(rhs))


def test_nth_root_real_branch():
    ctx = make_context(3)
    assert abs(nth_root(ctx, -8.0) - (-2.0)) < 1e-12
    assert abs(nth_root(ctx, 27.0) - 3.0) < 1e-12


def test_t_symbol_delta_support():
    ctx = make_context(3)
    z = (0.0, 1.0, 2.0, 3.0)
    for alpha in range(3):
        for beta in range(3):
            for gamma in range(3):
                for delta in range(3):
                    d = TetraData(z, "right", (1, 2), (delta, beta, gamma, alpha))
                    val = t_symbol(ctx, d)
                    vbar = tbar_symbol(ctx, TetraData(z, "left", (1, 2), (delta, beta, gamma, alpha)))
                    if (beta - gamma - delta) % 3 != 0:
                        assert val == 0
                        assert vbar == 0


def test_t_symbol_needs_odd_level():
    with pytest.raises(EvenLevel):
        t_symbol(make_context(4), TetraData((0.0, 1.0, 2.0, 3.0), "right", (0, 0), (0, 0, 0, 0)))


def test_t_symbol_rejects_degenerate_points():
    ctx = make_context(3)
    with pytest.raises(FermatViolation):
        t_symbol(ctx, TetraData((0.0, 0.0, 2.0, 3.0), "right", (0, 0), (0, 0, 0, 0)))


def test_t_symbol_scales_with_rho():
    ctx = make_context(3)
    d1 = TetraData((0.0, 1.0, 2.0, 4.0), "right", (1, 1), (1, 2, 1, 1))
    d2 = TetraData((0.0, 1.0, 2.0, 4.0), "right", (1, 1), (1, 2, 1, 1), rho=2.0)
    assert abs(t_symbol(ctx, d2) - 2 * t_symbol(ctx, d1)) < 1e-12


def test_psi_values():
    ctx = make_context(5)
    s = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    # at k = 0 the brackets give [k-1] = N-1 and [-k] = 0
    for m in (1, 2, 3, 4):
        s0m = nth_root(ctx, s[0] - s[m])
        for j in range(5):
            assert abs(psi(ctx, s, m, j, 0) - s0m**4) < 1e-9
    # shifting j by N changes nothing
    for kk in range(5):
        assert abs(psi(ctx, s, 2, 1 + 5, kk) - psi(ctx, s, 2, 1, kk)) < 1e-9


def test_validate_complex():
    validate_complex()


def test_gluing_inconsistency_detected(monkeypatch):
    import cyclink.tetra as tetra

    broken = tuple(
        (name, verts, "left" if orient == "right" and name == "central" else orient)
        for name, verts, orient in BALL_COMPLEX
    )
    monkeypatch.setattr(tetra, "BALL_COMPLEX", broken)
    with pytest.raises(GluingInconsistency):
        tetra.validate_complex()


def test_ball_charges_satisfy_constraints():
    ctx = make_context(5)
    sol = solve_ball_charges(ctx, seed=1)
    values = sol["values"]
    half = (5 + 1) // 2
    for name, verts, _ in BALL_COMPLEX:
        for v in verts:
            total = sum(
                val
                for (nm, e), val in values.items()
                if nm == name and v in e
            )
            assert total % 5 == half
    banana = sol["boundary"]["banana"]
    assert sum(banana.values()) % 5 == 1


def test_ball_charges_need_odd_level():
    with pytest.raises(EvenLevel):
        solve_ball_charges(make_context(4))


def test_octahedron_proportionality():
    rep = octahedron_check(make_context(3))
    assert rep.constant
    assert rep.zero_mismatches == 0
    assert rep.max_rel_dev < 1e-6
    assert rep.charge_sum == 1


def test_octahedron_other_gauges_and_points():
    rep = octahedron_check(make_context(3), charge_seed=3)
    assert rep.constant and rep.max_rel_dev < 1e-6
    rep = octahedron_check(
        make_context(3), s_values=(0.0, 0.7, 1.9, 3.1, 4.3, 6.2), charge_seed=1
    )
    assert rep.constant and rep.max_rel_dev < 1e-6


def test_octahedron_complex_parameters():
    # complex vertex parameters route through the principal-branch roots
    s = (0.0, 1.0 + 0.5j, 2.0 - 0.3j, 3.0 + 0.2j, 4.0 - 0.6j, 5.0 + 1.0j)
    rep = octahedron_check(make_context(3), s_values=s)
    assert rep.constant and rep.max_rel_dev < 1e-6 and rep.zero_mismatches == 0


def test_octahedron_rejects_degenerate_s():
    with pytest.raises(FermatViolation):
        octahedron_check(make_context(3), s_values=(0.0, 0.0, 2.0, 3.0, 4.0, 5.0))


def test_octahedron_even_level():
    with pytest.raises(EvenLevel):
        octahedron_check(make_context(4))
