"""Crossing weights at a root of unity and the identities they satisfy.

The central objects are an eight-argument crossing weight ``r_symbol``
(four edge indices, four sector charges with unit sum mod N) built from
the four-argument weight ``weight_w``, and the N^2-by-N^2 matrix
``r_matrix`` obtained by fixing the charges to (1,0,0,0).

Matrix convention, used everywhere: the entry at row (i, j), column
(k, l) is the amplitude from the in-state (k, l) to the out-state
(i, j).  On a triple tensor product, the two-leg operators act as
M_12 = M (x) 1, M_23 = 1 (x) M, and M_13 acts on the outer pair.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

from .arith import ModularContext
from .errors import ChargeSumViolation


@dataclass(frozen=True)
class RSymbolArgs:
    """Arguments of the crossing weight: edge indices and sector charges."""

    i: int
    j: int
    k: int
    l: int
    a: int
    b: int
    c: int
    d: int

    def charges_valid(self, N: int) -> bool:
        return (self.a + self.b + self.c + self.d) % N == 1


@dataclass(frozen=True)
class RTensor:
    """An N^2-by-N^2 matrix of crossing amplitudes."""

    level: int
    root_exponent: int
    entries: np.ndarray

    def as_four_index(self) -> np.ndarray:
        """Reshape to [out1, out2, in1, in2]."""
        N = self.level
        return self.entries.reshape(N, N, N, N)


def weight_w(ctx: ModularContext, k: int, l: int, m: int, n: int) -> complex:
    """Four-argument vertex weight.

    Returns N * omega^{(l+m)(m+n)} * theta([k]+[m]) * theta([l]+[n])
    divided by the four Pochhammer factors.  When either window
    indicator vanishes the weight is exactly 0 and the denominator is
    never evaluated.  Periodic in each argument with period N.
    """
    N = ctx.level
    kb, lb, mb, nb = k % N, l % N, m % N, n % N
    if kb + mb >= N or lb + nb >= N:
        return 0j
    num = N * ctx._powers[((l + m) * (m + n)) % N]
    den = ctx._poch[kb] * ctx._poch_conj[lb] * ctx._poch[mb] * ctx._poch_conj[nb]
    return num / den


def r_symbol(
    ctx: ModularContext,
    i: int,
    j: int,
    k: int,
    l: int,
    a: int,
    b: int,
    c: int,
    d: int,
) -> complex:
    """Crossing weight with edge indices i,j,k,l and sector charges a,b,c,d.

    The charges must satisfy a+b+c+d = 1 mod N.  Indices are arbitrary
    integers; the weight is periodic in each of them with period N.
    """
    N = ctx.level
    if (a + b + c + d) % N != 1:
        raise ChargeSumViolation(
            f"charges {(a, b, c, d)} sum to {(a + b + c + d) % N} mod {N}, need 1"
        )
    pref = ctx._powers[(a - k - j) % N]
    return pref * weight_w(ctx, j - i - a, i - l - d, l - k - c, k - j - b)


def r_matrix(ctx: ModularContext) -> RTensor:
    """The N^2-by-N^2 crossing matrix: <i,j|R|k,l> = r(i,j,k,l|1,0,0,0) omega^{k+l}."""
    N = ctx.level
    ent = np.empty((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    ent[i * N + j, k * N + l] = r_symbol(
                        ctx, i, j, k, l, 1, 0, 0, 0
                    ) * ctx._powers[(k + l) % N]
    return RTensor(level=N, root_exponent=ctx.root_exponent, entries=ent)


def r_inverse(ctx: ModularContext) -> RTensor:
    """Inverse crossing matrix from the same symbols.

    Slot placement: the row pair is (i, l) and the column pair is
    (k, j), with entry r(i,j,k,l|0,0,0,1) omega^{j+k-1}.  The overall
    omega^{-1} pins the normalization so that R Rbar equals the
    identity exactly (without it the product is omega times the
    identity).  This is the matrix inverse of r_matrix, not its
    transpose.
    """
    N = ctx.level
    ent = np.empty((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            for k in range(N):
                for l in range(N):
                    ent[i * N + l, k * N + j] = r_symbol(
                        ctx, i, j, k, l, 0, 0, 0, 1
                    ) * ctx._powers[(j + k - 1) % N]
    return RTensor(level=N, root_exponent=ctx.root_exponent, entries=ent)


def _embed(mat: np.ndarray, N: int, legs: tuple[int, int]) -> np.ndarray:
    """Embed an N^2 x N^2 matrix into N^3 x N^3, acting on the given legs."""
    four = mat.reshape(N, N, N, N)
    eye = np.eye(N)
    if legs == (0, 1):
        out = np.einsum("ijIJ,kK->ijkIJK", four, eye)
    elif legs == (1, 2):
        out = np.einsum("jkJK,iI->ijkIJK", four, eye)
    elif legs == (0, 2):
        out = np.einsum("ikIK,jJ->ijkIJK", four, eye)
    else:
        raise ValueError(f"bad leg pair {legs}")
    return out.reshape(N**3, N**3)


def verify_ybe(ctx: ModularContext) -> float:
    """Relative residual of R12 R13 R23 = R23 R13 R12 on C^N x C^N x C^N."""
    N = ctx.level
    R = r_matrix(ctx).entries
    R12 = _embed(R, N, (0, 1))
    R13 = _embed(R, N, (0, 2))
    R23 = _embed(R, N, (1, 2))
    lhs = R12 @ R13 @ R23
    rhs = R23 @ R13 @ R12
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(lhs)))


def verify_inverse(ctx: ModularContext) -> float:
    """Max-norm residual of R Rbar = identity."""
    N = ctx.level
    prod = r_matrix(ctx).entries @ r_inverse(ctx).entries
    return float(np.max(np.abs(prod - np.eye(N * N))))


def verify_kink(ctx: ModularContext) -> float:
    """Residual of the curl-removal identity.

    Checks sum_j omega^j r(i,j,j,l|0,1,0,0) = omega^{-i} delta_{i,l}
    over all i, l in the index window.
    """
    N = ctx.level
    worst = 0.0
    for i in range(N):
        for l in range(N):
            s = sum(
                ctx._powers[j] * r_symbol(ctx, i, j, j, l, 0, 1, 0, 0)
                for j in range(N)
            )
            target = ctx._powers[(-i) % N] if i == l else 0j
            worst = max(worst, abs(s - target))
    return worst


def verify_symmetries(
    ctx: ModularContext,
    exhaustive_limit: int = 4,
    samples: int = 100_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Residuals of the two symbol symmetries.

    The first relation rotates the crossing by pi:
        r(i,j,k,l|a,b,c,d) = r(k,l,i,j|c,d,a,b).
    The second views the diagram from behind the plane:
        r(i,j,k,l|a,b,c,d) = r(-j,-i,-l,-k|a,d,c,b) omega^{-i-j-k-l}.

    For N <= exhaustive_limit every index tuple and every unit-sum
    charge tuple is checked; above that, `samples` random tuples.
    """
    N = ctx.level

    def charge_tuples():
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    yield a, b, c, (1 - a - b - c) % N

    def residuals(i, j, k, l, a, b, c, d):
        base = r_symbol(ctx, i, j, k, l, a, b, c, d)
        rot = r_symbol(ctx, k, l, i, j, c, d, a, b)
        flip = r_symbol(ctx, -j, -i, -l, -k, a, d, c, b) * ctx._powers[
            (-i - j - k - l) % N
        ]
        return abs(base - rot), abs(base - flip)

    worst_rot = worst_flip = 0.0
    if N <= exhaustive_limit:
        for i in range(N):
            for j in range(N):
                for k in range(N):
                    for l in range(N):
                        for a, b, c, d in charge_tuples():
                            r1, r2 = residuals(i, j, k, l, a, b, c, d)
                            worst_rot = max(worst_rot, r1)
                            worst_flip = max(worst_flip, r2)
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            i, j, k, l = (rng.randrange(N) for _ in range(4))
            a, b, c = (rng.randrange(N) for _ in range(3))
            d = (1 - a - b - c) % N
            r1, r2 = residuals(i, j, k, l, a, b, c, d)
            worst_rot = max(worst_rot, r1)
            worst_flip = max(worst_flip, r2)
    return worst_rot, worst_flip


def rtensor_to_json(t: RTensor) -> str:
    """Serialize as {N, k, entries: row-major [re, im] pairs}."""
    flat = [[float(z.real), float(z.imag)] for z in t.entries.ravel()]
    return json.dumps({"N": t.level, "k": t.root_exponent, "entries": flat})


def rtensor_from_json(text: str) -> RTensor:
    obj = json.loads(text)
    N = obj["N"]
    ent = np.array([complex(re, im) for re, im in obj["entries"]]).reshape(N * N, N * N)
    return RTensor(level=N, root_exponent=obj["k"], entries=ent)
