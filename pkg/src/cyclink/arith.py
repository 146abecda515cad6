"""Root-of-unity and modular-residue arithmetic.

Everything downstream works inside a :class:`ModularContext`: a level N,
a primitive N-th root of unity omega = exp(2*pi*i*k/N), and a numeric
tolerance.  The context precomputes power and Pochhammer tables so the
hot evaluation paths are table lookups.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BadLevel, IndexOutOfRange, NonPrimitiveRoot

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ModularContext:
    """Ambient algebraic setting: level, primitive root, tolerance."""

    level: int
    root_exponent: int
    omega: complex
    tolerance: float = DEFAULT_TOLERANCE
    # lookup tables, filled in by make_context
    _powers: tuple = field(default=(), repr=False, compare=False)
    _poch: tuple = field(default=(), repr=False, compare=False)
    _poch_conj: tuple = field(default=(), repr=False, compare=False)

    def omega_pow(self, m: int) -> complex:
        """omega**m for any integer m (reduced mod N)."""
        return self._powers[m % self.level]


def make_context(N: int, k: int = 1, tol: float = DEFAULT_TOLERANCE) -> ModularContext:
    """Build a ModularContext with omega = exp(2*pi*i*k/N).

    Raises BadLevel for N < 2 and NonPrimitiveRoot when gcd(k, N) != 1,
    since omega is then an N-th root of unity that is not primitive.
    """
    if not isinstance(N, int) or N < 2:
        raise BadLevel(f"level must be an integer >= 2, got {N!r}")
    if not isinstance(k, int) or not 1 <= k < N:
        raise NonPrimitiveRoot(f"root exponent must satisfy 1 <= k < N, got {k!r}")
    if math.gcd(k, N) != 1:
        raise NonPrimitiveRoot(f"gcd({k}, {N}) = {math.gcd(k, N)} != 1")
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")

    powers = tuple(cmath.exp(2j * cmath.pi * k * m / N) for m in range(N))
    poch = [1 + 0j] * N
    poch_conj = [1 + 0j] * N
    for n in range(1, N):
        poch[n] = poch[n - 1] * (1 - powers[n])
        poch_conj[n] = poch_conj[n - 1] * (1 - powers[n].conjugate())
    return ModularContext(
        level=N,
        root_exponent=k,
        omega=powers[1],
        tolerance=tol,
        _powers=powers,
        _poch=tuple(poch),
        _poch_conj=tuple(poch_conj),
    )


def conjugate_context(ctx: ModularContext) -> ModularContext:
    """Context whose root is the complex conjugate of ctx's root."""
    N = ctx.level
    return make_context(N, (N - ctx.root_exponent) % N, ctx.tolerance)


def pochhammer(ctx: ModularContext, n: int) -> complex:
    """Cyclic Pochhammer symbol: 1 for n = 0, else prod_{j=1..n} (1 - omega^j).

    Defined only on the window 0 <= n < N.
    """
    if not 0 <= n < ctx.level:
        raise IndexOutOfRange(f"n must lie in [0, {ctx.level}), got {n}")
    return ctx._poch[n]


def theta(ctx: ModularContext, n: int) -> int:
    """Window indicator: 1 if 0 <= n < N, else 0.  Accepts any integer."""
    return 1 if 0 <= n < ctx.level else 0


def bracket(ctx: ModularContext, n: int) -> int:
    """Integer representative of n mod N in {0, ..., N-1}.

    This is a map into the integers, not into the residue ring: it is
    periodic but does not respect addition once a sum wraps past N.
    """
    return n % ctx.level
