"""Corner charges for a cut diagram, solved as congruences mod N.

Charges live on corners (crossing-sector pairs) rather than on
(vertex, face) pairs, so a face that meets one crossing in two sectors
still gets a well-defined equation: the corner values around it are
summed.  On reduced diagrams this is the same thing as a vertex-face
map.

Constraints: every corner in the outer region f0 is 0; the four
corners at each crossing sum to 1 mod N; the corners around each face
other than f0 sum to 1 mod N.  Geometrically a corner value q stands
in for the sector angle pi - 2*pi*q (in units where q is read mod 1
through q/N), and the crossing constraint says the four sector angles
close up around the vertex.  The system A x = b (mod N) is solved
through a Smith normal form of A over the integers, which copes with
composite N where naive elimination mod N hits non-invertible pivots.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from math import gcd

from .diagram import Corner, TangleDiagram
from .errors import NoSolution


@dataclass
class ChargeSystem:
    variables: list[Corner]  # corners not in f0, in sorted order
    fixed: list[Corner]  # corners in f0, pinned to 0
    matrix: list[list[int]]  # one row per crossing, then per face != f0
    rhs: list[int]
    modulus: int


@dataclass
class ChargeAssignment:
    values: dict[Corner, int]

    def digest(self) -> str:
        blob = json.dumps(sorted((c[0], c[1], v) for c, v in self.values.items()))
        return hashlib.sha1(blob.encode()).hexdigest()[:12]


def build_system(t: TangleDiagram, N: int) -> ChargeSystem:
    """Assemble the congruence system for a tangle at level N."""
    d = t.base
    f0_corners = set(t.f0.corners)
    variables = sorted(
        (cid, s) for cid in d.crossings for s in range(4) if (cid, s) not in f0_corners
    )
    col = {c: i for i, c in enumerate(variables)}

    matrix: list[list[int]] = []
    rhs: list[int] = []
    for cid in sorted(d.crossings):
        row = [0] * len(variables)
        for s in range(4):
            if (cid, s) in col:
                row[col[(cid, s)]] += 1
        matrix.append(row)
        rhs.append(1)
    for fi, face in enumerate(t.faces):
        if fi == t.f0_index:
            continue
        row = [0] * len(variables)
        for corner in face.corners:
            row[col[corner]] += 1
        matrix.append(row)
        rhs.append(1)
    return ChargeSystem(
        variables=variables,
        fixed=sorted(f0_corners),
        matrix=matrix,
        rhs=rhs,
        modulus=N,
    )


def smith_normal_form(A: list[list[int]]):
    """Diagonalize an integer matrix: returns (D, U, V) with U A V = D.

    D's diagonal entries satisfy the divisibility chain d1 | d2 | ...;
    U and V are unimodular.  Plain integer row/column reduction; fine
    at the matrix sizes corner systems produce.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # find smallest nonzero entry of the trailing block as pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, m):
            if D[i][t]:
                q = -(D[i][t] // D[t][t])
                addmul_row(i, t, q)
                if D[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if D[t][j]:
                q = -(D[t][j] // D[t][t])
                addmul_col(j, t, q)
                if D[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders left; pick a smaller pivot next pass
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        # enforce divisibility d_t | D[i][j] on the trailing block
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(t, offender, 1)
            continue
        t += 1
    return D, U, V


def _mod_inverse(a: int, m: int) -> int:
    if m == 1:
        return 0
    g, x = _egcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    return x % m


def _egcd(a: int, b: int):
    old_r, r = a, b
    old_x, x = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
    return old_r, old_x


def _solve_diagonal(D, U, V, b, N):
    """Canonical solution of A x = b (mod N) given U A V = D.

    Returns (x, slack) where slack[i] lists the modulus of the free
    choice in coordinate i of z = V^{-1} x; None if inconsistent.
    """
    m = len(D)
    n = len(V)
    c = [sum(U[i][j] * b[j] for j in range(m)) % N for i in range(m)]
    z = [0] * n
    slack = [0] * n  # number of alternative values per z-coordinate
    for i in range(n):
        d = D[i][i] if i < m and i < n else 0
        ci = c[i] if i < m else 0
        g = gcd(d, N)
        if ci % g != 0:
            return None, None
        zi = (ci // g) * _mod_inverse((d // g), N // g) % (N // g) if g != N else 0
        z[i] = zi
        slack[i] = g
    for i in range(n, m):
        if c[i] % N != 0:
            return None, None
    x = [sum(V[i][j] * z[j] for j in range(n)) % N for i in range(n)]
    return x, (z, slack)


def solve_modular(
    A: list[list[int]], b: list[int], N: int, seed: int | None = None
) -> list[int]:
    """Solve A x = b (mod N) over the integers via Smith normal form.

    Deterministic canonical solution (zero free parameters) by default;
    with a seed, uniformly random over the full solution set mod N.
    Raises NoSolution when the congruences are inconsistent.
    """
    if not A or not A[0]:
        for r in b:
            if r % N != 0:
                raise NoSolution("empty system with nonzero right-hand side")
        return []
    n = len(A[0])
    D, U, V = smith_normal_form(A)
    x, extra = _solve_diagonal(D, U, V, b, N)
    if x is None:
        raise NoSolution(f"congruences inconsistent mod {N}")
    if seed is not None:
        z, slack = extra
        rng = random.Random(seed)
        for i in range(n):
            if slack[i] > 1:
                z[i] = (z[i] + rng.randrange(slack[i]) * (N // slack[i])) % N
        x = [sum(V[i][j] * z[j] for j in range(n)) % N for i in range(n)]
    return x


def solve_charges(sys: ChargeSystem, seed: int | None = None) -> ChargeAssignment:
    """Solve the corner system; canonical solution unless seeded.

    Raises NoSolution when the congruences are inconsistent, which the
    constraint counting makes unavoidable e.g. for split diagrams with
    two crossing-bearing pieces.
    """
    N = sys.modulus
    x = solve_modular(sys.matrix, sys.rhs, N, seed=seed)
    values = {c: 0 for c in sys.fixed}
    values.update({c: x[i] for i, c in enumerate(sys.variables)})
    return ChargeAssignment(values=values)


def verify_charges(t: TangleDiagram, a: ChargeAssignment, N: int) -> bool:
    """Check the three constraint families directly on the tangle."""
    d = t.base
    vals = a.values
    for corner in t.f0.corners:
        if vals.get(corner, None) != 0:
            return False
    for cid in sorted(d.crossings):
        total = 0
        for s in range(4):
            v = vals.get((cid, s))
            if v is None or not 0 <= v < N:
                return False
            total += v
        if total % N != 1:
            return False
    for fi, face in enumerate(t.faces):
        if fi == t.f0_index:
            continue
        if sum(vals[c] for c in face.corners) % N != 1:
            return False
    return True


def charges_to_json(a: ChargeAssignment, N: int) -> str:
    entries = sorted([c[0], c[1], v] for c, v in a.values.items())
    return json.dumps({"N": N, "values": entries})
