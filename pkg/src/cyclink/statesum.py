"""The edge-coloring state sum over a cut diagram, two ways.

The partition function sums over all colorings j: edges -> Z_N with the
two strand ends pinned to 0.  Each crossing contributes the eight
argument crossing weight read counter-clockwise from a canonical
under-strand end (the pi-rotation symmetry of the weight makes the
residual choice irrelevant); each edge contributes omega^{j(e)}.

Two independent evaluation routes are kept: ``brute_force`` enumerates
every coloring lexicographically, and ``contract`` eliminates bonds of
a tensor network pairwise along a greedy min-size plan.  They must
agree to rounding on anything both can reach.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .arith import ModularContext
from .charge import ChargeAssignment, build_system, solve_charges
from .diagram import LinkDiagram, TangleDiagram, cut_tangle
from .errors import RankCapExceeded, TooLarge
from .rmatrix import r_symbol

DEFAULT_BRUTE_CAP = int(float(os.environ.get("CYCLINK_BRUTE_CAP", 1e8)))
DEFAULT_ENTRY_CAP = int(float(os.environ.get("CYCLINK_RANK_CAP", 1e7)))
_CHUNK = 1 << 18


def _canonical_start(crossing, labels) -> int:
    """Under-strand slot to read the weight from: lowest incident label."""
    u = (1, 3) if crossing.over == 0 else (0, 2)
    s0, s1 = u
    if labels[s1] < labels[s0] or (labels[s1] == labels[s0] and s1 < s0):
        return s1
    return s0


def _crossing_tensor(
    ctx: ModularContext, crossing, charges: ChargeAssignment
) -> np.ndarray:
    """Rank-4 weight tensor of one crossing, axes in slot order 0..3."""
    N = ctx.level
    labels = crossing.edges
    s0 = _canonical_start(crossing, labels)
    q = [charges.values[(crossing.id, (s0 + t) % 4)] for t in range(4)]
    T = np.empty((N, N, N, N), dtype=complex)
    for x0 in range(N):
        for x1 in range(N):
            for x2 in range(N):
                for x3 in range(N):
                    x = (x0, x1, x2, x3)
                    T[x0, x1, x2, x3] = r_symbol(
                        ctx,
                        x[s0],
                        x[(s0 + 1) % 4],
                        x[(s0 + 2) % 4],
                        x[(s0 + 3) % 4],
                        q[0],
                        q[1],
                        q[2],
                        q[3],
                    )
    return T


def brute_force(
    t: TangleDiagram,
    a: ChargeAssignment,
    ctx: ModularContext,
    cap: int = DEFAULT_BRUTE_CAP,
    with_scale: bool = False,
):
    """Exact sum over all edge colorings, lexicographic order.

    Refuses with TooLarge when N^(free edges) exceeds the cap.  With
    ``with_scale`` the sum of term magnitudes is returned alongside,
    which normalizes vanishing checks.
    """
    d = t.base
    N = ctx.level
    free = sorted(lbl for lbl in d.edges if lbl not in (t.e1, t.e2))
    pos = {lbl: i for i, lbl in enumerate(free)}
    nfree = len(free)
    n_terms = N**nfree
    if n_terms > cap:
        raise TooLarge(f"{N}^{nfree} colorings exceed the cap {cap}")

    cids = sorted(d.crossings)
    tensors = {cid: _crossing_tensor(ctx, d.crossings[cid], a).ravel() for cid in cids}
    omega_digit = np.array([ctx._powers[n] for n in range(N)])

    total = 0j
    scale = 0.0
    for start in range(0, n_terms, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_terms), dtype=np.int64)
        digits = np.empty((nfree, idx.size), dtype=np.int64)
        rest = idx
        for p in range(nfree - 1, -1, -1):
            digits[p] = rest % N
            rest = rest // N
        term = np.ones(idx.size, dtype=complex)
        for cid in cids:
            c = d.crossings[cid]
            flat = np.zeros(idx.size, dtype=np.int64)
            for s in range(4):
                lbl = c.edges[s]
                col = digits[pos[lbl]] if lbl in pos else 0
                flat = flat * N + col
            term *= tensors[cid][flat]
        if nfree:
            term *= omega_digit[np.sum(digits, axis=0) % N]
        total += complex(np.sum(term))
        scale += float(np.sum(np.abs(term)))
    if with_scale:
        return total, scale
    return total


@dataclass
class TensorNode:
    name: int
    array: np.ndarray
    legs: list[int]  # bond label per axis; repeats mean a self-loop


@dataclass
class TensorNetwork:
    level: int
    nodes: dict[int, TensorNode]
    pinned: dict[int, int]  # bond label -> pinned index value
    open_legs: list[int] = field(default_factory=list)
    scalar: complex = 1.0 + 0j

    def bonds(self) -> dict[int, list[int]]:
        """bond label -> node names carrying it (repeats for traces)."""
        out: dict[int, list[int]] = {}
        for node in self.nodes.values():
            for leg in node.legs:
                if leg not in self.open_legs:
                    out.setdefault(leg, []).append(node.name)
        return out


def build_network(
    t: TangleDiagram, a: ChargeAssignment, ctx: ModularContext
) -> TensorNetwork:
    """One rank-4 node per crossing, bonds along shared edges.

    The per-edge factor omega^{j(e)} is absorbed into the tensor at a
    canonically chosen end (lowest crossing id, then lowest slot); the
    strand ends e1, e2 are pinned to color 0 and sliced away here.  A
    closed trivial component never touches a crossing, so its coloring
    sum contributes the standalone scalar sum_n omega^n.
    """
    d = t.base
    N = ctx.level
    omega_diag = np.array([ctx._powers[n] for n in range(N)])
    nodes: dict[int, TensorNode] = {}
    arrays = {}
    for cid in sorted(d.crossings):
        arrays[cid] = _crossing_tensor(ctx, d.crossings[cid], a)

    scalar = 1.0 + 0j
    pinned: dict[int, int] = {}
    slices: dict[int, list[tuple[int, int]]] = {}  # cid -> [(slot, fixed value)]
    for lbl in sorted(d.edges):
        e = d.edges[lbl]
        if lbl in (t.e1, t.e2):
            pinned[lbl] = 0
            for cid, slot in e.ends:
                slices.setdefault(cid, []).append((slot, 0))
            continue
        if not e.ends:
            scalar *= complex(np.sum(omega_diag))
            continue
        cid, slot = min(e.ends)
        shape = [1, 1, 1, 1]
        shape[slot] = N
        arrays[cid] = arrays[cid] * omega_diag.reshape(shape)

    for cid in sorted(d.crossings):
        legs = list(d.crossings[cid].edges)
        arr = arrays[cid]
        for slot, val in sorted(slices.get(cid, []), reverse=True):
            arr = np.take(arr, val, axis=slot)
            legs.pop(slot)
        nodes[cid] = TensorNode(name=cid, array=arr, legs=legs)
    return TensorNetwork(level=N, nodes=nodes, pinned=pinned, scalar=scalar)


@dataclass
class ContractionPlan:
    order: list[int]  # every bond exactly once
    steps: list[tuple[tuple[int, ...], int]]  # (bond group, result entries)
    cost: float  # predicted multiply-add count
    max_rank: int
    max_entries: int


def plan_contraction(
    net: TensorNetwork, entry_cap: int = DEFAULT_ENTRY_CAP
) -> ContractionPlan:
    """Greedy elimination order over the bond hypergraph.

    Self-loop bonds are traced first; afterwards the bond whose pair
    contraction yields the smallest intermediate tensor is eliminated,
    together with every other bond shared by the same node pair.  Ties
    break on predicted flops, then on bond label, so plans are stable.
    """
    N = net.level
    legs = {name: list(node.legs) for name, node in net.nodes.items()}
    alive = dict(legs)
    order: list[int] = []
    steps: list[tuple[tuple[int, ...], int]] = []
    cost = 0.0
    max_rank = max((len(l) for l in alive.values()), default=0)
    max_entries = N**max_rank if alive else 1

    def bond_map():
        out: dict[int, list[int]] = {}
        for name, ls in alive.items():
            for l in ls:
                if l not in net.open_legs:
                    out.setdefault(l, []).append(name)
        return out

    while True:
        bonds = bond_map()
        pending = {l: ns for l, ns in bonds.items() if len(ns) == 2}
        if not pending:
            break
        best = None
        for l, ns in sorted(pending.items()):
            if ns[0] == ns[1]:  # trace
                rank = len(alive[ns[0]]) - 2
                size = N**rank
                flops = N ** len(alive[ns[0]])
            else:
                a, b = ns
                shared = set(alive[a]) & set(alive[b])
                shared = {s for s in shared if s not in net.open_legs}
                rank = len(alive[a]) + len(alive[b]) - 2 * len(shared)
                size = N**rank
                flops = N ** (len(alive[a]) + len(alive[b]) - len(shared))
            key = (size, flops, l)
            if best is None or key < best[0]:
                best = (key, l, ns)
        (size, flops, _), l, ns = best
        if size > entry_cap:
            raise RankCapExceeded(
                f"best elimination of bond {l} yields {size} entries > cap {entry_cap}"
            )
        cost += flops
        if ns[0] == ns[1]:
            group = (l,)
            new = [x for x in alive[ns[0]] if x != l]
            alive[ns[0]] = new
        else:
            a, b = ns
            shared = sorted(
                set(alive[a]) & set(alive[b]) - set(net.open_legs)
            )
            group = tuple([l] + [s for s in shared if s != l])
            new = [x for x in alive[a] if x not in shared] + [
                x for x in alive[b] if x not in shared
            ]
            alive[min(a, b)] = new
            del alive[max(a, b)]
        order.extend(group)
        steps.append((group, size))
        max_rank = max(max_rank, len(new))
        max_entries = max(max_entries, size)
    return ContractionPlan(
        order=order, steps=steps, cost=cost, max_rank=max_rank, max_entries=max_entries
    )


def contract(net: TensorNetwork, plan: ContractionPlan, ctx: ModularContext = None):
    """Execute a plan; returns a scalar, or an array over open legs.

    ``ctx`` is accepted for interface symmetry with brute_force; the
    node tensors already carry everything context-dependent.
    """
    arrays = {name: node.array for name, node in net.nodes.items()}
    legs = {name: list(node.legs) for name, node in net.nodes.items()}

    def owners(l):
        return [name for name in arrays for x in legs[name] if x == l]

    done = set()
    for group, _ in plan.steps:
        l = group[0]
        if l in done:
            continue
        ns = owners(l)
        if ns[0] == ns[1]:
            name = ns[0]
            ax = [i for i, x in enumerate(legs[name]) if x == l]
            arrays[name] = np.trace(arrays[name], axis1=ax[0], axis2=ax[1])
            legs[name] = [x for i, x in enumerate(legs[name]) if i not in ax]
            done.add(l)
        else:
            a, b = min(ns), max(ns)
            shared = sorted(set(legs[a]) & set(legs[b]) - set(net.open_legs))
            axa = [legs[a].index(s) for s in shared]
            axb = [legs[b].index(s) for s in shared]
            arrays[a] = np.tensordot(arrays[a], arrays[b], axes=(axa, axb))
            legs[a] = [x for x in legs[a] if x not in shared] + [
                x for x in legs[b] if x not in shared
            ]
            del arrays[b], legs[b]
            done.update(shared)

    result = np.asarray(net.scalar)
    out_legs: list[int] = []
    for name in sorted(arrays):
        result = np.multiply.outer(result, arrays[name])
        out_legs.extend(legs[name])
    result = np.squeeze(result) if result.ndim and not out_legs else result
    if not net.open_legs:
        return complex(result)
    perm = [out_legs.index(l) for l in net.open_legs]
    return np.transpose(result, perm)


@dataclass
class StateSumResult:
    value: complex
    invariant: complex
    engine: str
    charge_digest: str


def evaluate(
    t: TangleDiagram,
    ctx: ModularContext,
    charges: ChargeAssignment = None,
    charge_seed: int = None,
    engine: str = "tensor",
    brute_cap: int = DEFAULT_BRUTE_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> StateSumResult:
    """Solve charges (unless given) and evaluate the state sum."""
    if charges is None:
        charges = solve_charges(build_system(t, ctx.level), seed=charge_seed)
    if engine == "brute":
        value = brute_force(t, charges, ctx, cap=brute_cap)
        used = "brute"
    else:
        net = build_network(t, charges, ctx)
        try:
            plan = plan_contraction(net, entry_cap=entry_cap)
            value = contract(net, plan)
            used = "tensor"
        except RankCapExceeded:
            value = brute_force(t, charges, ctx, cap=brute_cap)
            used = "brute"
    return StateSumResult(
        value=value,
        invariant=value**ctx.level,
        engine=used,
        charge_digest=charges.digest(),
    )


def invariant(t: TangleDiagram, ctx: ModularContext, **kw) -> complex:
    """The level-N power of the state sum, the quantity that is isotopy
    invariant."""
    return evaluate(t, ctx, **kw).invariant


def invariant_of_diagram(
    d: LinkDiagram, ctx: ModularContext, cut_edge: int = None, **kw
) -> complex:
    """Cut a closed diagram (lowest-labeled edge by default) and evaluate."""
    if cut_edge is None:
        cut_edge = min(d.edges)
    return invariant(cut_tangle(d, cut_edge), ctx, **kw)
