"""Planar link diagrams: PD-code parsing, faces, cutting, and moves.

A diagram is a 4-valent graph with a rotation system.  Each crossing
records the four incident edge labels in counter-clockwise slot order
0..3 together with which opposite slot pair carries the over-strand.
A PD term X[a,b,c,d] lists labels counter-clockwise starting from the
incoming under-strand end, so parsed crossings have the under-strand
in slots (0, 2) and the over-strand in slots (1, 3).

Corners are (crossing, sector) pairs, sector s being the region
between slots s and s+1 (mod 4).  Faces are traced with the region on
the left of the walk: arrive at slot s, record corner (v, s-1), leave
along slot s-1.  A closed trivial component (a bare circle, written
O[n]) has an edge with no ends; it bounds no corners and is invisible
to face tracing.

Diagrams are unoriented: only the rotation system and the over/under
data are kept, which is all the state sum consumes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import (
    EdgeNotFound,
    IllegalMove,
    ParseError,
    PlanarityError,
    ValenceError,
)

End = tuple[int, int]  # (crossing id, slot)
Corner = tuple[int, int]  # (crossing id, sector)


@dataclass
class Crossing:
    id: int
    edges: list[int]  # edge label in each CCW slot 0..3
    over: int  # 0: slots (0,2) are the over-strand, 1: slots (1,3)

    def is_over(self, slot: int) -> bool:
        return slot % 2 == self.over


@dataclass
class Edge:
    label: int
    ends: list[End]  # 2 for interior edges, 0 for a bare circle


@dataclass
class Face:
    corners: list[Corner]
    # (edge label, depart end, arrive end) around the boundary
    traversals: list[tuple[int, End, End]]
    ncycles: int = 1


@dataclass
class LinkDiagram:
    crossings: dict[int, Crossing] = field(default_factory=dict)
    edges: dict[int, Edge] = field(default_factory=dict)
    faces: list[Face] | None = None

    def copy(self) -> "LinkDiagram":
        return LinkDiagram(
            crossings={
                c.id: Crossing(c.id, list(c.edges), c.over)
                for c in self.crossings.values()
            },
            edges={e.label: Edge(e.label, list(e.ends)) for e in self.edges.values()},
            faces=None,
        )

    def end_partner(self, end: End) -> End:
        """The other end of the edge incident at the given end."""
        cid, slot = end
        label = self.crossings[cid].edges[slot]
        ends = self.edges[label].ends
        if ends[0] == end:
            return ends[1]
        return ends[0]


@dataclass
class TangleDiagram:
    """A closed diagram cut open at one edge.

    The two half-edges e1, e2 dangle into the outer region f0, which is
    the union of the region(s) flanking the cut edge.
    """

    base: LinkDiagram
    e1: int
    e2: int
    faces: list[Face]
    f0_index: int

    @property
    def f0(self) -> Face:
        return self.faces[self.f0_index]


_TOKEN = re.compile(r"([XO])\[([^\[\]]*)\]")


def parse_pd(text: str) -> LinkDiagram:
    """Parse PD-code text into a validated diagram with faces computed.

    The input is a whitespace- or comma-separated sequence of crossing
    terms X[a,b,c,d] plus optional O[n] terms for closed trivial
    components.  Every X label must occur exactly twice; every O label
    exactly once.
    """
    stripped = _TOKEN.sub(" ", text)
    if stripped.strip(" ,\t\r\n"):
        raise ParseError(f"unrecognized input near {stripped.strip()[:40]!r}")

    crossings: dict[int, Crossing] = {}
    circles: list[int] = []
    for m in _TOKEN.finditer(text):
        kind, body = m.group(1), m.group(2)
        try:
            labels = [int(s) for s in body.replace(",", " ").split()]
        except ValueError:
            raise ParseError(f"non-integer edge label in {m.group(0)!r}") from None
        if any(lbl <= 0 for lbl in labels):
            raise ParseError(f"edge labels must be positive in {m.group(0)!r}")
        if kind == "X":
            if len(labels) != 4:
                raise ParseError(f"crossing needs 4 labels, got {m.group(0)!r}")
            cid = len(crossings)
            crossings[cid] = Crossing(cid, labels, over=1)
        else:
            if len(labels) != 1:
                raise ParseError(f"circle needs 1 label, got {m.group(0)!r}")
            circles.append(labels[0])

    counts: dict[int, int] = {}
    for c in crossings.values():
        for lbl in c.edges:
            counts[lbl] = counts.get(lbl, 0) + 1
    for lbl, n in counts.items():
        if n != 2:
            raise ValenceError(f"edge label {lbl} occurs {n} times, expected 2")
    for lbl in circles:
        if lbl in counts or circles.count(lbl) != 1:
            raise ValenceError(f"circle label {lbl} reused")

    d = LinkDiagram(crossings=crossings)
    _rebuild_edges(d, extra_circles=circles)
    compute_faces(d)
    return d


def _rebuild_edges(d: LinkDiagram, extra_circles: list[int] = ()) -> None:
    """Recompute the edge table from the crossing slots."""
    edges: dict[int, Edge] = {}
    for cid in sorted(d.crossings):
        c = d.crossings[cid]
        for slot, lbl in enumerate(c.edges):
            edges.setdefault(lbl, Edge(lbl, [])).ends.append((cid, slot))
    for lbl in extra_circles:
        edges.setdefault(lbl, Edge(lbl, []))
    for e in edges.values():
        if len(e.ends) not in (0, 2):
            raise ValenceError(f"edge {e.label} has {len(e.ends)} ends")
    d.edges = edges


def graph_components(d: LinkDiagram) -> list[list[int]]:
    """Connected components of the crossing graph, each sorted by id."""
    parent = {cid: cid for cid in d.crossings}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in d.edges.values():
        if len(e.ends) == 2:
            a, b = find(e.ends[0][0]), find(e.ends[1][0])
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps: dict[int, list[int]] = {}
    for cid in sorted(d.crossings):
        comps.setdefault(find(cid), []).append(cid)
    return [comps[r] for r in sorted(comps)]


def compute_faces(d: LinkDiagram) -> LinkDiagram:
    """Trace faces from the rotation system and validate the embedding.

    Faces are orbits of the walk "arrive at slot s, record corner
    (v, s-1), depart along slot s-1".  Components beyond the first have
    their first-traced face merged into the first component's first
    face, realizing the embedding with all components sharing one
    region.  Raises PlanarityError if the count of regions does not
    match a sphere embedding.
    """
    if not d.crossings:
        d.faces = [Face(corners=[], traversals=[], ncycles=1)]
        return d

    seen: set[End] = set()
    raw_faces: list[Face] = []
    for cid in sorted(d.crossings):
        for slot in range(4):
            start = (cid, slot)
            if start in seen:
                continue
            corners: list[Corner] = []
            traversals: list[tuple[int, End, End]] = []
            cur = start
            while True:
                seen.add(cur)
                v, s = cur
                depart = (v, (s - 1) % 4)
                corners.append((v, (s - 1) % 4))
                nxt = d.end_partner(depart)
                traversals.append((d.crossings[v].edges[(s - 1) % 4], depart, nxt))
                cur = nxt
                if cur == start:
                    break
            raw_faces.append(Face(corners=corners, traversals=traversals))

    comps = graph_components(d)
    if len(comps) > 1:
        comp_of = {}
        for ci, comp in enumerate(comps):
            for cid in comp:
                comp_of[cid] = ci
        first_face: dict[int, int] = {}
        for fi, f in enumerate(raw_faces):
            ci = comp_of[f.corners[0][0]]
            first_face.setdefault(ci, fi)
        host = raw_faces[first_face[0]]
        absorbed = []
        for ci in range(1, len(comps)):
            g = raw_faces[first_face[ci]]
            host.corners.extend(g.corners)
            host.traversals.extend(g.traversals)
            host.ncycles += g.ncycles
            absorbed.append(first_face[ci])
        raw_faces = [f for i, f in enumerate(raw_faces) if i not in set(absorbed)]

    V = len(d.crossings)
    E = sum(1 for e in d.edges.values() if len(e.ends) == 2)
    F = len(raw_faces)
    if V - E + F != 1 + len(comps):
        raise PlanarityError(
            f"V - E + F = {V} - {E} + {F} != {1 + len(comps)}; not a sphere embedding"
        )
    d.faces = raw_faces
    return d


def _face_of_corner(faces: list[Face]) -> dict[Corner, int]:
    lookup: dict[Corner, int] = {}
    for i, f in enumerate(faces):
        for c in f.corners:
            lookup[c] = i
    return lookup


def cut_tangle(d: LinkDiagram, edge: int) -> TangleDiagram:
    """Cut one edge of a closed diagram into the two strand ends e1, e2.

    The regions on the two sides of the cut edge join through the gap
    and become the outer region f0.  Index maps downstream pin
    j(e1) = j(e2) = 0.
    """
    if edge not in d.edges:
        raise EdgeNotFound(f"no edge labeled {edge}")
    if d.faces is None:
        compute_faces(d)

    nd = d.copy()
    target = nd.edges[edge]
    e2_label = max(nd.edges) + 1
    faces = [
        Face(list(f.corners), list(f.traversals), f.ncycles) for f in d.faces
    ]

    if len(target.ends) == 2:
        (v1, s1), (v2, s2) = sorted(target.ends)
        nd.crossings[v2].edges[s2] = e2_label
        nd.edges[edge] = Edge(edge, [(v1, s1)])
        nd.edges[e2_label] = Edge(e2_label, [(v2, s2)])
        lookup = _face_of_corner(faces)
        fa = lookup[(v1, (s1 - 1) % 4)]
        fb = lookup[(v2, (s2 - 1) % 4)]
        if fa != fb:
            keep, gone = min(fa, fb), max(fa, fb)
            faces[keep].corners.extend(faces[gone].corners)
            faces[keep].traversals.extend(faces[gone].traversals)
            faces[keep].ncycles += faces[gone].ncycles
            del faces[gone]
            f0_index = keep
        else:
            f0_index = fa
    else:
        # cutting a bare circle: both stubs are endless arcs
        nd.edges[edge] = Edge(edge, [])
        nd.edges[e2_label] = Edge(e2_label, [])
        f0_index = 0

    nd.faces = faces
    return TangleDiagram(base=nd, e1=edge, e2=e2_label, faces=faces, f0_index=f0_index)


def link_components(d: LinkDiagram) -> int:
    """Number of strand components (closed curves) in the diagram."""
    parent = {lbl: lbl for lbl in d.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in d.crossings.values():
        union(c.edges[0], c.edges[2])
        union(c.edges[1], c.edges[3])
    return len({find(lbl) for lbl in d.edges})


def mirror_diagram(d: LinkDiagram) -> LinkDiagram:
    """The diagram seen from the other side of the plane.

    Reverses every rotation (slot order 0,3,2,1); the over-strand pair
    is an opposite pair, so the over flag is unchanged.
    """
    nd = LinkDiagram()
    for cid in sorted(d.crossings):
        c = d.crossings[cid]
        e = c.edges
        nd.crossings[cid] = Crossing(cid, [e[0], e[3], e[2], e[1]], c.over)
    circles = [e.label for e in d.edges.values() if not e.ends]
    _rebuild_edges(nd, extra_circles=circles)
    compute_faces(nd)
    return nd


def _fresh_labels(d: LinkDiagram, n: int) -> list[int]:
    start = max(d.edges) + 1 if d.edges else 1
    return list(range(start, start + n))


def _finish(crossings: dict[int, Crossing], merges, circles) -> LinkDiagram:
    """Assemble a diagram from a crossing table plus label identifications.

    Merging labels splices strands: removing a crossing by merging its
    opposite-slot labels is exactly the smoothing used by the inverse
    moves.  Label classes that end up with no ends become bare circles.
    """
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in crossings.values():
        for lbl in c.edges:
            find(lbl)
    for lbl in circles:
        find(lbl)
    for a, b in merges:
        union(a, b)

    nd = LinkDiagram()
    for cid in sorted(crossings):
        c = crossings[cid]
        nd.crossings[cid] = Crossing(cid, [find(l) for l in c.edges], c.over)
    survivors = {find(l) for l in parent}
    used = {lbl for c in nd.crossings.values() for lbl in c.edges}
    _rebuild_edges(nd, extra_circles=sorted(survivors - used))
    compute_faces(nd)
    return nd


def apply_move(d: LinkDiagram, move: str, site) -> LinkDiagram:
    """Apply a Reidemeister move, returning a new diagram of the same link.

    Moves and their sites:
      "RI+",  (edge, over, side)   add a curl on the edge; over in {0,1}
                                   picks the handedness, side in {0,1}
                                   the sector holding the new loop
      "RI-",  crossing id          remove a curl at that crossing
      "RII",  (face, e1, e2, top)  push e1 across the face over (top=0)
                                   or under (top=1) e2
      "RII-", face index           remove a bigon face
      "RIII", face index           slide across a triangle face
    """
    if d.faces is None:
        compute_faces(d)
    try:
        if move == "RI+":
            return _move_r1_add(d, *site)
        if move == "RI-":
            return _move_r1_remove(d, site)
        if move in ("RII", "RII+"):
            return _move_r2_add(d, *site)
        if move == "RII-":
            return _move_r2_remove(d, site)
        if move == "RIII":
            return _move_r3(d, site)
    except TypeError as exc:
        raise IllegalMove(f"malformed site {site!r} for {move}: {exc}") from None
    raise IllegalMove(f"unknown move {move!r}")


def _move_r1_add(d: LinkDiagram, edge: int, over: int = 0, side: int = 0) -> LinkDiagram:
    if edge not in d.edges:
        raise EdgeNotFound(f"no edge labeled {edge}")
    if over not in (0, 1) or side not in (0, 1):
        raise IllegalMove("RI+ parameters over and side must be 0 or 1")
    crossings = {c.id: Crossing(c.id, list(c.edges), c.over) for c in d.crossings.values()}
    circles = [e.label for e in d.edges.values() if not e.ends]
    g, h = _fresh_labels(d, 2)
    wid = max(crossings) + 1 if crossings else 0
    layout = [edge, g, g, h] if side == 0 else [edge, h, g, g]
    merges = []
    ends = sorted(d.edges[edge].ends)
    if ends:
        v2, s2 = ends[-1]
        crossings[v2] = Crossing(
            v2,
            [h if (i == s2 and l == edge) else l for i, l in enumerate(crossings[v2].edges)],
            crossings[v2].over,
        )
    else:
        circles.remove(edge)
        merges.append((edge, h))  # the circle closes back onto itself
    crossings[wid] = Crossing(wid, layout, over)
    return _finish(crossings, merges, circles)


def _loop_at(c: Crossing) -> tuple[int, int] | None:
    """Adjacent slot pair carrying a loop edge, if any."""
    for s in range(4):
        if c.edges[s] == c.edges[(s + 1) % 4]:
            return s, (s + 1) % 4
    return None


def _move_r1_remove(d: LinkDiagram, cid: int) -> LinkDiagram:
    if cid not in d.crossings:
        raise IllegalMove(f"no crossing {cid}")
    c = d.crossings[cid]
    if _loop_at(c) is None:
        raise IllegalMove(f"crossing {cid} carries no curl")
    crossings = {
        x.id: Crossing(x.id, list(x.edges), x.over)
        for x in d.crossings.values()
        if x.id != cid
    }
    circles = [e.label for e in d.edges.values() if not e.ends]
    merges = [(c.edges[0], c.edges[2]), (c.edges[1], c.edges[3])]
    return _finish(crossings, merges, circles)


def _find_traversal(face: Face, label: int):
    for t in face.traversals:
        if t[0] == label:
            return t
    return None


def _move_r2_add(
    d: LinkDiagram, face_index: int, label1: int, label2: int, top: int = 0
) -> LinkDiagram:
    if not 0 <= face_index < len(d.faces):
        raise IllegalMove(f"no face {face_index}")
    if label1 == label2:
        raise IllegalMove("RII needs two distinct edges on the face")
    face = d.faces[face_index]
    t1 = _find_traversal(face, label1)
    t2 = _find_traversal(face, label2)
    if t1 is None or t2 is None:
        raise IllegalMove(f"edges {label1}, {label2} do not both bound face {face_index}")
    _, (v1, sA), (v2, sB) = t1
    _, (u1, sC), (u2, sD) = t2

    crossings = {c.id: Crossing(c.id, list(c.edges), c.over) for c in d.crossings.values()}
    circles = [e.label for e in d.edges.values() if not e.ends]
    em, eb, epm, epb = _fresh_labels(d, 4)
    wl = max(crossings) + 1 if crossings else 0
    wr = wl + 1
    # arcs: label1 splits into (label1, em, eb) and label2 into
    # (label2, epm, epb); both faces-on-the-left walks are antiparallel,
    # so the first crossing along label1 is the second along label2.
    crossings[v2].edges[sB] = eb
    crossings[u2].edges[sD] = epb
    over_flag = 0 if top == 0 else 1  # strand of label1 sits in slots (0,2)
    crossings[wl] = Crossing(wl, [label1, epm, em, epb], over_flag)
    crossings[wr] = Crossing(wr, [eb, label2, em, epm], over_flag)
    return _finish(crossings, [], circles)


def _move_r2_remove(d: LinkDiagram, face_index: int) -> LinkDiagram:
    if not 0 <= face_index < len(d.faces):
        raise IllegalMove(f"no face {face_index}")
    face = d.faces[face_index]
    if len(face.corners) != 2:
        raise IllegalMove("RII- needs a bigon face")
    (w1, c1), (w2, c2) = face.corners
    if w1 == w2:
        raise IllegalMove("bigon corners lie at one crossing; not an RII site")
    cr1, cr2 = d.crossings[w1], d.crossings[w2]
    # side departing corner 1 arrives at (w2, c2 + 1) by the face walk
    m1 = cr1.edges[c1]
    slot_m1_w2 = (c2 + 1) % 4
    if cr2.edges[slot_m1_w2] != m1:
        raise IllegalMove("bigon sides do not connect the two corners")
    # one strand must be on top at both crossings
    if cr1.is_over(c1) != cr2.is_over(slot_m1_w2):
        raise IllegalMove("bigon strands alternate; not an RII site")
    crossings = {
        x.id: Crossing(x.id, list(x.edges), x.over)
        for x in d.crossings.values()
        if x.id not in (w1, w2)
    }
    circles = [e.label for e in d.edges.values() if not e.ends]
    merges = [
        (cr1.edges[0], cr1.edges[2]),
        (cr1.edges[1], cr1.edges[3]),
        (cr2.edges[0], cr2.edges[2]),
        (cr2.edges[1], cr2.edges[3]),
    ]
    return _finish(crossings, merges, circles)


def _move_r3(d: LinkDiagram, face_index: int) -> LinkDiagram:
    if not 0 <= face_index < len(d.faces):
        raise IllegalMove(f"no face {face_index}")
    face = d.faces[face_index]
    if len(face.corners) != 3:
        raise IllegalMove("RIII needs a triangle face")
    ws = [c[0] for c in face.corners]
    if len(set(ws)) != 3:
        raise IllegalMove("triangle corners must lie at three distinct crossings")
    # order the corners along the face cycle: side i departs (w_i, c_i)
    # and arrives (w_{i+1}, c_{i+1} + 1)
    corners = list(face.corners)
    sides = [t[0] for t in face.traversals]

    # over/under pattern: at w_i the meeting strands are side i (slot c_i)
    # and side i-1 (slot c_i + 1); a cyclic dominance pattern is not movable
    wins = {i: 0 for i in range(3)}
    for i in range(3):
        w, c = corners[i]
        if d.crossings[w].is_over(c):
            wins[i] += 1
        else:
            wins[(i - 1) % 3] += 1
    if sorted(wins.values()) == [1, 1, 1]:
        raise IllegalMove("cyclic over/under pattern; RIII does not apply")

    crossings = {c.id: Crossing(c.id, list(c.edges), c.over) for c in d.crossings.values()}
    circles = [e.label for e in d.edges.values() if not e.ends]
    old = {cid: list(d.crossings[cid].edges) for cid in d.crossings}
    for i in range(3):
        w, c = corners[i]
        wn, cn = corners[(i + 1) % 3]
        wp, cp = corners[(i - 1) % 3]
        slots = list(old[w])
        # the triangle flips to the opposite sector: new sides occupy the
        # old continuation slots, and each strand's far continuation arc
        # reattaches here
        slots[(c + 2) % 4] = sides[i]
        slots[(c + 3) % 4] = sides[(i - 1) % 3]
        slots[c] = old[wn][(cn + 3) % 4]
        slots[(c + 1) % 4] = old[wp][(cp + 2) % 4]
        crossings[w] = Crossing(w, slots, d.crossings[w].over)
    return _finish(crossings, [], circles)


def diagram_to_json(d: LinkDiagram) -> str:
    """Debug export of crossings, edges, and faces."""
    if d.faces is None:
        compute_faces(d)
    obj = {
        "crossings": [
            {"id": c.id, "edges": c.edges, "over": c.over}
            for c in (d.crossings[i] for i in sorted(d.crossings))
        ],
        "edges": [
            {"label": e.label, "ends": e.ends}
            for e in (d.edges[l] for l in sorted(d.edges))
        ],
        "faces": [{"corners": f.corners, "cycles": f.ncycles} for f in d.faces],
    }
    return json.dumps(obj, sort_keys=True)
