"""The Copeland graph on the 4g-4 zeros of a quadratic differential.

The graph is a ring of faces: 8 triangles followed by 2g-6 quadrilaterals,
consecutive faces glued along one edge of a Hamiltonian cycle ``E'``.  Each
face carries exactly one chord (an ``E0`` edge).  Drawn as an annulus, the
shared edges are the rungs ``b_i`` and the two boundary circles carry the
``l_i`` (one side) and ``u_i`` (other side) edges.

Vertex numbering, the choice of side names and the index placement of the
``l``/``u`` labels are not fixed by the combinatorics; ``build_complex``
searches them in a fixed order and keeps the first assignment for which
the face relations behave as required (see ``_hard_ok``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector, QuotientChart, kernel_basis, rank, rank_of
from .reports import FORMAT_TAG, ValidationReport

E_PRIME = "E'"
E_ZERO = "E0"
COMPLEX_FORMAT = "copeland/1"


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledEdge:
    id: int
    endpoints: tuple[int, int]
    label: str
    klass: str

    @property
    def family(self) -> str:
        return self.label[0]

    @property
    def index(self) -> int:
        return int(self.label[1:])


@dataclass(frozen=True)
class Face:
    kind: str  # "triangle" | "quad"
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    chord: int


@dataclass(frozen=True)
class CopelandComplex:
    genus: int
    vertices: tuple[int, ...]
    edges: tuple[LabeledEdge, ...]
    faces: tuple[Face, ...]
    boundary: Gf2Matrix
    relations: dict = field(hash=False, compare=False)
    delta: dict = field(hash=False, compare=False)
    basis_beta: tuple[Gf2Vector, ...] = ()
    basis_beta_tilde: tuple[Gf2Vector, ...] = ()
    beta_names: tuple[str, ...] = ()
    beta_tilde_names: tuple[str, ...] = ()
    special: tuple[int, int] = (-1, -1)  # chords in the u5, l6 roles
    dropped: int = -1  # Hamiltonian edge in the u6 role

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge(self, label: str) -> LabeledEdge:
        for e in self.edges:
            if e.label == label:
                return e
        raise KeyError(label)

    def edge_between(self, a: int, b: int) -> LabeledEdge:
        key = (min(a, b), max(a, b))
        for e in self.edges:
            if e.endpoints == key:
                return e
        raise KeyError(key)

    def chain(self, edge_ids) -> Gf2Vector:
        return Gf2Vector.from_support(edge_ids, self.n_edges)

    def unit(self, edge_id: int) -> Gf2Vector:
        return Gf2Vector.unit(edge_id, self.n_edges)

    @property
    def e_prime(self) -> list[LabeledEdge]:
        return [e for e in self.edges if e.klass == E_PRIME]

    @property
    def e_zero(self) -> list[LabeledEdge]:
        return [e for e in self.edges if e.klass == E_ZERO]

    @property
    def beta_prime_ids(self) -> list[int]:
        """Edges (i, i+1) for i = 1..4g-5: ``E'`` minus the closing edge (4g-4, 1)."""
        n = self.n_vertices
        return [self.edge_between(i, i + 1).id for i in range(1, n)]

    @property
    def special_chords(self) -> tuple[int, int]:
        return self.special


# --------------------------------------------------------------------------
# raw layout


@dataclass
class _Raw:
    n: int
    faces: list  # (kind, path positions)
    side: list
    rungs: list  # (a, b) positions, in face order
    chords: list  # (a, b) positions, in face order
    middles: list  # quad E' edges on a boundary circle
    circles: tuple  # per side: cyclic list of edges (pairs of positions)
    double_rung: set


def _raw_layout(g: int) -> _Raw:
    n = 4 * g - 4
    faces = []
    a = 0
    for k in range(2 * g + 2):
        span = 2 if k < 8 else 3
        faces.append(("triangle" if span == 2 else "quad", [(a + j) % n for j in range(span + 1)]))
        a += span - 1
    assert a == n

    rungs, chords, middles = [], [], []
    for kind, vs in faces:
        rungs.append((vs[0], vs[1]))
        chords.append((vs[0], vs[-1]))
        if kind == "quad":
            middles.append((vs[1], vs[2]))
    middle_set = {frozenset(m) for m in middles}

    side = [0] * n
    for i in range(n - 1):
        flip = frozenset((i, i + 1)) not in middle_set
        side[i + 1] = side[i] ^ flip
    # the walk has to close up consistently
    assert side[0] == side[n - 1] ^ (frozenset((n - 1, 0)) not in middle_set)

    circles = []
    for s in (0, 1):
        edges = [e for e in chords + middles if side[e[0]] == s]
        assert all(side[e[1]] == s for e in edges)
        circles.append(_cycle_order(edges))

    rung_count = [0] * n
    for a, b in rungs:
        rung_count[a] += 1
        rung_count[b] += 1
    double = {v for v in range(n) if rung_count[v] == 2}
    return _Raw(n, faces, side, rungs, chords, middles, tuple(circles), double)


def _cycle_order(edges):
    """Order the edges of a single cycle so consecutive ones share a vertex."""
    adj = {}
    for e in edges:
        for v in e:
            adj.setdefault(v, []).append(e)
    start = min(edges, key=lambda e: (min(e), max(e)))
    out = [start]
    v = max(start)
    prev = start
    while len(out) < len(edges):
        nxt = next(e for e in adj[v] if e != prev)
        out.append(nxt)
        v = nxt[0] if nxt[1] == v else nxt[1]
        prev = nxt
    return out


# --------------------------------------------------------------------------
# labeling search


def _circle_labels(circle, start, step):
    """Map edge -> index 1..len, walking the circle from ``start`` with ``step``."""
    L = len(circle)
    return {frozenset(circle[(start + step * i) % L]): i + 1 for i in range(L)}


def _candidate_labelings(raw: _Raw):
    L = len(raw.circles[0])
    for l_side, l_step, l_start, u_step, u_start in product((0, 1), (1, -1), range(L), (1, -1), range(L)):
        l_idx = _circle_labels(raw.circles[l_side], l_start, l_step)
        u_idx = _circle_labels(raw.circles[1 - l_side], u_start, u_step)
        inv_l = {i: e for e, i in l_idx.items()}
        inv_u = {i: e for e, i in u_idx.items()}
        # l1 + l3 + u2 + u4 must hit the double-rung vertices once each
        hits = {}
        for e in (inv_l[1], inv_l[3], inv_u[2], inv_u[4]):
            for v in e:
                hits[v] = hits.get(v, 0) + 1
        if set(hits) != raw.double_rung or any(c != 1 for c in hits.values()):
            continue
        yield l_idx, u_idx


def _renumber(raw: _Raw, rotation: int, reflect: bool):
    n = raw.n
    if reflect:
        return lambda p: (rotation - p) % n + 1
    return lambda p: (p - rotation) % n + 1


def _assemble(g: int, raw: _Raw, l_idx, u_idx, rotation: int, reflect: bool) -> CopelandComplex:
    n = raw.n
    vid = _renumber(raw, rotation, reflect)
    rung_idx = {frozenset(r): k + 1 for k, r in enumerate(raw.rungs)}

    def label_of(pair):
        key = frozenset(pair)
        if key in rung_idx:
            return "b%d" % rung_idx[key]
        if key in l_idx:
            return "l%d" % l_idx[key]
        return "u%d" % u_idx[key]

    by_new = {}
    for p in range(n):
        by_new[frozenset((vid(p), vid((p + 1) % n)))] = (p, (p + 1) % n)

    edges = []
    ids = {}
    for i in range(1, n + 1):
        j = i % n + 1
        pair = by_new[frozenset((i, j))]
        eid = len(edges)
        edges.append(LabeledEdge(eid, (min(i, j), max(i, j)), label_of(pair), E_PRIME))
        ids[frozenset(pair)] = eid
    for c in raw.chords:
        a, b = vid(c[0]), vid(c[1])
        eid = len(edges)
        edges.append(LabeledEdge(eid, (min(a, b), max(a, b)), label_of(c), E_ZERO))
        ids[frozenset(c)] = eid

    faces = []
    for (kind, vs), chord in zip(raw.faces, raw.chords):
        path = [ids[frozenset((vs[j], vs[j + 1]))] for j in range(len(vs) - 1)]
        cid = ids[frozenset(chord)]
        faces.append(Face(kind, tuple(vid(p) for p in vs), tuple(path + [cid]), cid))

    boundary = boundary_matrix(n, edges)
    return tuple(range(1, n + 1)), tuple(edges), tuple(faces), boundary


def boundary_matrix(n_vertices: int, edges) -> Gf2Matrix:
    cols = [Gf2Vector.from_support([e.endpoints[0] - 1, e.endpoints[1] - 1], n_vertices) for e in edges]
    return Gf2Matrix.from_columns(cols, n_vertices)


def _relations(edges, n_edges):
    fam = {}
    for e in edges:
        fam[e.label] = e.id

    def s(labels):
        return Gf2Vector.from_support([fam[x] for x in labels], n_edges)

    ls = sorted((e for e in edges if e.family == "l"), key=lambda e: e.index)
    us = sorted((e for e in edges if e.family == "u"), key=lambda e: e.index)
    bs = [e.label for e in edges if e.family == "b"]
    head = ["l1", "l3", "u2", "u4"]
    odd_u = [e.label for e in us if e.index % 2 == 1]
    even_u = [e.label for e in us if e.index % 2 == 0]
    odd_l = [e.label for e in ls if e.index % 2 == 1]
    even_l = [e.label for e in ls if e.index % 2 == 0]
    return {
        "x1": s([e.label for e in ls]),
        "x2": s([e.label for e in us]),
        "x3": s(head + even_u + odd_l + bs),
        "x4": s(head + odd_u + even_l + bs),
        "x5": s(head + bs),
    }


def _finish(g, vertices, edges, faces, boundary, special, dropped) -> CopelandComplex:
    m = len(edges)
    rel = _relations(edges, m)
    delta = {f.chord: Gf2Vector.from_support(f.edges, m) for f in faces}
    chords = [e for e in edges if e.klass == E_ZERO]
    n = len(vertices)
    pos = {e.endpoints: e.id for e in edges}
    beta_prime = [pos[(i, i + 1)] for i in range(1, n)]
    beta = [delta[e.id] for e in chords if e.id in delta] + [rel["x4"]]
    beta += [Gf2Vector.unit(i, m) for i in beta_prime]
    beta_names = ["D_" + e.label for e in chords if e.id in delta] + ["x4"]
    beta_names += [edges[i].label for i in beta_prime]

    bt, bt_names = [], []
    for e in chords:
        if e.id in delta and e.id not in special:
            bt.append(delta[e.id])
            bt_names.append("D_" + e.label)
    for i in beta_prime:
        if i != dropped:
            bt.append(Gf2Vector.unit(i, m))
            bt_names.append(edges[i].label)
    return CopelandComplex(g, vertices, edges, faces, boundary, rel, delta,
                           tuple(beta), tuple(bt), tuple(beta_names), tuple(bt_names),
                           tuple(special), dropped)


def _hard_ok(c: CopelandComplex) -> bool:
    rel = c.relations
    if c.boundary.apply(rel["x5"]) != Gf2Vector.ones(c.n_vertices):
        return False
    if c.dropped not in c.beta_prime_ids:
        return False
    try:
        QuotientChart([rel[k] for k in ("x1", "x2", "x4", "x5")], c.basis_beta_tilde)
    except Gf2Error:
        return False
    return True


def _role_choices(g, parts):
    """Candidates for the (u5, l6) chord pair and the u6 edge.

    From genus 4 on the labels exist and fix the roles.  At genus 3 the
    circles only have 4 edges, so the roles go to one u-chord and one
    l-chord touching the closing edge and to an odd-position Hamiltonian edge.
    """
    vertices, edges, faces, boundary = parts
    if g >= 4:
        lab = {e.label: e.id for e in edges}
        yield (lab["u5"], lab["l6"]), lab["u6"]
        return
    n = len(vertices)
    closing = {1, n}
    near = [e for e in edges if e.klass == E_ZERO and closing & set(e.endpoints)]
    us = [e.id for e in near if e.family == "u"]
    ls = [e.id for e in near if e.family == "l"]
    odd = [e.id for e in edges if e.klass == E_PRIME and e.endpoints[1] == e.endpoints[0] + 1
           and e.endpoints[0] % 2 == 1]
    for u, l, d in product(us, ls, odd):
        yield (u, l), d


def adjacent_beta_prime_count(c: CopelandComplex, edge_id: int) -> int:
    e = c.edges[edge_id]
    count = 0
    for i in c.beta_prime_ids:
        f = c.edges[i]
        if len(set(e.endpoints) & set(f.endpoints)) == 1:
            count += 1
    return count


def _c6_ok(c: CopelandComplex) -> bool:
    threes = {e.id for e in c.e_zero if adjacent_beta_prime_count(c, e.id) == 3}
    others_four = all(adjacent_beta_prime_count(c, e.id) == 4 for e in c.e_zero if e.id not in threes)
    return others_four and threes == set(c.special_chords)


def _special_on_closing_edge(c: CopelandComplex) -> bool:
    return all(adjacent_beta_prime_count(c, i) == 3 for i in c.special_chords)


@lru_cache(maxsize=None)
def build_complex(genus: int) -> CopelandComplex:
    """Construct the Copeland complex for ``genus >= 3``.

    Labeling candidates are tried in a fixed order.  The first one meeting
    every requirement wins; if none places ``u5``/``l6`` as the only chords
    next to the closing edge (impossible at genus 3, where every vertex
    carries two chords) the first candidate that at least puts both of them
    there is kept, and ``validate_checklist`` reports the shortfall.
    """
    if not isinstance(genus, int) or genus < 3:
        raise DomainError("genus must be an integer >= 3 (got %r); genus 2 is not handled" % (genus,))
    raw = _raw_layout(genus)
    n = raw.n
    chord_deg = [0] * n
    for a, b in raw.chords:
        chord_deg[a] += 1
        chord_deg[b] += 1
    # C6 needs exactly two chords at the ends of the closing edge
    closable = [p for p in range(n) if chord_deg[p] + chord_deg[(p + 1) % n] == 2]
    for l_idx, u_idx in _candidate_labelings(raw):
        for reflect in (False, True):
            for rotation in range(n):
                closing = (rotation - 1) % n if not reflect else rotation
                if closable and closing not in closable:
                    continue
                parts = _assemble(genus, raw, l_idx, u_idx, rotation, reflect)
                for special, dropped in _role_choices(genus, parts):
                    c = _finish(genus, *parts, special, dropped)
                    ok = _c6_ok(c) if closable else _special_on_closing_edge(c)
                    if ok and _hard_ok(c):
                        return c
    raise RuntimeError("no admissible labeling for genus %d" % genus)


# --------------------------------------------------------------------------
# operations


def boundary_map(c: CopelandComplex) -> Gf2Matrix:
    return c.boundary


def weight_functional(y: Gf2Vector) -> int:
    return y.weight & 1


def relation_vectors(c: CopelandComplex):
    r = c.relations
    return r["x1"], r["x2"], r["x3"], r["x4"], r["x5"]


class P2Chart(QuotientChart):
    """Coordinates on P[2] = C1 / span(x1, x2, x4, x5).

    The first ``2g`` coordinates are the classes of the retained face
    boundaries, the last ``4g-6`` those of the retained Hamiltonian edges.
    """

    def __init__(self, c: CopelandComplex):
        rel = c.relations
        relations = [rel["x1"], rel["x2"], rel["x4"], rel["x5"]]
        if rank_of(relations) != 4:
            raise Gf2Error("relation span has rank %d, expected 4" % rank_of(relations))
        super().__init__(relations, c.basis_beta_tilde)
        self.genus = c.genus
        self.s_dim = 2 * c.genus
        self.x_dim = 4 * c.genus - 6
        self.names = c.beta_tilde_names


def p2_projection(c: CopelandComplex) -> P2Chart:
    return _chart(c)


@lru_cache(maxsize=None)
def _chart(c: CopelandComplex) -> P2Chart:
    return P2Chart(c)


def face_deltas(c: CopelandComplex) -> dict:
    return {f.chord: c.chain(f.edges) for f in c.faces}


def validate_checklist(c: CopelandComplex, with_generators: bool = True) -> ValidationReport:
    g = c.genus
    rep = ValidationReport("copeland g=%d" % g)
    d = c.boundary
    n_tri = sum(f.kind == "triangle" for f in c.faces)
    n_quad = sum(f.kind == "quad" for f in c.faces)
    counts = (c.n_vertices, c.n_edges, len(c.e_prime), len(c.e_zero), n_tri, n_quad)
    want = (4 * g - 4, 6 * g - 2, 4 * g - 4, 2 * g + 2, 8, 2 * g - 6)
    rep.add("C1", counts == want, want, counts, "|V|,|E|,|E'|,|E0|,triangles,quads")

    rk = rank(d)
    even_cols = all(d.column(j).weight % 2 == 0 for j in range(d.cols))
    rep.add("C2", even_cols and rk == 4 * g - 5, 4 * g - 5, rk, "image of boundary = even-weight vectors")

    z1 = kernel_basis(d)
    rep.add("C3", (rk, len(z1)) == (4 * g - 5, 2 * g + 3), (4 * g - 5, 2 * g + 3), (rk, len(z1)),
            "rank and nullity of the boundary map")

    rel = c.relations
    deltas = list(face_deltas(c).values())
    cand = deltas + [rel["x4"]]
    in_z1 = all(not d.apply(v) for v in cand)
    r = rank_of(cand)
    rep.add("C4", in_z1 and r == len(cand) == 2 * g + 3, 2 * g + 3, r if in_z1 else "not cycles",
            "face boundaries plus x4 form a basis of Z1")

    zs = [not d.apply(rel[k]) for k in ("x1", "x2", "x4")]
    x5_ones = d.apply(rel["x5"]) == Gf2Vector.ones(c.n_vertices)
    rep.add("C5", all(zs) and x5_ones, True, all(zs) and x5_ones, "x1,x2,x4 in Z1 and boundary(x5) = all-ones")

    adj = {e.id: adjacent_beta_prime_count(c, e.id) for e in c.e_zero}
    threes = sorted(c.edges[i].label for i, k in adj.items() if k == 3)
    want = sorted(c.edges[i].label for i in c.special)
    ok6 = threes == want and all(k == 4 for i, k in adj.items() if i not in c.special)
    rep.add("C6", ok6, want, threes, "chords adjacent to exactly 3 beta' edges (the u5/l6 roles)")

    if with_generators:
        from .generators import relation_span_invariant

        rel_rank = rank_of([rel[k] for k in ("x1", "x2", "x4", "x5")])
        inv = relation_span_invariant(c)
        rep.add("C7", rel_rank == 4 and inv, (4, True), (rel_rank, inv),
                "relation span rank 4 and invariant under all generators")
    return rep


def complex_to_dict(c: CopelandComplex) -> dict:
    chart_ok = True
    try:
        p2_projection(c)
    except Gf2Error:
        chart_ok = False
    return {
        "format": COMPLEX_FORMAT,
        "suite_format": FORMAT_TAG,
        "genus": c.genus,
        "vertices": list(c.vertices),
        "edges": [{"id": e.id, "endpoints": list(e.endpoints), "label": e.label, "klass": e.klass}
                  for e in c.edges],
        "faces": [{"kind": f.kind, "vertices": list(f.vertices), "edges": list(f.edges), "chord": f.chord}
                  for f in c.faces],
        "relations": {k: v.to_hex() for k, v in c.relations.items()},
        "beta_tilde": {"names": list(c.beta_tilde_names), "vectors": [v.to_hex() for v in c.basis_beta_tilde],
                       "valid": chart_ok},
    }
