"""Monodromy generators on the 1-chains and on the points of order two.

Each edge ``e`` gives the reflection ``x -> x + <x, e> e``.  Over GF(2) the
pairing of an edge chain ``x`` with an edge ``e`` is the number of shared
endpoints mod 2, which equals the dot product of their boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .copeland import E_PRIME, E_ZERO, CopelandComplex, build_complex, p2_projection
from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector, QuotientChart, inverse, kernel_basis, rank_of
from .reports import ValidationReport

Pairing = Callable[[CopelandComplex, int, int], int]


def pairing(c: CopelandComplex, x: int, e: int) -> int:
    if x == e:
        return 0
    return len(set(c.edges[x].endpoints) & set(c.edges[e].endpoints)) & 1


def chain_pairing(c: CopelandComplex, x: Gf2Vector, e: int) -> int:
    """<x, e> for an arbitrary chain ``x``: boundary(x) . boundary(e)."""
    return c.boundary.apply(x).dot(c.boundary.column(e))


def sigma_on_c1(c: CopelandComplex, e: int, pair: Pairing = pairing) -> Gf2Matrix:
    m = c.n_edges
    cols = []
    for x in range(m):
        bits = 1 << x
        if pair(c, x, e):
            bits ^= 1 << e
        cols.append(Gf2Vector(bits, m))
    return Gf2Matrix.from_columns(cols, m)


def vertex_transposition(n: int, a: int, b: int) -> Gf2Matrix:
    """Permutation matrix on C0 swapping vertices ``a`` and ``b`` (1-based)."""
    perm = list(range(n))
    perm[a - 1], perm[b - 1] = perm[b - 1], perm[a - 1]
    return Gf2Matrix.from_columns([Gf2Vector.unit(perm[j], n) for j in range(n)], n)


def _product(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def decompose(c: CopelandComplex, e: int, pair: Pairing = pairing) -> tuple[Gf2Matrix, Gf2Matrix]:
    """Split the generator of ``e`` as (normal part, symmetric-group part)."""
    m = c.n_edges
    edge = c.edges[e]
    if edge.klass == E_PRIME:
        return Gf2Matrix.identity(m), sigma_on_c1(c, e, pair)
    face = next(f for f in c.faces if f.chord == e)
    vs = face.vertices
    path = [c.edge_between(vs[j], vs[j + 1]).id for j in range(len(vs) - 1)]
    sig = {i: sigma_on_c1(c, i, pair) for i in path}
    if len(path) == 2:
        a, b = path
        s = _product([sig[b], sig[a], sig[b]])
    else:
        a, b, d = path
        s = _product([sig[d], sig[b], sig[a], sig[b], sig[d]])
    delta = c.delta[e]
    cols = []
    for x in range(m):
        bits = 1 << x
        if pair(c, x, e):
            bits ^= delta.bits
        cols.append(Gf2Vector(bits, m))
    return Gf2Matrix.from_columns(cols, m), s


def relation_span_invariant(c: CopelandComplex, pair: Pairing = pairing) -> bool:
    rel = [c.relations[k] for k in ("x1", "x2", "x4", "x5")]
    for e in range(c.n_edges):
        sig = sigma_on_c1(c, e, pair)
        for r in rel:
            img = sig.apply(r)
            if img != r and rank_of(rel + [img]) != rank_of(rel):
                return False
    return True


class RelationError(Gf2Error):
    pass


def induce_on_p2(c: CopelandComplex, mat: Gf2Matrix) -> Gf2Matrix:
    """Matrix of a C1 map on P[2] in the retained-basis coordinates."""
    chart = p2_projection(c)
    rel = [c.relations[k] for k in ("x1", "x2", "x4", "x5")]
    r0 = rank_of(rel)
    for r in rel:
        if rank_of(rel + [mat.apply(r)]) != r0:
            raise RelationError("relation span is not invariant")
    dim = chart.n
    cols = [chart.project(mat.apply(chart.section(Gf2Vector.unit(k, dim)))) for k in range(dim)]
    return Gf2Matrix.from_columns(cols, dim)


def induced_on_p2(c: CopelandComplex, e: int, pair: Pairing = pairing) -> Gf2Matrix:
    return induce_on_p2(c, sigma_on_c1(c, e, pair))


# --------------------------------------------------------------------------
# the quotient of even vertex sets by the all-ones vector


class XChart:
    """Coordinates on B0 / (1,...,1) in the boundaries of the retained Hamiltonian edges."""

    def __init__(self, c: CopelandComplex):
        n = c.n_vertices
        chart = p2_projection(c)
        self.n = n
        self.s_dim = chart.s_dim
        self.x_dim = chart.x_dim
        self.basis = [c.boundary.apply(v) for v in c.basis_beta_tilde[chart.s_dim:]]
        ones = Gf2Vector.ones(n)
        # e_1 completes the basis of C0; it never appears in an even vector
        self._chart = QuotientChart([ones, Gf2Vector.unit(0, n)], self.basis)

    def project(self, y: Gf2Vector) -> Gf2Vector:
        if y.weight % 2:
            raise Gf2Error("odd vertex set has no class in B0")
        return self._chart.project(y)

    def lift(self, x: Gf2Vector) -> Gf2Vector:
        return self._chart.section(x)

    def permutation_action(self, perm: Gf2Matrix) -> Gf2Matrix:
        cols = [self.project(perm.apply(b)) for b in self.basis]
        return Gf2Matrix.from_columns(cols, self.x_dim)

    def decode_pair(self, x: Gf2Vector) -> frozenset | None:
        y = self.lift(x)
        if y.weight == 2:
            return frozenset(v + 1 for v in y.support())
        if y.weight == self.n - 2:
            return frozenset(v + 1 for v in (y + Gf2Vector.ones(self.n)).support())
        return None


@lru_cache(maxsize=None)
def x_chart(c: CopelandComplex) -> XChart:
    return XChart(c)


def _pair_class(xc: XChart, a: int, b: int) -> Gf2Vector:
    return xc.project(Gf2Vector.from_support([a - 1, b - 1], xc.n))


def recover_permutation(xc: XChart, block: Gf2Matrix) -> list[int] | None:
    """The vertex permutation whose quotient action is ``block``, if any."""
    n = xc.n
    images = {}
    for j in range(2, n + 1):
        img = xc.decode_pair(block.apply(_pair_class(xc, 1, j)))
        if img is None or len(img) != 2:
            return None
        images[j] = img
    common = frozenset.intersection(*images.values())
    if len(common) != 1:
        return None
    (p1,) = common
    perm = [0] * (n + 1)
    perm[1] = p1
    for j, img in images.items():
        (pj,) = img - {p1}
        perm[j] = pj
    if sorted(perm[1:]) != list(range(1, n + 1)):
        return None
    pm = Gf2Matrix.from_columns([Gf2Vector.unit(perm[j + 1] - 1, n) for j in range(n)], n)
    if xc.permutation_action(pm) != block:
        return None
    return perm[1:]


def is_theorem_shape(m: Gf2Matrix, c: CopelandComplex) -> bool:
    """[I_2g | A ; 0 | pi] with pi the quotient action of a vertex permutation."""
    xc = x_chart(c)
    s, d = xc.s_dim, xc.s_dim + xc.x_dim
    if (m.rows, m.cols) != (d, d):
        return False
    if not m.block(0, s, 0, s).is_identity() or not m.block(s, d, 0, s).is_zero():
        return False
    return recover_permutation(xc, m.block(s, d, s, d)) is not None


def _assemble_block(s_dim: int, a: Gf2Matrix, pi: Gf2Matrix) -> Gf2Matrix:
    d = s_dim + pi.rows
    rows = []
    for i in range(s_dim):
        rows.append((1 << i) | (a.entries[i] << s_dim))
    for i in range(pi.rows):
        rows.append(pi.entries[i] << s_dim)
    return Gf2Matrix(d, d, tuple(rows))


@lru_cache(maxsize=None)
def theorem_group(genus: int) -> tuple[Gf2Matrix, ...]:
    """Generators of {[I | A ; 0 | pi]}: every elementary A, then every adjacent transposition."""
    c = build_complex(genus)
    xc = x_chart(c)
    s, x = xc.s_dim, xc.x_dim
    gens = []
    ident = Gf2Matrix.identity(x)
    for j in range(s):
        for k in range(x):
            a = Gf2Matrix(s, x, tuple((1 << k) if i == j else 0 for i in range(s)))
            gens.append(_assemble_block(s, a, ident))
    zero = Gf2Matrix.zeros(s, x)
    for i in range(1, xc.n):
        pi = xc.permutation_action(vertex_transposition(xc.n, i, i + 1))
        gens.append(_assemble_block(s, zero, pi))
    return tuple(gens)


# --------------------------------------------------------------------------
# generator records


@dataclass(frozen=True)
class EdgeGenerator:
    edge: int
    label: str
    klass: str
    on_c1: Gf2Matrix
    on_p2: Gf2Matrix
    h_part: Gf2Matrix
    s_part: Gf2Matrix


@dataclass
class GeneratorSet:
    genus: int
    complex: CopelandComplex
    records: list[EdgeGenerator] = field(default_factory=list)
    theorem_generators: tuple[Gf2Matrix, ...] = ()

    def p2_matrices(self) -> list[Gf2Matrix]:
        return [r.on_p2 for r in self.records]

    def c1_matrices(self) -> list[Gf2Matrix]:
        return [r.on_c1 for r in self.records]


def build_generators(genus: int, pair: Pairing = pairing, with_theorem: bool = True) -> GeneratorSet:
    c = build_complex(genus)
    gs = GeneratorSet(genus, c)
    for e in c.edges:
        sig = sigma_on_c1(c, e.id, pair)
        h, s = decompose(c, e.id, pair)
        try:
            p2 = induce_on_p2(c, sig)
        except RelationError:
            p2 = None
        gs.records.append(EdgeGenerator(e.id, e.label, e.klass, sig, p2, h, s))
    if with_theorem:
        gs.theorem_generators = theorem_group(genus)
    return gs


@lru_cache(maxsize=None)
def graph_p2_generators(genus: int) -> tuple[Gf2Matrix, ...]:
    c = build_complex(genus)
    return tuple(induced_on_p2(c, e.id) for e in c.edges)


# --------------------------------------------------------------------------
# beta-basis views


def beta_change(c: CopelandComplex) -> tuple[Gf2Matrix, Gf2Matrix]:
    b = Gf2Matrix.from_columns(list(c.basis_beta), c.n_edges)
    return b, inverse(b)


def in_beta(c: CopelandComplex, mat: Gf2Matrix) -> Gf2Matrix:
    b, binv = beta_change(c)
    return binv @ mat @ b


def a_block_rows(c: CopelandComplex, h: Gf2Matrix) -> dict[str, int]:
    """Row weights of the upper-right block of ``h`` in the beta basis, by row name."""
    hb = in_beta(c, h)
    z = 2 * c.genus + 3
    a = hb.block(0, z, z, hb.cols)
    return {c.beta_names[i]: a.row(i).weight for i in range(z)}


def expected_row_weights(c: CopelandComplex, e: int) -> dict[str, int]:
    z = 2 * c.genus + 3
    want = {name: 0 for name in c.beta_names[:z]}
    edge = c.edges[e]
    if edge.klass == E_ZERO:
        want["D_" + edge.label] = 3 if e in c.special else 4
    return want


def _functional_row(c: CopelandComplex, y: Gf2Vector) -> int:
    """Row of the functional x -> y . boundary(x) on the beta' edges."""
    bits = 0
    for j, eid in enumerate(c.beta_prime_ids):
        if y.dot(c.boundary.column(eid)):
            bits |= 1 << j
    return bits


def conjugate_row_closure(c: CopelandComplex, e: int, pair: Pairing = pairing) -> list[int]:
    """Span of the Delta_e rows of s h_e s^-1 over the symmetric subgroup.

    Conjugates are formed as actual matrix products in the beta basis; the
    span is closed under every E' generator until it stops growing.
    """
    z = 2 * c.genus + 3
    nb = c.n_edges - z
    row = c.beta_names.index("D_" + c.edges[e].label)
    b, binv = beta_change(c)
    sgens = []
    for t in c.e_prime:
        sb = binv @ sigma_on_c1(c, t.id, pair) @ b
        sgens.append((sb, inverse(sb)))
    h0 = in_beta(c, decompose(c, e, pair)[0])
    start = h0.block(0, z, z, c.n_edges).entries[row]

    def h_with(r: int) -> Gf2Matrix:
        rows = list(Gf2Matrix.identity(c.n_edges).entries)
        rows[row] |= r << z
        return Gf2Matrix(c.n_edges, c.n_edges, tuple(rows))

    basis: list[int] = []
    pivots: dict[int, int] = {}

    def add(r: int) -> bool:
        for p in sorted(pivots, reverse=True):
            if (r >> p) & 1:
                r ^= pivots[p]
        if not r:
            return False
        pivots[r.bit_length() - 1] = r
        basis.append(r)
        return True

    add(start)
    frontier = [start]
    while frontier:
        nxt = []
        for r in frontier:
            hr = h_with(r)
            for sb, sinv in sgens:
                conj = sb @ hr @ sinv
                assert conj.block(z, c.n_edges, z, c.n_edges).is_identity()
                new = conj.block(0, z, z, c.n_edges).entries[row]
                if add(new):
                    nxt.append(new)
        frontier = nxt
    assert all(r >> nb == 0 for r in basis)
    return basis


def verify_group_relations(gs: GeneratorSet, pair: Pairing = pairing, constructive: bool = True) -> ValidationReport:
    c = gs.complex
    g = gs.genus
    rep = ValidationReport("generators g=%d" % g)
    recs = gs.records
    mats = {r.edge: r.on_c1 for r in recs}
    ident = Gf2Matrix.identity(c.n_edges)

    bad = [r.label for r in recs if not (r.on_c1 @ r.on_c1).is_identity()]
    rep.add("involution", not bad, [], bad)

    bad = []
    for i, ei in enumerate(c.edges):
        for ej in c.edges[i + 1:]:
            if set(ei.endpoints) & set(ej.endpoints):
                continue
            if mats[ei.id] @ mats[ej.id] != mats[ej.id] @ mats[ei.id]:
                bad.append((ei.label, ej.label))
    rep.add("disjoint_commute", not bad, [], bad)

    ring = [c.edge_between(i, i % c.n_vertices + 1).id for i in range(1, c.n_vertices + 1)]
    bad = []
    for i in range(len(ring)):
        a, b = ring[i], ring[(i + 1) % len(ring)]
        if not ((mats[a] @ mats[b]) ** 3).is_identity():
            bad.append((c.edges[a].label, c.edges[b].label))
    rep.add("braid_cubed", not bad, [], bad)

    bad = [r.label for r in recs if r.h_part @ r.s_part != r.on_c1]
    rep.add("h_times_s", not bad, [], bad)

    z1 = kernel_basis(c.boundary)
    bad = [r.label for r in recs if any(r.on_c1.apply(v) != v for v in z1)]
    rep.add("fixes_Z1", not bad, [], bad)

    bad = []
    for r in recs:
        a, b = c.edges[r.edge].endpoints
        p = vertex_transposition(c.n_vertices, a, b)
        if c.boundary @ r.on_c1 != p @ c.boundary:
            bad.append(r.label)
    rep.add("boundary_equivariant", not bad, [], bad)

    bad = [r.label for r in recs if r.on_p2 is None]
    rep.add("relations_invariant", not bad, [], bad)

    bad = [r.label for r in recs if r.on_p2 is None or not is_theorem_shape(r.on_p2, c)]
    rep.add("p2_block_shape", not bad, [], bad)

    bad = []
    for r in recs:
        if r.on_p2 is None:
            continue
        a, b = c.edges[r.edge].endpoints
        pi = x_chart(c).permutation_action(vertex_transposition(c.n_vertices, a, b))
        s = 2 * g
        if r.on_p2.block(s, r.on_p2.rows, s, r.on_p2.cols) != pi:
            bad.append(r.label)
    rep.add("p2_pi_is_endpoint_swap", not bad, [], bad)

    bad = []
    for r in recs:
        got = a_block_rows(c, r.h_part)
        want = expected_row_weights(c, r.edge)
        if got != want:
            bad.append((r.label, {k: v for k, v in got.items() if v}))
    rep.add("a_row_weights", not bad, "4 generic E0 / 3 u5,l6 / 0 E'", bad)

    if gs.theorem_generators:
        bad = [i for i, m in enumerate(gs.theorem_generators) if not is_theorem_shape(m, c)]
        rep.add("theorem_block_shape", not bad, [], bad)

    if constructive:
        xd = 4 * g - 6
        n = c.n_vertices
        targets = [_functional_row(c, Gf2Vector.from_support([0, k - 1], n)) for k in range(2, n + 1)]
        bad = []
        for e in c.e_zero:
            span = conjugate_row_closure(c, e.id, pair)
            ok = len(span) == xd and rank_ints(span + targets) == xd
            if not ok:
                bad.append((e.label, len(span)))
        rep.add("conjugates_generate_R_rows", not bad, xd, bad,
                "conjugates of each h_e span the rows of all R^k")
    return rep


def rank_ints(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        for p in sorted(pivots, reverse=True):
            if (r >> p) & 1:
                r ^= pivots[p]
        if r:
            pivots[r.bit_length() - 1] = r
    return len(pivots)


def matrix_to_dict(m: Gf2Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "hex_rows": m.to_hex_rows()}
