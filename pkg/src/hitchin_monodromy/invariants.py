"""Closed-form invariants of spectral data and their consistency checks.

Everything here is exact integer arithmetic.  Out-of-range spectral data is
reported through a ``valid`` flag and a reason rather than an exception,
because the sweeps deliberately walk across the boundary of the valid
region.  A parity mismatch between m and m-tilde is the one hard error.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

from .reports import ValidationReport

FAMILIES = ("GL", "SL", "Sp", "SO_odd", "SO_even")
GENUS_FAMILIES = ("classical", "upp", "upp_quotient", "so_even_desing", "so_even_virtual", "so_even_quotient")
TOLEDO_NOTE = ("tau = v - w in the defining display; the maximal-Toledo discussion for SU(p,p) "
               "writes w - v = 2p(g-1) at m_tilde = 0, the opposite sign; both are reported")


class ParityError(ValueError):
    """deg M and m_tilde must have the same parity."""


def _check_pg(p: int, g: int) -> None:
    if p < 1:
        raise ValueError("p must be at least 1")
    if g < 2:
        raise ValueError("genus must be at least 2")


# --------------------------------------------------------------------------
# genera


def spectral_genus(family: str, n: int, g: int) -> int:
    """Genus of the spectral curve (or one of its quotients) for a family.

    ``classical`` is the rank-n cover, ``upp``/``upp_quotient`` are the U(p,p)
    curve S and its quotient by the involution (``n`` is p), and the
    ``so_even_*`` entries describe SO(2n): the desingularized curve, the
    virtual genus of the singular rank-2n curve, and the quotient of the
    desingularized curve by its involution.
    """
    _check_pg(n, g)
    if family == "classical":
        return 1 + n * n * (g - 1)
    if family == "upp":
        return 4 * n * n * (g - 1) + 1
    if family == "upp_quotient":
        return (2 * n * n - n) * (g - 1) + 1
    if family == "so_even_desing":
        return 1 + 2 * n * (2 * n - 1) * (g - 1)
    if family == "so_even_virtual":
        return 1 + 4 * n * n * (g - 1)
    if family == "so_even_quotient":
        return (spectral_genus("so_even_desing", n, g) + 1) // 2
    raise ValueError("unknown family %r (choose from %s)" % (family, ", ".join(GENUS_FAMILIES)))


def so_even_prym_chain(n: int, g: int) -> dict:
    """Riemann-Hurwitz chain for the unramified double cover of the SO(2n) curve."""
    top = spectral_genus("so_even_desing", n, g)
    bottom = spectral_genus("so_even_quotient", n, g)
    assert 2 - 2 * top == 2 * (2 - 2 * bottom)
    prym = top - bottom
    assert prym == n * (2 * n - 1) * (g - 1)
    return {"desingularized_genus": top, "quotient_genus": bottom, "prym_dim": prym}


# --------------------------------------------------------------------------
# Hitchin base and moduli dimensions


def _degrees(family: str, n: int) -> list[int]:
    if family == "GL":
        return list(range(1, n + 1))
    if family == "SL":
        if n < 2:
            raise ValueError("SL needs n >= 2")
        return list(range(2, n + 1))
    if family in ("Sp", "SO_odd"):
        return list(range(2, 2 * n + 1, 2))
    if family == "SO_even":
        return list(range(2, 2 * n - 1, 2)) + [n]
    raise ValueError("unknown family %r (choose from %s)" % (family, ", ".join(FAMILIES)))


def h0_canonical_power(d: int, g: int) -> int:
    if d == 1:
        return g
    return (2 * d - 1) * (g - 1)


def group_dim(family: str, n: int) -> int:
    return {"GL": n * n, "SL": n * n - 1, "Sp": n * (2 * n + 1),
            "SO_odd": n * (2 * n + 1), "SO_even": n * (2 * n - 1)}[family]


def center_dim(family: str, n: int) -> int:
    if family == "GL" or (family == "SO_even" and n == 1):
        return 1
    return 0


@dataclass(frozen=True)
class GroupDims:
    family: str
    n: int
    g: int
    base_dim: int
    moduli_dim: int


def hitchin_base_dim(family: str, n: int, g: int) -> int:
    return sum(h0_canonical_power(d, g) for d in _degrees(family, n))


def group_dims(family: str, n: int, g: int) -> GroupDims:
    base = hitchin_base_dim(family, n, g)
    moduli = 2 * (group_dim(family, n) * (g - 1) + center_dim(family, n))
    return GroupDims(family, n, g, base, moduli)


def dim_identity_check(family: str, n: int, g: int) -> bool:
    d = group_dims(family, n, g)
    return 2 * d.base_dim == d.moduli_dim


# --------------------------------------------------------------------------
# U(p,p)


@dataclass(frozen=True, slots=True)
class UppParams:
    p: int
    g: int
    v: int
    w: int
    m: int
    m_tilde: int
    deg_u1: int
    deg_u2: int
    valid: bool = True
    reason: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _mt_reason(p: int, g: int, mt: int) -> str:
    top = 4 * p * (g - 1)
    if mt < 0:
        return "m_tilde = %d < 0" % mt
    if mt > top:
        return "m_tilde = %d > 4p(g-1) = %d" % (mt, top)
    return ""


def upp_from_vw(p: int, g: int, v: int, w: int) -> UppParams:
    _check_pg(p, g)
    k = g - 1
    m = v + w + (4 * p * p - 2 * p) * k
    mt = w - v + 2 * p * k
    reason = _mt_reason(p, g, mt)
    return UppParams(p, g, v, w, m, mt,
                     v + (2 * p * p - 2 * p) * k, w + (2 * p * p - 2 * p) * k,
                     not reason, reason)


def upp_from_m(p: int, g: int, m: int, m_tilde: int) -> UppParams:
    _check_pg(p, g)
    if (m - m_tilde) % 2:
        raise ParityError("deg M = %d and m_tilde = %d have different parity; the number of "
                          "-1 fixed points must match the parity of deg M" % (m, m_tilde))
    k = g - 1
    v = (m - m_tilde) // 2 + (2 * p - 2 * p * p) * k
    w = (m + m_tilde) // 2 - 2 * p * p * k
    reason = _mt_reason(p, g, m_tilde)
    return UppParams(p, g, v, w, m, m_tilde, (m - m_tilde) // 2,
                     (m + m_tilde) // 2 - 2 * p * k, not reason, reason)


def deg_u_forms(u: UppParams) -> tuple[tuple[int, int], tuple[int, int]]:
    """Both closed forms of (deg U1, deg U2): from (v, w) and from (m, m_tilde)."""
    k = u.g - 1
    c = (2 * u.p * u.p - 2 * u.p) * k
    half_diff = (u.m - u.m_tilde) // 2
    half_sum = (u.m + u.m_tilde) // 2
    return (u.v + c, half_diff), (u.w + c, half_sum - 2 * u.p * k)


def swap_m_tilde(p: int, g: int, m_tilde: int) -> int:
    """The V/W swap acts on m_tilde as m_tilde -> 4p(g-1) - m_tilde and fixes m."""
    return 4 * p * (g - 1) - m_tilde


@dataclass(frozen=True, slots=True)
class ToledoResult:
    tau: int
    tau_from_m_tilde: int
    tau_opposite_sign: int
    bound: int
    within_bound: bool
    note: str = TOLEDO_NOTE


def toledo(p: int, g: int, v: int, w: int) -> ToledoResult:
    _check_pg(p, g)
    tau = v - w
    mt = w - v + 2 * p * (g - 1)
    other = -mt + 2 * p * (g - 1)
    assert tau == other
    bound = 2 * p * (g - 1)
    return ToledoResult(tau, other, -tau, bound, abs(tau) <= bound)


@dataclass(frozen=True)
class LefschetzResult:
    lefschetz: int
    h_plus: int | None = None
    h_minus: int | None = None
    valid: bool = True
    reason: str = ""


def lefschetz_upp(p: int, g: int, m_tilde: int, m: int | None = None) -> LefschetzResult:
    """L(sigma) = 2p(g-1) - m_tilde, plus the split h+ / h- when deg M is given."""
    _check_pg(p, g)
    k = g - 1
    lef = 2 * p * k - m_tilde
    reason = _mt_reason(p, g, m_tilde)
    if m is None:
        return LefschetzResult(lef, valid=not reason, reason=reason)
    if (m - m_tilde) % 2:
        raise ParityError("deg M and m_tilde must have the same parity")
    hp = (m - m_tilde) // 2 + (p - 2 * p * p) * k
    hm = (m + m_tilde) // 2 - (p + 2 * p * p) * k
    assert hp + hm == m - 4 * p * p * k
    assert hp - hm == lef
    return LefschetzResult(lef, hp, hm, not reason, reason)


class SuppResult(NamedTuple):
    m: int
    m_tilde: int
    nm_degree_check: bool
    valid: bool
    reason: str


def supp_constraints(p: int, g: int, w: int) -> SuppResult:
    """SU(p,p) data: v = -w, so m is pinned and the Norm condition holds on degrees."""
    _check_pg(p, g)
    k = g - 1
    m = (4 * p * p - 2 * p) * k
    mt = 2 * w + 2 * p * k
    u = upp_from_vw(p, g, -w, w)
    assert (u.m, u.m_tilde) == (m, mt)
    check = 2 * u.deg_u1 == p * (2 * p - 1) * (2 * g - 2) - mt
    return SuppResult(m, mt, check, u.valid, u.reason)


@dataclass(frozen=True)
class SpPPParams:
    p: int
    g: int
    moduli_dim: int
    base_dim: int
    fiber_dim: int
    lefschetz: int
    rank2_moduli_on_s: int


def sp2p2p_dims(p: int, g: int) -> SpPPParams:
    _check_pg(p, g)
    k = g - 1
    moduli = 2 * p * (4 * p + 1) * k
    base = (2 * p * p + p) * k
    fiber = (6 * p * p + p) * k
    lef = -2 * p * k
    rank2 = 3 * spectral_genus("upp", p, g) - 3
    assert base + fiber == moduli
    assert rank2 == 12 * p * p * k
    assert fiber == (rank2 - lef) // 2
    assert base == hitchin_base_dim("Sp", p, g)
    return SpPPParams(p, g, moduli, base, fiber, lef, rank2)


def direct_image_degree(deg_m: int, n: int, g: int, g_s: int) -> int:
    out = deg_m + (1 - g_s) - n * (1 - g)
    if g_s == 1 + n * n * (g - 1):
        assert out == deg_m + (n * n - n) * (1 - g)
    return out


@dataclass(frozen=True)
class UppComponent:
    p: int
    g: int
    m: int
    m_tilde: int
    symmetric_product_dim: int
    bundle_rank: int
    total_dim: int


def upp_component_data(p: int, g: int, m: int, m_tilde: int) -> UppComponent:
    """Data of the component labelled by (m, m_tilde) on the half range 0 <= m_tilde < 2p(g-1).

    The other half is reached through the V/W swap, see swap_m_tilde.
    """
    _check_pg(p, g)
    k = g - 1
    if not 0 <= m_tilde < 2 * p * k:
        raise ValueError("m_tilde = %d outside 0 <= m_tilde < 2p(g-1) = %d; apply the V/W swap "
                         "m_tilde -> 4p(g-1) - m_tilde first" % (m_tilde, 2 * p * k))
    if (m - m_tilde) % 2:
        raise ParityError("deg M and m_tilde must have the same parity")
    rank = (4 * p - 1) * k - m_tilde
    total = (2 * p * p + p) * k + spectral_genus("upp_quotient", p, g)
    assert total == 4 * p * p * k + 1
    return UppComponent(p, g, m, m_tilde, m_tilde, rank, total)


# --------------------------------------------------------------------------
# sweeps


def sweep_invariants(max_p: int = 5, max_genus: int = 10, span: int = 50, max_n: int = 10) -> ValidationReport:
    """Exhaustive identity sweep; one report item per identity family."""
    rep = ValidationReport("invariants")
    stats = {key: [0, 0] for key in ("round_trip", "deg_u_forms", "toledo", "parity", "bound",
                                      "lefschetz", "swap")}

    def tally(key, ok):
        stats[key][0] += 1
        if not ok:
            stats[key][1] += 1

    rng = range(-span, span + 1)
    for p in range(1, max_p + 1):
        for g in range(2, max_genus + 1):
            bound = 2 * p * (g - 1)
            for v in rng:
                for w in rng:
                    u = upp_from_vw(p, g, v, w)
                    t = toledo(p, g, v, w)
                    tally("bound", t.within_bound == u.valid)
                    if not u.valid:
                        continue
                    back = upp_from_m(p, g, u.m, u.m_tilde)
                    tally("round_trip", (back.v, back.w, back.deg_u1, back.deg_u2)
                          == (v, w, u.deg_u1, u.deg_u2))
                    (a1, b1), (a2, b2) = deg_u_forms(u)
                    tally("deg_u_forms", a1 == b1 == u.deg_u1 and a2 == b2 == u.deg_u2
                          and u.deg_u1 + u.deg_u2 == u.m - bound)
                    tally("toledo", t.tau == t.tau_from_m_tilde == -t.tau_opposite_sign)
                    tally("parity", (u.m - u.m_tilde) % 2 == 0)
                    lr = lefschetz_upp(p, g, u.m_tilde, u.m)
                    tally("lefschetz", lr.lefschetz == t.tau and lr.h_plus + p * (g - 1) == v
                          and lr.h_minus + p * (g - 1) == w)
                    s = swap_m_tilde(p, g, u.m_tilde)
                    tally("swap", swap_m_tilde(p, g, s) == u.m_tilde and 0 <= s <= 2 * bound)
            for mt in range(0, 2 * bound + 1):
                for m in (mt, mt + 1, mt + 2 * (g + p)):
                    try:
                        x = upp_from_m(p, g, m, mt)
                        ok = (m - mt) % 2 == 0
                        y = upp_from_vw(p, g, x.v, x.w)
                        tally("round_trip", (y.m, y.m_tilde, y.valid) == (m, mt, True))
                    except ParityError:
                        ok = (m - mt) % 2 == 1
                    tally("parity", ok)
    for key, (n, bad) in stats.items():
        rep.add("upp_" + key, bad == 0, n, n - bad, "cases checked / cases passing")

    bad = []
    cases = 0
    for fam in FAMILIES:
        for n in range(1 if fam != "SL" else 2, max_n + 1):
            for g in range(2, max_genus + 1):
                cases += 1
                if not dim_identity_check(fam, n, g):
                    bad.append((fam, n, g))
    rep.add("dim_identity", not bad, cases, bad)

    bad = []
    for p in range(1, max_p + 1):
        for g in range(2, max_genus + 1):
            try:
                sp2p2p_dims(p, g)
            except AssertionError:
                bad.append((p, g))
    rep.add("sp2p2p_additivity", not bad, max_p * (max_genus - 1), bad)

    bad = []
    cases = 0
    for p in range(1, max_p + 1):
        for g in range(2, max_genus + 1):
            for w in rng:
                r = supp_constraints(p, g, w)
                if r.valid:
                    cases += 1
                    if not r.nm_degree_check:
                        bad.append((p, g, w))
    rep.add("supp_norm_degree", not bad, cases, bad)

    bad = []
    for n in range(1, max_n + 1):
        for g in range(2, max_genus + 1):
            try:
                so_even_prym_chain(n, g)
            except AssertionError:
                bad.append((n, g))
    rep.add("so_even_prym_chain", not bad, [], bad)
    return rep
