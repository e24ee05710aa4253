"""Exhaustive orbit enumeration on P[2] = Z_2^(6g-6).

States are packed into one integer, bit ``i`` holding coordinate ``i``
(the 2g ``s`` coordinates first, then the 4g-6 ``x`` coordinates).  A
generator is applied through two lookup tables, one for the low half of
the state and one for the high half, so a matrix-vector product costs two
loads and an XOR.

Orbits are discovered by scanning states in increasing order and closing
each unvisited one breadth-first.  The root of every orbit is therefore its
smallest state, and numbering orbits in discovery order gives a canonical
label for each state: two enumerations yield the same partition exactly
when their label arrays are equal.
"""

from __future__ import annotations

import os
import time
from collections import Counter
from dataclasses import dataclass, field

import numba
import numpy as np

from .copeland import build_complex
from .gf2 import Gf2Matrix, Gf2Vector
from .generators import x_chart

DEFAULT_MAX_STATE_BITS = 30
GUARD_ENV = "HM_MAX_STATE_BITS"
ORBIT_FORMAT = "orbits/1"


class StateGuardError(RuntimeError):
    """Raised when an enumeration would exceed the state-size guard."""


def max_state_bits() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_STATE_BITS
    try:
        return int(raw)
    except ValueError as exc:
        raise StateGuardError("%s must be an integer, got %r" % (GUARD_ENV, raw)) from exc


def _half_tables(gens: list[Gf2Matrix], dim: int) -> tuple[np.ndarray, np.ndarray, int]:
    lo_bits = dim // 2
    hi_bits = dim - lo_bits
    lo = np.zeros((len(gens), 1 << lo_bits), dtype=np.uint32)
    hi = np.zeros((len(gens), 1 << hi_bits), dtype=np.uint32)
    for k, m in enumerate(gens):
        cols = m.column_images()
        for table, bits, offset in ((lo, lo_bits, 0), (hi, hi_bits, lo_bits)):
            row = table[k]
            for b in range(bits):
                step = 1 << b
                row[step:2 * step] = row[:step] ^ np.uint32(cols[offset + b])
    return lo, hi, lo_bits


@numba.njit(cache=True, nogil=True)
def _close_all(lo, hi, lo_bits, n_states, labels, sizes, reps, queue):
    lo_mask = (1 << lo_bits) - 1
    n_gens = lo.shape[0]
    n_orbits = 0
    for root in range(n_states):
        if labels[root] >= 0:
            continue
        labels[root] = n_orbits
        queue[0] = root
        head = 0
        tail = 1
        while head < tail:
            s = queue[head]
            head += 1
            a = s & lo_mask
            b = s >> lo_bits
            for k in range(n_gens):
                t = lo[k, a] ^ hi[k, b]
                if labels[t] < 0:
                    labels[t] = n_orbits
                    queue[tail] = t
                    tail += 1
        sizes[n_orbits] = tail
        reps[n_orbits] = root
        n_orbits += 1
    return n_orbits


@dataclass
class OrbitReport:
    genus: int
    group: str
    dim: int
    state_count: int
    orbit_count: int
    orbit_sizes: np.ndarray
    representatives: np.ndarray
    labels: np.ndarray | None = None
    invariant_labels: list = field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def singleton_count(self) -> int:
        return int(np.count_nonzero(self.orbit_sizes == 1))

    def size_histogram(self) -> dict[int, int]:
        return {int(k): int(v) for k, v in sorted(Counter(self.orbit_sizes.tolist()).items())}

    def invariant_table(self) -> list[dict]:
        """Orbits grouped by the class of their nonzero x-part."""
        rows: dict = {}
        for lab, size in zip(self.invariant_labels, self.orbit_sizes.tolist()):
            key = "fixed" if lab[0] == "fixed" else "class %d" % lab[1]
            row = rows.setdefault(key, {"label": key, "orbits": 0, "states": 0})
            row["orbits"] += 1
            row["states"] += size
        order = sorted(rows, key=lambda k: (k != "fixed", k))
        return [rows[k] for k in order]

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "format": ORBIT_FORMAT,
            "genus": self.genus,
            "group": self.group,
            "state_bits": self.dim,
            "state_count": self.state_count,
            "orbit_count": self.orbit_count,
            "expected_orbit_count": component_count(self.genus)[0],
            "singleton_count": self.singleton_count,
            "sizes_histogram": {str(k): v for k, v in self.size_histogram().items()},
            "invariant_table": self.invariant_table(),
        }
        if timings:
            out["wall_time_ms"] = round(self.wall_time_ms, 3)
        return out


def enumerate_orbits(gens, genus: int, force: bool = False, keep_labels: bool = True,
                     group: str = "custom", threads: int | None = None) -> OrbitReport:
    """Partition Z_2^(6g-6) into orbits of the group generated by ``gens``.

    The traversal is serial; ``threads`` only caps numba's worker pool.
    """
    gens = list(gens)
    dim = 6 * genus - 6
    for m in gens:
        if (m.rows, m.cols) != (dim, dim):
            raise ValueError("generator is %dx%d, expected %dx%d" % (m.rows, m.cols, dim, dim))
    limit = max_state_bits()
    if dim > limit and not force:
        raise StateGuardError("%d state bits exceeds the guard of %d; pass --force or raise %s"
                              % (dim, limit, GUARD_ENV))
    if dim > 32:
        raise StateGuardError("states wider than 32 bits are not supported")
    if threads:
        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    if not gens:
        gens = [Gf2Matrix.identity(dim)]
    n_states = 1 << dim
    start = time.perf_counter()
    lo, hi, lo_bits = _half_tables(gens, dim)
    labels = np.full(n_states, -1, dtype=np.int32)
    sizes = np.zeros(n_states, dtype=np.int64)
    reps = np.zeros(n_states, dtype=np.uint32)
    queue = np.empty(n_states, dtype=np.uint32)
    count = _close_all(lo, hi, lo_bits, n_states, labels, sizes, reps, queue)
    del queue
    elapsed = (time.perf_counter() - start) * 1000.0
    sizes = sizes[:count].copy()
    reps = reps[:count].copy()
    invariants = [orbit_invariant(int(r), genus) for r in reps.tolist()]
    return OrbitReport(genus, group, dim, n_states, int(count), sizes, reps,
                       labels if keep_labels else None, invariants, elapsed)


def warm_up() -> None:
    """Compile the closure kernel on a tiny input so timings exclude JIT work."""
    lo = np.zeros((1, 2), dtype=np.uint32)
    lo[0, 1] = 1
    hi = np.zeros((1, 2), dtype=np.uint32)
    hi[0, 1] = 2
    n = 4
    _close_all(lo, hi, 1, n, np.full(n, -1, dtype=np.int32), np.zeros(n, dtype=np.int64),
               np.zeros(n, dtype=np.uint32), np.empty(n, dtype=np.uint32))


def split_state(state: int, genus: int) -> tuple[int, int]:
    s_dim = 2 * genus
    return state & ((1 << s_dim) - 1), state >> s_dim


def _lift_weight(x: int, genus: int) -> int:
    xc = x_chart(build_complex(genus))
    return xc.lift(Gf2Vector(x, xc.x_dim)).weight


def orbit_invariant(state, genus: int) -> tuple:
    """Label of a state: ("fixed", s) when x = 0, else ("class", c).

    ``state`` is a packed integer or an (s, x) pair of vectors or integers.
    For x != 0 the lift X is the even vertex set with class x, taken up to
    complement, and c = min(m, 2g-2-m) with m = |X|/2.
    """
    if isinstance(state, tuple):
        s, x = (v.bits if isinstance(v, Gf2Vector) else int(v) for v in state)
    else:
        s, x = split_state(int(state), genus)
    if x == 0:
        return ("fixed", s)
    m = _lift_weight(x, genus) // 2
    return ("class", min(m, 2 * genus - 2 - m))


def invariant_codes(genus: int) -> np.ndarray:
    """Invariant of every state as a small integer, computed without the orbit engine.

    Fixed states map to their s value, the rest to 2^(2g) + class.
    """
    s_dim = 2 * genus
    xc = x_chart(build_complex(genus))
    lifts = np.zeros(1, dtype=np.int64)
    for b in xc.basis:
        lifts = np.concatenate([lifts, lifts ^ b.bits])
    weights = np.array([bin(int(v)).count("1") for v in lifts], dtype=np.int64)
    m = weights // 2
    cls = np.minimum(m, 2 * genus - 2 - m) + (1 << s_dim)
    cls[0] = -1
    states = np.arange(1 << (6 * genus - 6), dtype=np.int64)
    x = states >> s_dim
    out = cls[x]
    fixed = x == 0
    out[fixed] = states[fixed]
    return out


def invariant_matches(report: OrbitReport, sample: int | None = None, seed: int = 0) -> bool:
    """True iff orbits and invariant labels determine each other.

    With ``sample`` set, only that many random states are compared against
    their orbit label; the bijection between orbits and labels is always
    checked in full.
    """
    if report.labels is None:
        raise ValueError("report was built without labels")
    codes_per_orbit = []
    for lab in report.invariant_labels:
        codes_per_orbit.append(lab[1] if lab[0] == "fixed" else (1 << (2 * report.genus)) + lab[1])
    codes_per_orbit = np.array(codes_per_orbit, dtype=np.int64)
    if len(np.unique(codes_per_orbit)) != report.orbit_count:
        return False
    if sample is None:
        return bool(np.array_equal(codes_per_orbit[report.labels], invariant_codes(report.genus)))
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, report.state_count, size=sample)
    for st in picks.tolist():
        lab = orbit_invariant(st, report.genus)
        code = lab[1] if lab[0] == "fixed" else (1 << (2 * report.genus)) + lab[1]
        if codes_per_orbit[report.labels[st]] != code:
            return False
    return True


def compare_partitions(a: OrbitReport, b: OrbitReport) -> bool:
    if a.genus != b.genus:
        raise ValueError("reports are for different genera")
    if a.orbit_count != b.orbit_count:
        return False
    if a.labels is not None and b.labels is not None:
        return bool(np.array_equal(a.labels, b.labels))
    # canonical numbering means equal representatives plus sizes is necessary,
    # but only the label arrays prove equality
    raise ValueError("both reports need labels to compare partitions")


def component_count(genus: int) -> tuple[int, int]:
    if genus < 3:
        raise ValueError("genus must be at least 3")
    return 2 ** (2 * genus) + genus - 1, 2 * 2 ** (2 * genus) + 2 * genus - 3
