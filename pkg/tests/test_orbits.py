from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hitchin_monodromy.generators import graph_p2_generators, theorem_group
from hitchin_monodromy.gf2 import Gf2Matrix, Gf2Vector
from hitchin_monodromy.orbits import (GUARD_ENV, StateGuardError, compare_partitions, component_count,
                                      enumerate_orbits, invariant_matches, orbit_invariant, warm_up)


@pytest.fixture(scope="module")
def g3():
    warm_up()
    return enumerate_orbits(theorem_group(3), 3, group="theorem")


def python_orbits(gens, dim):
    """Plain set-based BFS, independent of the table-driven kernel."""
    cols = [m.column_images() for m in gens]

    def apply(c, s):
        out = 0
        j = 0
        while s:
            if s & 1:
                out ^= c[j]
            s >>= 1
            j += 1
        return out

    seen = {}
    for root in range(1 << dim):
        if root in seen:
            continue
        k = len(set(seen.values()))
        seen[root] = k
        q = deque([root])
        while q:
            s = q.popleft()
            for c in cols:
                t = apply(c, s)
                if t not in seen:
                    seen[t] = k
                    q.append(t)
    return np.array([seen[s] for s in range(1 << dim)])


def test_genus_three_count(g3):
    assert g3.orbit_count == 66
    assert g3.singleton_count == 64
    assert int(g3.orbit_sizes.sum()) == 4096


def test_kernel_matches_python_bfs(g3):
    assert np.array_equal(python_orbits(theorem_group(3), 12), g3.labels)


def test_genus_four_graph_equals_theorem():
    a = enumerate_orbits(theorem_group(4), 4)
    b = enumerate_orbits(graph_p2_generators(4), 4)
    assert a.orbit_count == b.orbit_count == 259
    assert compare_partitions(a, b)


def test_identity_only_gives_all_singletons():
    r = enumerate_orbits([Gf2Matrix.identity(12)], 3)
    assert r.orbit_count == 4096
    assert enumerate_orbits([], 3).orbit_count == 4096


def test_compare_partitions(g3):
    assert compare_partitions(g3, g3)
    ident = enumerate_orbits([Gf2Matrix.identity(12)], 3)
    assert not compare_partitions(g3, ident)


def test_singletons_are_zero_x_states(g3):
    singles = g3.representatives[g3.orbit_sizes == 1]
    assert sorted(int(s) >> 6 for s in singles) == [0] * 64


def test_invariant_labels_separate_orbits(g3):
    assert invariant_matches(g3)
    assert {lab[1] for lab in g3.invariant_labels if lab[0] == "class"} == {1, 2}


def test_invariant_classes_at_genus_four():
    r = enumerate_orbits(theorem_group(4), 4)
    assert invariant_matches(r)
    assert {lab[1] for lab in r.invariant_labels if lab[0] == "class"} == {1, 2, 3}


def test_orbit_invariant_on_pairs():
    zero_x = orbit_invariant((Gf2Vector(5, 6), Gf2Vector(0, 6)), 3)
    assert zero_x == ("fixed", 5)
    # every unit x vector is the class of one Hamiltonian edge: a pair, m = 1
    for k in range(6):
        assert orbit_invariant((0, 1 << k), 3) == ("class", 1)


@given(st.integers(0, 4095), st.integers(0, 42))
def test_invariant_is_preserved_by_generators(state, k):
    m = theorem_group(3)[k]
    img = m.apply(Gf2Vector(state, 12)).bits
    assert orbit_invariant(state, 3) == orbit_invariant(img, 3)


@pytest.mark.parametrize("g,want", [(3, (66, 131)), (4, (259, 517)), (5, (1028, 2055))])
def test_component_count(g, want):
    assert component_count(g) == want


def test_guard_refuses_and_force_overrides(monkeypatch):
    monkeypatch.setenv(GUARD_ENV, "10")
    with pytest.raises(StateGuardError):
        enumerate_orbits(theorem_group(3), 3)
    assert enumerate_orbits(theorem_group(3), 3, force=True).orbit_count == 66
    monkeypatch.setenv(GUARD_ENV, "12")
    assert enumerate_orbits(theorem_group(3), 3).orbit_count == 66


def test_wrong_dimension_rejected():
    with pytest.raises(ValueError):
        enumerate_orbits([Gf2Matrix.identity(11)], 3)


def test_report_dict_is_tagged(g3):
    d = g3.to_dict()
    assert d["format"] == "orbits/1" and d["orbit_count"] == 66
    assert sum(d["sizes_histogram"].values()) == 66
    assert "wall_time_ms" not in d
