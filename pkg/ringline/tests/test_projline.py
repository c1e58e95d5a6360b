import json
from itertools import product as cartesian

import numpy as np
import pytest

from ringline.core.exceptions import NotAdmissibleError
from ringline.services.projline import (
    affine_points,
    canonical_point,
    count_points,
    definitional_parallel,
    is_admissible,
    is_invertible,
    line_export,
    matrix_line_count,
    nondistant_is_equivalence,
    nondistant_witness,
    parallel_matrix,
    unimodular_matrix,
)

from .conftest import LOCAL


def _subspace_count(dim: int, sub: int) -> int:
    """Distinct sub-dimensional subspaces of GF(2)^dim by brute-force span enumeration."""
    spaces = set()
    vectors = range(1, 2 ** dim)
    for basis in cartesian(vectors, repeat=sub):
        span = {0}
        for v in basis:
            span |= {x ^ v for x in span}
        if len(span) == 2 ** sub:
            spaces.add(frozenset(span))
    return len(spaces)


def test_z6_line(line, ring):
    pl = line("Z/6")
    assert pl.size == 12
    assert int(unimodular_matrix(ring("Z/6")).sum()) == 24
    assert all(len(c) == 1 for c in pl.parallel_classes)
    assert not nondistant_is_equivalence(pl)


def test_z6_witness(line):
    pl = line("Z/6")
    p, q, r = nondistant_witness(pl)
    assert not pl.distant_matrix[p, q]
    assert not pl.distant_matrix[q, r]
    assert pl.distant_matrix[p, r]


def test_local_characterisation(zoo_spec, line):
    pl = line(zoo_spec)
    local = zoo_spec in LOCAL
    assert nondistant_is_equivalence(pl) == local
    assert all(len(c) == len(pl.ring.radical) for c in pl.parallel_classes)
    assert np.array_equal(parallel_matrix(pl), ~pl.distant_matrix) == local
    assert np.array_equal(parallel_matrix(pl), definitional_parallel(pl))


def test_distant_degree_is_ring_order(zoo_spec, line):
    pl = line(zoo_spec)
    assert (pl.distant_matrix.sum(axis=1) == pl.ring.order).all()
    assert not pl.distant_matrix.diagonal().any()
    assert np.array_equal(pl.distant_matrix, pl.distant_matrix.T)


def test_closed_form_count(zoo_spec, line):
    pl = line(zoo_spec)
    assert count_points(pl.ring) == pl.size


def test_matrix_line_count_oracle(line):
    assert matrix_line_count(2, 2) == 35
    assert _subspace_count(4, 2) == 35
    assert line("mat(2, GF(2))").size == 35


def test_product_count_factorizes(line):
    assert matrix_line_count(1, 2) * matrix_line_count(1, 3) == 12
    assert line("prod(GF(2), GF(3))").size == 12


def test_affine_points(line):
    pl = line("dual(GF(2), h=2)")
    affine = affine_points(pl)
    assert len(set(affine.tolist())) == pl.ring.order
    assert set(affine.tolist()) == set(pl.neighbourhood(pl.infinity))


def test_admissible_pairs(ring, line):
    z6 = ring("Z/6")
    assert is_admissible(z6, (2, 3))
    assert not is_admissible(z6, (2, 4))
    pl = line("Z/6")
    with pytest.raises(NotAdmissibleError):
        pl.point_of((0, 0))
    with pytest.raises(NotAdmissibleError):
        canonical_point(z6, (3, 3))


def test_canonical_point_is_least_in_orbit(ring, line):
    z6 = ring("Z/6")
    assert canonical_point(z6, (5, 0)) == (1, 0)
    pl = line("Z/6")
    for p in pl.points:
        assert canonical_point(z6, p.rep) == p.rep
        assert pl.point_lookup[p.rep] == p.id


def test_is_invertible(ring):
    z6 = ring("Z/6")
    assert is_invertible(z6, 1, 0, 0, 1)
    assert not is_invertible(z6, 2, 0, 0, 1)
    m2 = ring("mat(2, GF(2))")
    one, zero = m2.one_index, m2.zero_index
    assert is_invertible(m2, one, zero, zero, one)
    assert not is_invertible(m2, zero, zero, zero, one)


@pytest.mark.parametrize("spec", ["mat(2, GF(2))", "dual(GF(4), h=2, frob=1)"])
def test_distant_matrix_agrees_with_invertibility(line, spec):
    pl = line(spec)
    for p in range(pl.size):
        a, b = (int(x) for x in pl.reps[p])
        for q in range(p + 1, pl.size):
            c, d = (int(x) for x in pl.reps[q])
            assert pl.distant_matrix[p, q] == is_invertible(pl.ring, a, b, c, d)


def test_matrix_ring_over_gf3(line):
    pl = line("mat(2, GF(3))")
    assert pl.size == matrix_line_count(2, 3) == 130
    assert (pl.distant_matrix.sum(axis=1) == 81).all()
    assert np.array_equal(pl.distant_matrix, pl.distant_matrix.T)


def test_line_export_is_deterministic(line):
    first = line_export(line("Z/6")).model_dump_json(indent=2)
    second = line_export(line("Z/6")).model_dump_json(indent=2)
    assert first == second
    data = json.loads(first)
    assert len(data["points"]) == 12
    assert len(data["distant"]) == 12 * 6 // 2
    assert data["points"][0] == ["0", "1"]
