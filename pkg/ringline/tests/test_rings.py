import numpy as np
import pytest

from ringline.core.exceptions import CapExceededError, FormatError, RingAxiomError
from ringline.schemas.ringspec import GaloisField, Zmod
from ringline.services.rings import (
    build_ring,
    center_of,
    check_ring_axioms,
    find_subfield,
    is_dedekind_finite,
    is_local,
    jacobson_radical,
    nilpotency_index,
    quotient_by_radical,
    read_table_ring,
    spec_order,
    units_of,
    validate_ring_tables,
    wedderburn_signature,
    write_table_ring,
)
from ringline.services.rings.builders import _build

from .conftest import LOCAL


def _z4_tables():
    idx = np.arange(4)
    return (idx[:, None] + idx[None, :]) % 4, (idx[:, None] * idx[None, :]) % 4


def test_z6_structure(ring):
    r = ring("Z/6")
    assert r.order == 6
    assert [r.labels[u] for u in r.unit_list] == ["1", "5"]
    assert r.radical == frozenset({0})
    assert not r.is_local
    assert r.is_commutative
    assert r.char == 6


def test_galois_field_labels(ring):
    r = ring("GF(4)")
    assert r.labels == ("0", "1", "t", "t+1")
    assert r.is_field
    assert r.char == 2


def test_twisted_dual_numbers(ring):
    r = ring("dual(GF(4), h=2, frob=1)")
    assert r.order == 16
    assert len(r.units) == 12
    assert not r.is_commutative
    assert r.is_local
    assert len(r.radical) == 4
    assert center_of(r) == (0, 4)


def test_zoo_structure_agrees(zoo_spec, ring):
    r = ring(zoo_spec)
    assert units_of(r) == r.units
    assert jacobson_radical(r) == r.radical
    assert is_local(r) == (zoo_spec in LOCAL)
    assert is_dedekind_finite(r)


def test_axiom_check_accepts_z4():
    add, mul = _z4_tables()
    assert check_ring_axioms(add, mul) is None


def test_axiom_check_reports_first_witness():
    add, mul = _z4_tables()
    mul[2, 3] = 1
    violation = check_ring_axioms(add, mul)
    assert violation.axiom == "left distributivity"
    assert violation.witness == (2, 1, 2)
    with pytest.raises(RingAxiomError) as info:
        validate_ring_tables(add, mul)
    assert info.value.axiom == "left distributivity"


def test_axiom_check_missing_identity():
    add, _ = _z4_tables()
    assert check_ring_axioms(add, np.zeros((4, 4), dtype=int)).axiom == "multiplicative identity"


def test_axiom_check_sampled_mode():
    add, mul = _z4_tables()
    assert check_ring_axioms(add, mul, exhaustive=False, samples=200, seed=1) is None


def test_table_ring_file(fixtures_dir, ring, tmp_path):
    z4 = read_table_ring(fixtures_dir / "z4.ring")
    reference = ring("Z/4")
    assert np.array_equal(z4.add, reference.add)
    assert np.array_equal(z4.mul, reference.mul)

    path = tmp_path / "copy.ring"
    path.write_text(write_table_ring(z4))
    assert np.array_equal(read_table_ring(path).mul, reference.mul)


def test_table_ring_spec(fixtures_dir, ring):
    r = ring(f"table({fixtures_dir / 'z4.ring'})")
    assert r.order == 4
    assert r.radical == frozenset({0, 2})


def test_table_ring_format_errors(tmp_path):
    path = tmp_path / "broken.ring"
    path.write_text("ring 2\nlabels\n0 1\nadd\n0 1\n1 0\nmul\n0 0\n")
    with pytest.raises(FormatError):
        read_table_ring(path)
    path.write_text("field 2\n")
    with pytest.raises(FormatError) as info:
        read_table_ring(path)
    assert info.value.line == 1


def test_cap_is_enforced():
    with pytest.raises(CapExceededError):
        build_ring(GaloisField(q=8), cap=4)
    assert build_ring(Zmod(m=4), cap=4).order == 4


def test_spec_order(ring):
    from ringline.app.grammar import parse_ring_spec

    for text in ["mat(2, GF(2))", "ext(GF(2), n=2)", "dual(GF(2), h=3)", "prod(GF(2), GF(3))"]:
        assert spec_order(parse_ring_spec(text)) == ring(text).order


def test_memoized_build(ring):
    first = ring("Z/6")
    hits = _build.cache_info().hits
    assert ring("Z/6") is first
    assert _build.cache_info().hits == hits + 1


@pytest.mark.parametrize(
    "spec,signature",
    [
        ("mat(2, GF(2))", [(2, 2)]),
        ("prod(GF(2), GF(3))", [(1, 2), (1, 3)]),
        ("GF(5)", [(1, 5)]),
        ("Z/6", [(1, 2), (1, 3)]),
    ],
)
def test_wedderburn_signature(ring, spec, signature):
    assert wedderburn_signature(ring(spec)) == signature


def test_quotient_by_radical(ring):
    quotient, hom = quotient_by_radical(ring("Z/8"))
    assert quotient.order == 2
    assert quotient.is_field
    assert hom.kernel() == frozenset({0, 2, 4, 6})
    twisted, _ = quotient_by_radical(ring("dual(GF(4), h=2, frob=1)"))
    assert wedderburn_signature(twisted) == [(1, 4)]


@pytest.mark.parametrize("spec,index", [("GF(2)", 1), ("Z/8", 3), ("dual(GF(2), h=3)", 3), ("ext(GF(2), n=2)", 3)])
def test_nilpotency_index(ring, spec, index):
    assert nilpotency_index(ring(spec)) == index


def test_find_subfield(ring):
    found = find_subfield(ring("mat(2, GF(2))"), 4)
    assert found is not None
    assert len(found[1]) == 4
    assert find_subfield(ring("Z/4"), 4) is None


def test_coefficient_fields(ring):
    assert ring("dual(GF(2), h=2)").coefficients.domain.order == 2
    assert ring("mat(2, GF(2))").coefficients.image == (0, 9)
    assert ring("Z/6").coefficients is None


@pytest.mark.parametrize("spec,factors", [("prod(GF(2), GF(3))", ["GF(2)", "GF(3)"]), ("prod(Z/4, GF(3))", ["Z/4", "GF(3)"])])
def test_product_units_and_radical_factorize(ring, spec, factors):
    whole = ring(spec)
    first, second = (ring(f) for f in factors)
    assert whole.order == first.order * second.order

    def pairs(a, b):
        return frozenset(x * second.order + y for x in a for y in b)

    assert whole.units == pairs(first.units, second.units)
    assert whole.radical == pairs(first.radical, second.radical)


@pytest.mark.parametrize("spec", ["Z/8", "dual(GF(4), h=2, frob=1)", "ext(GF(2), n=2)", "prod(Z/4, GF(3))"])
def test_quotient_by_radical_preserves_units(ring, spec):
    r = ring(spec)
    quotient, hom = quotient_by_radical(r)
    assert quotient.order * len(r.radical) == r.order
    for x in range(r.order):
        assert (int(hom.map[x]) in quotient.units) == (x in r.units)
