import pytest

from ringline.app.grammar import parse_ring_spec, print_ring_spec, read_field_witness
from ringline.core.exceptions import FormatError, RingSpecError
from ringline.schemas.ringspec import (
    DualNumbers,
    ExteriorAlgebra,
    GaloisField,
    MatrixRing,
    Product,
    TableRing,
    TwistedDual,
    Zmod,
)

from .conftest import ZOO


def test_simple_atoms():
    assert parse_ring_spec("Z/6") == Zmod(m=6)
    assert parse_ring_spec("GF(9)") == GaloisField(q=9)
    assert parse_ring_spec("table(fixtures/z4.ring)") == TableRing(path="fixtures/z4.ring")


def test_twisted_and_untwisted_dual():
    assert parse_ring_spec("dual(GF(4), h=2, frob=1)") == TwistedDual(base=GaloisField(q=4), frobenius_power=1)
    assert parse_ring_spec("dual(GF(3), h=3)") == DualNumbers(base=GaloisField(q=3), h=3)
    assert parse_ring_spec("dual(GF(3), h=2, frob=0)") == DualNumbers(base=GaloisField(q=3), h=2)


def test_nested_specs():
    assert parse_ring_spec("prod(GF(2), GF(3))") == Product(factors=(GaloisField(q=2), GaloisField(q=3)))
    assert parse_ring_spec("mat(2, dual(GF(2), h=2))") == MatrixRing(m=2, base=DualNumbers(base=GaloisField(q=2), h=2))
    assert parse_ring_spec("ext(Z/4, n=3)") == ExteriorAlgebra(base=Zmod(m=4), n=3)


@pytest.mark.parametrize("text", ZOO + ["mat(2, prod(Z/4, GF(3)))", "ext(dual(GF(2), h=3), n=2)"])
def test_print_parse_fixed_point(text):
    spec = parse_ring_spec(text)
    printed = print_ring_spec(spec)
    assert parse_ring_spec(printed) == spec
    assert print_ring_spec(parse_ring_spec(printed)) == printed


def test_quoted_table_paths(fixtures_dir, tmp_path, ring):
    folder = tmp_path / "rings (copy)"
    folder.mkdir()
    target = folder / "z4.ring"
    target.write_text((fixtures_dir / "z4.ring").read_text())
    spec = parse_ring_spec(f'table("{target}")')
    assert spec == TableRing(path=str(target))
    printed = print_ring_spec(spec)
    assert printed.startswith('table("')
    assert parse_ring_spec(printed) == spec
    assert ring(printed).order == 4
    assert parse_ring_spec('table("a\\"b)")') == TableRing(path='a"b)')
    assert parse_ring_spec(print_ring_spec(TableRing(path='a"b)'))) == TableRing(path='a"b)')


def test_semantic_error_is_located():
    with pytest.raises(RingSpecError) as info:
        parse_ring_spec("prod(GF(2), GF(6))")
    assert "not a prime power" in info.value.message
    assert info.value.line == 1
    assert info.value.column == 13


@pytest.mark.parametrize(
    "text,reason",
    [
        ("dual(GF(4), h=2, frob=2)", "identity"),
        ("dual(GF(4), h=3, frob=1)", "h=2"),
        ("dual(Z/4, h=2, frob=1)", "Galois field"),
        ("dual(GF(2), h=1)", "greater than or equal to 2"),
        ("Z/1", "greater than or equal to 2"),
    ],
)
def test_semantic_errors(text, reason):
    with pytest.raises(RingSpecError) as info:
        parse_ring_spec(text)
    assert reason in info.value.message


@pytest.mark.parametrize("text", ["", "GF(", "Z/", "prod()", "GF(4) extra", "mat(2 GF(2))", "ring(3)"])
def test_syntax_errors(text):
    with pytest.raises(RingSpecError):
        parse_ring_spec(text)


def test_field_witness(fixtures_dir, tmp_path):
    field, generator = read_field_witness(fixtures_dir / "gf4-in-m2.witness")
    assert field == GaloisField(q=4)
    assert generator == "[[0,1],[1,1]]"

    broken = tmp_path / "broken.witness"
    broken.write_text("field GF(4)\n")
    with pytest.raises(FormatError):
        read_field_witness(broken)
    broken.write_text("field GF(6)\ngenerator 1\n")
    with pytest.raises(FormatError) as info:
        read_field_witness(broken)
    assert info.value.line == 1
