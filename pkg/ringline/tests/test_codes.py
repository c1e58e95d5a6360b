from itertools import product

import pytest

from ringline.core.exceptions import FormatError, InvalidParameterError
from ringline.services.codes import (
    ConstantWeightCode,
    Psi,
    apply_code_isomorphism,
    canonical_psi,
    code_from_design,
    find_code_isomorphism,
    hamming_distance,
    hamming_weight,
    parse_code,
    read_code,
    verify_constant_weight,
    write_code,
)
from ringline.services.designs import make_design, read_design


@pytest.fixture
def design(fixtures_dir):
    return lambda name: read_design(fixtures_dir / name)


def test_octahedron_code(design):
    code = code_from_design(design("octahedron.dd"))
    assert (code.n, code.m, code.k) == (3, 3, 3)
    assert set(code.words) == set(product((1, 2), repeat=3))
    assert verify_constant_weight(code)


def test_pappos_code(design):
    code = code_from_design(design("pappos.dd"))
    assert (code.n, code.m, code.k, len(code.words)) == (3, 4, 3, 9)
    # two lines through a common point share one coordinate
    distances = {hamming_distance(a, b) for a in code.words for b in code.words if a != b}
    assert distances <= {2, 3}


def test_fano_code(design):
    code = code_from_design(design("fano.dd"))
    assert (code.n, code.m, code.k, len(code.words)) == (7, 2, 3, 7)
    assert all(word.count(0) == 4 for word in code.words)
    assert {hamming_distance(a, b) for a in code.words for b in code.words if a != b} == {4}


def test_half_octahedron_code(design):
    code = code_from_design(design("octahedron-half.dd"))
    assert sorted(code.words) == [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)]


def test_canonical_psi(design):
    psi = canonical_psi(design("pappos.dd"))
    assert psi.class_order == (0, 1, 2)
    assert [psi.symbols[x] for x in range(9)] == [1, 2, 3] * 3


def test_hamming():
    assert hamming_weight((0, 2, 0, 1)) == 2
    assert hamming_distance((0, 1, 2), (0, 2, 2)) == 1
    with pytest.raises(InvalidParameterError):
        hamming_distance((0, 1), (0, 1, 2))


def test_unequal_sizes_rejected():
    with pytest.raises(InvalidParameterError, match="classes of unequal sizes"):
        code_from_design(make_design(3, [[0], [1, 2]], [[0, 1], [0, 2]]))
    with pytest.raises(InvalidParameterError, match="blocks of unequal sizes"):
        code_from_design(make_design(3, [[0], [1], [2]], [[0, 1], [0, 1, 2]]))


def test_bad_psi_rejected(design):
    octahedron = design("octahedron.dd")
    with pytest.raises(InvalidParameterError):
        code_from_design(octahedron, Psi((0, 0, 1), canonical_psi(octahedron).symbols))
    with pytest.raises(InvalidParameterError):
        code_from_design(octahedron, Psi((0, 1, 2), {x: 1 for x in range(6)}))


def test_another_psi_gives_an_isomorphic_code(design):
    half = design("octahedron-half.dd")
    canonical = code_from_design(half)
    symbols = dict(canonical_psi(half).symbols)
    symbols[0], symbols[1] = 2, 1
    other = code_from_design(half, Psi(class_order=(2, 0, 1), symbols=symbols))
    assert set(other.words) != set(canonical.words)
    iso = find_code_isomorphism(canonical, other)
    assert iso is not None
    assert apply_code_isomorphism(canonical, iso) == frozenset(other.words)
    assert all(row[0] == 0 for row in iso.symbols)


def test_codes_of_different_designs(design):
    octahedron = code_from_design(design("octahedron.dd"))
    half = code_from_design(design("octahedron-half.dd"))
    assert find_code_isomorphism(octahedron, half) is None
    odd = ConstantWeightCode(3, 3, 3, ((1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 2, 2)))
    assert find_code_isomorphism(half, odd) is not None
    near = ConstantWeightCode(3, 3, 3, ((1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)))
    assert find_code_isomorphism(half, near) is None


def test_write_and_parse(design, tmp_path):
    code = code_from_design(design("octahedron.dd"))
    text = write_code(code)
    assert text.splitlines()[0] == "cwc n=3 m=3 k=3"
    path = tmp_path / "octahedron.cwc"
    path.write_text(text)
    assert read_code(path) == code


@pytest.mark.parametrize(
    "text,line_number",
    [
        ("cwc n=3 m=3\n", 1),
        ("cwc n=3 m=3 k=3\n1 2\n", 2),
        ("cwc n=3 m=3 k=3\n1 2 3\n", 2),
        ("cwc n=3 m=3 k=3\n1 x 2\n", 2),
    ],
)
def test_code_format_errors(text, line_number):
    with pytest.raises(FormatError) as info:
        parse_code(text)
    assert info.value.line == line_number


def test_empty_code_file():
    with pytest.raises(FormatError, match="missing"):
        parse_code("# nothing\n")
