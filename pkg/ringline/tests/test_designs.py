from fractions import Fraction

import pytest

from ringline.core.exceptions import CapExceededError, FormatError, InvalidParameterError
from ringline.services.chains import build_chain_geometry, chain_design, embed_subfield
from ringline.services.designs import (
    DDParams,
    dd_isomorphic,
    derive_lambda_i,
    is_isomorphism,
    make_design,
    maximal_t,
    parse_design,
    preserves_blocks_one_way,
    read_design,
    spera_counterexample,
    truncated_chain_design,
    verify_dd,
    write_design,
)


@pytest.fixture
def octahedron(fixtures_dir):
    return read_design(fixtures_dir / "octahedron.dd")


@pytest.fixture
def half(fixtures_dir):
    return read_design(fixtures_dir / "octahedron-half.dd")


def test_octahedron_at_three(octahedron):
    result = verify_dd(octahedron, 3)
    assert result.ok
    assert str(result.params) == "3-(2,3,1)"
    assert result.design.derived.lambdas == (8, 4, 2, 1)
    assert result.design.derived.b == 8
    assert result.design.derived.r == 4
    assert result.design.transversal


def test_octahedron_at_two(octahedron):
    result = verify_dd(octahedron, 2)
    assert result.ok
    assert str(result.params) == "2-(2,3,2)"


def test_half_octahedron(half):
    failed = verify_dd(half, 3)
    assert not failed.ok
    assert failed.violation.axiom == "C"
    assert failed.violation.witness["count"] == 0
    assert "axiom (C)" in str(failed.violation)

    result = verify_dd(half, 2)
    assert result.ok
    assert str(result.params) == "2-(2,3,1)"
    assert result.design.derived.b == 4


def test_maximal_t(octahedron, half, fixtures_dir):
    assert maximal_t(octahedron) == 3
    assert maximal_t(half) == 2
    assert maximal_t(read_design(fixtures_dir / "fano.dd")) == 2


@pytest.mark.parametrize(
    "name,t,params,b,r",
    [
        ("fano.dd", 2, "2-(1,3,1)", 7, 3),
        ("affine3.dd", 2, "2-(1,3,1)", 12, 4),
        ("pappos.dd", 2, "2-(3,3,1)", 9, 3),
        ("fano-derived.dd", 2, "2-(2,3,1)", 4, 2),
    ],
)
def test_classical_designs(fixtures_dir, name, t, params, b, r):
    result = verify_dd(read_design(fixtures_dir / name), t)
    assert result.ok
    assert str(result.params) == params
    assert (result.design.derived.b, result.design.derived.r) == (b, r)


def test_counterexample_fails_class_sizes():
    inp = spera_counterexample()
    design = make_design(inp.v, inp.classes, [(0, 1), (0, 2)], labels=inp.labels)
    result = verify_dd(design, 2)
    assert not result.ok
    assert result.violation.axiom == "B"
    assert "point 1 lies on 2 blocks, point 2 on 1 block" in result.violation.message


def test_counterexample_file(fixtures_dir):
    result = verify_dd(read_design(fixtures_dir / "spera-counterexample.dd"), 2)
    assert result.violation.axiom == "B"


def test_axiom_a():
    uneven = make_design(4, [[0], [1], [2], [3]], [[0, 1], [0, 1, 2]])
    assert verify_dd(uneven, 1).violation.axiom == "A"
    inside_class = make_design(4, [[0, 1], [2, 3]], [[0, 1]])
    violation = verify_dd(inside_class, 1).violation
    assert violation.axiom == "A"
    assert "twice" in violation.message


def test_axiom_d(octahedron):
    violation = verify_dd(octahedron, 4).violation
    assert violation.axiom == "D"
    assert violation.witness == {"t": 4, "classes": 3}


def test_no_blocks_fails_c():
    assert verify_dd(make_design(2, [[0], [1]], []), 1).violation.axiom == "C"


def test_invalid_t(octahedron):
    with pytest.raises(InvalidParameterError):
        verify_dd(octahedron, 0)


def test_subset_cap(octahedron):
    with pytest.raises(CapExceededError):
        verify_dd(octahedron, 3, subset_cap=4)


def test_threads_do_not_change_result(fixtures_dir):
    design = read_design(fixtures_dir / "affine3.dd")
    assert verify_dd(design, 2, threads=1).params == verify_dd(design, 2, threads=3).params


def test_derive_lambda_i():
    params = DDParams(t=3, s=2, k=3, lambda_t=1)
    assert [derive_lambda_i(params, 6, i) for i in range(4)] == [8, 4, 2, 1]
    assert derive_lambda_i(DDParams(2, 1, 3, 1), 7, 1) == Fraction(3)
    with pytest.raises(InvalidParameterError):
        derive_lambda_i(params, 6, 4)
    with pytest.raises(InvalidParameterError):
        derive_lambda_i(params, 7, 1)


def test_recertification_below_t(fixtures_dir):
    design = verify_dd(read_design(fixtures_dir / "pappos.dd"), 2).design
    lower = verify_dd(design, 1)
    assert lower.ok
    assert lower.params.lambda_t == design.derived.lambdas[1]
    assert design.derived.b * design.params.k == design.derived.r * design.v


def test_make_design_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        make_design(3, [[0, 1]], [[0]])
    with pytest.raises(InvalidParameterError):
        make_design(2, [[0], [1]], [[0, 1], [1, 0]])
    with pytest.raises(InvalidParameterError):
        make_design(2, [[0], [1]], [[0, 2]])


# ========== Isomorphism ==========

def test_octahedron_is_the_laguerre_plane_of_order_two(octahedron, line):
    pl = line("dual(GF(2), h=2)")
    geometry = build_chain_geometry(pl, embed_subfield(pl.ring, None, "constants"))
    spera = truncated_chain_design(geometry, 0)
    mapping = dd_isomorphic(octahedron, spera, t=3)
    assert mapping is not None
    assert is_isomorphism(octahedron, spera, mapping)
    assert dd_isomorphic(octahedron, chain_design(geometry), t=3) is not None


def test_isomorphism_basics(octahedron, half, fixtures_dir):
    assert dd_isomorphic(octahedron, octahedron) == {x: x for x in range(6)}
    assert dd_isomorphic(octahedron, half) is None
    derived = read_design(fixtures_dir / "fano-derived.dd")
    assert dd_isomorphic(derived, half, t=2) == {x: x for x in range(6)}


def test_isomorphism_after_relabelling(fixtures_dir):
    pappos = read_design(fixtures_dir / "pappos.dd")
    shift = {x: (x + 3) % 9 for x in range(9)}
    moved = make_design(9, [[shift[x] for x in c] for c in pappos.classes],
                        [[shift[x] for x in b] for b in pappos.blocks])
    mapping = dd_isomorphic(pappos, moved)
    assert mapping is not None
    assert is_isomorphism(pappos, moved, mapping)


def test_isomorphism_needs_both_directions(octahedron, half):
    identity = {x: x for x in range(6)}
    assert preserves_blocks_one_way(half, octahedron, identity)
    assert not preserves_blocks_one_way(octahedron, half, identity)
    assert not is_isomorphism(half, octahedron, identity)


def test_classes_must_be_preserved(fixtures_dir):
    fano = read_design(fixtures_dir / "fano.dd")
    affine = read_design(fixtures_dir / "affine3.dd")
    pappos = read_design(fixtures_dir / "pappos.dd")
    assert dd_isomorphic(fano, affine) is None
    assert dd_isomorphic(affine, pappos) is None


def test_isomorphism_limit(octahedron):
    with pytest.raises(CapExceededError):
        dd_isomorphic(octahedron, octahedron, limit=5)


# ========== Files ==========

def test_round_trip(octahedron):
    text = write_design(octahedron)
    again = parse_design(text)
    assert again.classes == octahedron.classes
    assert again.blocks == octahedron.blocks
    assert text.splitlines()[0] == "dd v=6 t=3"


def test_chain_geometry_header(line):
    pl = line("dual(GF(2), h=2)")
    design = chain_design(build_chain_geometry(pl, embed_subfield(pl.ring, None, "constants")))
    text = write_design(design)
    assert text.splitlines()[0] == "chain-geometry K=GF(2) R=dual(GF(2), h=2)"
    parsed = parse_design(text)
    assert parsed.metadata["K"] == "GF(2)"
    assert parsed.metadata["R"] == "dual(GF(2), h=2)"
    assert parsed.metadata["t"] == "3"


@pytest.mark.parametrize(
    "text,line_number,fragment",
    [
        ("dd v=3\n", 1, "expected 'dd"),
        ("dd v=2 t=1\n0 1\n", 2, "unexpected line"),
        ("dd v=2 t=1\nblocks\n", 2, "before 'classes'"),
        ("dd v=2 t=1\nclasses\n0 5\n", 3, "point 5 outside 0..1"),
        ("dd v=2 t=1\nclasses\n0 x\n", 3, "expected point ids"),
        ("dd v=2 t=1\nclasses\n0 0\n", 3, "repeated point"),
        ("dd v=2 t=1\nclasses\n0\n1\nclasses\n", 5, "repeated section"),
        ("dd v=2 t=1\nclasses\n0\n1\nblocks\n0 1\n# again\n1 0\n", 8, "duplicate block"),
    ],
)
def test_format_errors(text, line_number, fragment):
    with pytest.raises(FormatError) as info:
        parse_design(text, source="bad.dd")
    assert info.value.line == line_number
    assert fragment in info.value.message
    assert info.value.message.startswith(f"bad.dd:{line_number}: ")


def test_missing_section():
    with pytest.raises(FormatError, match="missing 'blocks' section"):
        parse_design("dd v=2 t=1\nclasses\n0\n1\n")


def test_classes_must_partition():
    with pytest.raises(FormatError, match="do not partition"):
        parse_design("dd v=3 t=1\nclasses\n0\n1\nblocks\n0 1\n")


def test_missing_file(tmp_path):
    with pytest.raises(FormatError, match="cannot read design file"):
        read_design(tmp_path / "absent.dd")
