"""
Ringline - Ring-Spec Grammar
pyparsing grammar for ring specs, building the pydantic RingSpec AST

    spec  := atom | "prod(" spec { "," spec } ")"
    atom  := "Z/" int | "GF(" int ")"
           | "dual(" spec ", h=" int [", frob=" int] ")"
           | "mat(" int "," spec ")" | "ext(" spec ", n=" int ")"
           | "table(" path ")"     a path holding ")" is written in double quotes
"""

from functools import lru_cache
from pathlib import Path
from typing import Callable, Tuple, Union

import pyparsing as pp
from pydantic import ValidationError

from ..core.exceptions import FormatError, RingSpecError
from ..schemas.ringspec import (
    DualNumbers,
    ExteriorAlgebra,
    GaloisField,
    MatrixRing,
    Product,
    RingSpec,
    TableRing,
    TwistedDual,
    Zmod,
)


def _reason(exc: ValidationError) -> str:
    message = exc.errors()[0]["msg"]
    return message.split(", ", 1)[1] if message.startswith("Value error, ") else message


def _node(factory: Callable[..., RingSpec]):
    """Parse action running a constructor; a validation failure is a located fatal error."""

    def action(s: str, loc: int, toks: pp.ParseResults) -> RingSpec:
        try:
            return factory(*toks)
        except ValidationError as exc:
            raise pp.ParseFatalException(s, loc, _reason(exc)) from None

    return action


def _dual(base: RingSpec, h: int, frob: int = 0) -> RingSpec:
    if frob == 0:
        return DualNumbers(base=base, h=h)
    if h != 2:
        raise pp.ParseFatalException("", 0, "a twist needs h=2")
    return TwistedDual(base=base, frobenius_power=frob)


def _dual_action(s: str, loc: int, toks: pp.ParseResults) -> RingSpec:
    try:
        return _dual(*toks)
    except pp.ParseFatalException as exc:
        raise pp.ParseFatalException(s, loc, exc.msg) from None
    except ValidationError as exc:
        raise pp.ParseFatalException(s, loc, _reason(exc)) from None


@lru_cache(maxsize=1)
def make_grammar() -> pp.ParserElement:
    lparen, rparen, comma = pp.Suppress("("), pp.Suppress(")"), pp.Suppress(",")
    integer = pp.Word(pp.nums).set_parse_action(lambda toks: int(toks[0])).set_name("integer")

    def keyword_arg(name: str) -> pp.ParserElement:
        return comma + pp.Suppress(pp.Keyword(name)) + pp.Suppress("=") + integer

    spec = pp.Forward().set_name("ring spec")
    zmod = pp.Suppress(pp.Literal("Z/")) + integer
    galois = pp.Suppress(pp.Keyword("GF")) + lparen + integer + rparen
    dual = (pp.Suppress(pp.Keyword("dual")) + lparen + spec + keyword_arg("h")
            + pp.Optional(keyword_arg("frob")) + rparen)
    matrix = pp.Suppress(pp.Keyword("mat")) + lparen + integer + comma + spec + rparen
    exterior = pp.Suppress(pp.Keyword("ext")) + lparen + spec + keyword_arg("n") + rparen
    bare = pp.CharsNotIn(')"').set_parse_action(lambda toks: toks[0].strip())
    quoted = pp.QuotedString('"', esc_char="\\", convert_whitespace_escapes=False)
    table = pp.Suppress(pp.Keyword("table")) + lparen + (quoted | bare).set_name("path") + rparen
    prod = pp.Suppress(pp.Keyword("prod")) + lparen + spec + pp.ZeroOrMore(comma + spec) + rparen

    zmod.set_parse_action(_node(lambda m: Zmod(m=m)))
    galois.set_parse_action(_node(lambda q: GaloisField(q=q)))
    dual.set_parse_action(_dual_action)
    matrix.set_parse_action(_node(lambda m, base: MatrixRing(m=m, base=base)))
    exterior.set_parse_action(_node(lambda base, n: ExteriorAlgebra(base=base, n=n)))
    table.set_parse_action(_node(lambda path: TableRing(path=path)))
    prod.set_parse_action(_node(lambda *factors: Product(factors=tuple(factors))))

    spec <<= zmod | galois | dual | matrix | exterior | table | prod
    return spec


def parse_ring_spec(text: str) -> RingSpec:
    """Parse ring-spec text into its AST; never returns a partial result."""
    try:
        return make_grammar().parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise RingSpecError(exc.msg, line=exc.lineno, column=exc.col) from None


def print_ring_spec(spec: RingSpec) -> str:
    return spec.text()


def read_field_witness(path: Union[str, Path]) -> Tuple[RingSpec, str]:
    """Read `field <spec>` and `generator <label|index>` lines."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read witness file: {exc.strerror}", source=str(path)) from None
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        if key not in ("field", "generator") or not value.strip() or key in entries:
            raise FormatError(f"unexpected line {line!r}", source=str(path), line=number)
        entries[key] = (number, value.strip())
    for key in ("field", "generator"):
        if key not in entries:
            raise FormatError(f"missing '{key}' line", source=str(path))
    number, field_text = entries["field"]
    try:
        field = parse_ring_spec(field_text)
    except RingSpecError as exc:
        raise FormatError(exc.message, source=str(path), line=number) from None
    return field, entries["generator"][1]
