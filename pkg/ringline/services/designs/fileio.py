"""
Ringline - Design Files
Text format: optional `chain-geometry K=<spec> R=<spec>` header, then
`dd v=<n> t=<t>`, a `classes` section and a `blocks` section
"""

import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ...core.exceptions import FormatError, InvalidParameterError
from .model import Design, make_design

_HEADER = re.compile(r"^dd\s+v=(\d+)\s+t=(\d+)$")
_CHAIN = re.compile(r"^chain-geometry\s+K=(.+?)\s+R=(.+)$")


def _ids(text: str, source: str, number: int) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split())
    except ValueError:
        raise FormatError(f"expected point ids, got {text!r}", source=source, line=number) from None


def parse_design(text: str, source: str = "<text>") -> Design:
    """Parse a design file; every malformation is a FormatError naming its line."""
    lines = [(i, raw.split("#", 1)[0].strip()) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [(i, s) for i, s in lines if s]
    metadata: Dict[str, str] = {}
    pos = 0
    if pos < len(lines) and lines[pos][1].startswith("chain-geometry"):
        match = _CHAIN.match(lines[pos][1])
        if not match:
            raise FormatError("expected 'chain-geometry K=<spec> R=<spec>'", source=source, line=lines[pos][0])
        metadata.update(K=match.group(1), R=match.group(2))
        pos += 1
    if pos >= len(lines):
        raise FormatError("missing 'dd v=<n> t=<t>' header", source=source)
    match = _HEADER.match(lines[pos][1])
    if not match:
        raise FormatError("expected 'dd v=<n> t=<t>'", source=source, line=lines[pos][0])
    v, t = int(match.group(1)), int(match.group(2))
    metadata["t"] = str(t)
    pos += 1

    sections: Dict[str, List[Tuple[int, Tuple[int, ...]]]] = {}
    current: Optional[str] = None
    for number, content in lines[pos:]:
        if content in ("classes", "blocks"):
            if content in sections:
                raise FormatError(f"repeated section '{content}'", source=source, line=number)
            if content == "blocks" and "classes" not in sections:
                raise FormatError("'blocks' before 'classes'", source=source, line=number)
            current = content
            sections[current] = []
            continue
        if current is None:
            raise FormatError(f"unexpected line {content!r}", source=source, line=number)
        ids = _ids(content, source, number)
        bad = [x for x in ids if not 0 <= x < v]
        if bad:
            raise FormatError(f"point {bad[0]} outside 0..{v - 1}", source=source, line=number)
        if len(set(ids)) != len(ids):
            raise FormatError(f"repeated point in {ids}", source=source, line=number)
        sections[current].append((number, ids))
    for name in ("classes", "blocks"):
        if name not in sections:
            raise FormatError(f"missing '{name}' section", source=source)

    seen: Dict[Tuple[int, ...], int] = {}
    for number, block in sections["blocks"]:
        key = tuple(sorted(block))
        if key in seen:
            raise FormatError(f"duplicate block {key} (first on line {seen[key]})", source=source, line=number)
        seen[key] = number
    try:
        return make_design(
            v,
            [ids for _, ids in sections["classes"]],
            [ids for _, ids in sections["blocks"]],
            metadata=metadata,
        )
    except InvalidParameterError as exc:
        raise FormatError(exc.message, source=source) from None


def read_design(path: Union[str, Path]) -> Design:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read design file: {exc.strerror}", source=str(path)) from None
    return parse_design(text, source=str(path))


def write_design(design: Design, t: Optional[int] = None) -> str:
    """Render in the file format; t defaults to the certified t, then to the file's t."""
    if t is None:
        t = design.params.t if design.params else int(design.metadata.get("t", 1))
    out = []
    if "K" in design.metadata and "R" in design.metadata:
        out.append(f"chain-geometry K={design.metadata['K']} R={design.metadata['R']}")
    out.append(f"dd v={design.v} t={t}")
    out.append("classes")
    out.extend(" ".join(str(x) for x in members) for members in design.classes)
    out.append("blocks")
    out.extend(" ".join(str(x) for x in block) for block in design.blocks)
    return "\n".join(out) + "\n"
