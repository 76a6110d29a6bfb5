"""
Quarterplane File Formats

Line-based ASCII formats for systems, development dumps and meta sidecars.
"""

from pathlib import Path
from typing import Dict, Iterable, List, Mapping, TextIO, Union

import numpy as np
import structlog

from .dynsys import (
    DEFAULT_DENSE_LIMIT,
    Diagonal,
    DynamicalSystem,
    Letter,
    Role,
    RuleTable,
)
from .errors import StructuralError

log = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def dump_system(system: DynamicalSystem) -> str:
    """Serialize a system; only explicit rules are written"""
    lines = [f"letters {system.size}"]
    for letter in system.letters:
        lines.append(f"L {letter.id} {letter.name} {letter.tag}")
    lines.append(f"zero {system.zero}")
    lines.append(f"one {system.one}")
    if system.bottom is not None:
        lines.append(f"bottom {system.bottom}")
    lines.append(f"symmetric {1 if system.symmetric else 0}")
    for a, b, c in system.table.defined_pairs():
        lines.append(f"R {a} {b} {c}")
    return "\n".join(lines) + "\n"


def _ints(parts: List[str], lineno: int) -> List[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise StructuralError(f"line {lineno}: expected decimal ids, got {' '.join(parts)!r}")


def parse_system(text: str, dense_limit: int = DEFAULT_DENSE_LIMIT) -> DynamicalSystem:
    """
    Parse a system file.

    Pairs without a rule map to Bottom. A file without a ``bottom`` line
    whose rules are not total gets a Bottom letter appended.
    """
    count = None
    letters: Dict[int, Letter] = {}
    rules: Dict[tuple, int] = {}
    zero = one = bottom = None
    symmetric = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword, args = parts[0], parts[1:]

        if keyword == "letters" and len(args) == 1:
            count = _ints(args, lineno)[0]
        elif keyword == "L" and len(args) == 3:
            letter_id = _ints(args[:1], lineno)[0]
            if letter_id in letters:
                raise StructuralError(f"line {lineno}: letter {letter_id} defined twice")
            letters[letter_id] = Letter.from_tag(letter_id, args[1], args[2])
        elif keyword == "zero" and len(args) == 1:
            zero = _ints(args, lineno)[0]
        elif keyword == "one" and len(args) == 1:
            one = _ints(args, lineno)[0]
        elif keyword == "bottom" and len(args) == 1:
            bottom = _ints(args, lineno)[0]
        elif keyword == "symmetric" and args in (["0"], ["1"]):
            symmetric = args == ["1"]
        elif keyword == "R" and len(args) == 3:
            a, b, c = _ints(args, lineno)
            if (a, b) in rules and rules[(a, b)] != c:
                raise StructuralError(f"line {lineno}: pair ({a}, {b}) has two images")
            rules[(a, b)] = c
        else:
            raise StructuralError(f"line {lineno}: cannot parse {raw.strip()!r}")

    if count is None:
        raise StructuralError("missing 'letters <count>' header")
    if sorted(letters) != list(range(count)):
        raise StructuralError(f"expected letters 0..{count - 1}, found {sorted(letters)}")
    if zero is None or one is None:
        raise StructuralError("missing zero or one line")

    ordered = [letters[i] for i in range(count)]
    if bottom is None and len(rules) < count * count:
        bottom = count
        name = "bot"
        while any(letter.name == name for letter in ordered):
            name += "_"
        ordered.append(Letter(bottom, name, Role.BOTTOM))
        log.info("system_totalized", bottom=bottom, defined=len(rules))

    table = RuleTable(len(ordered), rules, default=bottom, dense_limit=dense_limit)
    return DynamicalSystem(
        tuple(ordered), table, one=one, zero=zero, bottom=bottom, symmetric=symmetric
    )


def save_system(system: DynamicalSystem, path: PathLike) -> Path:
    path = Path(path)
    path.write_text(dump_system(system), encoding="ascii")
    return path


def load_system(path: PathLike, dense_limit: int = DEFAULT_DENSE_LIMIT) -> DynamicalSystem:
    path = Path(path)
    try:
        return parse_system(path.read_text(encoding="ascii"), dense_limit=dense_limit)
    except StructuralError as e:
        raise StructuralError(f"{path}: {e}") from None


def format_diagonal(diagonal: Diagonal) -> str:
    return f"D {diagonal.n}: " + " ".join(str(int(c)) for c in diagonal.cells)


def write_development(diagonals: Iterable[Diagonal], stream: TextIO) -> int:
    """Write ``D <n>: k0 ... kn`` lines; returns the number written"""
    written = 0
    for diagonal in diagonals:
        stream.write(format_diagonal(diagonal) + "\n")
        written += 1
    return written


def parse_dump(text: str) -> List[Diagonal]:
    diagonals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        parts = head.split()
        if len(parts) != 2 or parts[0] != "D":
            raise StructuralError(f"line {lineno}: expected 'D <n>: ...'")
        n = _ints(parts[1:], lineno)[0]
        cells = np.array(_ints(body.split(), lineno), dtype=np.int64)
        if len(cells) != n + 1:
            raise StructuralError(f"line {lineno}: diagonal {n} has {len(cells)} cells")
        diagonals.append(Diagonal(n, cells))
    return diagonals


def dump_meta(meta: Mapping[str, object]) -> str:
    lines = []
    for key, value in meta.items():
        if not key or any(ch.isspace() for ch in key):
            raise StructuralError(f"meta key {key!r} must be a single word")
        lines.append(f"meta {key} {value}")
    return "\n".join(lines) + "\n"


def parse_meta(text: str) -> Dict[str, str]:
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) < 2 or parts[0] != "meta":
            raise StructuralError(f"line {lineno}: expected 'meta <key> <value>'")
        meta[parts[1]] = parts[2] if len(parts) == 3 else ""
    return meta


def meta_path(system_path: PathLike) -> Path:
    """Sidecar next to a system file: ``foo.sys`` -> ``foo.sys.meta``"""
    system_path = Path(system_path)
    return system_path.with_name(system_path.name + ".meta")


def save_meta(meta: Mapping[str, object], path: PathLike) -> Path:
    path = Path(path)
    path.write_text(dump_meta(meta), encoding="ascii")
    return path


def load_meta(path: PathLike) -> Dict[str, str]:
    return parse_meta(Path(path).read_text(encoding="ascii"))
