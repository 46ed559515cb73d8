"""
Text formats for groups, graphs, pairs and bound expressions.

All formats are line based; `#` starts a comment and blank lines are
ignored. Points and vertices are numbered from 0.

Group file::

    degree 6
    1 0 2 3 4 5        # image list of one generator
    (0 1 2)(3 4)       # or a generator in cycle notation

Graph file::

    graph 6 9          # vertices, edges, optional "directed"
    0 3
    ...

Pair file, with paths relative to the pair file::

    pair
    graph k33.graph
    group k33.group
    d 3                # optional, defaults to the valency
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from src.application.pairs import VTPair, certify_pair
from src.engine.bound_expr import BoundExpr, BoundExpressionError, parse_bound, render_bound
from src.engine.graphs import Graph, GraphError
from src.engine.groups import GroupError, PermGroup, from_cycles, perm

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")


class FormatError(ValueError):
    """
    Malformed input file.

    Attributes:
        path (str):
            The file, or "<text>" for in-memory input.

        line (int):
            1-based line number, or 0 when the error concerns the whole file.

        message (str):
            What is wrong.
    """

    def __init__(self, path: str, line: int, message: str) -> None:
        where = f"{path}:{line}" if line else path
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.message = message


@dataclass(frozen=True)
class _Line:
    number: int
    words: list[str]
    text: str


def _content_lines(text: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(_Line(number, stripped.split(), stripped))
    return lines


def _int(word: str, path: str, line: int, what: str) -> int:
    try:
        return int(word)
    except ValueError:
        raise FormatError(path, line, f"{what} must be an integer, got {word!r}") from None


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as error:
        raise FormatError(str(path), 0, f"cannot read file ({error.strerror})") from None


# ==================================================================================
# Groups
# ==================================================================================


def parse_group(text: str, path: str = "<text>") -> PermGroup:
    lines = _content_lines(text)
    if not lines or lines[0].words[0] != "degree" or len(lines[0].words) != 2:
        raise FormatError(path, lines[0].number if lines else 0, "expected 'degree <n>' header")
    degree = _int(lines[0].words[1], path, lines[0].number, "degree")
    if degree < 1:
        raise FormatError(path, lines[0].number, "degree must be positive")

    generators = []
    for line in lines[1:]:
        try:
            if line.text.startswith("("):
                cycles = [
                    [_int(w, path, line.number, "point") for w in body.split()]
                    for body in _CYCLE.findall(line.text)
                ]
                if _CYCLE.sub("", line.text).strip():
                    raise FormatError(path, line.number, "text outside cycles")
                generators.append(from_cycles(degree, [c for c in cycles if c]))
            else:
                images = [_int(w, path, line.number, "image") for w in line.words]
                if len(images) != degree:
                    raise FormatError(
                        path, line.number, f"{len(images)} images for degree {degree}"
                    )
                generators.append(perm(images))
        except GroupError as error:
            raise FormatError(path, line.number, str(error)) from None
    return PermGroup(degree, generators)


def read_group(path: str | Path) -> PermGroup:
    path = Path(path)
    group = parse_group(_read(path), str(path))
    logger.debug("read group of degree %d from %s", group.degree, path)
    return group


def format_group(group: PermGroup) -> str:
    lines = [f"degree {group.degree}"]
    lines += [" ".join(map(str, images)) for images in group.generator_images()]
    return "\n".join(lines) + "\n"


# ==================================================================================
# Graphs
# ==================================================================================


def parse_graph(text: str, path: str = "<text>") -> Graph:
    lines = _content_lines(text)
    header = lines[0] if lines else None
    if (
        header is None
        or header.words[0] != "graph"
        or len(header.words) not in (3, 4)
        or (len(header.words) == 4 and header.words[3] != "directed")
    ):
        raise FormatError(
            path, header.number if header else 0, "expected 'graph <n> <m> [directed]'"
        )
    n = _int(header.words[1], path, header.number, "vertex count")
    m = _int(header.words[2], path, header.number, "edge count")
    directed = len(header.words) == 4

    edges = []
    for line in lines[1:]:
        if len(line.words) != 2:
            raise FormatError(path, line.number, "expected two vertices per edge")
        u, v = (_int(w, path, line.number, "vertex") for w in line.words)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(path, line.number, f"vertex out of range 0..{n - 1}")
        if u == v:
            raise FormatError(path, line.number, f"loop at {u}")
        edges.append((u, v))
    if len(edges) != m:
        raise FormatError(path, 0, f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges, directed)
    except GraphError as error:
        raise FormatError(path, 0, str(error)) from None


def read_graph(path: str | Path) -> Graph:
    path = Path(path)
    return parse_graph(_read(path), str(path))


def format_graph(graph: Graph) -> str:
    suffix = " directed" if graph.directed else ""
    edges = list(graph.edges())
    lines = [f"graph {graph.vertex_count} {len(edges)}{suffix}"]
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


# ==================================================================================
# Pairs
# ==================================================================================


@dataclass(frozen=True)
class PairFile:
    graph_path: Path
    group_path: Path
    d: int | None


def parse_pair_file(text: str, path: str | Path = "<text>") -> PairFile:
    path = str(path)
    base = Path(path).parent
    lines = _content_lines(text)
    if not lines or lines[0].words != ["pair"]:
        raise FormatError(path, lines[0].number if lines else 0, "expected 'pair' header")
    fields: dict[str, tuple[int, str]] = {}
    for line in lines[1:]:
        if len(line.words) != 2 or line.words[0] not in ("graph", "group", "d"):
            raise FormatError(path, line.number, "expected 'graph', 'group' or 'd' entry")
        key, value = line.words
        if key in fields:
            raise FormatError(path, line.number, f"duplicate {key} entry")
        fields[key] = (line.number, value)
    for key in ("graph", "group"):
        if key not in fields:
            raise FormatError(path, 0, f"missing {key} entry")
    d = None
    if "d" in fields:
        number, value = fields["d"]
        d = _int(value, path, number, "d")
    return PairFile(base / fields["graph"][1], base / fields["group"][1], d)


def read_pair(path: str | Path) -> VTPair:
    """
    Read and certify a pair.

    Raises:
        FormatError: On malformed files.
        InvalidPairError: If the graph and group do not form a pair.
    """
    path = Path(path)
    spec = parse_pair_file(_read(path), path)
    return certify_pair(read_graph(spec.graph_path), read_group(spec.group_path), spec.d)


def write_pair(pair: VTPair, directory: str | Path, stem: str) -> Path:
    """
    Write `<stem>.pair`, `<stem>.graph` and `<stem>.group` into `directory`.

    Returns the path of the pair file.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{stem}.graph").write_text(format_graph(pair.graph), encoding="utf-8")
    (directory / f"{stem}.group").write_text(format_group(pair.perm_group()), encoding="utf-8")
    target = directory / f"{stem}.pair"
    target.write_text(
        f"pair\ngraph {stem}.graph\ngroup {stem}.group\nd {pair.d}\n", encoding="utf-8"
    )
    return target


# ==================================================================================
# Bound expressions
# ==================================================================================


def parse_bound_text(
    text: str, variables: dict[str, int] | None = None, path: str = "<text>"
) -> BoundExpr:
    try:
        return parse_bound(text, variables)
    except BoundExpressionError as error:
        raise FormatError(path, error.line, str(error)) from None


def read_bound(path: str | Path, variables: dict[str, int] | None = None) -> BoundExpr:
    path = Path(path)
    return parse_bound_text(_read(path), variables, str(path))


def format_bound_file(expr: BoundExpr) -> str:
    return render_bound(expr) + "\n"
