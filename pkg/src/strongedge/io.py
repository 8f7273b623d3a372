"""Edge-list and coloring file formats.

Edge list: one edge per line as two whitespace-separated vertex tokens;
``#`` starts a comment; an optional ``v <count>`` line declares vertices
``0 .. count-1`` so isolated ones survive a round trip. When every token is
a non-negative integer it is used as the vertex id; otherwise tokens are
numbered in order of first appearance.

Coloring file: ``<u> <v> <color>`` per line, same comment rules.
"""

from __future__ import annotations

from pathlib import Path

from .coloring import Coloring
from .errors import InputError
from .graph import Graph, edge


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


class VertexNames:
    """Token to id mapping, identity when the file uses integer ids."""

    def __init__(self, tokens: list[str]):
        self.numeric = all(t.isdigit() for t in tokens)
        self.ids: dict[str, int] = {}
        if not self.numeric:
            for t in tokens:
                self.ids.setdefault(t, len(self.ids))

    def __call__(self, token: str, where: str) -> int:
        if self.numeric:
            if not token.isdigit():
                raise InputError(f"{where}: vertex token {token!r} is not a non-negative integer")
            return int(token)
        try:
            return self.ids[token]
        except KeyError:
            raise InputError(f"{where}: unknown vertex {token!r}") from None

    def name(self, v: int) -> str:
        if self.numeric:
            return str(v)
        if not hasattr(self, "_rev"):
            self._rev = {i: t for t, i in self.ids.items()}
        return self._rev.get(v, str(v))


def parse_edge_list(text: str, source: str = "<input>") -> tuple[Graph, VertexNames]:
    rows = list(_lines(text))
    count = 0
    pairs = []
    for no, toks in rows:
        where = f"{source}:{no}"
        if toks[0] == "v":
            if len(toks) != 2 or not toks[1].isdigit():
                raise InputError(f"{where}: expected 'v <count>'")
            count = max(count, int(toks[1]))
        elif len(toks) == 2:
            if toks[0] == toks[1]:
                raise InputError(f"{where}: self-loop at {toks[0]!r}")
            pairs.append((where, toks))
        else:
            raise InputError(f"{where}: expected two vertex tokens, got {len(toks)}")
    names = VertexNames([t for _, toks in pairs for t in toks])
    g = Graph(vertices=range(count))
    for where, (a, b) in pairs:
        u, v = names(a, where), names(b, where)
        if g.has_edge(u, v):
            raise InputError(f"{where}: duplicate edge {a} {b}")
        g.add_edge(u, v)
    return g, names


def read_edge_list(path: str | Path) -> tuple[Graph, VertexNames]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_edge_list(text, str(path))


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.append(f"# {comment}")
    vs = g.vertices()
    if vs and vs == list(range(len(vs))):
        out.append(f"v {len(vs)}")
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def write_edge_list(g: Graph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_edge_list(g, comment), encoding="utf-8")


def parse_coloring(text: str, g: Graph, names: VertexNames, source: str = "<coloring>") -> Coloring:
    c = Coloring()
    for no, toks in _lines(text):
        where = f"{source}:{no}"
        if len(toks) != 3:
            raise InputError(f"{where}: expected '<u> <v> <color>'")
        u, v = names(toks[0], where), names(toks[1], where)
        if not g.has_edge(u, v):
            raise InputError(f"{where}: {toks[0]} {toks[1]} is not an edge of the graph")
        try:
            col = int(toks[2])
        except ValueError:
            raise InputError(f"{where}: color {toks[2]!r} is not an integer") from None
        if col < 1:
            raise InputError(f"{where}: colors must be positive")
        e = edge(u, v)
        if e in c and c[e] != col:
            raise InputError(f"{where}: edge colored twice")
        c.colors[e] = col
    return c


def read_coloring(path: str | Path, g: Graph, names: VertexNames) -> Coloring:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_coloring(text, g, names, str(path))


def format_coloring(c: Coloring, names: VertexNames | None = None) -> str:
    nm = names.name if names else str
    return "".join(f"{nm(u)} {nm(v)} {col}\n" for (u, v), col in sorted(c.items()))
