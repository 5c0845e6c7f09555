"""Graph serialization: graph6, plain edge lists and JSON objects."""

from __future__ import annotations

import json
from pathlib import Path

from .graph import Graph, VertexPartition, bits

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def _decode_n(data: bytes) -> tuple[int, int]:
    if data[0] != 126:
        return data[0] - 63, 1
    if data[1] != 126:
        n = 0
        for c in data[1:4]:
            n = (n << 6) | (c - 63)
        return n, 4
    n = 0
    for c in data[2:8]:
        n = (n << 6) | (c - 63)
    return n, 8


def to_graph6(g: Graph) -> str:
    """Encode without the optional ``>>graph6<<`` header."""
    out = [_encode_n(g.n)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def from_graph6(s: str | bytes) -> Graph:
    data = s.encode("ascii") if isinstance(s, str) else bytes(s)
    data = data.strip()
    if data.startswith(_G6_HEADER.encode()):
        data = data[len(_G6_HEADER):]
    if not data:
        raise ValueError("empty graph6 string")
    for c in data:
        if not 63 <= c <= 126:
            raise ValueError(f"invalid graph6 character {chr(c)!r}")
    n, pos = _decode_n(data)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    adj = [0] * n
    stream = iter(c - 63 for c in body)
    cur = 0
    left = 0
    for j in range(1, n):
        for i in range(j):
            if left == 0:
                cur = next(stream)
                left = 6
            left -= 1
            if cur >> left & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def to_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty edge list")
    n, m = int(lines[0][0]), int(lines[0][1])
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} edges, found {len(lines) - 1}")
    return Graph.from_edges(n, [(int(a), int(b)) for a, b in lines[1:]])


def to_json_obj(g: Graph) -> dict:
    obj = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.labels is not None:
        obj["labels"] = list(g.labels)
    return obj


def from_json_obj(obj: dict) -> Graph:
    return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]], obj.get("labels"))


def read_graph(path: str | Path) -> Graph:
    """Load a graph, picking the format from the file suffix.

    ``.g6`` is graph6 (first line), ``.json`` a JSON graph object, anything
    else an edge list.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".g6":
        return from_graph6(text.splitlines()[0])
    if path.suffix == ".json":
        return from_json_obj(json.loads(text))
    return from_edgelist(text)


def write_graph(g: Graph, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or {".g6": "g6", ".json": "json"}.get(path.suffix, "edgelist")
    path.write_text(dumps_graph(g, fmt))


def dumps_graph(g: Graph, fmt: str) -> str:
    if fmt == "g6":
        return to_graph6(g) + "\n"
    if fmt == "json":
        return json.dumps(to_json_obj(g), sort_keys=True) + "\n"
    if fmt == "edgelist":
        return to_edgelist(g)
    raise ValueError(f"unknown graph format {fmt!r}")


def read_partition(path: str | Path, n: int | None = None) -> VertexPartition:
    blocks = json.loads(Path(path).read_text())
    return VertexPartition.from_blocks(blocks, n)


def adjacency_rows(g: Graph) -> list[list[int]]:
    return [list(bits(row)) for row in g.adj]
