"""Core graph types, serialization, and basic structural operations.

Graphs are finite, simple, undirected, and vertex-labeled; vertices are
``0..n-1``.  ``RootedGraph`` adds an ordered tuple of up to two marked
vertices (repeats allowed).  Both types are immutable and hashable.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .errors import GraphValidationError, ParseError

Edge = tuple[int, int]

GRAPH6_HEADER = ">>graph6<<"


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph with integer vertex labels."""

    __slots__ = ("n", "edges", "labels", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[Edge] = (), labels: Optional[Sequence[int]] = None):
        if n < 0:
            raise GraphValidationError("vertex count must be non-negative")
        edge_set = set()
        for u, v in edges:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u},{v}) out of range for {n} vertices")
            edge_set.add(_norm_edge(u, v))
        self.n = n
        self.edges = frozenset(edge_set)
        if labels is None:
            self.labels = (0,) * n
        else:
            if len(labels) != n:
                raise GraphValidationError("label sequence length must equal vertex count")
            self.labels = tuple(int(x) for x in labels)
        adj = [0] * n
        for u, v in edge_set:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = tuple(adj)
        self._hash = hash((self.n, self.edges, self.labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> list[int]:
        return _bits(self.adj[u])

    def degree(self, u: int) -> int:
        return bin(self.adj[u]).count("1")

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (self.adj[u] >> v) & 1 == 1

    def with_labels(self, labels: Sequence[int]) -> "Graph":
        return Graph(self.n, self.edges, labels)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class RootedGraph:
    """A graph with an ordered tuple of 0, 1, or 2 marked vertices."""

    __slots__ = ("graph", "roots", "_hash")

    def __init__(self, graph: Graph, roots: Sequence[int] = ()):
        roots = tuple(roots)
        if len(roots) > 2:
            raise GraphValidationError("at most 2 roots are supported")
        for r in roots:
            if not (0 <= r < graph.n):
                raise GraphValidationError(f"root {r} out of range")
        self.graph = graph
        self.roots = roots
        self._hash = hash((graph, roots))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootedGraph)
            and self.graph == other.graph
            and self.roots == other.roots
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RootedGraph(n={self.graph.n}, m={self.graph.m}, roots={self.roots})"


def as_rooted(g: Graph | RootedGraph) -> RootedGraph:
    return g if isinstance(g, RootedGraph) else RootedGraph(g)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# graph6 (McKay encoding): 6-bit chunks of the column-major upper triangle,
# each chunk biased by 63.


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    data = s.encode("ascii", errors="replace")
    for off, b in enumerate(data):
        if not 63 <= b <= 126:
            raise ParseError(f"character {chr(b)!r} outside graph6 range 63..126", offset=off)
    if not data:
        raise ParseError("empty graph6 record", offset=0)
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            if len(data) < 8:
                raise ParseError("truncated 8-byte graph6 length field", offset=len(data))
            n = 0
            for b in data[2:8]:
                n = (n << 6) | (b - 63)
            body, body_off = data[8:], 8
        else:
            if len(data) < 4:
                raise ParseError("truncated 4-byte graph6 length field", offset=len(data))
            n = 0
            for b in data[1:4]:
                n = (n << 6) | (b - 63)
            body, body_off = data[4:], 4
    else:
        n = data[0] - 63
        body, body_off = data[1:], 1
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(body) != nbytes:
        raise ParseError(
            f"graph6 body for n={n} needs {nbytes} bytes, got {len(body)}",
            offset=body_off + min(len(body), nbytes),
        )
    bits = []
    for b in body:
        v = b - 63
        bits.extend((v >> shift) & 1 for shift in (5, 4, 3, 2, 1, 0))
    for idx in range(nbits, len(bits)):
        if bits[idx]:
            raise ParseError("nonzero padding bits in graph6 record", offset=body_off + idx // 6)
    edges = []
    k = 0
    for j in range(n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def to_graph6(g: Graph) -> str:
    """Encode (labels are dropped; graph6 is an unlabeled format)."""
    n = g.n
    if n <= 62:
        head = [n + 63]
    elif n <= 258047:
        head = [126, 63 + ((n >> 12) & 63), 63 + ((n >> 6) & 63), 63 + (n & 63)]
    else:
        raise GraphValidationError("graph6 encoding beyond 258047 vertices not supported")
    bits = []
    for j in range(n):
        aj = g.adj[j]
        for i in range(j):
            bits.append((aj >> i) & 1)
    out = head[:]
    for k in range(0, len(bits), 6):
        chunk = bits[k:k + 6]
        chunk += [0] * (6 - len(chunk))
        v = 0
        for bit in chunk:
            v = (v << 1) | bit
        out.append(v + 63)
    return bytes(out).decode("ascii")


# ---------------------------------------------------------------------------
# Edge-list text format:
#   n <count>
#   e <u> <v>        (zero or more)
#   l <u> <label>    (optional)
#   r <u> [v]        (optional, at most one line)


def parse_edge_list(text: str) -> RootedGraph:
    n = None
    edges: list[Edge] = []
    seen = set()
    labels: dict[int, int] = {}
    roots: Optional[tuple[int, ...]] = None

    def want_vertex(tok: str, lineno: int) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"line {lineno}: {tok!r} is not a vertex id") from None
        if n is None:
            raise ParseError(f"line {lineno}: 'n <count>' must come first")
        if not 0 <= v < n:
            raise GraphValidationError(f"line {lineno}: vertex {v} out of range 0..{n - 1}")
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "n":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate 'n' line")
            if len(args) != 1 or not args[0].isdigit():
                raise ParseError(f"line {lineno}: expected 'n <count>'")
            n = int(args[0])
        elif kind == "e":
            if len(args) != 2:
                raise ParseError(f"line {lineno}: expected 'e <u> <v>'")
            u, v = (want_vertex(a, lineno) for a in args)
            if u == v:
                raise GraphValidationError(f"line {lineno}: self-loop at {u}")
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphValidationError(f"line {lineno}: duplicate edge {e}")
            seen.add(e)
            edges.append(e)
        elif kind == "l":
            if len(args) != 2:
                raise ParseError(f"line {lineno}: expected 'l <u> <label>'")
            u = want_vertex(args[0], lineno)
            labels[u] = int(args[1])
        elif kind == "r":
            if roots is not None:
                raise ParseError(f"line {lineno}: duplicate 'r' line")
            if not 1 <= len(args) <= 2:
                raise GraphValidationError(f"line {lineno}: expected 1 or 2 roots")
            roots = tuple(want_vertex(a, lineno) for a in args)
        else:
            raise ParseError(f"line {lineno}: unknown directive {kind!r}")
    if n is None:
        raise ParseError("missing 'n <count>' line")
    g = Graph(n, edges, [labels.get(v, 0) for v in range(n)])
    return RootedGraph(g, roots or ())


def to_edge_list(rg: RootedGraph) -> str:
    g = rg.graph
    lines = [f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.sorted_edges()]
    lines += [f"l {v} {g.labels[v]}" for v in range(g.n) if g.labels[v] != 0]
    if rg.roots:
        lines.append("r " + " ".join(str(r) for r in rg.roots))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structural predicates and constructions.


def connected_components(g: Graph) -> list[set[int]]:
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack, comp = [start], set()
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.add(u)
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def is_forest(g: Graph) -> bool:
    return all(len({e for e in g.edges if e[0] in c}) == len(c) - 1 for c in connected_components(g))


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and is_connected(g)


def vertex_deleted(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on V \\ s, re-indexed; returns (graph, old->new index map)."""
    drop = set(s)
    keep = [v for v in range(g.n) if v not in drop]
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(keep), edges, [g.labels[v] for v in keep]), index


def induced_subgraph(g: Graph, keep: Sequence[int]) -> tuple[Graph, dict[int, int]]:
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(keep), edges, [g.labels[v] for v in keep]), index


def categorical_product(g: Graph, h: Graph) -> Graph:
    """Vertices V_g x V_h; (a,b)~(a',b') iff a~a' and b~b'; labels are pairs."""
    pairs = [(a, b) for a in range(g.n) for b in range(h.n)]
    index = {p: i for i, p in enumerate(pairs)}
    edges = []
    for a, a2 in g.edges:
        for b, b2 in h.edges:
            edges.append((index[(a, b)], index[(a2, b2)]))
            edges.append((index[(a, b2)], index[(a2, b)]))
    label_key = {}
    labels = []
    for a, b in pairs:
        key = (g.labels[a], h.labels[b])
        labels.append(label_key.setdefault(key, len(label_key)))
    return Graph(len(pairs), edges, labels)


def rooted_categorical_product(rg: RootedGraph, rh: RootedGraph) -> RootedGraph:
    if len(rg.roots) != len(rh.roots):
        raise GraphValidationError("rooted product needs equally many roots")
    prod = categorical_product(rg.graph, rh.graph)
    hn = rh.graph.n
    roots = tuple(a * hn + b for a, b in zip(rg.roots, rh.roots))
    return RootedGraph(prod, roots)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    edges = list(g.edges) + [(u + g.n, v + g.n) for u, v in h.edges]
    return Graph(g.n + h.n, edges, list(g.labels) + list(h.labels))


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply vertex permutation: new id of v is perm[v]."""
    labels = [0] * g.n
    for v in range(g.n):
        labels[perm[v]] = g.labels[v]
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges], labels)


# Small constructors used throughout tests and tables.


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphValidationError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid(rows: int, cols: int) -> Graph:
    def vid(r: int, c: int) -> int:
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, edges)


def edge_iter_components(g: Graph) -> Iterator[Graph]:
    for comp in connected_components(g):
        sub, _ = induced_subgraph(g, sorted(comp))
        yield sub
