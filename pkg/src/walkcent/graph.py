"""Graph container, edge-list / graph6 I/O and small automorphism queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, GraphFormatError, ParameterError
from .exact import ExactMatrix, format_rational, parse_rational

GRAPH6_MAX_N = 62
AUTOMORPHISM_MAX_N = 12


@dataclass(frozen=True)
class Graph:
    """Dense 0-based vertex labels; edges are ``(u, v, weight)`` with exact weights.

    Undirected edges are stored once with ``u < v``. Self-loops are only
    accepted when ``directed`` and ``loops`` are both set.
    """

    n: int
    edges: tuple = ()
    directed: bool = False
    loops: bool = False
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphFormatError(f"vertex count must be a positive integer, got {self.n!r}")
        if self.loops and not self.directed:
            raise GraphFormatError("self-loops are only allowed in weighted-directed mode")
        seen = {}
        norm = []
        for e in self.edges:
            u, v, *w = e
            w = parse_rational(w[0]) if w else Fraction(1)
            _check_edge(self, u, v, w)
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen[key] = w
            norm.append((key[0], key[1], w))
        norm.sort(key=lambda t: (t[0], t[1]))
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "_index", seen)

    @property
    def weighted(self) -> bool:
        return any(w != 1 for _, _, w in self.edges)

    def neighbors(self) -> list[set]:
        adj = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            if not self.directed:
                adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.neighbors()]

    def is_connected(self) -> bool:
        adj = self.neighbors()
        if self.directed:
            for u, v, _ in self.edges:
                adj[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def _check_edge(g, u, v, w):
    for x in (u, v):
        if not isinstance(x, int) or not 0 <= x < g.n:
            raise GraphFormatError(f"vertex index {x!r} out of range [0, {g.n})")
    if u == v and not g.loops:
        raise GraphFormatError(f"self-loop at vertex {u} in simple mode")
    if w == 0:
        raise GraphFormatError(f"zero weight on edge ({u}, {v})")


def _parse_bool(tok, lineno):
    t = tok.lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise GraphFormatError(f"bad boolean {tok!r}", lineno)


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` / ``u v w`` lines with an optional ``n=<int> directed=<bool>`` header.

    Blank lines and ``#`` comments are skipped. Without a header the vertex
    count is one more than the largest index seen.
    """
    n = None
    directed = False
    loops = False
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if "=" in toks[0]:
            if edges:
                raise GraphFormatError("header must precede edges", lineno)
            for tok in toks:
                key, _, val = tok.partition("=")
                if key == "n":
                    try:
                        n = int(val)
                    except ValueError:
                        raise GraphFormatError(f"bad vertex count {val!r}", lineno) from None
                elif key == "directed":
                    directed = _parse_bool(val, lineno)
                elif key == "loops":
                    loops = _parse_bool(val, lineno)
                else:
                    raise GraphFormatError(f"unknown header key {key!r}", lineno)
            continue
        if len(toks) not in (2, 3):
            raise GraphFormatError(f"expected 'u v' or 'u v w', got {line!r}", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno) from None
        try:
            w = parse_rational(toks[2]) if len(toks) == 3 else Fraction(1)
        except ParameterError:
            raise GraphFormatError(f"bad weight {toks[2]!r}", lineno) from None
        if w == 0:
            raise GraphFormatError(f"zero weight on edge ({u}, {v})", lineno)
        if u < 0 or v < 0 or (n is not None and (u >= n or v >= n)):
            raise GraphFormatError(f"vertex index out of range in {line!r}", lineno)
        if u == v and not (loops and directed):
            raise GraphFormatError(f"self-loop at vertex {u} in simple mode", lineno)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append((u, v, w))
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
        if n == 0:
            raise GraphFormatError("empty edge list without an 'n=' header")
    return Graph(n, tuple(edges), directed=directed, loops=loops)


def to_edge_list(g: Graph) -> str:
    head = f"n={g.n} directed={'true' if g.directed else 'false'}"
    if g.loops:
        head += " loops=true"
    lines = [head]
    for u, v, w in g.edges:
        lines.append(f"{u} {v}" if w == 1 else f"{u} {v} {format_rational(w)}")
    return "\n".join(lines) + "\n"


def parse_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"invalid graph6 character {ch!r}")
    n = ord(s[0]) - 63
    if n > GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 with n > {GRAPH6_MAX_N} is not supported")
    if n == 0:
        raise GraphFormatError("graph6 graph with no vertices")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = s[1:]
    if len(body) < need:
        raise GraphFormatError(f"truncated graph6 bit field: need {need} bytes, got {len(body)}")
    if len(body) > need:
        raise GraphFormatError(f"trailing data after graph6 bit field ({len(body) - need} extra bytes)")
    bits = []
    for ch in body:
        x = ord(ch) - 63
        bits.extend((x >> k) & 1 for k in range(5, -1, -1))
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph(n, tuple(edges))


def to_graph6(g: Graph) -> str:
    if g.directed or g.weighted:
        raise ParameterError("graph6 encodes simple undirected graphs only")
    if g.n > GRAPH6_MAX_N:
        raise ParameterError(f"graph6 with n > {GRAPH6_MAX_N} is not supported")
    idx = g._index
    bits = [int((i, j) in idx) for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k:k + 6]:
            x = (x << 1) | b
        out.append(chr(x + 63))
    return "".join(out)


def adjacency_matrix(g: Graph) -> ExactMatrix:
    rows = [[Fraction(0)] * g.n for _ in range(g.n)]
    for u, v, w in g.edges:
        rows[u][v] = w
        if not g.directed:
            rows[v][u] = w
    return ExactMatrix.from_rows(rows)


def automorphism_maps(g: Graph, pair, max_n: int = AUTOMORPHISM_MAX_N) -> bool:
    """Is there an automorphism sending ``pair[0]`` to ``pair[1]``?

    Plain backtracking; candidate images are restricted to vertices of
    equal degree and checked edge by edge against already mapped vertices.
    """
    if g.directed:
        raise ParameterError("automorphism search supports undirected graphs only")
    if g.n > max_n:
        raise BudgetExceeded(f"automorphism search limited to n <= {max_n}, got n={g.n}")
    i, j = pair
    if not (0 <= i < g.n and 0 <= j < g.n) or i == j:
        raise ParameterError(f"bad vertex pair {pair!r}")
    n = g.n
    adj = g.neighbors()
    w = g._index
    deg = [len(a) for a in adj]
    if deg[i] != deg[j]:
        return False

    def weight(a, b):
        return w.get((min(a, b), max(a, b)), 0)

    # map i first, then the rest in BFS order from i so adjacency constraints bite early
    order = [i]
    seen = {i}
    k = 0
    while len(order) < n:
        if k == len(order):
            nxt = min(v for v in range(n) if v not in seen)
            order.append(nxt)
            seen.add(nxt)
        for v in sorted(adj[order[k]]):
            if v not in seen:
                seen.add(v)
                order.append(v)
        k += 1

    phi = {}
    used = set()

    def consistent(v, image):
        if deg[v] != deg[image]:
            return False
        for u, fu in phi.items():
            if weight(u, v) != weight(fu, image):
                return False
        return True

    def extend(pos):
        if pos == n:
            return True
        v = order[pos]
        cands = [j] if pos == 0 else [x for x in range(n) if x not in used]
        for c in cands:
            if consistent(v, c):
                phi[v] = c
                used.add(c)
                if extend(pos + 1):
                    return True
                del phi[v]
                used.discard(c)
        return False

    return extend(0)
