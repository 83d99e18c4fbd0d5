from pathlib import Path

import networkx as nx

from ..config import classical_settings, logger
from ..errors import ScenarioTooLargeError


def load_graph(path) -> nx.Graph:
    """
    Read an undirected edge list, one "u v" pair per line, 1-indexed

    Blank lines and lines starting with '#' are skipped, except a header of the
    form "# n=<count>" which declares vertices that carry no edge.
    """
    g = nx.Graph()
    n_declared = 0
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("n="):
                n_declared = int(line[1:].strip()[2:])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u < 1 or v < 1:
            raise ValueError(f"{path}:{lineno}: vertices are 1-indexed")
        if u == v:
            raise ValueError(f"{path}:{lineno}: self-loops are not allowed")
        g.add_edge(u, v)
    g.add_nodes_from(range(1, n_declared + 1))
    logger.debug(f"Loaded graph with {g.number_of_nodes()} vertices from {path}")
    return g


def cycle_graph(n: int) -> nx.Graph:
    """Delta_N with vertices labelled 1..N."""
    return nx.relabel_nodes(nx.cycle_graph(n), {i: i + 1 for i in range(n)})


def _as_graph(g) -> nx.Graph:
    if isinstance(g, nx.Graph):
        return g
    graph = nx.Graph()
    graph.add_edges_from(g)
    return graph


def independence_number(g) -> int:
    """Exact alpha(G) by branch and bound over vertex bitmasks."""
    g = _as_graph(g)
    if nx.number_of_selfloops(g):
        raise ValueError("independence_number expects a simple graph")
    n = g.number_of_nodes()
    if n > classical_settings["max_graph_vertices"]:
        raise ScenarioTooLargeError(
            f"Graph has {n} vertices, limit is {classical_settings['max_graph_vertices']}"
        )
    nodes = list(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    closed = [1 << i for i in range(n)]
    for u, v in g.edges:
        closed[index[u]] |= 1 << index[v]
        closed[index[v]] |= 1 << index[u]

    best = 0

    def branch(candidates: int, size: int):
        nonlocal best
        if candidates == 0:
            best = max(best, size)
            return
        if size + bin(candidates).count("1") <= best:
            return
        # branch on the candidate with most neighbours among the candidates
        v = max(
            (i for i in range(n) if candidates >> i & 1),
            key=lambda i: bin(closed[i] & candidates).count("1"),
        )
        if closed[v] & candidates == 1 << v:
            # isolated among the candidates, always take it
            branch(candidates & ~(1 << v), size + 1)
            return
        branch(candidates & ~closed[v], size + 1)
        branch(candidates & ~(1 << v), size)

    branch((1 << n) - 1, 0)
    return best
