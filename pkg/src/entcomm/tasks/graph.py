import networkx as nx
import numpy as np

from ..classical.graphs import cycle_graph, independence_number
from .base import Task, clip_bound, uniform


def _nodes(g: nx.Graph):
    return sorted(g.nodes)


def _promise_pairs(g: nx.Graph) -> int:
    return 2 * g.number_of_edges() + g.number_of_nodes()


def graph_task(g: nx.Graph) -> Task:
    """
    Equality problem on a graph

    Under the promise x = y or x adjacent to y, Bob answers z=1 (index 0) when
    x = y and z=2 (index 1) otherwise. Every promise pair carries weight
    1/(sum_x N_x + N).
    """
    nodes = _nodes(g)
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    if n == 0:
        raise ValueError("The graph has no vertices")
    weight = 1.0 / _promise_pairs(g)
    c = np.zeros((n, n, 2))
    for v in nodes:
        c[index[v], index[v], 0] = weight
        for u in g.neighbors(v):
            c[index[u], index[v], 1] = weight
    return Task(
        c,
        uniform(n),
        "graph",
        {"vertices": n, "edges": [[int(u), int(v)] for u, v in g.edges]},
        bound=lambda s: graph_bound(g, s),
    )


def graph_bound(g: nx.Graph, s: float) -> float:
    """((sum_x N_x + N)(S - 1) + N) / (N alpha(G)) <= D_C."""
    n = g.number_of_nodes()
    alpha = independence_number(g)
    raw = (_promise_pairs(g) * (s - 1) + n) / (n * alpha)
    return clip_bound(raw, 1.0 / n)


def cycle_target_success(n: int) -> float:
    """Success reached by the qubit protocol on the odd cycle of length n."""
    return 1 - (2 / 3) * np.sin(np.pi / (2 * n)) ** 2


def cycle_target_ratio(n: int) -> float:
    """N/(N-1) (1 - 2 sin^2(pi/2N)), the advantage against D_EACC = 2/N."""
    return n / (n - 1) * (1 - 2 * np.sin(np.pi / (2 * n)) ** 2)


def cycle_task(n: int) -> Task:
    if n < 3:
        raise ValueError("A cycle needs at least three vertices")
    return graph_task(cycle_graph(n))
