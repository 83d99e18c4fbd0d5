from . import facets, graphs, optimum, strategies, vertices
from .facets import (
    SCENARIO_313_FACETS,
    SCENARIO_314_FACETS,
    FacetCheck,
    FacetInequality,
    classical_facet_value,
    parse_facet,
    verify_facet,
)
from .graphs import cycle_graph, independence_number, load_graph
from .optimum import ClassicalOptimum, classical_optimum
from .strategies import (
    Decoding,
    Encoding,
    encoding_distinguishability,
    shift_encoding_demo,
    simulate,
)
from .vertices import VertexSet, enumerate_vertices, facets_from_vertices
