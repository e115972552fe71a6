"""Fixed-effect regressions on network data: python bindings."""

from ._netfe import (  # noqa: F401
    BipartiteData,
    Graph,
    InputError,
    NumericalError,
    __version__,
    adjacency,
    bias_corrected_variance,
    build_bipartite,
    build_graph,
    cheeger_exact,
    complete,
    connected_components,
    connectivity_report,
    degrees,
    diag_sdag,
    diagnostics,
    erdos_renyi,
    extended_hypercube,
    fit,
    fit_eta_three_ways,
    hypercube,
    incidence,
    is_connected,
    lambda2,
    laplacian,
    largest_component,
    lstar,
    normalized_laplacian,
    one_mode_projection,
    read_edge_csv,
    sample_variance,
    simulate,
    stack_two_way,
    standard_errors,
    star,
    variance_bounds,
    wheel,
)
