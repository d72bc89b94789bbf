"""semistable-lab: spectral machinery, exponent tail scans, and fractal-dimension
calculators for discretely scale-invariant (operator semistable) models, with
independent numerical probes cross-validating every closed form."""

from .bounds import EnvelopeReport, ResolventReport, envelope_scan, resolvent_scan
from .dimensions import (
    DimensionReport,
    SpectrumSummary,
    classify_recurrence,
    dimension_report,
    double_point_dim,
    graph_dim,
    range_dim,
)
from .models import (
    BrownianModel,
    DensityExampleModel,
    SemistableModel,
    SymmetricStableModel,
    Truncation,
    eval_F,
    eval_G,
    eval_psi,
    graph_H,
    graph_exponent,
    model_from_dict,
    resolvent_re,
)
from .probes import (
    ProbeEstimate,
    example36_suite,
    graph_dim_index,
    packing_via_W,
    range_dim_index,
    recurrence_integral,
)
from .simulate import (
    PathSample,
    box_dim_graph,
    box_dim_range,
    empirical_char_check,
    sample_marginal,
    sample_path,
)
from .spectral import (
    SpectralBlock,
    SpectralDecomposition,
    anisotropy_norm,
    asymptotic_inverse,
    component_project,
    decompose,
    matrix_power,
    split_scale,
    theta,
)

__version__ = "0.1.0"

__all__ = [
    "BrownianModel",
    "DensityExampleModel",
    "DimensionReport",
    "EnvelopeReport",
    "PathSample",
    "ProbeEstimate",
    "ResolventReport",
    "SemistableModel",
    "SpectralBlock",
    "SpectralDecomposition",
    "SpectrumSummary",
    "SymmetricStableModel",
    "Truncation",
    "anisotropy_norm",
    "asymptotic_inverse",
    "box_dim_graph",
    "box_dim_range",
    "classify_recurrence",
    "component_project",
    "decompose",
    "dimension_report",
    "double_point_dim",
    "empirical_char_check",
    "envelope_scan",
    "eval_F",
    "eval_G",
    "eval_psi",
    "example36_suite",
    "graph_H",
    "graph_dim",
    "graph_dim_index",
    "graph_exponent",
    "matrix_power",
    "model_from_dict",
    "packing_via_W",
    "range_dim",
    "range_dim_index",
    "recurrence_integral",
    "resolvent_re",
    "resolvent_scan",
    "sample_marginal",
    "sample_path",
    "split_scale",
    "theta",
]
