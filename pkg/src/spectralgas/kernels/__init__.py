from .fredholm import (
    FredholmResult,
    GapProblem,
    KernelKind,
    airy_kernel,
    airy_truncation,
    fredholm_det,
    sine_kernel,
)
from .laws import (
    Ensemble,
    cluster_w2,
    gap_probability,
    gaudin_cdf,
    gaudin_density,
    sine_integral,
    tw_cdf,
    wigner_surmise,
)
from .painleve import painleve_ii_hm, painleve_v_sigma, tw_painleve

__all__ = [
    "Ensemble",
    "FredholmResult",
    "GapProblem",
    "KernelKind",
    "airy_kernel",
    "airy_truncation",
    "cluster_w2",
    "fredholm_det",
    "gap_probability",
    "gaudin_cdf",
    "gaudin_density",
    "painleve_ii_hm",
    "painleve_v_sigma",
    "sine_integral",
    "sine_kernel",
    "tw_cdf",
    "tw_painleve",
    "wigner_surmise",
]
