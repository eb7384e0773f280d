"""q-Gaussian return-distribution fitting (C++ core)."""

try:
    from ._qgfit import *  # noqa: F401,F403  (installed layout)
    from ._qgfit import __doc__ as _core_doc
except ImportError:  # pragma: no cover - build-tree layout
    from _qgfit import *  # noqa: F401,F403
    from _qgfit import __doc__ as _core_doc

__all__ = [
    "QGaussianParams",
    "q_log",
    "normalization_cq",
    "pdf",
    "cdf",
    "variance",
    "tail_index",
    "sample",
    "fit",
    "fit_fixed_q",
    "fit_branches",
    "fisher_stderr",
    "gof",
    "ks_distance",
    "fit_power_law",
    "fit_drift_diffusion",
    "beta_superdiffusion",
    "analyze",
]
