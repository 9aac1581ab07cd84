"""Backend selection for the numerical inner loops.

``BACKEND`` is "compiled" when the Cython extension built, "numpy"
otherwise.  Both expose the same four functions; see ``fallback.py`` for
reference semantics and ``benchmarks/bench_kernels.py`` for a comparison.
"""

try:
    from . import _core as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import fallback as _impl

    BACKEND = "numpy"

from . import fallback

eval_terms = _impl.eval_terms
heat_lambda_sum = _impl.heat_lambda_sum
qt_radial_sum = _impl.qt_radial_sum
htype_product_sum = _impl.htype_product_sum

__all__ = [
    "BACKEND",
    "eval_terms",
    "heat_lambda_sum",
    "qt_radial_sum",
    "htype_product_sum",
    "fallback",
]
