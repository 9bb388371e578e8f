"""Backend selection for the integer kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module. Set ``BEZOUTDL_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("BEZOUTDL_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

echelon = _impl.echelon
rank = _impl.rank
poly_trim = _impl.poly_trim
poly_add = _impl.poly_add
poly_mul = _impl.poly_mul
poly_scale = _impl.poly_scale
poly_pdivrem = _impl.poly_pdivrem
poly_content = _impl.poly_content
row_combine = _impl.row_combine
rows_content = _impl.rows_content
row_content = _impl.row_content

__all__ = [
    "BACKEND", "echelon", "rank", "poly_trim", "poly_add", "poly_mul",
    "poly_scale", "poly_pdivrem", "poly_content", "row_combine",
    "rows_content", "row_content",
]
