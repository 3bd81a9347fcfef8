"""Hot loops: the compiled extension when built, else the numpy fallback.

Set BIQ_LAB_PURE=1 to force the fallback.
"""

import os

try:
    if os.environ.get("BIQ_LAB_PURE"):
        raise ImportError("pure mode requested")
    from ._kernels import (  # type: ignore[import-not-found]
        all_selections_unimodular,
        batch_selection_free,
        cubic_row_search,
        fixed_element_mod_p,
    )
    BACKEND = "compiled"
except ImportError:
    from ._kernels_py import (
        all_selections_unimodular,
        batch_selection_free,
        cubic_row_search,
        fixed_element_mod_p,
    )
    BACKEND = "python"

__all__ = [
    "BACKEND",
    "all_selections_unimodular",
    "batch_selection_free",
    "cubic_row_search",
    "fixed_element_mod_p",
]
