"""Select the compiled kernels when available, else the numpy fallback.

Set ``KMSPEC_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("KMSPEC_PURE_PYTHON"):
    from . import _core_py as core
    BACKEND = "python"
else:
    try:
        from . import _core as core
        BACKEND = "cython"
    except ImportError:
        from . import _core_py as core
        BACKEND = "python"

banded_recurrence = core.banded_recurrence
walk_counts = core.walk_counts
