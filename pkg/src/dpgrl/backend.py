"""Kernel backend selection.

The compiled extension (dpgrl._speedups, Cython) is used when available;
otherwise the numpy fallbacks in dpgrl._pure take over. Set DPGRL_BACKEND=pure
to force the fallback, DPGRL_BACKEND=ext to fail loudly when the extension is
missing.
"""

import os

from . import _pure

_requested = os.environ.get("DPGRL_BACKEND", "").lower()

if _requested == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "ext"
    except ImportError:
        if _requested == "ext":
            raise
        _impl = _pure
        BACKEND = "pure"

smooth_oracle = _impl.smooth_oracle
rule_counts = _impl.rule_counts
