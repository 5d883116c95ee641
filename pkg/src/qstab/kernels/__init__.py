"""Hot loops with a compiled backend when available.

``BACKEND`` is ``"cython"`` if the extension was built and ``"python"``
otherwise. Setting ``QSTAB_PURE_PYTHON=1`` forces the Python versions.
"""

import os

from . import _pykernels as python

try:
    if os.environ.get("QSTAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python requested")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

list_schedule = _impl.list_schedule
itinerary = _impl.itinerary
score_matrix = _impl.score_matrix

LEFT_END, RIGHT_END, BOTH_ENDS, INTERIOR = 0, 1, 2, 3
SIDE_CODES = {"L": LEFT_END, "R": RIGHT_END, "B": BOTH_ENDS, "N": INTERIOR}

__all__ = ["BACKEND", "compiled", "python", "list_schedule", "itinerary", "score_matrix"]
