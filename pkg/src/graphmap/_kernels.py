"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin takes over when the
extension is missing or when ``GRAPHMAP_PURE_PYTHON=1`` is set.  Both expose
the same functions with identical numeric behaviour.
"""

import os

if os.environ.get("GRAPHMAP_PURE_PYTHON") == "1":
    from . import _purepy as _backend

    USING_COMPILED_CORE = False
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]

        USING_COMPILED_CORE = True
    except ImportError:
        from . import _purepy as _backend

        USING_COMPILED_CORE = False

evaluate_objective = _backend.evaluate_objective
swap_delta = _backend.swap_delta
advance_chain = _backend.advance_chain
