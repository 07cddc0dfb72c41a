"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (Cython) and the fallback implement the same
algorithms with identical arithmetic, so results are bit-identical; the
extension is only faster. Selection happens at import: the compiled module
is preferred unless CITEGRAPH_PURE_PYTHON=1 is set or the build is absent.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("CITEGRAPH_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

kcore_mask = _impl.kcore_mask
local_move_labels = _impl.local_move_labels

__all__ = ["BACKEND", "kcore_mask", "local_move_labels", "backends"]


def backends() -> dict[str, object]:
    """All importable kernel backends, keyed by name (for benchmarks/tests)."""
    found: dict[str, object] = {"python": _pykernels}
    try:
        from . import _ckernels

        found["compiled"] = _ckernels
    except ImportError:
        pass
    return found
