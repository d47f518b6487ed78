"""Hot-kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Setting ``SPINCAT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _fallback

if os.environ.get("SPINCAT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ext as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

kernel_diff_values = _impl.kernel_diff_values
probe_amplitudes = _impl.probe_amplitudes
outcome_sums = _impl.outcome_sums


def available_backends():
    """Map of backend name to module for every backend importable here."""
    found = {"python": _fallback}
    try:
        from . import _ext
        found["cython"] = _ext
    except ImportError:
        pass
    return found


__all__ = ["BACKEND", "available_backends", "kernel_diff_values", "probe_amplitudes", "outcome_sums"]
