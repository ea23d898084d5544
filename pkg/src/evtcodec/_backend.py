"""Kernel backend selection.

The compiled kernels are used when the extension was built, unless
``EVTCODEC_PURE_PYTHON=1`` is set. Both backends produce identical tensors.
"""

import os
from types import ModuleType
from typing import Dict

from . import _pykernels

_BACKENDS: Dict[str, ModuleType] = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels


def available_backends():
    return sorted(_BACKENDS)


def get_kernels(name=None) -> ModuleType:
    if name is None:
        return kernels
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None


if _ckernels is not None and os.environ.get("EVTCODEC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
else:
    BACKEND = "python"

kernels = _BACKENDS[BACKEND]
