"""Hot loops of the simulator, with a numba and a pure-numpy implementation.

The backend is chosen once at import time from ``IDPSIM_BACKEND``
(``numba`` or ``numpy``). Without the variable numba is used when it
imports and numpy otherwise. Both backends run the same algorithm on the
same shared formulas, so results agree to rounding.
"""

import importlib
import os
import warnings

from . import _common as params  # noqa: F401  (search constants)

_ENV = "IDPSIM_BACKEND"
_CHOICES = ("numba", "numpy")


def load_backend(name):
    """Import and return the backend module ``name``."""
    if name not in _CHOICES:
        raise ValueError(f"unknown backend {name!r}; choose from {_CHOICES}")
    return importlib.import_module(f"{__name__}._{name}")


def _select():
    requested = os.environ.get(_ENV, "").strip().lower()
    if requested:
        return load_backend(requested)
    try:
        return load_backend("numba")
    except ImportError:
        warnings.warn("numba unavailable; using the numpy backend", RuntimeWarning, stacklevel=2)
        return load_backend("numpy")


backend = _select()
BACKEND = backend.NAME

circuit_probs = backend.circuit_probs
align_batch = backend.align_batch
von_neumann_errors = backend.von_neumann_errors
idp_grid_min = backend.idp_grid_min
