"""Dense bounded-variable primal simplex pivot kernel.

Two interchangeable implementations of ``run_simplex``: a Cython extension
(``_fast``) and a pure-numpy fallback (``_pure``). The compiled kernel is
preferred when present; set ONEHOT_MILP_PURE_PY=1 to force the fallback.
Both follow the same pivoting rules so results are interchangeable.
"""

from __future__ import annotations

import os

from onehot_milp.simplex import _pure

OPTIMAL = 0
UNBOUNDED = 1
ITER_LIMIT = 2
NEED_REFACTOR = 3

_BACKENDS = {"pure": _pure}

if not os.environ.get("ONEHOT_MILP_PURE_PY"):
    try:
        from onehot_milp.simplex import _fast

        _BACKENDS["fast"] = _fast
    except ImportError:
        pass


def backend_name() -> str:
    return "fast" if "fast" in _BACKENDS else "pure"


def get_kernel(name: str | None = None):
    """The module providing ``run_simplex``; default is the best available."""
    if name is None:
        name = backend_name()
    return _BACKENDS[name]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)
