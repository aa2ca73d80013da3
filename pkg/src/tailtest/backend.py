"""Kernel backend selection.

The package ships a compiled extension (``tailtest._kernels``) for the hot
inner loops and a pure NumPy/SciPy fallback (``tailtest._kernels_py``).
The compiled backend is used when available; set ``TAILTEST_BACKEND=python``
to force the fallback (useful for benchmarking, see ``benchmarks/``).
"""

from __future__ import annotations

import os

from . import _kernels_py as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_choice = os.environ.get("TAILTEST_BACKEND", "").strip().lower()
if _choice in ("", "auto"):
    active = compiled_backend if compiled_backend is not None else python_backend
elif _choice == "python":
    active = python_backend
elif _choice == "compiled":
    if compiled_backend is None:
        raise ImportError(
            "TAILTEST_BACKEND=compiled but the tailtest._kernels extension "
            "is not built; install the package or unset the variable"
        )
    active = compiled_backend
else:
    raise ValueError(f"unknown TAILTEST_BACKEND value: {_choice!r}")


def backend_name() -> str:
    """Name of the backend in use: 'compiled' or 'python'."""
    return "compiled" if active is compiled_backend else "python"


prefix_tables = active.prefix_tables
ar1_path = active.ar1_path
sre_path = active.sre_path
garch_sigma2 = active.garch_sigma2
