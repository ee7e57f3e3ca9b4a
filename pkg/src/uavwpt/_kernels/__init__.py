"""Solver kernel backends.

The compiled extension (uavwpt._kernels._fast) is preferred when it built;
otherwise the pure-NumPy reference (_ref) is used.  Both expose the same five
functions with identical semantics.  Set UAVWPT_BACKEND=python or =cython to
force one; forcing cython without the extension is an ImportError rather than
a silent fallback.
"""

import os

from . import _ref

_requested = os.environ.get("UAVWPT_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _ref
elif _requested == "cython":
    from . import _fast as _impl
elif _requested == "":
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _ref
else:
    raise ImportError(
        f"UAVWPT_BACKEND={_requested!r} not recognized (use 'python' or 'cython')"
    )

BACKEND = _impl.BACKEND
dual_objective = _impl.dual_objective
dual_objective_grad = _impl.dual_objective_grad
project_simplex = _impl.project_simplex
kkt_residual = _impl.kkt_residual
solve_pga = _impl.solve_pga
