"""Kernel backend selection.

The compiled extension is preferred when importable; set QUADLOG_KERNELS=py
to force the pure-NumPy fallback or QUADLOG_KERNELS=c to require the
extension (ImportError if it is missing). ``BACKEND`` records the choice.
"""

import os

_choice = os.environ.get("QUADLOG_KERNELS", "").strip().lower()

if _choice not in ("", "c", "py"):
    raise ValueError(f"QUADLOG_KERNELS must be 'c' or 'py', got {_choice!r}")

if _choice == "py":
    from . import _kernels_py as kernels

    BACKEND = "py"
elif _choice == "c":
    from . import _kernels_c as kernels

    BACKEND = "c"
else:
    try:
        from . import _kernels_c as kernels

        BACKEND = "c"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "py"

lu_factor = kernels.lu_factor
lu_solve_factored = kernels.lu_solve_factored
jacobi_eig = kernels.jacobi_eig
resolvent_sum = kernels.resolvent_sum
resolvent_action_sum = kernels.resolvent_action_sum
