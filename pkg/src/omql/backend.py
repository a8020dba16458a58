"""Kernel backend selection.

Batch kernels exist twice: a numba @njit build and a pure-numpy build.
OMQL_BACKEND picks one ("numba" or "numpy"); unset means numba when it
imports, numpy otherwise.
"""

import os

_requested = os.environ.get("OMQL_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"OMQL_BACKEND={_requested!r}: expected 'numba', 'numpy', or unset"
    )

if _requested == "numpy":
    NUMBA_ENABLED = False
else:
    try:
        import numba  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        if _requested == "numba":
            raise RuntimeError("OMQL_BACKEND=numba but numba is not importable")
        NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def enumeration_cap(default):
    """Cap for explicit enumerations; OMQL_CAP overrides every default."""
    raw = os.environ.get("OMQL_CAP", "").strip()
    if not raw:
        return default
    cap = int(raw)
    if cap <= 0:
        raise RuntimeError(f"OMQL_CAP={raw!r}: expected a positive integer")
    return cap
