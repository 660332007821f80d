"""Backend selection for the scan kernels.

The compiled extension is used when it was built; otherwise the numpy
implementation in :mod:`randassign._kernels_py` is used. Both return the same
witnesses.
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_NAMES = ("sp_scan", "ef_scan", "ete_scan", "neutral_scan", "anon_scan",
          "sul_scan", "cfe_scan", "dominance_scan", "sep_scan")

backend = "compiled" if _compiled is not None else "python"


def available() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def use(name: str) -> None:
    """Switch every kernel to ``"compiled"`` or ``"python"``."""
    global backend
    if name == "compiled" and _compiled is None:
        raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    source = _compiled if name == "compiled" else _kernels_py
    g = globals()
    for fn in _NAMES:
        g[fn] = getattr(source, fn)
    backend = name


use(backend)
