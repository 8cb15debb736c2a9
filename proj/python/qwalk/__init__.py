"""Python surface of the quantum-walk analysis toolkit.

Thin re-export of the compiled extension. The heavy lifting (amplitude
evolution, sojourn-time tables, divergence diagnostics, flat-band scans)
lives in C++; this package only provides the import path.
"""

try:
    from ._core import (
        __version__,
        average_return_probability,
        distribution,
        divergence,
        flatness,
        gamma,
        psi,
        scan,
    )
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _core import (
        __version__,
        average_return_probability,
        distribution,
        divergence,
        flatness,
        gamma,
        psi,
        scan,
    )

__all__ = [
    "__version__",
    "average_return_probability",
    "distribution",
    "divergence",
    "flatness",
    "gamma",
    "psi",
    "scan",
]
