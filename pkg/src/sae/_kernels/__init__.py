"""Kernel backend selection.

`_pairing_c` is the Cython-compiled build of `pairing.py` (see setup.py).
When the extension is absent (pure install, or build skipped) the
interpreted module is used; both expose the same names.
"""

try:
    from sae._kernels import _pairing_c as pairing  # type: ignore[attr-defined]
    BACKEND = "compiled"
except ImportError:
    from sae._kernels import pairing  # type: ignore[no-redef]
    BACKEND = "pure"

__all__ = ["pairing", "BACKEND"]
