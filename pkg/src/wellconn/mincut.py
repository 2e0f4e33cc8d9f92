"""Min-cut kernel selection.

The compiled kernel is used when importable; set ``WELLCONN_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
import os

from . import _mincut_py

python_stoer_wagner = _mincut_py.stoer_wagner

try:
    if os.environ.get("WELLCONN_PURE_PYTHON"):
        raise ImportError("pure-Python kernel requested")
    from ._mincut_ext import stoer_wagner as compiled_stoer_wagner
except ImportError:
    compiled_stoer_wagner = None

stoer_wagner = compiled_stoer_wagner or python_stoer_wagner
KERNEL = "compiled" if compiled_stoer_wagner is not None else "python"
