"""Gate-level hybrid timing model for 2-input NOR/NAND gates.

Thin re-export of the compiled extension. When the package is used from a
source checkout with the extension built elsewhere on sys.path, fall back to
a top-level `_hybridtime` module.
"""

try:
    from ._hybridtime import *  # noqa: F401,F403
    from ._hybridtime import __doc__ as _ext_doc
except ImportError:  # pragma: no cover - source-tree fallback
    from _hybridtime import *  # noqa: F401,F403
    from _hybridtime import __doc__ as _ext_doc

__all__ = [
    "characterize",
    "mis_delay_falling",
    "mis_delay_rising",
    "nor_delay",
    "process_sequence",
    "generate_stimuli",
    "simulate",
    "compare",
    "ValidationError",
    "NumericError",
]
