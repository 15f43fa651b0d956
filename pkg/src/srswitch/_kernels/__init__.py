"""Fixed-step integration kernels with a compiled fast path.

The Cython extension _core holds the hot loops; installs without a
compiler fall back to the numpy implementation in _pure. BACKEND names
the implementation in use.
"""

try:
    from . import _core as _impl
    BACKEND = "compiled"
except ImportError:
    from . import _pure as _impl
    BACKEND = "pure"

rk4_linear = _impl.rk4_linear
propagate_linear = _impl.propagate_linear


def available_backends():
    """Map of importable backend name -> module, for benchmarking."""
    out = {}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    from . import _pure
    out["pure"] = _pure
    return out


__all__ = ["BACKEND", "rk4_linear", "propagate_linear", "available_backends"]
