"""Multiscale sequence space toolkit: admissible profiles, their conjugate and
dual transforms, dyadic tree-indexed coefficient sequences, scale-counting
distances and Besov norms, asymptotic profile estimation, and the witness
experiments around local convexity and duality.
"""

try:
    from snu._core import *  # noqa: F401,F403  (installed package layout)
    from snu import _core as _impl
except ImportError:  # build-tree layout: _core sits on PYTHONPATH
    from _core import *  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
