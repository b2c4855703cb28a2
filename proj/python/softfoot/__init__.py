"""Planar quasi-static SoftFoot simulator."""

try:
    from ._softfoot import *  # noqa: F401,F403
    from . import _softfoot as _impl
except ImportError:  # extension built next to a source checkout
    from _softfoot import *  # noqa: F401,F403
    import _softfoot as _impl

__version__ = _impl.__version__
__all__ = [name for name in dir(_impl) if not name.startswith("_")]
