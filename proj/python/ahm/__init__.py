"""Alternating Halpern/Mann iteration toolkit."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # running from a build tree, where _core is top-level
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
