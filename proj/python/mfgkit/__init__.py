"""Python interface to the first-order mean field game solver."""

try:
    from ._mfgkit import *  # noqa: F401,F403  (installed package layout)
    from ._mfgkit import __doc__  # noqa: F401
except ImportError:  # in-tree build: extension module sits on sys.path
    from _mfgkit import *  # noqa: F401,F403
