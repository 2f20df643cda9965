try:
    from ._qhedge import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _qhedge import *  # noqa: F401,F403  (in-tree build via PYTHONPATH)

__version__ = "0.1.0"
