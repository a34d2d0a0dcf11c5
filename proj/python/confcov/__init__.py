from ._confcov import *  # noqa: F401,F403
from ._confcov import __doc__  # noqa: F401

__version__ = "0.1.0"
