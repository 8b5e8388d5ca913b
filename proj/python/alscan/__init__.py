"""Detection of sparse signals aligned across many sequences."""

from ._alscan import *  # noqa: F401,F403
from ._alscan import __version__  # noqa: F401
