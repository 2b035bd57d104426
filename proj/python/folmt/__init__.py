"""Finite-model satisfiability toolkit."""

from ._folmt import *  # noqa: F401,F403
from ._folmt import __doc__  # noqa: F401
