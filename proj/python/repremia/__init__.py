"""Optimal reinsurance under a reward-and-penalty premium."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
