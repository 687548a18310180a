"""Quantum speed limits from density kernels and Wigner functions."""

from ._wignerqsl import *  # noqa: F401,F403
from ._wignerqsl import QslError, __doc__  # noqa: F401
