"""Security analysis of polarization-encoded (M,L) QKD protocols."""

from ._mlqkd import *  # noqa: F401,F403
from ._mlqkd import __version__  # noqa: F401
