"""Steady-state transport through driven tight-binding chains."""

from ._lbt import *  # noqa: F401,F403
from ._lbt import __version__  # noqa: F401
