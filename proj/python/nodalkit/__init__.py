"""Nodal structure of symmetric matrices viewed as signed graphs."""

from ._core import *  # noqa: F401,F403
