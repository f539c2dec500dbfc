"""Secrecy rate-distortion analysis of the Shannon cipher system with
list/henchman adversaries. The heavy lifting lives in the C++ core."""

from henchman._core import *  # noqa: F401,F403
from henchman._core import __doc__ as _core_doc

__doc__ = _core_doc
