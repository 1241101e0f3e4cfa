# SPDX-License-Identifier: Apache-2.0
"""Sparse off-grid time-frequency analysis.

Thin wrapper around the native module; everything lives in tfatom._tfatom.
"""

from ._tfatom import *  # noqa: F401,F403
from ._tfatom import __version__  # noqa: F401
