"""Exact structure theory of finite discrete-spectrum dynamical systems.

Rational numbers cross the boundary as strings like "1/3" so nothing is
ever rounded; see the README for the file formats and the CLI.
"""

from ._specbundle import *  # noqa: F401,F403
from ._specbundle import __doc__  # noqa: F401
