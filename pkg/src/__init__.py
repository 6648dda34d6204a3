"""conestab - locally convex cones and Pexider stabilization."""

from .constants import APP_VERSION, APP_AUTHOR

__version__ = APP_VERSION
__author__ = APP_AUTHOR
