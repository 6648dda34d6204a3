"""Central constants for conestab."""
from fractions import Fraction

# Application metadata
APP_NAME = "conestab"
APP_VERSION = "1.0.0"
APP_AUTHOR = "uprisin6"

# Report schema tag written into every JSON report
SCHEMA_VERSION = "conestab/1"

# Smallest positive coefficient reported by the bound searches
MIN_PROBE = Fraction(1, 2**20)

# Doubling-then-bisection search limits
SEARCH_RELATIVE_TOL = Fraction(1, 2**40)
SEARCH_MAX_ITERATIONS = 60

# Float-mode equality tolerance (absolute and relative)
FLOAT_EQUALITY_TOL = 2.0**-40

# Probe schedule {2^-k w : k <= depth} used when "for all v" is sampled
DEFAULT_PROBE_DEPTH = 40

# Hyers iteration defaults
DEFAULT_TOLERANCE = 2.0**-30
MAX_DEPTH = 40
DEFAULT_ADDITIVITY_TOL = 2.0**-15
ORACLE_DEPTH_OFFSET = 10

# Slack factor r > 1 of the normed route
DEFAULT_R = 1.0 + 2.0**-10
