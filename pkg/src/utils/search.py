"""Monotone-predicate searches for minimal coefficients."""
import logging
from typing import Callable, Optional, TypeVar

from ..constants import SEARCH_MAX_ITERATIONS, SEARCH_RELATIVE_TOL

logger = logging.getLogger(__name__)

S = TypeVar("S")


def minimal_coefficient(
    feasible: Callable[[S], bool],
    start: S,
    max_iterations: int = SEARCH_MAX_ITERATIONS,
    relative_tol=SEARCH_RELATIVE_TOL,
) -> Optional[S]:
    """Smallest positive value accepted by a monotone predicate.

    The predicate must be False below some threshold and True from it on.
    Doubling from ``start`` brackets the threshold, bisection then narrows
    the bracket to ``relative_tol`` (or ``max_iterations`` steps).

    Args:
        feasible: Monotone predicate on positive scalars
        start: Smallest probe; returned as is when already feasible
        max_iterations: Cap for both the doubling and the bisection phase
        relative_tol: Bracket width, relative to its upper end, that stops bisection

    Returns:
        A feasible value within the tolerance of the threshold, or None when
        doubling never reached a feasible value (unbounded)
    """
    if feasible(start):
        return start

    lo, hi = start, start * 2
    for _ in range(max_iterations):
        if feasible(hi):
            break
        lo, hi = hi, hi * 2
    else:
        logger.debug(f"Doubling search exhausted after {max_iterations} steps (last probe {hi})")
        return None

    for _ in range(max_iterations):
        if hi - lo <= hi * relative_tol:
            break
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi

