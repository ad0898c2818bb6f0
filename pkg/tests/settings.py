"""Hypothesis profiles for the property tests.

Tiers:
- STANDARD_SETTINGS: 100 examples - cheap structural properties
- SLOW_SETTINGS: 30 examples - properties that run a search or the oracle
- QUICK_SETTINGS: 20 examples - input rejection
"""

from hypothesis import HealthCheck, settings

STANDARD_SETTINGS = settings(max_examples=100, deadline=None)

# searches and the oracle are exponential in the worst case
SLOW_SETTINGS = settings(
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

QUICK_SETTINGS = settings(max_examples=20, deadline=None)
