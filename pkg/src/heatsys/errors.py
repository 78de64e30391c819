"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 3, numerical-infrastructure failures with 4, and failed mathematical
checks (inequality violations, regime mismatches) with 2.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_CONFIG = 3
EXIT_NUMERICS = 4


class ConfigurationError(ValueError):
    """Malformed or inconsistent run configuration (exit code 3)."""


class NumericsError(Exception):
    """Numerical infrastructure failure: non-finite values, failed solves,
    resolution limits hit before an answer was obtained (exit code 4)."""


class BlowupNotDetectedError(NumericsError):
    """A trace was asked for blow-up analysis but shows no divergence."""
