"""Hard resource guards for enumeration and intermediate state sizes.

Both limits are powers of two.  The environment variable
``TENSORNET_GUARD_BITS`` overrides both exponents at once; it is read at call
time so tests and long-running processes can adjust it.
"""

import os

from .errors import GuardError

LABELING_BITS = 26
AMPLITUDE_BITS = 22

_ENV_VAR = "TENSORNET_GUARD_BITS"


def _bits(default: int) -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise GuardError(f"{_ENV_VAR} must be an integer exponent, got {raw!r}") from exc


def labeling_limit() -> int:
    return 1 << _bits(LABELING_BITS)


def amplitude_limit() -> int:
    return 1 << _bits(AMPLITUDE_BITS)


def check_labelings(count: int) -> None:
    limit = labeling_limit()
    if count > limit:
        raise GuardError(f"enumeration of {count} labelings exceeds the guard of {limit}")


def check_amplitudes(count: int, what: str = "intermediate state") -> None:
    limit = amplitude_limit()
    if count > limit:
        raise GuardError(f"{what} of dimension {count} exceeds the guard of {limit}")
