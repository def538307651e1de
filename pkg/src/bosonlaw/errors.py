"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments that break its contract
    (photon-number mismatch, wrong margins, occupied-port requirements...)."""


class NotFactorizableError(Exception):
    """The amplitude does not admit the prefactor-times-suppression-function
    split (a prefactor exponent is negative or a first-column entry is zero).
    Callers should fall back to the raw amplitude."""


class MultiportSpecError(ValueError):
    """A multiport specification string could not be parsed."""
