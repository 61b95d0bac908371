"""Protocol-wide error types."""


class SaeError(Exception):
    """Base class for all protocol errors."""


class ZeroInverse(SaeError):
    pass


class ToyModeError(SaeError):
    """Pairing operations requested on a toy (non-pairing) context."""


class IndexMismatch(SaeError):
    pass


class InsufficientShares(SaeError):
    pass


class InconsistentShares(SaeError):
    def __init__(self, culprit, msg=""):
        super().__init__(msg or f"inconsistent share from party {culprit}")
        self.culprit = culprit


class DegenerateInput(SaeError):
    """The blinded sum opened to zero: input was the negated key (or a
    corrupted run); aborted without an identified culprit."""


class DuplicateEntry(SaeError):
    pass


class InvariantViolation(SaeError):
    pass


class UnknownMac(SaeError):
    pass


class ReusedKey(SaeError):
    pass


class BadSignature(SaeError):
    pass


class BadCertificate(SaeError):
    pass


class BadDealing(SaeError):
    pass


class QuotaExceeded(SaeError):
    pass


class KeyAlreadyUsed(SaeError):
    pass


class MacVerifyFailed(SaeError):
    def __init__(self, culprit, msg=""):
        super().__init__(msg or f"bad MAC contribution from escrow {culprit}")
        self.culprit = culprit


class RegistrationRejected(SaeError):
    pass


class DecryptFailure(SaeError):
    pass


class TransportTimeout(SaeError):
    pass


class ProtocolAbort(SaeError):
    """An MPC session aborted; carries the abort reports (possibly empty
    when the abort is non-attributable, e.g. a degenerate DVRF input)."""

    def __init__(self, reports, msg=""):
        super().__init__(msg or f"session aborted: {reports}")
        self.reports = list(reports)
