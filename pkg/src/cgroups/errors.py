"""Exception hierarchy shared by every module."""


class CGroupsError(Exception):
    pass


class NotAGroup(CGroupsError, ValueError):
    pass


class InvalidAlphaCParams(CGroupsError, ValueError):
    pass


class NotNormal(CGroupsError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAbelian(CGroupsError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OrderMismatch(CGroupsError, ValueError):
    pass


class ParseError(CGroupsError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class VerificationFailure(CGroupsError):
    def __init__(self, failures):
        self.failures = list(failures)
        names = ", ".join(f.claim for f in self.failures[:5])
        super().__init__(f"{len(self.failures)} claim(s) failed: {names}")


class CapExceeded(CGroupsError):
    """Base for every resource-limit error; the CLI maps these to exit code 3."""


class OrderCapExceeded(CapExceeded):
    pass


class SearchCapExceeded(CapExceeded):
    pass


class EnumerationOverflow(CapExceeded):
    pass


class InconsistentResult(CGroupsError):
    """Two independent routes to the same quantity disagreed."""
