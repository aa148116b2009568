"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``code`` so the CLI and the HTTP
service can surface failures uniformly.
"""


class RulecfError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class ScenarioSyntaxError(RulecfError):
    """Scenario document is not well-formed (bad syntax or bad shape)."""

    code = "syntax-error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message, line=line, column=column)
        self.line = line
        self.column = column


class ScenarioValidationError(RulecfError):
    """Scenario parsed but violates model invariants."""

    code = "invalid-scenario"

    def __init__(self, violations):
        msgs = "; ".join(v.message for v in violations)
        super().__init__(f"invalid scenario: {msgs}")
        self.violations = violations


class InvalidEventError(RulecfError):
    code = "invalid-event"


class CascadeOverflowError(RulecfError):
    """Rule cascade exceeded the depth cap (likely a rule cycle)."""

    code = "cascade-overflow"


class NoExplanandumError(RulecfError):
    """The foil equals the current state, so there is nothing to explain."""

    code = "no-explanandum"


class UnachievableFoilError(RulecfError):
    """No rule can produce the foil and the device cannot be set directly."""

    code = "unachievable-foil"


class NoCandidatesError(RulecfError):
    """No valid change set achieves the foil within the sparsity cap."""

    code = "no-candidates"


class InvalidRequestError(RulecfError):
    """Explanation request references unknown entities or values."""

    code = "invalid-request"


class SessionNotFoundError(RulecfError):
    code = "session-not-found"
