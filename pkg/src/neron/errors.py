"""Exception types and validation reports shared by every module."""

from dataclasses import dataclass, field


class NeronError(Exception):
    """Base error carrying a short machine-readable code."""

    def __init__(self, code, message="", path=None):
        self.code = code
        self.message = message or code
        self.path = path
        super().__init__(f"{code}: {self.message}" + (f" at {path}" if path else ""))


class ValidationError(NeronError):
    """Input data violates one or more invariants.

    ``issues`` is a list of ``(code, message)`` pairs; ``code`` is the first one.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        code, message = self.issues[0]
        super().__init__(code, message)

    @property
    def codes(self):
        return [c for c, _ in self.issues]


class InconsistentError(NeronError):
    def __init__(self, message):
        super().__init__("INCONSISTENT", message)


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def codes(self) -> list:
        return [c for c, _ in self.issues]

    def raise_for_errors(self, strict: bool = False):
        problems = self.issues + (self.warnings if strict else [])
        if problems:
            raise ValidationError(problems)
