class CreditDebateError(Exception):
    """Base error. `exit_code` is what the CLI returns when the error escapes a command."""

    exit_code = 1


class UsageError(CreditDebateError):
    exit_code = 2


class ConfigurationError(CreditDebateError):
    exit_code = 3


class BackendError(CreditDebateError):
    """Remote generation or search failure that survived the retry policy."""

    exit_code = 4

    def __init__(self, message: str, retryable: bool = True):
        super().__init__(message)
        self.retryable = retryable


class ProtocolViolationError(CreditDebateError):
    exit_code = 5


class IngestionError(CreditDebateError):
    def __init__(self, message: str, field: str):
        super().__init__(f"{message} (field: {field})")
        self.field = field


class InsufficientDataError(CreditDebateError):
    def __init__(self, company_id: str):
        super().__init__(f"Insufficient data for company '{company_id}'.")
        self.company_id = company_id


class ClassificationError(CreditDebateError):
    pass


class ToolPermissionError(CreditDebateError):
    exit_code = 5

    def __init__(self, role_id: str, tool: str = "web_search"):
        super().__init__(f"Role '{role_id}' is not allowed to call {tool}.")
        self.role_id = role_id
        self.tool = tool


class ReportParseError(CreditDebateError):
    exit_code = 5

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ReportSchemaError(CreditDebateError):
    exit_code = 5

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        listing = "; ".join(f"{path}: {msg}" for path, msg in errors)
        super().__init__(f"Report does not match schema: {listing}")

    @property
    def paths(self) -> list[str]:
        return [path for path, _ in self.errors]


class TreeFormatError(CreditDebateError):
    exit_code = 5

    def __init__(self, message: str, position: str):
        super().__init__(f"{message} at {position}")
        self.position = position


class StatsError(CreditDebateError):
    exit_code = 5


class StageError(CreditDebateError):
    """A pipeline stage failed; the stage name is kept for the journal and the CLI."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"Stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
