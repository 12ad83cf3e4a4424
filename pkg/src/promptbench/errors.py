"""Exception types shared across the platform.

Grouped by the layer that raises them so the API service can map each
family onto a stable HTTP status and error code.
"""


class PromptBenchError(Exception):
    """Base class for all domain errors."""

    code = "error"


# -- course bundle loading ------------------------------------------------

class BundleError(PromptBenchError):
    code = "bundle_error"


class MissingManifest(BundleError):
    code = "missing_manifest"


class MalformedManifest(BundleError):
    code = "malformed_manifest"


class DuplicateProblemId(BundleError):
    code = "duplicate_problem_id"


class MissingTests(BundleError):
    code = "missing_tests"


class AssetNotFound(BundleError):
    code = "asset_not_found"


class MalformedTest(BundleError):
    code = "malformed_test"


class UnknownProblem(PromptBenchError):
    code = "unknown_problem"


# -- prompt composition and generation ------------------------------------

class EmptyPrompt(PromptBenchError):
    code = "empty_prompt"


class BackendTimeout(PromptBenchError):
    code = "backend_timeout"


class BackendRejected(PromptBenchError):
    code = "backend_rejected"

    def __init__(self, message: str, status_code: int | None = None, body: str = ""):
        super().__init__(message)
        self.status_code = status_code
        self.body = body


class QuotaExceeded(BackendRejected):
    code = "quota_exceeded"


class NoCode(PromptBenchError):
    code = "no_code"


class FilterExhausted(PromptBenchError):
    code = "filter_exhausted"

    def __init__(self, constructs: list[str], rejected_generations: int):
        names = ", ".join(sorted(set(constructs))) or "(no code produced)"
        super().__init__(
            f"every generation used disallowed constructs: {names} "
            f"({rejected_generations} rejected)"
        )
        self.constructs = sorted(set(constructs))
        self.rejected_generations = rejected_generations


# -- sandbox execution -----------------------------------------------------

class DriverUnrenderable(PromptBenchError):
    code = "driver_unrenderable"


class SandboxUnreachable(PromptBenchError):
    code = "sandbox_unreachable"


class SandboxProtocolError(PromptBenchError):
    code = "sandbox_protocol_error"


# -- submission log --------------------------------------------------------

class IndexConflict(PromptBenchError):
    code = "index_conflict"


class StoreUnavailable(PromptBenchError):
    code = "store_unavailable"
