"""Exception hierarchy shared across the pipeline."""


class PipHunterError(Exception):
    """Base class for all pipeline errors."""


class EmptyCohort(PipHunterError):
    pass


class EmptyCorpus(PipHunterError):
    pass


class EmptyStore(PipHunterError):
    pass


class DegenerateTrainingSet(PipHunterError):
    pass


class VocabularyMismatch(PipHunterError):
    pass


class TooFewSamples(PipHunterError):
    pass


class ScorerUnavailable(PipHunterError):
    pass


class ScorerMalformedResponse(PipHunterError):
    pass


class FetchFailed(PipHunterError):
    pass


class RedirectLoop(PipHunterError):
    pass


class InvalidEntity(PipHunterError):
    pass


class ParseError(PipHunterError):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class InvalidManifest(PipHunterError):
    pass


class RateLimited(PipHunterError):
    def __init__(self, retry_after):
        super().__init__(f"rate limited, retry after {retry_after}")
        self.retry_after = retry_after


class NoProbeData(PipHunterError):
    pass


class NoUnavailable(PipHunterError):
    pass
