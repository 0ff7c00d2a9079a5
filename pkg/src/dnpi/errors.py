"""Exception types shared across the package."""


class InputDomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class IngestionError(ValueError):
    """A dataset or schema could not be read or preprocessed."""


class ReportError(ValueError):
    """Evaluation reports cannot be combined into one table."""
