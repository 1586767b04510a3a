"""Exception types shared across the package."""


class SchemaError(ValueError):
    """Input file or payload does not match the documented JSON layout."""


class MissingObservableError(KeyError):
    """A correlator references a label the realization does not provide."""


class ObservableValidationError(ValueError):
    """An observable fails the Hermiticity or involution requirement."""

    def __init__(self, label: str, detail: str):
        super().__init__(f"observable {label}: {detail}")
        self.label = label
        self.detail = detail


class DenseLimitError(ValueError):
    """Dense export requested beyond the configured qubit limit."""


class NonRealCorrelationError(ValueError):
    """A sequential correlation came out non-real beyond tolerance."""


class ExtractionError(RuntimeError):
    """Canonical-unitary extraction failed (subspace not of product form)."""
