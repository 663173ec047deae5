"""Exception hierarchy for mixmkl."""

from typing import Optional


class MixMklError(Exception):
    """Base class for every error raised by mixmkl."""

    exit_code = 1


class ValidationError(MixMklError):
    """Input or precondition violation; the CLI exits with code 1."""

    exit_code = 1


class VerificationFailure(MixMklError):
    """An inequality check failed; the CLI exits with code 2."""

    exit_code = 2


class ChainError(ValidationError):
    """Validation error that may concern one chain of a pool."""

    def __init__(self, message: str, chain_id: Optional[int] = None) -> None:
        self.chain_id = chain_id
        if chain_id is not None:
            message = f"chain {chain_id}: {message}"
        super().__init__(message)

    def for_chain(self, chain_id: int) -> "ChainError":
        """Return a copy of this error tagged with a pool chain index."""
        return type(self)(str(self), chain_id=chain_id)


class NonStochasticError(ChainError):
    """Negative entry, entry above one, or a row sum off by more than tolerance."""


class TooSmallError(ChainError):
    """Transition matrix with fewer than two states."""


class NotErgodicError(ChainError):
    """Chain is not irreducible and aperiodic."""


class ZeroStationaryMassError(ChainError):
    """Some state carries zero stationary probability."""


class NotMixedWithinHorizonError(ChainError):
    """d(t_max) is still above the requested accuracy."""


class NeverMixesError(ChainError):
    """The TV profile never drops below one, so tau_min is undefined."""


class NotAbsolutelyContinuousError(ChainError):
    """nu puts mass where pi has none."""


class DegenerateGapError(ChainError):
    """Some chain has lambda = 1."""


class EmptyPoolError(ValidationError):
    """Pool without chains."""


class MissingEmissionTableError(ChainError):
    """Chain has no per-state emission table."""


class DimensionMismatchError(ValidationError):
    """Feature vectors of incompatible dimension."""


class SizeMismatchError(ValidationError):
    """Gram matrices or vectors of different sizes."""


class InvalidWeightsError(ValidationError):
    """Combination weights violate the L_q constraint."""


class NotPositiveSemidefiniteError(ValidationError):
    """Gram matrix eigenvalue below the PSD tolerance."""


class UnboundedKernelError(ValidationError):
    """Kernel needs a domain bound to compute kappa."""


class UnknownFamilyError(ValidationError):
    """No registered pseudo-dimension bound for the kernel family."""


class SingleClassDataError(ValidationError):
    """Training labels contain only one class."""


class InvalidMarginError(ValidationError):
    """Margin outside (0, 1]."""


class MissingInputError(ValidationError):
    """A bound formula needs an input that was not supplied."""


class InvalidConjugatesError(ValidationError):
    """1/q + 1/r differs from one."""


class ConfigError(ValidationError):
    """Malformed configuration, input file or environment variable."""
