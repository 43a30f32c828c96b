"""Exception types; each maps to a CLI exit code."""


class SpunNormError(Exception):
    exit_code = 1


class InputError(SpunNormError):
    """Invalid or unsupported input (exit code 2)."""

    exit_code = 2


class ContractViolation(SpunNormError):
    """The input breaks an assumption of the algorithm (exit code 3)."""

    exit_code = 3


class ReconstructionError(SpunNormError):
    exit_code = 1
