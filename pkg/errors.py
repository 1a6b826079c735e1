"""
Exceptions raised by the harness
Each one carries a catalogue key from Langs/ plus the fields that fill it,
so the CLI and the tests can both inspect what went wrong
"""

# --- Local Modules ---
from starter import t


class SymHarmonicError(Exception):
    exit_code = 1

    def __init__(self, key, /, **fields):
        self.key = key
        self.fields = fields
        self.message = t.t(key, **fields)
        super().__init__(self.message)


class PreconditionError(SymHarmonicError, ValueError):
    exit_code = 2


class ConfigError(SymHarmonicError):
    exit_code = 2


class VerificationFailure(SymHarmonicError, AssertionError):
    exit_code = 1


class LockDrift(VerificationFailure):
    pass


class InternalDefect(SymHarmonicError, RuntimeError):
    exit_code = 1
