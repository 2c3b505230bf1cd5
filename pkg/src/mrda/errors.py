"""Exception hierarchy shared by the parsing, allocation and round modules."""

from __future__ import annotations


class MrdaError(Exception):
    """Base class for every error raised by the package."""


class InputError(MrdaError):
    """Raised for malformed or inconsistent input tables (CLI exit code 1)."""


class MalformedRow(InputError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class TotalMismatch(InputError):
    def __init__(self, line: int, declared: int, computed: int):
        super().__init__(f"line {line}: Total={declared} but cells sum to {computed}")
        self.line = line


class DuplicateKey(InputError):
    def __init__(self, line: int, key: object):
        super().__init__(f"line {line}: duplicate key {key!r}")
        self.line = line
        self.key = key


class DuplicateRoll(InputError):
    def __init__(self, line: int, roll_no: str):
        super().__init__(f"line {line}: duplicate roll number {roll_no!r}")
        self.line = line
        self.roll_no = roll_no


class UnknownRemarkSymbol(InputError):
    def __init__(self, line: int, symbol: str):
        super().__init__(f"line {line}: unknown remark symbol {symbol!r}")
        self.line = line
        self.symbol = symbol


class UnknownInstitute(InputError):
    pass


class UnknownProgram(InputError):
    pass


class NegativeCapacity(InputError):
    pass


class InvalidBaseline(InputError):
    pass


class InconsistentTables(InputError):
    pass


class DecisionWithoutSeat(InputError):
    pass


class MissingRank(MrdaError):
    def __init__(self, candidate: object, program: object):
        super().__init__(f"no rank for candidate {candidate!r} at program {program!r}")
        self.candidate = candidate
        self.program = program


class NonTermination(MrdaError):
    pass


class InstanceTooLarge(MrdaError):
    pass
