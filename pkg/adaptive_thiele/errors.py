'''
This module defines the exceptions raised by `adaptive_thiele`.

All of them derive from `ThieleError`. Each class also derives from the closest
builtin exception, so code that catches `ValueError` or `ArithmeticError` keeps
working.
'''

from typing import Optional

BREAKDOWN_MESSAGE = 'denominator of zero was produced; try perturbing the data points'


class ThieleError(Exception):
    '''
    Base class for all errors raised by this package.
    '''


class InvalidInput(ThieleError, ValueError):
    '''
    Raised when interpolation data does not satisfy the requirements of a
    `SampleSet`.
    '''


class DuplicateAbscissa(InvalidInput):
    '''
    Raised when the same abscissa occurs more than once in the data.

    Parameters:
        x: the repeated abscissa
        line: line number in the source file, if the data was read from a file
    '''

    def __init__(self, x: float, line: Optional[int] = None):
        self.x = x
        self.line = line
        where = f' (line {line})' if line is not None else ''
        super().__init__(f'Duplicate abscissa x={x!r}{where}')


class NonFiniteValue(InvalidInput):
    '''
    Raised when a value is infinite or NaN.

    Parameters:
        line: line number in the source file, if the data was read from a file
        index: position of the value in the data
    '''

    def __init__(self, line: Optional[int] = None, index: Optional[int] = None,
                 value: Optional[float] = None):
        self.line = line
        self.index = index
        self.value = value
        if line is not None:
            where = f'line {line}'
        else:
            where = f'index {index}'
        super().__init__(f'Non-finite value {value!r} at {where}')


class InvalidN(InvalidInput):
    '''
    Raised when a Newman point set is requested for n < 1.
    '''

    def __init__(self, n):
        self.n = n
        super().__init__(f'Newman points need n >= 1, got {n!r}')


class BreakdownError(ThieleError, ArithmeticError):
    '''
    Raised by the fixed-order builder when the inverse-difference recursion
    divides by zero, or produces a non-finite coefficient.

    Parameters:
        step: the level of the recursion at which the breakdown occurred
        index: the position of the point whose inverse difference broke down
    '''

    def __init__(self, step: int, index: Optional[int] = None, detail: str = ''):
        self.step = step
        self.index = index
        message = f'{BREAKDOWN_MESSAGE} (step {step}'
        if index is not None:
            message += f', point {index}'
        message += ')'
        if detail:
            message += f': {detail}'
        super().__init__(message)


class InsufficientSamples(ThieleError, ValueError):
    '''
    Raised when a check needs more sample points than were given.
    '''


class OverflowDetected(ThieleError, OverflowError):
    '''
    Raised when an unscaled three-term recurrence grows beyond the overflow
    threshold.
    '''


class ReaderError(ThieleError):
    '''
    Base class for errors raised while reading or writing files.
    '''


class ParseError(ReaderError, ValueError):
    '''
    Raised when a line of input cannot be parsed.

    Parameters:
        line: 1-based line number of the offending line
    '''

    def __init__(self, line: Optional[int], detail: str):
        self.line = line
        where = f'line {line}: ' if line is not None else ''
        super().__init__(f'{where}{detail}')


class VersionMismatch(ReaderError):
    '''
    Raised when a model document has an unsupported format version.
    '''

    def __init__(self, version, expected: int):
        self.version = version
        self.expected = expected
        super().__init__(
            f'Unsupported model format version {version!r}, expected {expected}'
        )


class SchemaError(ReaderError, ValueError):
    '''
    Raised when a model document does not have the expected structure.
    '''
