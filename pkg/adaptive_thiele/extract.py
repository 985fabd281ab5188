'''
This module contains extractor classes that obtain the value of each field in a
Reader.

Some extractors are intended to work with specific `Reader` classes, while others
are generic.
'''

import logging
from typing import Any, Callable, Dict, List, Optional, Union

from .errors import ParseError, ReaderError

logger = logging.getLogger('adaptive-thiele')


class Extractor(object):
    '''
    Base class for extractors.

    An extractor contains a method that can be used to gather data for a field.

    Parameters:
        transform: optional function to convert the extracted value, e.g. to parse a
            number. If it raises a `ValueError` or `TypeError`, the extractor raises
            a `ParseError` that points at the line of the document, when known.
    '''

    def __init__(self, transform: Optional[Callable] = None):
        self.transform = transform

    def apply(self, *nargs, **kwargs):
        '''
        Extract the information, and convert it with `transform` if the value is
        not `None`.
        '''
        result = self._apply(*nargs, **kwargs)
        if result is None or not self.transform:
            return result
        try:
            return self.transform(result)
        except ReaderError:
            raise
        except (ValueError, TypeError) as e:
            line = kwargs.get('line')
            logger.debug('value %r could not be converted: %s', result, e)
            raise ParseError(line, f'could not convert {result!r}: {e}') from e

    def _apply(self, *nargs, **kwargs):
        '''
        Actual extractor method to be implemented in subclasses (assume that
        post-processing is taken care of).

        Raises:
            NotImplementedError: This method needs to be implemented on child
                classes. It will raise an error by default.
        '''
        raise NotImplementedError()


class Constant(Extractor):
    '''
    This extractor 'extracts' the same value every time, regardless of input.

    This is a generic extractor that can be used in any `Reader`.

    Parameters:
        value: the value that should be "extracted".
        **kwargs: additional options to pass on to `Extractor`.
    '''

    def __init__(self, value: Any, *nargs, **kwargs):
        self.value = value
        super().__init__(*nargs, **kwargs)

    def _apply(self, *nargs, **kwargs):
        return self.value


class Line(Extractor):
    '''
    An extractor that returns the line number at which the document starts in its
    source file.

    The line number is passed on by readers that work line by line, like the
    `SampleReader`. Other readers return `None`.
    '''

    def _apply(self, line: Optional[int] = None, *nargs, **kwargs):
        return line


class CSV(Extractor):
    '''
    This extractor extracts values from a list of CSV rows.

    It should be used in readers based on `SampleReader`.

    Parameters:
        column: The name of the column from which to extract the value.
        convert_to_none: optional, default is `['']`. Listed values are converted to
            `None`. If `None`/`False`, nothing is converted.
        **kwargs: additional options to pass on to `Extractor`.
    '''
    def __init__(self,
            column: str,
            convert_to_none: List[str] = [''],
            *nargs, **kwargs):
        self.field = column
        self.convert_to_none = convert_to_none or []
        super().__init__(*nargs, **kwargs)

    def _apply(self, rows: List[Dict[str, str]], *nargs, **kwargs):
        row = rows[0]
        if self.field in row:
            return self.format(row[self.field])

    def format(self, value: Optional[str]):
        if value is None:
            return None
        value = value.strip()
        if value not in self.convert_to_none:
            return value


class JSON(Extractor):
    '''
    An extractor to extract data from a parsed JSON object.

    Parameters:
        keys: the keys with which to retrieve a field value from the source. Each key
            is looked up in the result of the previous one. If a key is missing, or an
            intermediate value is not an object, the result is `None`.
    '''

    def __init__(self, *keys: str, **kwargs):
        self.keys = list(keys)
        super().__init__(**kwargs)

    def _apply(self, data: Union[dict, Any], key_index: int = 0, **kwargs):
        if not isinstance(data, dict):
            return None
        value = data.get(self.keys[key_index])
        if len(self.keys) > key_index + 1:
            return self._apply(value, key_index + 1)
        return value
