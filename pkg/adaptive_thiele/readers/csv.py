'''
This module defines the reader for interpolation data in CSV format.

Extraction is based on python's `csv` library.
'''

import csv
import io
import logging
from contextlib import contextmanager
from typing import Iterable, List, Optional, TextIO

import numpy as np
from requests import Response

from .. import extract
from ..core import SampleSet
from ..errors import DuplicateAbscissa, NonFiniteValue, ParseError
from .core import Document, Field, Reader, Source

logger = logging.getLogger('adaptive-thiele')


def _parse_number(value: str) -> float:
    return float(value)


class SampleReader(Reader):
    '''
    A reader for interpolation samples stored as two CSV columns.

    The file either starts with the header `x,f`, or has no header at all, in which
    case the first column holds the abscissae and the second the values. Blank lines
    and lines starting with `#` are skipped. Each data row is one document with the
    fields `x`, `f` and `line`.

    Example:
        ```
        # samples of 1 / (1 + x)
        x,f
        0,1
        1,0.5
        2,0.3333333333333333
        ```
    '''

    delimiter = ','
    '''
    The column delimiter used in the CSV data
    '''

    comment_prefix = '#'
    '''
    Lines that start with this prefix (after leading whitespace) are skipped.
    '''

    encoding = 'utf-8'
    '''
    Encoding of files, bytes and responses.
    '''

    header = ('x', 'f')
    '''
    The expected column names.
    '''

    x = Field('x', extract.CSV('x', transform=_parse_number))
    f = Field('f', extract.CSV('f', transform=_parse_number))
    line = Field('line', extract.Line())
    fields = [x, f, line]

    def validate(self):
        self._reject_extractors(extract.JSON)

    @contextmanager
    def data_from_file(self, path: str):
        with open(path, 'r', encoding=self.encoding, newline='') as f:
            yield f

    def data_from_bytes(self, bytes: bytes) -> TextIO:
        try:
            text = bytes.decode(self.encoding)
        except UnicodeDecodeError as e:
            raise ParseError(None, f'input is not valid {self.encoding}: {e}')
        return io.StringIO(text, newline='')

    def data_from_response(self, response: Response) -> TextIO:
        return self.data_from_bytes(response.content)

    def data_from_stream(self, stream: TextIO) -> TextIO:
        return stream

    def iterate_data(self, data: TextIO) -> Iterable[Document]:
        columns: Optional[List[str]] = None

        try:
            for line_number, text in enumerate(data, start=1):
                stripped = text.strip()
                if not stripped or stripped.startswith(self.comment_prefix):
                    continue

                cells = self._split(stripped, line_number)
                if columns is None:
                    columns = list(self.header)
                    if self._is_header(cells, line_number):
                        continue

                if len(cells) != len(columns):
                    raise ParseError(
                        line_number, f'expected {len(columns)} columns, got {len(cells)}'
                    )
                yield {'rows': [dict(zip(columns, cells))], 'line': line_number}
        except UnicodeDecodeError as e:
            raise ParseError(None, f'input is not valid {self.encoding}: {e}')

    def _split(self, text: str, line_number: int) -> List[str]:
        try:
            return next(csv.reader([text], delimiter=self.delimiter))
        except csv.Error as e:
            raise ParseError(line_number, str(e))

    def _is_header(self, cells: List[str], line_number: int) -> bool:
        '''
        Decide whether the first row is the header. A first row that is neither the
        expected header nor numeric is an error.
        '''
        names = [cell.strip().lower() for cell in cells]
        if names == list(self.header):
            return True
        try:
            [float(cell) for cell in cells]
        except ValueError:
            raise ParseError(
                line_number,
                f'expected header "{self.delimiter.join(self.header)}" or numeric columns'
            )
        return False

    def samples(self, source: Source) -> SampleSet:
        '''
        Read a source into a `SampleSet`.

        Parameters:
            source: a path, bytes, a `requests.Response`, or an open text stream.

        Returns:
            The samples, in file order.

        Raises:
            ParseError: if a line cannot be parsed or the file has no data rows.
            NonFiniteValue: if a value is infinite or NaN.
            DuplicateAbscissa: if an abscissa occurs twice.
        '''
        xs, fs = [], []
        seen = {}
        for document in self.source2dicts(source):
            x, f, line = document['x'], document['f'], document['line']
            if x is None or f is None:
                raise ParseError(line, 'missing value')
            if not np.isfinite(x):
                raise NonFiniteValue(line=line, value=x)
            if not np.isfinite(f):
                raise NonFiniteValue(line=line, value=f)
            if x in seen:
                raise DuplicateAbscissa(x, line)
            seen[x] = line
            xs.append(x)
            fs.append(f)

        if not xs:
            raise ParseError(None, 'no samples found')
        logger.info('Read %d samples', len(xs))
        return SampleSet(tuple(xs), tuple(fs))


def read_samples(source: Source) -> SampleSet:
    '''
    Read interpolation samples from a CSV source. See `SampleReader`.
    '''
    return SampleReader().samples(source)
