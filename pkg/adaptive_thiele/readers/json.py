'''
This module defines the reader for model documents, which are stored as JSON.
'''

import json
import logging
from typing import Any, Iterable, TextIO

from requests import Response

from .. import extract
from ..core import ThieleModel
from ..errors import SchemaError, VersionMismatch
from ..export import FORMAT_VERSION, ModelDocument
from .core import Document, Field, Reader, Source

logger = logging.getLogger('adaptive-thiele')


class ModelReader(Reader):
    '''
    A reader for model documents written by `write_model`.

    A model document looks like this:

    ```json
    {
      "format_version": 1,
      "nodes": ["0.0", "1.0", "2.0"],
      "coeffs": ["1.0", "-2.0", "-1.0"],
      "metadata": {"tool_version": "1.0.0", "fit_config": {"tol": 5e-15, "max_order": null}}
    }
    ```

    Each source holds a single document.
    '''

    format_version = FORMAT_VERSION
    '''
    The only format version this reader accepts.
    '''

    version = Field('format_version', extract.JSON('format_version'))
    nodes = Field('nodes', extract.JSON('nodes'))
    coeffs = Field('coeffs', extract.JSON('coeffs'))
    metadata = Field('metadata', extract.JSON('metadata'))
    fields = [version, nodes, coeffs, metadata]

    def validate(self):
        self._reject_extractors(extract.CSV, extract.Line)

    def data_from_file(self, path: str) -> Any:
        with open(path, 'r', encoding='utf-8') as f:
            return self.data_from_stream(f)

    def data_from_bytes(self, bytes: bytes) -> Any:
        try:
            return self._loads(bytes.decode('utf-8'))
        except UnicodeDecodeError as e:
            raise SchemaError(f'document is not valid utf-8: {e}')

    def data_from_response(self, response: Response) -> Any:
        return self.data_from_bytes(response.content)

    def data_from_stream(self, stream: TextIO) -> Any:
        return self._loads(stream.read())

    def _loads(self, text: str) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(
                f'invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}'
            ) from e

    def iterate_data(self, data: Any) -> Iterable[Document]:
        if not isinstance(data, dict):
            raise SchemaError('a model document must be a JSON object')
        yield {'data': data}

    def document(self, source: Source) -> ModelDocument:
        '''
        Read and check a model document.

        Raises:
            VersionMismatch: if the format version is not supported.
            SchemaError: if the document does not have the expected structure, or has
                no format version.
        '''
        document = next(iter(self.source2dicts(source)))

        version = document['format_version']
        if version is None:
            raise SchemaError('missing "format_version"')
        if version != self.format_version or isinstance(version, bool):
            raise VersionMismatch(version, self.format_version)

        for key in ('nodes', 'coeffs'):
            if not isinstance(document[key], list):
                raise SchemaError(f'"{key}" must be a list')
        metadata = document['metadata']
        if metadata is not None and not isinstance(metadata, dict):
            raise SchemaError('"metadata" must be an object')

        return ModelDocument(
            format_version=version,
            nodes=tuple(document['nodes']),
            coeffs=tuple(document['coeffs']),
            metadata=metadata or {},
        )

    def model(self, source: Source) -> ThieleModel:
        '''
        Read a model.

        Raises:
            VersionMismatch: if the format version is not supported.
            SchemaError: if the document does not describe a valid model.
        '''
        return self.document(source).to_model()


def read_model(source: Source) -> ThieleModel:
    '''
    Read a model from a JSON source. See `ModelReader`.
    '''
    return ModelReader().model(source)
