import io
import os

import pytest
import requests

from adaptive_thiele.core import fit_adaptive
from adaptive_thiele.errors import DuplicateAbscissa, NonFiniteValue, ParseError
from adaptive_thiele.readers.csv import SampleReader, read_samples

data_directory = os.path.dirname(__file__) + '/data'


def data_path(filename):
    return os.path.join(data_directory, filename)


def test_read_samples_with_header():
    data = read_samples(data_path('reciprocal.csv'))
    assert data.xs == (0.0, 1.0, 2.0)
    assert data.fs == (1.0, 0.5, 1 / 3)

    model, _ = fit_adaptive(data)
    assert model.order == 2


def test_read_samples_headerless():
    data = read_samples(data_path('headerless.csv'))
    assert data.xs == (-1.0, 0.0, 1.0)
    assert data.fs == (1.0, 0.0, 1.0)


def test_documents_have_line_numbers():
    reader = SampleReader()
    docs = list(reader.source2dicts(data_path('reciprocal.csv')))
    assert docs[0] == {'x': 0.0, 'f': 1.0, 'line': 3}
    # a blank line is skipped, but still counted
    assert docs[2]['line'] == 6


def test_read_samples_line():
    data = read_samples(data_path('line.csv'))
    assert len(data) == 11
    model, report = fit_adaptive(data)
    assert model.order == 1
    assert report.stopped_early


def test_read_samples_from_bytes_and_stream():
    text = 'x,f\n0,1\n1,0.5\n'
    from_bytes = read_samples(text.encode('utf-8'))
    from_stream = read_samples(io.StringIO(text))
    assert from_bytes == from_stream
    assert from_bytes.fs == (1.0, 0.5)


def test_read_samples_from_response():
    response = requests.Response()
    response._content = b'x,f\n3,9\n4,16\n'
    data = read_samples(response)
    assert data.xs == (3.0, 4.0)


def test_duplicate_abscissa():
    with pytest.raises(DuplicateAbscissa) as e:
        read_samples(data_path('duplicate.csv'))
    assert e.value.line == 4
    assert e.value.x == 0.0


def test_nonfinite_value():
    with pytest.raises(NonFiniteValue) as e:
        read_samples(data_path('nonfinite.csv'))
    assert e.value.line == 3


def test_bad_value():
    with pytest.raises(ParseError) as e:
        read_samples(data_path('bad_value.csv'))
    assert e.value.line == 3


def test_bad_header():
    with pytest.raises(ParseError) as e:
        read_samples(data_path('bad_header.csv'))
    assert e.value.line == 1
    assert 'x,f' in str(e.value)


def test_wrong_number_of_columns():
    with pytest.raises(ParseError) as e:
        read_samples(io.StringIO('x,f\n0,1,2\n'))
    assert e.value.line == 2


def test_no_samples():
    with pytest.raises(ParseError, match='no samples found'):
        read_samples(data_path('empty.csv'))


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        read_samples(data_path('missing.csv'))


def test_invalid_encoding():
    with pytest.raises(ParseError):
        read_samples(b'x,f\n0,\xff\n')
