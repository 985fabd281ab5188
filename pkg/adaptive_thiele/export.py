'''
This module writes models, study reports and evaluation grids to files.

Numbers are written in their shortest round-trip decimal form, so reading a file
back gives bit-for-bit the same doubles.
'''

from contextlib import nullcontext
from dataclasses import dataclass, field
import json
import logging
from os import PathLike
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from . import __version__
from .core import FitConfig, FitReport, ThieleModel
from .errors import InvalidInput, SchemaError
from .newman import NewmanStudyRow

logger = logging.getLogger('adaptive-thiele')

FORMAT_VERSION = 1
'''Version of the model document schema.'''

STUDY_COLUMNS = [
    'n', 'eta', 'order', 'sup_err', 'node_err_2norm', 'poles', 'stopped_early'
]
'''Header of the study report.'''

GRID_COLUMNS = ['x', 'Cx']
'''Header of an evaluation grid.'''

Sink = Union[str, PathLike, TextIO]


def format_number(value: float) -> str:
    '''The shortest decimal string that reads back as the same double.'''
    return repr(float(value))


@dataclass(frozen=True)
class ModelDocument:
    '''
    The serialised form of a model.

    Parameters:
        format_version: the schema version, currently 1.
        nodes: the nodes as decimal strings.
        coeffs: the coefficients as decimal strings.
        metadata: tool version, fit configuration and whether the fit stopped
            early.
    '''

    format_version: int
    nodes: Tuple[str, ...]
    coeffs: Tuple[str, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_model(cls, model: ThieleModel, config: Optional[FitConfig] = None,
                   report: Optional[FitReport] = None) -> 'ModelDocument':
        metadata: Dict[str, Any] = {'tool_version': __version__}
        if config is not None:
            metadata['fit_config'] = {'tol': config.tol, 'max_order': config.max_order}
        if report is not None:
            metadata['stopped_early'] = report.stopped_early
        return cls(
            format_version=FORMAT_VERSION,
            nodes=tuple(format_number(z) for z in model.nodes),
            coeffs=tuple(format_number(a) for a in model.coeffs),
            metadata=metadata,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format_version': self.format_version,
            'nodes': list(self.nodes),
            'coeffs': list(self.coeffs),
            'metadata': self.metadata,
        }

    def to_model(self) -> ThieleModel:
        '''
        Raises:
            SchemaError: if the numbers do not parse, or do not form a valid model.
        '''
        if len(self.nodes) != len(self.coeffs):
            raise SchemaError(
                f'{len(self.nodes)} nodes but {len(self.coeffs)} coefficients'
            )
        if not self.nodes:
            raise SchemaError('model has no coefficients')
        try:
            return ThieleModel(
                tuple(_parse_entry(value) for value in self.nodes),
                tuple(_parse_entry(value) for value in self.coeffs),
            )
        except InvalidInput as e:
            raise SchemaError(f'invalid model: {e}') from e


def _parse_entry(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise SchemaError(f'expected a decimal string, got {value!r}')
    try:
        return float(value)
    except ValueError:
        raise SchemaError(f'not a number: {value!r}')


def _open_sink(sink: Sink):
    if isinstance(sink, (str, PathLike)):
        return open(sink, 'w', encoding='utf-8', newline='')
    return nullcontext(sink)


def write_model(model: ThieleModel, config: Optional[FitConfig], sink: Sink,
                report: Optional[FitReport] = None) -> None:
    '''
    Save a model as a JSON document.

    Parameters:
        model: the model to save
        config: the configuration it was fitted with, stored as metadata. May be
            `None`, e.g. for a fixed-order model.
        sink: a path, or an open text stream.
        report: if given, whether the fit stopped early is stored as metadata.
    '''
    document = ModelDocument.from_model(model, config, report)
    with _open_sink(sink) as out:
        json.dump(document.to_dict(), out, indent=2)
        out.write('\n')


def _study_frame(rows: Iterable[NewmanStudyRow]) -> pd.DataFrame:
    records = [
        {
            'n': row.n,
            'eta': row.eta,
            'order': row.order,
            'sup_err': row.sup_err,
            'node_err_2norm': row.node_err_2norm,
            'poles': row.poles_in_unit_interval,
            'stopped_early': row.stopped_early,
        }
        for row in rows
    ]
    return pd.DataFrame.from_records(records, columns=STUDY_COLUMNS)


def write_study_csv(rows: Iterable[NewmanStudyRow], sink: Sink) -> None:
    '''
    Write the rows of a Newman study as CSV, with the header
    `n,eta,order,sup_err,node_err_2norm,poles,stopped_early`.

    Failed rows are written with order -1 and empty error values.
    '''
    frame = _study_frame(rows)
    with _open_sink(sink) as out:
        frame.to_csv(out, index=False, lineterminator='\n')
    logger.info('Wrote %d study rows', len(frame))


def read_study_csv(source: Union[str, PathLike, TextIO]) -> List[NewmanStudyRow]:
    '''
    Read a study report written by `write_study_csv`.

    Raises:
        SchemaError: if the header differs from the study columns.
    '''
    frame = pd.read_csv(source, float_precision='round_trip')
    if list(frame.columns) != STUDY_COLUMNS:
        raise SchemaError(f'unexpected study columns {list(frame.columns)}')
    return [
        NewmanStudyRow(
            n=int(record['n']),
            eta=float(record['eta']),
            order=int(record['order']),
            sup_err=float(record['sup_err']),
            node_err_2norm=float(record['node_err_2norm']),
            poles_in_unit_interval=int(record['poles']),
            stopped_early=bool(record['stopped_early']),
        )
        for record in frame.to_dict('records')
    ]


def write_grid_csv(xs: Iterable[float], values: Iterable[float], sink: Sink) -> None:
    '''
    Write the values of a model on a grid as CSV with the header `x,Cx`, ready for
    plotting.
    '''
    frame = pd.DataFrame({
        'x': np.asarray(list(xs), dtype=float),
        'Cx': np.asarray(list(values), dtype=float),
    }, columns=GRID_COLUMNS)
    with _open_sink(sink) as out:
        frame.to_csv(out, index=False, lineterminator='\n')
