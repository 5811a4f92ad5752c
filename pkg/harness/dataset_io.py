"""
Dataset CSV files and key=value parameter documents
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from inertia.errors import DatasetError, MalformedRow, MissingHeader
from inertia.inertial_params import PARAM_NAMES, InertialParams
from inertia.regressor import Sample
from inertia.spatial_algebra import ProperAcc, Twist, Wrench

logger = logging.getLogger(__name__)

COLUMNS = (
    't',
    'v_lin_x', 'v_lin_y', 'v_lin_z',
    'v_ang_x', 'v_ang_y', 'v_ang_z',
    'ag_lin_x', 'ag_lin_y', 'ag_lin_z',
    'ag_ang_x', 'ag_ang_y', 'ag_ang_z',
    'f_x', 'f_y', 'f_z',
    'mu_x', 'mu_y', 'mu_z',
)
UNITS_LINE = ('# units: t s, v_lin m/s, v_ang rad/s, ag_lin m/s^2, ag_ang rad/s^2, '
              'f N, mu N m; frame: body')
FLOAT_FORMAT = '%.17g'
TIME_STEP_RTOL = 1e-9


@dataclass(eq=False)
class Dataset:
    """Samples with uniform time step, optional ground truth and provenance"""

    samples: list
    ground_truth: Optional[InertialParams] = None
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.samples)

    def to_frame(self):
        rows = [
            np.concatenate([[s.t if s.t is not None else np.nan],
                            s.v.as_vector(), s.a.as_vector(), s.f.as_vector()])
            for s in self.samples
        ]
        return pd.DataFrame(np.array(rows).reshape(-1, len(COLUMNS)), columns=list(COLUMNS))

    @classmethod
    def from_frame(cls, frame, **kwargs):
        values = frame[list(COLUMNS)].to_numpy(dtype=float)
        samples = [
            Sample(a=ProperAcc.from_vector(row[7:13]), v=Twist.from_vector(row[1:7]),
                   f=Wrench.from_vector(row[13:19]), t=float(row[0]))
            for row in values
        ]
        return cls(samples, **kwargs)


def write_csv(dataset, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        handle.write(UNITS_LINE + '\n')
        dataset.to_frame().to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info("wrote %d samples to %s", len(dataset), path)


def _scan(path):
    """Validate header, arity and numbers; return the file line of every data row"""
    header_seen = False
    data_lines = []
    with open(path, newline='') as handle:
        for line_no, fields in enumerate(csv.reader(handle), start=1):
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if fields[0].lstrip().startswith('#'):
                continue
            if not header_seen:
                if tuple(f.strip() for f in fields) != COLUMNS:
                    raise MissingHeader(f"{path}: line {line_no} is not the expected header "
                                        f"({','.join(COLUMNS)})")
                header_seen = True
                continue
            if len(fields) != len(COLUMNS):
                raise MalformedRow(line_no, f"expected {len(COLUMNS)} fields, got {len(fields)}")
            for name, text in zip(COLUMNS, fields):
                try:
                    value = float(text)
                except ValueError:
                    raise MalformedRow(line_no, f"{name}: {text!r} is not a number") from None
                if not np.isfinite(value):
                    raise MalformedRow(line_no, f"{name}: {text!r} is not finite")
            data_lines.append(line_no)
    if not header_seen:
        raise MissingHeader(f"{path}: no header row")
    return data_lines


def read_csv(path):
    path = Path(path)
    data_lines = _scan(path)
    if not data_lines:
        logger.warning("%s holds a header but no samples", path)
        return Dataset([], metadata={'source': str(path)})

    frame = pd.read_csv(path, comment='#', dtype=float, float_precision='round_trip')
    if len(frame) != len(data_lines):
        raise DatasetError(f"{path}: read {len(frame)} rows, expected {len(data_lines)}")
    missing = np.flatnonzero(frame.isna().any(axis=1).to_numpy())
    if missing.size:
        raise MalformedRow(data_lines[missing[0]], "row holds empty fields")
    t = frame['t'].to_numpy()
    if len(t) >= 2:
        dt = np.diff(t)
        bad = np.flatnonzero((dt <= 0.0) | (np.abs(dt - dt[0]) > TIME_STEP_RTOL * max(1.0, abs(dt[0]))))
        if bad.size:
            raise MalformedRow(data_lines[bad[0] + 1], "time step is not uniform")
    logger.info("read %d samples from %s", len(frame), path)
    return Dataset.from_frame(frame, metadata={'source': str(path)})


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def write_params(path, params, extra=None):
    """Flat key=value document: the ten parameters, then any extra fields"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{name}={_format(float(value))}" for name, value in params.as_dict().items()]
    for key, value in (extra or {}).items():
        lines.append(f"{key}={_format(value)}")
    path.write_text('\n'.join(lines) + '\n')


def read_params(path):
    """Read a key=value document back into (InertialParams, other fields)"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path} does not exist")
    values = dotenv_values(path)
    missing = [name for name in PARAM_NAMES if values.get(name) in (None, '')]
    if missing:
        raise DatasetError(f"{path}: missing parameter(s) {', '.join(missing)}")
    try:
        params = InertialParams.from_mapping({name: float(values[name]) for name in PARAM_NAMES})
    except ValueError as exc:
        raise DatasetError(f"{path}: {exc}") from None
    extra = {k: v for k, v in values.items() if k not in PARAM_NAMES}
    return params, extra


def truth_path(csv_path):
    """Ground-truth sidecar next to a dataset file"""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + '.truth')
