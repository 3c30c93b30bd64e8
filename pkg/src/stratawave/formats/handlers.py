"""Handlers for reports, curve tables and assembled matrices."""

import json
import logging
from dataclasses import is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd
from scipy import sparse

from stratawave.formats.base import BaseFormatHandler, PathLike

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy, complex, enum and report objects to JSON types.

    Complex numbers become ``[re, im]`` pairs; objects with ``to_dict`` are
    expanded.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return np.stack([value.real, value.imag], axis=-1).tolist()
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return _float(float(value))
    if isinstance(value, float):
        return _float(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if is_dataclass(value):
        raise TypeError(f"{type(value).__name__} has no to_dict")
    return value


def _float(value: float) -> Any:
    # JSON has no inf or nan
    if np.isfinite(value):
        return value
    return str(value)


class JSONReportHandler(BaseFormatHandler):
    """Reports, fields, profiles and Bloch stacks as indented JSON."""

    def __init__(self, indent: int = 2):
        self.indent = indent

    @property
    def supported_extensions(self) -> List[str]:
        return [".json"]

    def read(self, source: PathLike) -> Dict[str, Any]:
        with open(source, encoding="utf-8") as f:
            return json.load(f)

    def write(self, data: Any, destination: PathLike) -> Path:
        target = self._prepare(destination)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(to_jsonable(data), f, indent=self.indent)
            f.write("\n")
        logger.debug(f"Wrote report {target}")
        return target


class CSVCurveHandler(BaseFormatHandler):
    """Curve tables (e.g. Bloch sweeps) through pandas."""

    def __init__(self, float_format: str = "%.12g"):
        self.float_format = float_format

    @property
    def supported_extensions(self) -> List[str]:
        return [".csv"]

    def read(self, source: PathLike) -> pd.DataFrame:
        return pd.read_csv(source)

    def write(self, data: pd.DataFrame, destination: PathLike) -> Path:
        target = self._prepare(destination)
        data.to_csv(target, index=False, float_format=self.float_format)
        logger.debug(f"Wrote {len(data)} curve rows to {target}")
        return target


class COOMatrixHandler(BaseFormatHandler):
    """Sparse matrices as ``row col value`` text.

    The first line records the shape; complex matrices carry the value as two
    columns ``re im``.
    """

    @property
    def supported_extensions(self) -> List[str]:
        return [".coo"]

    def read(self, source: PathLike) -> sparse.csr_matrix:
        with open(source, encoding="utf-8") as f:
            header = f.readline().split()
        if len(header) != 4 or header[:2] != ["#", "shape"]:
            raise ValueError(f"{source}: missing '# shape rows cols' header")
        shape = (int(header[2]), int(header[3]))
        frame = pd.read_csv(source, sep=" ", comment="#")
        values = frame["re"].to_numpy()
        if "im" in frame:
            values = values + 1j * frame["im"].to_numpy()
        return sparse.coo_matrix(
            (values, (frame["row"].to_numpy(), frame["col"].to_numpy())), shape=shape
        ).tocsr()

    def write(self, data: Any, destination: PathLike) -> Path:
        matrix = sparse.coo_matrix(data)
        frame = pd.DataFrame({"row": matrix.row, "col": matrix.col, "re": matrix.data.real})
        if np.iscomplexobj(matrix.data):
            frame["im"] = matrix.data.imag
        target = self._prepare(destination)
        with open(target, "w", encoding="utf-8") as f:
            f.write(f"# shape {matrix.shape[0]} {matrix.shape[1]}\n")
            frame.to_csv(f, sep=" ", index=False, float_format="%.17g")
        logger.debug(f"Wrote {matrix.nnz} entries of a {matrix.shape} matrix to {target}")
        return target
