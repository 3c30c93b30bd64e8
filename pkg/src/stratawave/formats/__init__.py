"""Artifact formats for stratawave.

Supported Formats:
    - JSON reports (``.json``), complex numbers as ``[re, im]``
    - CSV curve tables (``.csv``) via pandas
    - COO matrices (``.coo``), ``row col value`` text

Example:
    >>> from stratawave.formats import get_handler
    >>> handler = get_handler("out/sweep.csv")
    >>> handler.write(report.to_frame(), "out/sweep.csv")
"""

from stratawave.formats.base import (
    BaseFormatHandler,
    FormatRegistry,
    get_handler,
    is_supported,
    register_handler,
)
from stratawave.formats.handlers import (
    COOMatrixHandler,
    CSVCurveHandler,
    JSONReportHandler,
    to_jsonable,
)

register_handler(JSONReportHandler())
register_handler(CSVCurveHandler())
register_handler(COOMatrixHandler())

__all__ = [
    "BaseFormatHandler",
    "FormatRegistry",
    "register_handler",
    "get_handler",
    "is_supported",
    "JSONReportHandler",
    "CSVCurveHandler",
    "COOMatrixHandler",
    "to_jsonable",
]
