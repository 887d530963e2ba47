"""
Repository layer for data access.

All data files are read through these repositories rather than opened directly,
so every report can name the files and checksums it was computed from.

Usage:
    from app.repositories import load_bundle

    bundle = load_bundle('mathieu')
    records = bundle.data
"""

from .base import FileRepository, sha256_of
from .bundle_repository import (
    BUNDLE_NAMES,
    Bundle,
    PrintedTupleRecord,
    CURVE_BUNDLE,
    bundle_repository,
    load_bundle,
    load_curve_bundle,
    parse_printed_record,
)

__all__ = [
    'BUNDLE_NAMES',
    'Bundle',
    'FileRepository',
    'PrintedTupleRecord',
    'bundle_repository',
    'CURVE_BUNDLE',
    'load_bundle',
    'load_curve_bundle',
    'parse_printed_record',
    'sha256_of',
]
