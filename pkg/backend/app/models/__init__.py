from .reports import (
    BundleInfo,
    CorollaryReport,
    CremonaValidationReport,
    EntryReport,
    GenusReport,
    GenusZeroReport,
    MathieuRecordReport,
    MathieuReport,
    PathDecompositionReport,
    ProductDiagnosisReport,
    RotationSubgroupReport,
    SearchReport,
    SteinbergWitnessReport,
    TableValidationReport,
    TripleCountReport,
    WeylReport,
    Witness,
    X0Certificate,
)

__all__ = [
    'BundleInfo',
    'CorollaryReport',
    'CremonaValidationReport',
    'EntryReport',
    'GenusReport',
    'GenusZeroReport',
    'MathieuRecordReport',
    'MathieuReport',
    'PathDecompositionReport',
    'ProductDiagnosisReport',
    'RotationSubgroupReport',
    'SearchReport',
    'SteinbergWitnessReport',
    'TableValidationReport',
    'TripleCountReport',
    'WeylReport',
    'Witness',
    'X0Certificate',
]
