"""
Report schemas shared by the CLI and the HTTP API.

Verification outcomes are data: every check is a field, and failing checks carry
witnesses. Field names are stable; the JSON output sorts keys so identical runs
give byte-identical documents.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class Witness(BaseModel):
    """Evidence for a failed or notable check."""
    check: str = Field(..., description="Name of the check, e.g. product, generation, parity, scott")
    detail: str = Field(..., description="Human-readable explanation")
    data: Dict[str, Any] = Field(default_factory=dict, description="Machine-readable evidence")


class EntryReport(BaseModel):
    """One coordinate g_i of a tuple."""
    index: int = Field(..., description="1-based position in the tuple")
    label: str = Field(..., description="Cycle notation, generator word or class name")
    order: Optional[int] = Field(None, description="Element order when known")
    cycle_type: Optional[str] = Field(None, description="Cycle type in exponential notation")
    fixed_dim: int = Field(..., description="dim V^{g_i}")
    codim: int = Field(..., description="dim V - dim V^{g_i}")


class GenusReport(BaseModel):
    name: Optional[str] = None
    representation: str = Field(..., description="deleted_permutation, exact_matrix or character_data")
    n: int
    dim: int = Field(..., description="dim V")
    invariant_dim: int = Field(..., description="dim V^G")
    fixed_dims: List[int]
    entries: List[EntryReport] = Field(default_factory=list)
    lhs: int = Field(..., description="-2 dim V + 2 dim V^G + sum of codimensions")
    genus: Optional[int] = Field(None, description="lhs / 2, present only when lhs is even")
    product_ok: Optional[bool] = Field(None, description="None when the product cannot be checked")
    product_convention: Optional[str] = None
    generates: Optional[bool] = Field(None, description="None when generation is assumed or unknown")
    generation_status: str = Field(..., description="verified, failed, assumed or unknown")
    generated_order: Optional[int] = None
    group_order: Optional[int] = None
    scott_ok: bool
    scott_slack: int
    parity_ok: bool
    expected_genus: Optional[int] = None
    passed: bool
    witnesses: List[Witness] = Field(default_factory=list)


class ProductDiagnosisReport(BaseModel):
    index: int = Field(..., description="1-based position of the entry that was recomputed")
    implied: str = Field(..., description="Implied element in cycle notation")
    cycle_type: str
    order: int
    convention: str
    relation_holds: bool
    matches_given: bool


class MathieuRecordReport(BaseModel):
    display_id: str
    group: str
    expected_order: int
    expected_verification: str = Field(..., description="passes or fails, as recorded with the data")
    verbatim: GenusReport
    diagnosis: Optional[ProductDiagnosisReport] = None
    repaired_elements: Optional[List[str]] = None
    repaired: Optional[GenusReport] = None
    matches_expectation: bool


class MathieuReport(BaseModel):
    records: List[MathieuRecordReport]
    passed: bool


class PathDecompositionReport(BaseModel):
    path1: List[int]
    path2: List[int]


class RotationSubgroupReport(BaseModel):
    order: int
    expected_order: int
    determinants: List[str]
    determinants_ok: bool
    index_two_ok: bool
    passed: bool
    witnesses: List[Witness] = Field(default_factory=list)


class WeylReport(BaseModel):
    label: str
    rank: int
    root_count: int
    expected_root_count: int
    weyl_order: int = Field(..., description="Classical order formula")
    bsgs_order: int = Field(..., description="Order of the root-permutation action")
    invariant_dim: int
    full: GenusReport
    path_decomposition: Optional[PathDecompositionReport] = None
    rotation: Optional[GenusReport] = None
    rotation_subgroup: Optional[RotationSubgroupReport] = None
    passed: bool


class TripleCountReport(BaseModel):
    group: str
    classes: List[str]
    count: int = Field(..., description="#(x, y, z) in C1 x C2 x C3 with xyz = 1")
    structure_constant: Optional[int] = Field(None, description="#(x, y) in C1 x C2 with xy = z^-1 for one fixed z in C3; None when it varies over a fused class")


class X0Certificate(BaseModel):
    level: int
    genus: int
    mu: int
    nu2: int
    nu3: int
    nu_inf: int


class GenusZeroReport(BaseModel):
    bound: int
    levels: List[int]


class SteinbergWitnessReport(BaseModel):
    p: int
    status: str = Field(..., description="witness, absent or insufficient_data")
    level: Optional[int] = None
    conductor: Optional[int] = None
    curve: Optional[str] = Field(None, description="Cremona label such as 26a1")
    ainvs: Optional[List[int]] = None
    certificate: Optional[X0Certificate] = None
    steinberg_dim: int
    uncovered_conductors: List[int] = Field(default_factory=list)


class CorollaryReport(BaseModel):
    bound: int
    prime_count: int
    witnesses: List[SteinbergWitnessReport]
    insufficient_data: List[int] = Field(default_factory=list)
    absent: List[int] = Field(default_factory=list)
    coverage: Optional[List[int]] = None
    passed: bool


class TableValidationReport(BaseModel):
    group: str
    order: int
    class_count: int
    character_count: int
    complete: bool
    classes: List[str]
    characters: List[str]
    burnside_ok: bool


class CremonaValidationReport(BaseModel):
    record_count: int
    conductor_count: int
    coverage: Optional[List[int]] = None
    declared_coverage: Optional[List[int]] = None
    identity_ok: bool = Field(..., description="c4^3 - c6^2 = 1728 * discriminant for every record")
    round_trip_ok: bool


class SearchReport(BaseModel):
    n: int
    target_genus: int
    seed: int
    budget: int
    results: List[GenusReport]


class BundleInfo(BaseModel):
    name: str
    files: Dict[str, str] = Field(default_factory=dict, description="Relative path -> sha256")
