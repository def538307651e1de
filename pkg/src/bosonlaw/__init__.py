"""Numerical laboratory for multiphoton suppression laws on small multiports."""

from .amplitudes import (
    RecurrenceState,
    amp_permanent,
    amp_recurrence,
    amp_tables,
    is_suppressed,
    suppression_factorize,
    transition_amplitude,
)
from .distinguishability import LawBreakReport, PartialSource, law_survives, partial_probability
from .errors import ContractViolation, MultiportSpecError, NotFactorizableError
from .fock import (
    Amplitude,
    AmplitudeMethod,
    ContingencyTable,
    Interferometer,
    OccupationVector,
    expand_submatrix,
    fisher_yates,
    occupations_with_total,
    permanent,
    tables_with_margins,
)
from .multiports import (
    BeamsplitterParams,
    TritterFamily,
    TritterParams,
    beamsplitter,
    compose,
    direct_sum,
    fourier_tritter,
    output_phase_fit,
    parse_multiport,
    permutation_matrix,
    real_symmetric_tritter,
    symmetric_tritter,
    transposition_composite,
    tritter,
)
from .suppression import (
    InputFamily,
    InterlacingResult,
    LawDevice,
    OutputFamily,
    OutputOrder,
    Provenance,
    SliceScan,
    SuppressionLaw,
    Table1Row,
    TableRestriction,
    ThetaCase,
    ZeroCurve,
    ZeroReport,
    bs_law_double,
    bs_law_single,
    bs_suppression_poly,
    bs_zero_report,
    check_interlacing,
    input_occupation,
    output_occupation,
    resolve_uniform_quadratic,
    scan_zero_curves,
    scan_zero_slice,
    table1_law,
    table1_roots,
    tritter_suppression_value,
    uniform_quadratic_roots,
)
from .symmetry import (
    Classification,
    CoverageKind,
    PhasePair,
    Permutation,
    Side,
    all_permutations,
    classify_law,
    classify_root,
    pair_predicts_suppression,
    predict_suppressed,
    solve_phase_factorization,
    symmetry_invariant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
