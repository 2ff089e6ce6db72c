"""SMARTS-subset patterns, subgraph matching and MACCS fingerprints."""

from .maccs import (
    N_BITS,
    Fingerprint,
    FingerprintVersionError,
    KeyTable,
    MaccsKey,
    fingerprint_from_bits,
    key_table,
    maccs_fingerprint,
    tanimoto,
)
from .match import DEFAULT_STEP_BUDGET, MatchBudgetExceeded, count_matches, has_match, iter_matches
from .smarts import Pattern, SmartsError, UnsupportedSmartsError, compile_pattern

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "N_BITS",
    "Fingerprint",
    "FingerprintVersionError",
    "KeyTable",
    "MaccsKey",
    "MatchBudgetExceeded",
    "Pattern",
    "SmartsError",
    "UnsupportedSmartsError",
    "compile_pattern",
    "count_matches",
    "fingerprint_from_bits",
    "has_match",
    "iter_matches",
    "key_table",
    "maccs_fingerprint",
    "tanimoto",
]
