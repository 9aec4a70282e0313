"""Proof-producing union-find.

Maintains the equivalence closure of a sequence of merges and, for any two
equivalent elements, emits a machine-checkable certificate of their
equality.  The package is layered so that every fast path has a slow,
obviously-correct twin to be tested against:

* :mod:`ufexplain.uf_core` -- signed-integer union-find forests.
* :mod:`ufexplain.certificates` -- proof terms, their checker, and a
  brute-force equivalence-closure oracle.
* :mod:`ufexplain.ufe_log` -- the functional state (forest + union log)
  with rollback and the naive, log-peeling explain.
* :mod:`ufexplain.ufe_fast` -- the annotated-forest explain that produces
  the same certificates without touching most of the log.
* :mod:`ufexplain.engine` -- the imperative array-backed engine with a
  path-compressed twin forest, backed by a compiled kernel when built.
* :mod:`ufexplain.workbench` -- workload generation, script execution,
  and benchmarking (also the ``ufexplain`` command-line tool).
"""

from .certificates import (
    Assm,
    EqProof,
    ProofStats,
    Refl,
    Sym,
    Trans,
    check,
    equiv_closure,
    format_proof,
    parse_proof,
    proof_stats,
    proofs_equal,
)
from .engine import Engine, available_backends, default_backend
from .errors import (
    AssumptionIndexError,
    CertificateParseError,
    CorruptForestError,
    EmptyLogError,
    FuelExhaustedError,
    NotSameClassError,
    OutOfRangeError,
    ProofCheckError,
    ScriptError,
    TransitivityMismatchError,
)
from .uf_core import CompressedForest, IntForest
from .ufe_fast import (
    assoc_unions,
    awalk_verts_from_rep,
    explain_fast,
    find_newest_on_path,
    ufa_lca,
)
from .ufe_log import (
    Policy,
    REDUNDANT,
    UfeState,
    explain_naive,
    explain_partial,
    rollback,
    ufe_init,
    ufe_union,
)

__version__ = "0.1.0"

__all__ = [
    "Assm",
    "Refl",
    "Sym",
    "Trans",
    "EqProof",
    "ProofStats",
    "check",
    "equiv_closure",
    "proof_stats",
    "proofs_equal",
    "format_proof",
    "parse_proof",
    "IntForest",
    "CompressedForest",
    "Policy",
    "UfeState",
    "REDUNDANT",
    "ufe_init",
    "ufe_union",
    "rollback",
    "explain_naive",
    "explain_partial",
    "assoc_unions",
    "awalk_verts_from_rep",
    "ufa_lca",
    "find_newest_on_path",
    "explain_fast",
    "Engine",
    "available_backends",
    "default_backend",
    "OutOfRangeError",
    "CorruptForestError",
    "NotSameClassError",
    "EmptyLogError",
    "ProofCheckError",
    "AssumptionIndexError",
    "TransitivityMismatchError",
    "CertificateParseError",
    "ScriptError",
    "FuelExhaustedError",
    "__version__",
]
