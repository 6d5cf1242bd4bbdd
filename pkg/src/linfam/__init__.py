"""Exact calculations for families of linear maps over small fields.

Everything is integer or cyclotomic-rational arithmetic; no floats, no
tolerances.  The headline surfaces re-exported here: finite fields and
matrix-space counting, the character transform with its rank layers,
rank-class walk spectra, restriction-based family machinery with the
regularity decomposition, and the extremal constructions.
"""
from .budget import Budget
from .cyclo import Cyc
from .errors import (BudgetExceeded, DomainError, FieldMismatch, LinfamError,
                     ShapeMismatch)
from .gf import FieldSpec, field
from .matspace import (Mat, Subspace, agreement_dim, count_rank_d,
                       count_subspaces_avoiding, gaussian_binomial, gl_order,
                       kernel, m_qt, mat_from_literal, phi, rank)
from .families import (Family, Restriction, Junta, is_captureable,
                       is_quasiregular, max_density_ratio,
                       measure_outside_junta, regularity_decompose)
from .fourier import (DenseFunction, Spectrum, fast_transform,
                      inverse_transform, rank_split, reduce_family, transform)
from .spectra import CayleySpectrum, eigenvalue, hoffman_bound, spectrum
from .extremal import (canonical_family, canonical_family_size,
                       derangement_bound, derangement_construct,
                       derangement_enumerate, singer_cycle, sl_family,
                       verify_extremal_bound)

__all__ = [
    "Budget", "BudgetExceeded", "CayleySpectrum", "Cyc", "DenseFunction",
    "DomainError", "Family", "FieldMismatch", "FieldSpec", "Junta",
    "LinfamError", "Mat", "Restriction", "ShapeMismatch", "Spectrum",
    "Subspace", "agreement_dim", "canonical_family", "canonical_family_size",
    "count_rank_d", "count_subspaces_avoiding", "derangement_bound",
    "derangement_construct", "derangement_enumerate", "eigenvalue",
    "fast_transform", "field", "gaussian_binomial", "gl_order",
    "hoffman_bound", "inverse_transform", "is_captureable",
    "is_quasiregular", "kernel", "m_qt", "mat_from_literal",
    "max_density_ratio", "measure_outside_junta", "phi", "rank",
    "rank_split", "reduce_family", "regularity_decompose", "singer_cycle",
    "sl_family", "spectrum", "transform", "verify_extremal_bound",
]
