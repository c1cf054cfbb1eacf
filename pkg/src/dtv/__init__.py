"""Elliptic Schroedinger potentials sum_i m_i(m_i+1) wp(z - omega_i) and their limits.

Series arithmetic, Weierstrass/Jacobi functions, the potential families,
trivial-monodromy certification, commuting-operator search with spectral
curves, Darboux transformations and the singular-set classifier.
"""

from .classifier import SingularClass, classify_singular_set, family_template
from .elliptic import (Lattice, jacobi_eval, lattice_from_invariants, lattice_from_periods,
                       wp_eval, wp_series)
from .errors import (DegenerateLatticeError, DomainError, DTVError, MalformedPoleError,
                     NotCommutingError, PoleError, PreconditionError, TruncationError)
from .finitegap import (DiffOperator, SpectralCurve, darboux_transform, find_commuting,
                        op_commutator, op_compose, schrodinger_from, spectral_polynomial)
from .monodromy import (FrobeniusBasis, MonodromyReport, PoleVerdict, dg_check,
                        frobenius_solve, trivial_monodromy_report)
from .potentials import (DTV, Rat, Trig, TrigMulti, degenerate, dtv_build,
                         jacobi_to_weierstrass, potential_eval, potential_series_at_pole,
                         rat_build, trig_build)
from .series import LaurentSeries, divide, series_arith

__version__ = "0.1.0"

__all__ = [
    "classify_singular_set",
    "darboux_transform",
    "degenerate",
    "DegenerateLatticeError",
    "dg_check",
    "DiffOperator",
    "divide",
    "DomainError",
    "DTV",
    "dtv_build",
    "DTVError",
    "family_template",
    "find_commuting",
    "frobenius_solve",
    "FrobeniusBasis",
    "jacobi_eval",
    "jacobi_to_weierstrass",
    "Lattice",
    "lattice_from_invariants",
    "lattice_from_periods",
    "LaurentSeries",
    "MalformedPoleError",
    "MonodromyReport",
    "NotCommutingError",
    "op_commutator",
    "op_compose",
    "PoleError",
    "PoleVerdict",
    "potential_eval",
    "potential_series_at_pole",
    "PreconditionError",
    "Rat",
    "rat_build",
    "schrodinger_from",
    "series_arith",
    "SingularClass",
    "spectral_polynomial",
    "SpectralCurve",
    "Trig",
    "trig_build",
    "TrigMulti",
    "trivial_monodromy_report",
    "TruncationError",
    "wp_eval",
    "wp_series",
]
