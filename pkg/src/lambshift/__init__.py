"""Hydrogenic Lamb shifts and radiative decay rates.

Complex radiative energy shifts of hydrogen-like bound states from
closed-form SU(1,1) kernel matrix elements: Lamb shifts (real part, with
and without the dipole approximation), spontaneous decay rates (imaginary
part), Bethe logarithms, and reproductions of the published tables.
"""

from .constants import PhysicalConstants, default_constants, load_constants, rydberg_energy
from .kernel import (
    ResidueEntry,
    ResidueTable,
    kernel_q,
    kernel_remainder,
    kernel_remainder_dtau,
    residue_coeffs,
)
from .quadrature import (
    QuadratureResult,
    QuadratureSpec,
    integrate_principal_value,
    integrate_semi_infinite,
)
from .shifts import (
    BetheResult,
    DipoleOptions,
    QuantumState,
    ShiftResult,
    bethe_log,
    circular_rate_closed_form,
    decay_rates,
    dipole_lamb_full,
    generate_table,
    lamb_shift,
    weight_dipole,
    weight_nondipole,
)
from .su11 import BchCoordinates, GroupElement, RepLabel, bch_decompose, compose, rep_matrix_element

__version__ = "0.1.0"

__all__ = [
    "BchCoordinates",
    "BetheResult",
    "DipoleOptions",
    "GroupElement",
    "PhysicalConstants",
    "QuadratureResult",
    "QuadratureSpec",
    "QuantumState",
    "RepLabel",
    "ResidueEntry",
    "ResidueTable",
    "ShiftResult",
    "bch_decompose",
    "bethe_log",
    "circular_rate_closed_form",
    "compose",
    "decay_rates",
    "default_constants",
    "dipole_lamb_full",
    "generate_table",
    "integrate_principal_value",
    "integrate_semi_infinite",
    "kernel_q",
    "kernel_remainder",
    "kernel_remainder_dtau",
    "lamb_shift",
    "load_constants",
    "rep_matrix_element",
    "residue_coeffs",
    "rydberg_energy",
    "weight_dipole",
    "weight_nondipole",
]
