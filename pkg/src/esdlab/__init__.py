"""Entanglement sudden death of two qubits coupled to independent thermal reservoirs."""
from .dynamics import (
    PropagatorPolynomials,
    analytic_coefficients,
    evolve_analytic,
    evolve_numeric,
    lindblad_rhs_full,
    ode_rhs_x,
    steady_state,
)
from .entanglement import concurrence_general, concurrence_x, spin_flip
from .esd import (
    DeathQuartics,
    EsdReport,
    certify_finite_death,
    closed_form_roots_wzero,
    death_quartics,
    esd_report,
)
from .families import named_state, werner, ye_state
from .state import BathParams, XState, matrix_to_xstate, t_of_x, validate_xstate, x_of_t, xstate_to_matrix

__version__ = "0.1.0"
