"""Exact q-expansion workbench for f-invariant representatives of transfers.

Subpackage layout:

- exactnum:  cyclotomic/rational scalars, Bernoulli numbers, integer polynomials
- qseries:   truncated q-series over eps-polynomials
- genus:     level-N Eisenstein-type series, genus expansion, numeric oracles
- divcong:   modular bases, Hermite normal form, lattice equivalence decisions
- geometry:  circle/homogeneous-space spectra, SU(2)/SU(3) data, Chern-Simons
- fassembly: xi-tables, assembly formulas, known representatives, examples
- cli:       batch command-line front end and series/basis file formats
"""

from .exactnum import CycNum, EpsPoly, IntPoly, bernoulli, cyclotomic_poly, eps
from .qseries import QSeries, divisor_weighted_series, eps_split, is_integral_series
from .genus import ell_expansion, g2, g_hat, g_tilde, g_tilde_level1
from .divcong import (build_basis, hnf, is_equivalent, make_lattice,
                      relative_integrality_check, sturm_bound)
from .fassembly import (FRepresentative, XiTable, assemble_complex,
                        assemble_complex_reduced, assemble_quaternionic,
                        assemble_quaternionic_reduced, known_representative,
                        run_example)

__version__ = "0.1.0"

__all__ = [
    "CycNum", "EpsPoly", "FRepresentative", "IntPoly", "QSeries", "XiTable",
    "assemble_complex", "assemble_complex_reduced", "assemble_quaternionic",
    "assemble_quaternionic_reduced", "bernoulli", "build_basis",
    "cyclotomic_poly", "divisor_weighted_series", "ell_expansion", "eps",
    "eps_split", "g2", "g_hat", "g_tilde", "g_tilde_level1", "hnf",
    "is_equivalent", "is_integral_series", "known_representative",
    "make_lattice", "relative_integrality_check", "run_example",
    "sturm_bound",
]
