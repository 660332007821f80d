"""Exact linear programs and the impossibility certificates built on them."""

from .encode import AXIOMS, AxiomSystem, BudgetError, encode_axioms
from .lp import (BudgetExceeded, Certificate, CertificateError, LinearSystem, LPError,
                 Unbounded, fourier_motzkin_feasible, lp_solve)

__all__ = ["AXIOMS", "AxiomSystem", "BudgetError", "encode_axioms", "BudgetExceeded",
           "Certificate", "CertificateError", "LinearSystem", "LPError", "Unbounded",
           "fourier_motzkin_feasible", "lp_solve"]
