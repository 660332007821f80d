"""Exact-arithmetic tools for ordinal random assignment.

Profiles, mechanisms and properties live in :mod:`randassign.core`,
:mod:`randassign.mechanisms` and :mod:`randassign.properties`; pairwise
transfers in :mod:`randassign.transfers`; lotteries in
:mod:`randassign.lottery`; exact LPs and impossibility certificates in
:mod:`randassign.certify`.
"""

from .core import (Assignment, Profile, enumerate_profiles, format_rational, make_profile,
                   parse_profile, parse_rational, sd_compare)
from .mechanisms import (ED, PS, RSD, Mechanism, catalog, equal_division, linear_mechanism,
                         probabilistic_serial, random_serial_dictatorship, sd_mechanism,
                         serial_dictatorship)
from .properties import PROPERTIES, Verdict, Witness, check, mechanism_dominates, replay
from .transfers import TransferFunction, decompose_to_transfers, f_from_v, transfer_mechanism
from .lottery import Lottery, birkhoff_decompose, hull_membership

__version__ = "0.1.0"

__all__ = [
    "Assignment", "Profile", "enumerate_profiles", "format_rational", "make_profile",
    "parse_profile", "parse_rational", "sd_compare", "ED", "PS", "RSD", "Mechanism", "catalog",
    "equal_division", "linear_mechanism", "probabilistic_serial", "random_serial_dictatorship",
    "sd_mechanism", "serial_dictatorship", "PROPERTIES", "Verdict", "Witness", "check",
    "mechanism_dominates", "replay", "TransferFunction", "decompose_to_transfers", "f_from_v",
    "transfer_mechanism", "Lottery", "birkhoff_decompose", "hull_membership",
]
