"""Inter-numerology interference between two multiplexed CP-OFDM numerologies.

Closed-form INI/SIR (``analytic``), a time-domain transmitter/receiver chain
(``waveform``, ``channel``), a Monte-Carlo and single-tone measurement engine
(``simulate``) and scenario runners (``experiments``).
"""
from .analytic import IniMatrix, SirProfile, average_metrics, ini_matrix, sir_profile, total_ini_per_victim
from .numerology import CpMode, Direction, MultiplexPair, Victim, geometry, validate
from .simulate import RngSpec, cross_validate, measure_ini_ensemble, measure_sir, oracle_ini_matrix

__version__ = "0.1.0"

__all__ = [
    "CpMode",
    "Direction",
    "IniMatrix",
    "MultiplexPair",
    "RngSpec",
    "SirProfile",
    "Victim",
    "average_metrics",
    "cross_validate",
    "geometry",
    "ini_matrix",
    "measure_ini_ensemble",
    "measure_sir",
    "oracle_ini_matrix",
    "sir_profile",
    "total_ini_per_victim",
    "validate",
]
