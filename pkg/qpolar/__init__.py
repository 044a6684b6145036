"""Quantum polar codes with a single information position."""

from qpolar.core.channels import BscChannel
from qpolar.core.channels import BscMixture
from qpolar.core.channels import ErasureChannel
from qpolar.core.channels import PauliChannel
from qpolar.core.channels import depolarizing
from qpolar.core.channels import extended_x_channel
from qpolar.core.channels import induced_x_channel
from qpolar.core.channels import induced_z_channel
from qpolar.core.code import Q1Code
from qpolar.core.code import StabilizerSet
from qpolar.core.code import construct
from qpolar.core.code import final_position
from qpolar.core.code import logical_operators
from qpolar.core.code import min_distance
from qpolar.core.code import prep_bit_sequence
from qpolar.core.code import prep_positions
from qpolar.core.code import stabilizers
from qpolar.core.decoder import DecodeTask
from qpolar.core.decoder import SCDecoder
from qpolar.core.decoder import reversed_decode_adapter
from qpolar.core.decoder import sc_decode
from qpolar.core.gf2 import polar_matrix
from qpolar.core.gf2 import polar_transform
from qpolar.core.gf2 import polar_transform_transpose
from qpolar.core.gf2 import restrict
from qpolar.core.gf2 import reverse
from qpolar.core.gf2 import weight
from qpolar.core.oracle import StateVector
from qpolar.core.oracle import apply_pauli_frame
from qpolar.core.oracle import apply_polar_encoding
from qpolar.core.oracle import fidelity
from qpolar.core.oracle import shor_logical_state
from qpolar.core.oracle import simulate_measurement_prep
from qpolar.core.oracle import stabilizer_expectation
from qpolar.core.prep import Fault
from qpolar.core.prep import NoiseModel
from qpolar.core.prep import PauliFrame
from qpolar.core.prep import PrepBatch
from qpolar.core.prep import PrepOutcome
from qpolar.core.prep import PrepRate
from qpolar.core.prep import component_count
from qpolar.core.prep import estimate_prep_rate
from qpolar.core.prep import leading_zz_levels_skippable
from qpolar.core.prep import prepare_batch
from qpolar.core.prep import prepare_noiseless
from qpolar.core.prep import prepare_noisy
from qpolar.core.prep import sample_accepted
from qpolar.core.reliability import DePopulation
from qpolar.core.reliability import ReliabilityProfile
from qpolar.core.reliability import bec_log_reliabilities
from qpolar.core.reliability import bec_reliabilities
from qpolar.core.reliability import bsc_reliabilities_de
from qpolar.core.reliability import combine_errors
from qpolar.core.reliability import combine_log_errors
from qpolar.core.reliability import lattice_position_error
from qpolar.core.reliability import lattice_reliabilities
from qpolar.core.reliability import q1_position_ler
from qpolar.core.reliability import reliability_profile
from qpolar.core.steane import EcTrialRecord
from qpolar.core.steane import EcTrials
from qpolar.core.steane import LerEstimate
from qpolar.core.steane import count_trials_until_failures
from qpolar.core.steane import ec_trials
from qpolar.core.steane import estimate_ler_de
from qpolar.core.steane import estimate_ler_mc
from qpolar.core.steane import mc_x_trial
from qpolar.core.steane import mc_z_trial
from qpolar.core.steane import pseudothreshold
from qpolar.core.tables import read_table
from qpolar.core.tables import write_table
from qpolar.core.utils import ResourceBoundError
from qpolar.core.utils import rng_stream
from qpolar.core.utils import wilson_interval


# Discourage from qpolar import *
__all__ = []


# Dynamically get the version of the installed module
try:
    import importlib.metadata

    __version__ = importlib.metadata.version(__name__)
except Exception:  # pragma: no cover
    __version__ = "unknown"  # pragma: no cover
    importlib = None  # pragma: no cover
finally:
    del importlib
