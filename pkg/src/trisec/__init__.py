"""Exact security analysis of three-party protocols with one deviating party."""

from .adversary import (
    Deviation,
    honest,
    input_substitution,
    message_tamper,
    uniform_final_share,
    view_leak,
)
from .analyzer import (
    InputLaw,
    JointDistribution,
    SecurityReport,
    build_joint,
    check_active_suite,
    check_almost_sure,
    check_cond_indep,
    check_passive_suite,
    ideal_output_distribution,
    total_variation,
)
from .bgw import BgwParams, bgw_protocol
from .engine import MISSING, Party, run, sanitize
from .field import GF, FieldElement, FieldSpec
from .hamdist import HamDistParams, hamdist_protocol

__version__ = "0.1.0"
