"""
Off-policy value estimators.
"""

from .base import EstimateRecord, FixedRewardModel, RewardModel, sample_mean
from .baselines import SHRUNK_NAMES, dm, dr, ips, logged_weights, shrink_weights, shrunk_dr
from .mips import mips

__all__ = [
    "SHRUNK_NAMES",
    "EstimateRecord",
    "FixedRewardModel",
    "RewardModel",
    "dm",
    "dr",
    "ips",
    "logged_weights",
    "mips",
    "sample_mean",
    "shrink_weights",
    "shrunk_dr",
]
