"""Bistatic satellite-illuminated aircraft sensing: channels, SINR and joint beamforming."""

from .channel import ChannelSet, PropagationParams, ScenarioGeometry, build_channels
from .errors import SagsenseError
from .optimizer import OptimizerConfig, Strategy, alternate, run_strategy, update_receive, update_transmit
from .sensing import BeamformerPair, NoiseModel, build_sinr_parts, sinr, target_sinr

__all__ = [
    "BeamformerPair",
    "ChannelSet",
    "NoiseModel",
    "OptimizerConfig",
    "PropagationParams",
    "SagsenseError",
    "ScenarioGeometry",
    "Strategy",
    "alternate",
    "build_channels",
    "build_sinr_parts",
    "run_strategy",
    "sinr",
    "target_sinr",
    "update_receive",
    "update_transmit",
]
