"""Realized superposition codebooks, likelihood encoding, ML decoding and their exact / Monte Carlo metrics."""

from .budget import SimulationBudget
from .codebook import Codebook, build_codebook
from .coding import EncoderOutput, decode, encode, encoder_posteriors
from .evaluate import (
    AveragedResult,
    SoundnessReport,
    average_over_codebooks,
    evaluate_codebook,
    exact_evaluate,
    soundness_report,
)
from .model import LetterModel
from .montecarlo import run_monte_carlo
from .results import EXACT, MONTE_CARLO, SimResult

__all__ = [
    "AveragedResult",
    "Codebook",
    "EXACT",
    "EncoderOutput",
    "LetterModel",
    "MONTE_CARLO",
    "SimResult",
    "SimulationBudget",
    "SoundnessReport",
    "average_over_codebooks",
    "build_codebook",
    "decode",
    "encode",
    "encoder_posteriors",
    "evaluate_codebook",
    "exact_evaluate",
    "run_monte_carlo",
    "soundness_report",
]
