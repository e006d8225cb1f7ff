"""A three-level V1 / V4 / IT object recognition model.

Gabor filtering with orientation competition feeds a growing dictionary of
3x3 orientation features; tile responses are unfolded into waves of spikes
that drive IT object units, with top-down amplification accelerating the
recognition of familiar objects and usage-based disposal shaping the
dictionary over time.
"""
from .config import ExperimentConfig
from .development import dispose, record_survival, relative_frequency, substitute
from .harness import RunReport, export, run_experiment
from .it import Decision, ObjectRepository, recognize, response_grid, it_response
from .predictive import coherence, initial_hypothesis, match_identical, predictive_coding, refine
from .retina import CATALOG, Retina, ShapeSpec, generate_synthetic, load_stimulus, quantize
from .v1 import convolve, gabor_bank, gabor_kernel, inhibit, integrate
from .v4 import FeatureRepository, build_maps, rbf_response, tile
from .waves import WaveSchedule, band, first_wave_maps

__version__ = "0.1.0"
