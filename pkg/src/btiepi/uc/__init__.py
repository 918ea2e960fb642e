"""
Unit Commitment instances, models and start-up cost formulations.
"""

from .formulations import FORMULATIONS, build_model
from .generator import random_instance
from .instance import UCInstance, Unit, load_instance
from .lpformat import emit_lp, parse_lp
from .model import ModelHandle

__all__ = [
    "FORMULATIONS",
    "ModelHandle",
    "UCInstance",
    "Unit",
    "build_model",
    "emit_lp",
    "load_instance",
    "parse_lp",
    "random_instance",
]
