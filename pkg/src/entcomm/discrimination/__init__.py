from . import ensemble, solver
from .ensemble import DiscriminationResult, Ensemble
from .solver import GapReport, certify, discriminate, discriminate_many, helstrom
