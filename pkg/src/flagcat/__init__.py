"""Curvature tests for metric flag 2-complexes and their Artin kernels.

Modules: :mod:`~flagcat.complex` (flag and delta complexes, subdivision,
fixtures), :mod:`~flagcat.homology`, :mod:`~flagcat.metric` (links, L(K),
T(K)), :mod:`~flagcat.search` (metric search and certificates) and
:mod:`~flagcat.raag` (words, kernels, presentations, distortion).
"""
__version__ = "0.1.0"

from .complex import FlagComplex2, Delta2Complex, check_flag, read_complex, subdivide
from .fixtures import fixture, FIXTURE_NAMES
from .homology import homology, smith_normal_form
from .metric import PEMetric, build_L, build_T, check_cat1_L, check_link_condition, verify_T_link
