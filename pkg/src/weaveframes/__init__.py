"""Certified bounds for controlled K-g-frames and their weavings."""

from .bounds import classical_frame_bounds, is_bessel, optimal_bounds
from .corpus import paper_example, random_instance, random_scaled_pair
from .estimators import ControlledFrameBounds, WeavingAnalyzer
from .exceptions import (
    CapExceededError,
    ControlError,
    FrameError,
    NotPSDError,
    ShapeError,
    UncertifiableError,
)
from .model import (
    BoundCertificate,
    ControlledInstance,
    GFrameFamily,
    WeavingInstance,
    build_controlled_instance,
    build_weaving_instance,
    paper_subfamily,
)
from .numerics import Tolerances
from .problem import emit_problem, parse_problem, read_problem
from .weaving import per_subset_bounds, universal_bounds_exhaustive, universal_bounds_sampled

__version__ = "0.1.0"
