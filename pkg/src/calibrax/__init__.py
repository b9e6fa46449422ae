"""Tangent-space workbench for special Lagrangian planes in flat hyperkähler R^8."""

from .exterior import Restricted2Form, calibration_eval, eval_wedge_pair, pfaffian4, restrict
from .frame import (
    CoordFrame,
    FrameError,
    HolVolumeForm,
    HyperkahlerFrame,
    Triple,
    TwoForm,
    coord_change,
    hol_coordinates,
    hol_volume,
    kahler_form,
    rotate_frame,
    standard_frame,
)
from .grassmann import (
    CalibrationReport,
    DegenerateFrameError,
    SamplerError,
    Subspace4,
    Tolerances,
    classify,
    is_complex,
    is_lagrangian,
    is_symplectic_restriction,
    orthonormalize,
    random_subspace,
    sample_calibrated,
    sample_lagrangian,
    sample_special_lagrangian,
    symplectic_basis,
)
from .report import VerificationReport, emit_report, parse_report

__version__ = "0.1.0"
