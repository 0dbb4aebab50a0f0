"""Ad-invariant Finsler norms on skew-Hermitian matrices.

Norms are built from permutation-symmetric gauges on eigenvalue vectors
(:mod:`adnorm.gauge`, :mod:`adnorm.norms`); :mod:`adnorm.majorization` and
:mod:`adnorm.geometry` cover orbit hulls and orbit polytopes, and
:mod:`adnorm.verify` is a seeded property harness for the geometry of their
unit spheres.
"""

from .gauge import (
    EllipseGauge,
    Gauge,
    KyFanGauge,
    OracleGauge,
    OrbitGauge,
    PGauge,
    PolytopeGauge,
    SpectralGauge,
    ToastGauge,
    TraceGauge,
    gauge_eval,
    gauge_from_dict,
    is_fully_homogeneous,
    standard_gauges,
    subgradient,
    support,
)
from .geometry import Polytope, is_self_dual, norming_set, orbit_polytope, polar_dual
from .linalg import (
    NumericalError,
    SpectralData,
    ad_exp,
    block_split,
    commutator,
    eigvals,
    haar_unitary,
    random_skew,
    skew_hermitian,
    spectral,
    trace_inner,
)
from .majorization import (
    ds_witness,
    hull_decomposition,
    in_orbit_hull,
    majorizes,
    pinch,
)
from .norms import (
    MatrixNorm,
    NormingMatrix,
    c_radius_norm,
    diagonal_averaged_functional,
    dual_norm,
    ky_fan_distinguished_norming,
    matrix_norm,
    norming_matrix,
    orbit_norm,
    taylor_norm,
)

__version__ = "0.1.0"
