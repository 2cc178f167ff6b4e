"""
Geometry of X-shaped two-qubit states.

Concurrence, the L-measure, region classification in the amplitude triangle,
robustness against white noise, and the entanglement dynamics of two atoms in
separate cavities.
"""

from .dynamics import (
    CavityParams,
    DynamicsTrace,
    Envelope,
    TimeGrid,
    check_envelope_bound,
    extract_min_envelope,
    rho_2at,
    rho_2at_bruteforce,
    rho_2at_closed_form,
    sweep,
)
from .geometry import (
    ExtremePoints,
    Region,
    RegionClass,
    SPoint,
    Subregion,
    classify,
    l_measure,
    l_measure_closest_point,
    l_measure_of,
    to_point,
)
from .linalg import (
    eigensystem_hermitian,
    eigh_jacobi,
    is_hermitian,
    numerical_rank,
    partial_trace,
    partial_transpose_second,
    von_neumann_entropy,
)
from .measures import (
    MeasureReport,
    RobustnessReport,
    concurrence_general,
    concurrence_x,
    entanglement_of_formation,
    full_report,
    ppt_verdict,
    robustness,
)
from .states import (
    DensityMatrix,
    InvalidStateError,
    NotFactorizable,
    NotHermitian,
    NotPSD,
    NotXShaped,
    PureAmplitudes,
    TraceNotOne,
    XState,
    compute_delta,
    make_bell,
    make_bell_mixture,
    make_generalized_werner,
    make_werner,
    proposition_q_factorize,
    validate_density,
    x_state_from_density,
)

__version__ = "0.1.0"
