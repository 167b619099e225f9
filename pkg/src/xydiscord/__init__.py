"""Pairwise quantum and classical correlations in the infinite XY spin-1/2 chain.

Typical use::

    from xydiscord import ModelParams, correlator_set, build_state, report

    corr = correlator_set(4, ModelParams(gamma=1.0, lam=1.2, kT=0.0))
    r = report(build_state(corr))
    r.discord, r.classical, r.eof
"""

from .correlators import (
    MAX_DISTANCE,
    CorrelatorSet,
    ModelParams,
    QuadratureConfig,
    correlator_set,
    correlator_xx,
    correlator_yy,
    correlator_zz,
    dispersion,
    g_function,
    ground_energy_density,
    thermal_factor,
    transverse_magnetization,
)
from .criticality import (
    CriticalPoint,
    PeakEstimate,
    SweepRow,
    SweepSpec,
    SweepTable,
    derivative_wrt_lambda,
    evaluate_point,
    locate_critical_point,
    quantity_function,
    sweep,
    table_derivatives,
)
from .errors import (
    DistanceTooLarge,
    NotPositive,
    QuadratureFailure,
    StepTooLarge,
    WindowTooNarrow,
    XYDiscordError,
)
from .measures import (
    CorrelationReport,
    MeasurementAngles,
    classical_correlation_closed,
    classical_correlation_optimized,
    concurrence,
    concurrence_x_state,
    conditional_entropy_grid,
    conditional_entropy_measured,
    entanglement_of_formation,
    eof,
    mutual_information,
    quantum_discord,
    report,
)
from .state import (
    TwoSiteState,
    binary_entropy,
    build_state,
    joint_entropy,
    single_site_entropy,
)

__version__ = "0.1.0"
