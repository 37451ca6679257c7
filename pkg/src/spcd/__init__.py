"""Scale factors, behavior classes, and minimal-stock demand scheduling for
closed-form linear flows on truncated sequence spaces."""

from .classification import (
    Expansible,
    FlowClass,
    Indeterminate,
    Pressing,
    Stable,
    TotallyExpansible,
    TotallyPressing,
    classify_flow,
)
from .config import ParseError, RunConfig, ValidationError, parse_config
from .flows import (
    BlackScholes,
    FlowModel,
    Fourier,
    FoersterLasota,
    LayoutMismatch,
    Maclaurin,
    Malthusian,
    evolve,
    evolve_forced,
    fourier_mode_rates,
    maclaurin_rate,
    rate_sequence,
)
from .measures import (
    InvalidRectangle,
    RectangleSpec,
    liouville_factor,
    pushforward,
    rectangle_measure,
    truncated_jacobian_check,
)
from .sequences import (
    DEFAULT_DEPTH,
    AffineLinear,
    AlphaBlocking,
    AlternatingPowerLaw,
    Constant,
    ConvergesTo,
    DivergesMinus,
    DivergesPlus,
    ExtendedMeasure,
    Geometric,
    NegativeFactor,
    Oscillates,
    Polynomial,
    PowerLaw,
    QuadraticPoly,
    SequenceSpec,
    SeriesVerdict,
    TailClass,
    UnsupportedBlocking,
    Zero,
    classify_sum,
    negative_part_sum,
    ordinary_alpha_product,
    ordinary_product,
    term,
)
from .solver import (
    Demand,
    DemandSchedule,
    InvalidSchedule,
    MinimalityReport,
    NoMinimum,
    NoSolutionVanishing,
    ShortfallReport,
    Solution,
    SolveOutcome,
    SupplyPlan,
    SupplyStep,
    Unknown,
    minimal_initial_measure,
    simulate,
    solve,
    verify_minimality,
)

__version__ = "0.1.0"
