"""Perfect correlation of quantum observables and precise measurement, in finite dimension."""

__version__ = "0.1.0"

from .correlation import (
    CorrelationVerdict,
    JointTermTable,
    check_theorem1,
    is_jointly_distributed,
    is_perfectly_correlated,
    joint_term_table,
    rms_difference,
)
from .cyclic import (
    CyclicSubspace,
    Theorem2Report,
    common_eigenstate_decomposition,
    cyclic_subspace,
    equal_distribution_certificate,
    theorem2_report,
)
from .errors import *  # noqa: F401,F403
from .linalg import (
    Observable,
    SpectralDecomposition,
    partial_trace_second,
    spectral_decompose,
    subspace_intersection_projection,
    tensor,
)
from .measurement import (
    MeasuringProcess,
    Povm,
    PreciseMeasurementReport,
    heisenberg_meter,
    is_precise_for_all_states,
    output_distribution,
    povm_of,
    povm_perfectly_correlated,
    precise_measurement_report,
    satisfies_bsf,
)
from .models import (
    HeisenbergPairFixture,
    VonNeumannModel,
    build_von_neumann,
    ozawa_counterexample,
    product_state_example,
    verify_von_neumann,
)
from .simulator import SampleReport, simulate_consecutive, simulate_indirect
