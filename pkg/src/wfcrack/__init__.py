"""Weight functions and stress intensity factors for interfacial cracks."""

from .errors import InputDomainError, NumericalError
from .fullfield import (
    FieldValue,
    MellinState,
    TipExpansion,
    field_asymptotics,
    mellin_inverse,
    mellin_state,
    tip_expansion,
)
from .loading import (
    Face,
    FaceTraction,
    LoadCase,
    LoadDecomposition,
    Mode,
    PointForce,
    SmoothTraction,
    check_balance,
    decompose,
    hutchinson_case,
    split_symmetric,
    three_point_case,
)
from .materials import (
    BimaterialParams,
    ElasticHalfPlane,
    derive_params,
    params_from_eta,
    verify_identities,
)
from .perturb import AdvanceResult, advance_sif, first_order, tauberian_probe
from .sif import (
    Provenance,
    TipCoefficients,
    mode3_sif,
    sif_closed_form,
    sif_quadrature,
    three_point_reference,
    three_point_second_order,
)
from .weights import mode3_field, mode3_trace, plane_strain_trace, plane_strain_transform

__version__ = "0.1.0"
