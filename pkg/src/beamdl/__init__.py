"""Learned-dictionary beamspace channel representation and estimation for
mmWave massive MIMO, with Monte-Carlo link-level experiment tooling."""

from .beamspace import (
    BeamspaceChannel,
    TransformOperator,
    build_dft_operator,
    empirical_leakage,
    power_leakage_worst_ula,
    to_beamspace,
)
from .channels import (
    ArrayGeometry,
    ChannelRealization,
    GSCMParams,
    PathComponent,
    SVParams,
    gen_gscm_channel,
    gen_nula_geometry,
    gen_sv_channel,
    steering_vector,
    uniform_geometry,
)
from .dictlearn import (
    Dictionary,
    TrainingSet,
    build_channel_training_set,
    build_precoding_training_set,
    ksvd_train,
    load_dictionary,
    save_dictionary,
    sparse_representation_gain,
)
from .estimation import (
    SCENARIOS,
    PilotConfig,
    ScenarioSpec,
    SensingMatrix,
    estimate_omp,
    estimate_sd,
    gen_pilot_config,
    gen_sensing_matrix,
    identity_sensing,
    nmse,
    represent_channel,
    simulate_pilot_rx,
)
from .linalg import SVDResult, least_squares, svd
from .precoding import (
    BeamSelection,
    Precoder,
    full_digital_sum_rate,
    ia_beam_select,
    sum_rate,
    zf_precoder,
)
from .sparse import SparseCode, omp, reconstruct

__version__ = "0.1.0"
