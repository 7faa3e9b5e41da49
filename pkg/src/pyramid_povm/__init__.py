"""Eavesdropper information on symmetric pyramid ensembles and the resulting key-distribution thresholds."""

__version__ = "0.1.0"

from .attack import (
    AncillaFamily,
    AttackAmplitudes,
    NoiseModel,
    build_ancilla_family,
    build_four_qunit_state,
    default_amplitudes,
    disturbance_to_lambda,
    make_noise_model,
)
from .information import (
    EtaPair,
    JointDistribution,
    OptimumReport,
    asymptotic_ratio,
    eta_pair,
    family_information,
    joint_distribution,
    lambda_threshold,
    mutual_information,
    optimum,
    srm_information,
)
from .measurements import Povm, family_povm, inconclusive_probability, mud, srm, validate_povm
from .optimizer import (
    GeneralEnsemble,
    OptimizationResult,
    StructuredSearchSpace,
    optimize,
    structured_search,
    verify_against_closed_form,
)
from .pyramid import PyramidEnsemble, ensemble_density, make_pyramid, pyramid_volume
from .thresholds import (
    ThresholdReport,
    alice_bob_information,
    ck_threshold,
    critical_disturbance,
    eve_information,
)
