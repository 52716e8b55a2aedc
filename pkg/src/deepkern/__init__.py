"""deepkern: two-layer (concatenated) kernel interpolation and regression."""

from .deep_model import (
    SENTINEL,
    InnerLayer,
    LayerStack,
    TwoLayerModel,
    TwoLayerProblem,
    apply_inner_layers,
    block_gram,
    compose_kernel_eval,
    deep_kernel_eval,
    fit_two_layer,
    grad_objective_interp,
    grad_objective_reg,
    inner_eval,
    inner_norm_sq,
    load_model,
    mlmkl_equivalence_check,
    objective_general_L,
    objective_interp,
    objective_reg,
    outer_fit,
    penalty_coth,
    predict_two_layer,
    q_matrix,
    save_model,
)
from .experiments import (
    CvPlan,
    Dataset,
    EvalGrid,
    SamplingPlan,
    cross_validate,
    eval_test_function,
    inner_transform_dump,
    pointwise_error_grid,
    run_comparison,
    sample_dataset,
)
from .gram import (
    SingularMatrixError,
    SpdSolvePolicy,
    energy_quadratic_form,
    gram,
    solve_interpolation,
    solve_ridge,
    spd_solve,
)
from .kernels import (
    DiagMixtureKernel,
    DiagScaledKernel,
    GaussKernel,
    PolyKernel,
    TensorMaternKernel,
    bessel_k_half,
)
from .optimize import (
    BfgsConfig,
    OptimizationError,
    OptimizationResult,
    bfgs_minimize,
    finite_diff_grad,
    grad_check,
    multistart,
)
from .single_layer import SingleLayerModel, fit_single, predict_single, rkhs_norm_sq_single
