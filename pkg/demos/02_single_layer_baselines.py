"""Single-layer interpolation and ridge regression on the kinked target h1.

The tensor-Matern space contains functions with axis-aligned kinks but not
diagonal ones, so the plain interpolant of h1 struggles; this is the
baseline the two-layer model is compared against.

Run:  python3 demos/02_single_layer_baselines.py
"""

import numpy as np

from deepkern import (
    EvalGrid,
    SamplingPlan,
    TensorMaternKernel,
    fit_single,
    pointwise_error_grid,
    predict_single,
    rkhs_norm_sq_single,
    sample_dataset,
)

plan = SamplingPlan(n_samples=60, noise_sigma=0.01, seed=1)
ds = sample_dataset("h1", plan)
kernel = TensorMaternKernel(1, 2)

print("== interpolation (lambda = 0) ==")
interp = fit_single(kernel, ds.X, ds.y, lam=0.0)
resid = np.max(np.abs(predict_single(interp, ds.X) - ds.y))
err = pointwise_error_grid(lambda p: predict_single(interp, p), "h1", EvalGrid())
print(f"training residual (max): {resid:.2e}")
print(f"grid error: mean {err.mean_error:.3f}, max {err.max_error:.3f}, "
      f"share above 10% of sup|h1|: {err.frac_above_10pct:.1%}")
print(f"RKHS norm^2 of the interpolant: {rkhs_norm_sq_single(interp):.1f}")

print("\n== ridge path: norms shrink as lambda grows ==")
for lam in (1e-4, 1e-2, 1.0):
    m = fit_single(kernel, ds.X, ds.y, lam=lam)
    e = pointwise_error_grid(lambda p: predict_single(m, p), "h1", EvalGrid())
    print(f"lambda = {lam:<8g} |alpha| = {np.linalg.norm(m.alpha):8.2f}   "
          f"mean grid error = {e.mean_error:.3f}")
