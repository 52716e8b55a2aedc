"""Comparison harness: test functions, sampling, cross-validation, error grids.

The two desk targets are a reciprocal kink along the diagonal and a hard
indicator jump:

    h1(x, y) = 1 / (0.1 + |x - y|)
    h2(x, y) = 1 if x*y > 3/20 else 0

Both sit outside every RKHS spanned by the shipped kernels, which is what
makes the single- versus two-layer comparison informative.

All randomness flows from one master seed expanded into named streams
(sampling / init / folds), so partial reruns are stable and full runs are
byte-reproducible.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .deep_model import fit_two_layer, predict_two_layer
from .kernels import scalar_from_params, scalar_to_params
from .optimize import BfgsConfig
from .single_layer import fit_single, predict_single

DEFAULT_DOMAIN = ((-1.0, 1.0), (-1.0, 1.0))

_STREAM_TAGS = {"sampling": 0x5A01, "init": 0x5A02, "folds": 0x5A03}


def stream_seed(master, name):
    """A 64-bit seed for one of the named substreams of a master seed."""
    ss = np.random.SeedSequence([int(master), _STREAM_TAGS[name]])
    return int(ss.generate_state(1, np.uint64)[0])


def stream_rng(master, name):
    return np.random.default_rng(stream_seed(master, name))


# -----------------------------
# Test functions
# -----------------------------

def _h1(points):
    p = np.atleast_2d(points)
    return 1.0 / (0.1 + np.abs(p[:, 0] - p[:, 1]))


def _h2(points):
    p = np.atleast_2d(points)
    return (p[:, 0] * p[:, 1] > 3.0 / 20.0).astype(float)


TEST_FUNCTIONS = {"h1": _h1, "h2": _h2}


def eval_test_function(name, point):
    """Value of a named test function at a single 2-d point."""
    point = np.asarray(point, dtype=float)
    if point.shape != (2,):
        raise ValueError("test functions are defined on 2-d points")
    return float(TEST_FUNCTIONS[name](point[None, :])[0])


# -----------------------------
# Sampling and grids
# -----------------------------

@dataclass(frozen=True)
class SamplingPlan:
    n_samples: int = 100
    domain: tuple = DEFAULT_DOMAIN
    noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("need at least one sample")
        if self.noise_sigma < 0.0:
            raise ValueError("noise level must be nonnegative")


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray


def sample_dataset(tf, plan):
    """Uniform points on the box with additive Gaussian noise on the targets."""
    rng = stream_rng(plan.seed, "sampling")
    lo = np.array([b[0] for b in plan.domain])
    hi = np.array([b[1] for b in plan.domain])
    X = rng.uniform(lo, hi, size=(plan.n_samples, len(plan.domain)))
    noise = plan.noise_sigma * rng.standard_normal(plan.n_samples)
    y = TEST_FUNCTIONS[tf](X) + noise
    return Dataset(X=X, y=y)


@dataclass(frozen=True)
class EvalGrid:
    meshwidth: float = 1.0 / 50.0
    domain: tuple = DEFAULT_DOMAIN

    def axis_points(self, i):
        lo, hi = self.domain[i]
        count = int(round((hi - lo) / self.meshwidth)) + 1
        return np.linspace(lo, hi, count)

    def points(self):
        """All grid points in row-major order, shape (n_t, d)."""
        axes = [self.axis_points(i) for i in range(len(self.domain))]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


# -----------------------------
# Cross-validation
# -----------------------------

def dyadic_grid(t_max=10):
    """{2^(-2t+1) : t = 1..t_max}"""
    return [2.0 ** (-2 * t + 1) for t in range(1, t_max + 1)]


def decade_grid(t_max=6):
    """{10^(-2t+1) : t = 1..t_max}"""
    return [10.0 ** (-2 * t + 1) for t in range(1, t_max + 1)]


@dataclass(frozen=True)
class CvPlan:
    folds: int = 5
    lambda_grid: tuple = tuple(dyadic_grid())
    mu_grid: tuple = tuple(dyadic_grid())
    seed: int = 0
    metric: str = "holdout_mse"   # or "train_objective"

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("need at least two folds")
        if not self.lambda_grid or not self.mu_grid:
            raise ValueError("parameter grids must be nonempty")
        if self.metric not in ("holdout_mse", "train_objective"):
            raise ValueError(f"unknown CV metric {self.metric!r}")
        object.__setattr__(self, "lambda_grid", tuple(float(v) for v in self.lambda_grid))
        object.__setattr__(self, "mu_grid", tuple(float(v) for v in self.mu_grid))


def fold_blocks(n, folds, rng):
    """Shuffled contiguous index blocks forming a partition of range(n)."""
    if folds > n:
        raise ValueError("more folds than data points")
    perm = rng.permutation(n)
    return [np.sort(b) for b in np.array_split(perm, folds)]


@dataclass(frozen=True)
class CvResult:
    best_lambda: float
    best_mu: float
    lambda_grid: tuple
    mu_grid: tuple
    fold_scores: np.ndarray   # (n_lambda, n_mu, folds)

    @property
    def mean_scores(self):
        return self.fold_scores.mean(axis=-1)


def cross_validate(dataset, inner, outer, cv_plan, config, threads=1):
    """Grid search over (lambda, mu) with k-fold validation.

    Scores are held-out mean squared prediction errors by default; the
    ``train_objective`` metric instead ranks pairs by the achieved
    regression objective on the training folds.  Ties go to the larger
    (lambda, mu) pair, i.e. the stronger regularization.
    """
    blocks = fold_blocks(len(dataset.y), cv_plan.folds, stream_rng(cv_plan.seed, "folds"))
    n_lam, n_mu = len(cv_plan.lambda_grid), len(cv_plan.mu_grid)
    scores = np.empty((n_lam, n_mu, cv_plan.folds))
    for il, lam in enumerate(cv_plan.lambda_grid):
        for im, mu in enumerate(cv_plan.mu_grid):
            for k, held_out in enumerate(blocks):
                mask = np.ones(len(dataset.y), dtype=bool)
                mask[held_out] = False
                model, result = fit_two_layer(
                    dataset.X[mask], dataset.y[mask], inner, outer,
                    lam=lam, mu=mu, config=config, threads=threads,
                )
                if cv_plan.metric == "holdout_mse":
                    preds = predict_two_layer(model, dataset.X[held_out])
                    scores[il, im, k] = float(np.mean((preds - dataset.y[held_out]) ** 2))
                else:
                    scores[il, im, k] = result.objective
    mean_scores = scores.mean(axis=-1)
    best = None
    for il, lam in enumerate(cv_plan.lambda_grid):
        for im, mu in enumerate(cv_plan.mu_grid):
            cand = (mean_scores[il, im], lam, mu)
            if best is None or cand[0] < best[0] or (
                cand[0] == best[0] and (lam, mu) > (best[1], best[2])
            ):
                best = cand
    return CvResult(
        best_lambda=best[1], best_mu=best[2],
        lambda_grid=cv_plan.lambda_grid, mu_grid=cv_plan.mu_grid,
        fold_scores=scores,
    )


# -----------------------------
# Pointwise error grids
# -----------------------------

@dataclass(frozen=True)
class ErrorGrid:
    points: np.ndarray
    errors: np.ndarray
    mean_error: float
    max_error: float
    frac_above_10pct: float
    sup_h: float


def pointwise_error_grid(predict_fn, tf, grid):
    """Absolute prediction errors on the grid plus summary statistics.

    The 10%-threshold fraction is measured against the sup norm of the
    test function on the same grid.
    """
    pts = grid.points()
    truth = TEST_FUNCTIONS[tf](pts)
    preds = np.asarray(predict_fn(pts), dtype=float)
    errors = np.abs(preds - truth)
    sup_h = float(np.max(np.abs(truth)))
    return ErrorGrid(
        points=pts,
        errors=errors,
        mean_error=float(np.mean(errors)),
        max_error=float(np.max(errors)),
        frac_above_10pct=float(np.mean(errors > 0.1 * sup_h)),
        sup_h=sup_h,
    )


# -----------------------------
# Single-layer vs two-layer comparison
# -----------------------------

@dataclass(frozen=True)
class ArmReport:
    label: str
    error: ErrorGrid
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ComparisonReport:
    test_function: str
    mode: str
    plan: SamplingPlan
    restarts: int
    two_layer: ArmReport
    single_layer: ArmReport
    two_layer_model: object
    single_layer_model: object
    cv: object = None

    def lines(self):
        out = [
            f"test_function={self.test_function}",
            f"mode={self.mode}",
            f"n_samples={self.plan.n_samples}",
            f"noise_sigma={self.plan.noise_sigma!r}",
            f"seed={self.plan.seed}",
            f"restarts={self.restarts}",
        ]
        for arm in (self.two_layer, self.single_layer):
            p = arm.label
            for key, val in sorted(arm.params.items()):
                out.append(f"{p}.{key}={val!r}" if isinstance(val, float) else f"{p}.{key}={val}")
            out.append(f"{p}.mean_error={arm.error.mean_error!r}")
            out.append(f"{p}.max_error={arm.error.max_error!r}")
            out.append(f"{p}.frac_above_10pct={arm.error.frac_above_10pct!r}")
        return out


def _baseline_kernel(outer, dim):
    params = scalar_to_params(outer)
    params["dim"] = dim
    return scalar_from_params(params)


def run_comparison(tf, outer, inner, plan, cv_plan=None, mode="interpolation",
                   config=None, cv_config=None, grid=None, threads=1):
    """Fit the two-layer model and the single-layer baseline, report grid errors.

    Interpolation mode fits both arms exactly; regression mode selects
    (lambda, mu) by cross-validation for the two-layer arm and gives the
    baseline its best possible lambda, chosen directly on the true grid
    error.
    """
    if mode not in ("interpolation", "regression"):
        raise ValueError(f"unknown mode {mode!r}")
    config = config or BfgsConfig()
    grid = grid or EvalGrid()
    dataset = sample_dataset(tf, plan)
    fit_config = dataclasses.replace(config, seed=stream_seed(plan.seed, "init"))
    baseline = _baseline_kernel(outer, dataset.X.shape[1])

    cv = None
    if mode == "interpolation":
        model, result = fit_two_layer(dataset.X, dataset.y, inner, outer,
                                      config=fit_config, threads=threads)
        two_params = {"objective": result.objective, "restart_index": result.restart_index}
        single = fit_single(baseline, dataset.X, dataset.y, lam=0.0)
        single_params = {"lambda": 0.0}
    else:
        if cv_plan is None:
            raise ValueError("regression mode needs a CV plan")
        cell_config = dataclasses.replace(cv_config or fit_config,
                                          seed=stream_seed(plan.seed, "init"))
        cv_plan = dataclasses.replace(cv_plan, seed=plan.seed)
        cv = cross_validate(dataset, inner, outer, cv_plan, cell_config, threads=threads)
        model, result = fit_two_layer(dataset.X, dataset.y, inner, outer,
                                      lam=cv.best_lambda, mu=cv.best_mu,
                                      config=fit_config, threads=threads)
        two_params = {
            "lambda": cv.best_lambda, "mu": cv.best_mu,
            "objective": result.objective, "restart_index": result.restart_index,
        }
        # oracle baseline: the lambda with the smallest true grid error
        best = None
        for lam in cv_plan.lambda_grid:
            cand = fit_single(baseline, dataset.X, dataset.y, lam=lam)
            err = pointwise_error_grid(lambda pts: predict_single(cand, pts), tf, grid)
            if best is None or err.mean_error < best[0]:
                best = (err.mean_error, lam, cand, err)
        _, base_lam, single, single_err = best
        single_params = {"lambda": base_lam}

    two_err = pointwise_error_grid(lambda pts: predict_two_layer(model, pts), tf, grid)
    if mode == "interpolation":
        single_err = pointwise_error_grid(lambda pts: predict_single(single, pts), tf, grid)

    return ComparisonReport(
        test_function=tf,
        mode=mode,
        plan=plan,
        restarts=config.restarts,
        two_layer=ArmReport("two_layer", two_err, two_params),
        single_layer=ArmReport("single_layer", single_err, single_params),
        two_layer_model=model,
        single_layer_model=single,
        cv=cv,
    )


def inner_transform_dump(model, grid):
    """Rows (t_1, t_2, g_1(t), ..., g_D(t)) showing the learned deformation."""
    pts = grid.points()
    prob = model.problem()
    images = prob.images_at(model.c, pts)
    return np.hstack([pts, images])


# -----------------------------
# CSV and report I/O
# -----------------------------

def _fmt(v):
    return repr(float(v))


def write_dataset_csv(path, dataset):
    d = dataset.X.shape[1]
    with open(path, "w") as fh:
        fh.write(",".join(f"x{i+1}" for i in range(d)) + ",y\n")
        for row, target in zip(dataset.X, dataset.y):
            fh.write(",".join(_fmt(v) for v in row) + f",{_fmt(target)}\n")


def read_dataset_csv(path):
    """Parse the sample CSV; malformed rows raise with their line number."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    header = [h.strip() for h in lines[0].split(",")]
    if header[-1] != "y" or len(header) < 2:
        raise ValueError(f"{path}: expected header x1,...,xd,y")
    d = len(header) - 1
    X, y = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != d + 1:
            raise ValueError(f"{path}:{lineno}: expected {d + 1} fields, got {len(parts)}")
        try:
            vals = [float(v) for v in parts]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric field") from None
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"{path}:{lineno}: non-finite value")
        X.append(vals[:-1])
        y.append(vals[-1])
    if not X:
        raise ValueError(f"{path}: no data rows")
    return Dataset(X=np.array(X), y=np.array(y))


def read_points_csv(path):
    """Points file: like the dataset CSV but the y column is optional."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty points file")
    header = [h.strip() for h in lines[0].split(",")]
    has_y = header[-1] == "y"
    d = len(header) - 1 if has_y else len(header)
    pts = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(parts)}")
        try:
            vals = [float(v) for v in parts]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric field") from None
        pts.append(vals[:d])
    return np.array(pts).reshape(len(pts), d)


def write_error_grid_csv(path, error_grid):
    with open(path, "w") as fh:
        d = error_grid.points.shape[1]
        fh.write(",".join(f"t{i+1}" for i in range(d)) + ",abs_error\n")
        for row, err in zip(error_grid.points, error_grid.errors):
            fh.write(",".join(_fmt(v) for v in row) + f",{_fmt(err)}\n")


def write_inner_map_csv(path, model, grid):
    rows = inner_transform_dump(model, grid)
    d = grid.points().shape[1]
    n_out = rows.shape[1] - d
    with open(path, "w") as fh:
        header = [f"t{i+1}" for i in range(d)] + [f"g{i+1}" for i in range(n_out)]
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_report(path, report):
    with open(path, "w") as fh:
        fh.write("\n".join(report.lines()) + "\n")
