"""Command-line interface.

Subcommands: fit, predict, demo, cv, gradcheck, error-grid, inner-map.
Exit codes follow one convention everywhere: 0 success, 2 bad input
(config, CSV, dimensions), 3 numerical failure (singular system, failed
optimization).  All randomness derives from the single config/flag seed,
so every command is reproducible; the DEEPKERN_THREADS environment
variable overrides --threads.
"""

import argparse
import json
import os
import sys


from .deep_model import (
    SENTINEL,
    TwoLayerProblem,
    fit_two_layer,
    grad_objective_interp,
    grad_objective_reg,
    load_model,
    objective_interp,
    objective_reg,
    predict_two_layer,
    save_model,
)
from .experiments import (
    CvPlan,
    EvalGrid,
    SamplingPlan,
    cross_validate,
    decade_grid,
    dyadic_grid,
    pointwise_error_grid,
    read_dataset_csv,
    read_points_csv,
    run_comparison,
    stream_rng,
    stream_seed,
    write_error_grid_csv,
    write_inner_map_csv,
    write_report,
)
from .gram import SingularMatrixError
from .kernels import (
    DiagMixtureKernel,
    DiagScaledKernel,
    GaussKernel,
    PolyKernel,
    TensorMaternKernel,
    matrix_from_params,
    scalar_from_params,
)
from .optimize import BfgsConfig, OptimizationError, grad_check


def _load_config(path):
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return cfg


def _build_kernels(cfg, data_dim):
    """Outer scalar kernel and inner matrix kernel from the config blocks."""
    if "kernel" not in cfg or "inner" not in cfg:
        raise ValueError("config needs 'kernel' (outer) and 'inner' blocks")
    inner_cfg = dict(cfg["inner"])
    comps = [dict(c) for c in inner_cfg.get("components", [])]
    for c in comps:
        c.setdefault("dim", data_dim)
        if int(c["dim"]) != data_dim:
            raise ValueError(f"inner kernel dimension {c['dim']} does not match data dimension {data_dim}")
    inner_cfg["components"] = comps
    inner = matrix_from_params(inner_cfg)
    outer_cfg = dict(cfg["kernel"])
    outer_cfg.setdefault("dim", inner.out_dim)
    outer = scalar_from_params(outer_cfg)
    if outer.dim != inner.out_dim:
        raise ValueError(
            f"outer kernel dimension {outer.dim} does not match inner output dimension {inner.out_dim}"
        )
    return outer, inner


def _build_opt_config(cfg, seed):
    opt = cfg.get("opt", {})
    return BfgsConfig(
        max_iters=int(opt.get("max_iters", 500)),
        grad_tol=float(opt.get("grad_tol", 1e-6)),
        restarts=int(opt.get("restarts", 64)),
        init_scale=float(opt.get("init_scale", 1.0)),
        seed=seed if "seed" not in opt else int(opt["seed"]),
    )


def _build_cv_plan(cfg, seed):
    cv = cfg.get("cv")
    if cv is None:
        return None
    return CvPlan(
        folds=int(cv.get("folds", 5)),
        lambda_grid=tuple(float(v) for v in cv.get("lambda_grid", dyadic_grid())),
        mu_grid=tuple(float(v) for v in cv.get("mu_grid", dyadic_grid())),
        seed=seed,
        metric=cv.get("metric", "holdout_mse"),
    )


def _resolve_threads(args):
    env = os.environ.get("DEEPKERN_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, args.threads)


# -----------------------------
# Subcommands
# -----------------------------

def _cmd_fit(args):
    cfg = _load_config(args.config)
    dataset = read_dataset_csv(args.data)
    outer, inner = _build_kernels(cfg, dataset.X.shape[1])
    seed = int(cfg.get("seed", 0))
    config = _build_opt_config(cfg, stream_seed(seed, "init"))
    threads = _resolve_threads(args)
    mode = cfg.get("mode", "interpolate")
    gamma = float(cfg.get("gamma", 0.0))

    if mode == "interpolate":
        lam = mu = 0.0
    elif mode == "regress":
        if "lambda" in cfg and "mu" in cfg:
            lam, mu = float(cfg["lambda"]), float(cfg["mu"])
        else:
            plan = _build_cv_plan(cfg, seed)
            if plan is None:
                raise ValueError("regression needs 'lambda' and 'mu', or a 'cv' block")
            cv = cross_validate(dataset, inner, outer, plan, config, threads=threads)
            lam, mu = cv.best_lambda, cv.best_mu
            print(f"cv.best_lambda={lam!r}")
            print(f"cv.best_mu={mu!r}")
        if not (lam > 0.0 and mu > 0.0):
            raise ValueError("regression requires positive lambda and mu")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    model, result = fit_two_layer(dataset.X, dataset.y, inner, outer,
                                  lam=lam, mu=mu, gamma=gamma,
                                  config=config, threads=threads)
    save_model(model, args.out)
    print(f"objective={result.objective!r}")
    print(f"restart_index={result.restart_index}")
    print(f"grad_norm={result.grad_norm!r}")
    print(f"model={args.out}")
    return 0


def _cmd_predict(args):
    model = load_model(args.model)
    pts = read_points_csv(args.points)
    d = model.X.shape[1]
    if pts.size and pts.shape[1] != d:
        raise ValueError(f"points have dimension {pts.shape[1]}, model expects {d}")
    print(",".join(f"x{i+1}" for i in range(d)) + ",prediction")
    if pts.size:
        preds = predict_two_layer(model, pts)
        for row, p in zip(pts, preds):
            print(",".join(repr(float(v)) for v in row) + f",{float(p)!r}")
    return 0


_DEMO_FIGURES = ("int-h1", "int-h2", "reg-h1", "reg-h2", "linout-h1", "linout-h2")


def _demo_setup(figure, scale, seed):
    tf = "h1" if figure.endswith("h1") else "h2"
    n, restarts = (100, 64) if scale == "paper" else (50, 16)
    plan = SamplingPlan(n_samples=n, noise_sigma=0.01, seed=seed)
    config = BfgsConfig(restarts=restarts, seed=0)
    # CV cells get a slimmer budget; the final refit uses the full one
    cv_config = BfgsConfig(restarts=max(2, restarts // 8), max_iters=100, seed=0)
    return tf, plan, config, cv_config


def _demo_cv_grid(grid, scale):
    # desk scale thins the parameter grid to keep the demo minute-scale
    return tuple(grid) if scale == "paper" else tuple(grid[::2])


def _cmd_demo(args):
    seed = args.seed
    threads = _resolve_threads(args)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    tf, plan, config, cv_config = _demo_setup(args.figure, args.scale, seed)
    kind = args.figure.split("-")[0]

    if kind == "int":
        degree = 1 if tf == "h1" else 2
        outer = TensorMaternKernel(order=1, dim=2)
        inner = DiagScaledKernel(PolyKernel(degree=degree, dim=2), weights=(1.0, 1.0))
        report = run_comparison(tf, outer, inner, plan, mode="interpolation",
                                config=config, threads=threads)
        _write_demo_outputs(out_dir, report, {"two_layer": report.two_layer_model})
    elif kind == "reg":
        degree = 1 if tf == "h1" else 2
        outer = GaussKernel(sigma=0.1, dim=2)
        inner = DiagScaledKernel(PolyKernel(degree=degree, dim=2), weights=(1.0, 1.0))
        grid = _demo_cv_grid(dyadic_grid(), args.scale)
        cv_plan = CvPlan(lambda_grid=grid, mu_grid=grid)
        report = run_comparison(tf, outer, inner, plan, cv_plan=cv_plan, mode="regression",
                                config=config, cv_config=cv_config, threads=threads)
        _write_demo_outputs(out_dir, report, {"two_layer": report.two_layer_model})
    else:   # linout: linear versus nonlinear outer kernel on the mixture inner kernel
        mixture = DiagMixtureKernel(components=(
            GaussKernel(sigma=0.1, dim=2),
            GaussKernel(sigma=1.0, dim=2),
            GaussKernel(sigma=10.0, dim=2),
            PolyKernel(degree=1, dim=2),
            PolyKernel(degree=2, dim=2),
        ))
        grid = _demo_cv_grid(decade_grid(), args.scale)
        cv_plan = CvPlan(lambda_grid=grid, mu_grid=grid)
        rep1 = run_comparison(tf, PolyKernel(degree=1, dim=5), mixture, plan,
                              cv_plan=cv_plan, mode="regression",
                              config=config, cv_config=cv_config, threads=threads)
        rep2 = run_comparison(tf, TensorMaternKernel(order=1, dim=5), mixture, plan,
                              cv_plan=cv_plan, mode="regression",
                              config=config, cv_config=cv_config, threads=threads)
        lines = ["figure=" + args.figure, "scale=" + args.scale]
        lines += ["setting1." + ln for ln in rep1.lines()]
        lines += ["setting2." + ln for ln in rep2.lines()]
        with open(os.path.join(out_dir, "report.txt"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
        write_error_grid_csv(os.path.join(out_dir, "setting1_error.csv"), rep1.two_layer.error)
        write_error_grid_csv(os.path.join(out_dir, "setting2_error.csv"), rep2.two_layer.error)
        write_error_grid_csv(os.path.join(out_dir, "single_layer_error.csv"), rep2.single_layer.error)
        grid = EvalGrid()
        write_inner_map_csv(os.path.join(out_dir, "setting1_inner_map.csv"), rep1.two_layer_model, grid)
        write_inner_map_csv(os.path.join(out_dir, "setting2_inner_map.csv"), rep2.two_layer_model, grid)
        print("\n".join(lines))
        return 0

    with open(os.path.join(out_dir, "report.txt")) as fh:
        print(fh.read(), end="")
    return 0


def _write_demo_outputs(out_dir, report, models):
    write_report(os.path.join(out_dir, "report.txt"), report)
    write_error_grid_csv(os.path.join(out_dir, "two_layer_error.csv"), report.two_layer.error)
    write_error_grid_csv(os.path.join(out_dir, "single_layer_error.csv"), report.single_layer.error)
    write_inner_map_csv(os.path.join(out_dir, "inner_map.csv"), models["two_layer"], EvalGrid())


def _cmd_cv(args):
    cfg = _load_config(args.config)
    dataset = read_dataset_csv(args.data)
    outer, inner = _build_kernels(cfg, dataset.X.shape[1])
    seed = int(cfg.get("seed", 0))
    plan = _build_cv_plan(cfg, seed)
    if plan is None:
        raise ValueError("config has no 'cv' block")
    config = _build_opt_config(cfg, stream_seed(seed, "init"))
    cv = cross_validate(dataset, inner, outer, plan, config, threads=_resolve_threads(args))
    print(f"best_lambda={cv.best_lambda!r}")
    print(f"best_mu={cv.best_mu!r}")
    means = cv.mean_scores
    for il, lam in enumerate(cv.lambda_grid):
        for im, mu in enumerate(cv.mu_grid):
            print(f"score.lambda={lam!r}.mu={mu!r}={means[il, im]!r}")
    return 0


def _cmd_gradcheck(args):
    cfg = _load_config(args.config)
    dataset = read_dataset_csv(args.data)
    outer, inner = _build_kernels(cfg, dataset.X.shape[1])
    seed = int(cfg.get("seed", 0))
    prob = TwoLayerProblem(dataset.X, dataset.y, inner, outer)
    rng = stream_rng(seed, "init")
    c = rng.standard_normal(prob.n_coeffs)
    mode = cfg.get("mode", "interpolate")
    if mode == "interpolate":
        gamma = float(cfg.get("gamma", 0.0))
        f = lambda v: objective_interp(v, prob, gamma)
        g = lambda v: grad_objective_interp(v, prob, gamma)
    else:
        lam, mu = float(cfg.get("lambda", 1.0)), float(cfg.get("mu", 1.0))
        f = lambda v: objective_reg(v, prob, lam, mu)
        g = lambda v: grad_objective_reg(v, prob, lam, mu)
    if f(c) >= SENTINEL:
        raise OptimizationError("random coefficient draw landed in the singular region")
    report = grad_check(f, g, c, h=args.step, rel_tol=args.rel_tol)
    print(f"max_rel_err={report.max_rel_err!r}")
    print(f"worst_component={report.worst_component}")
    print(f"passed={report.passed}")
    if not report.passed:
        raise OptimizationError(
            f"gradient check failed: max relative error {report.max_rel_err:.3e}"
        )
    return 0


def _cmd_error_grid(args):
    model = load_model(args.model)
    grid = EvalGrid(meshwidth=args.meshwidth)
    err = pointwise_error_grid(lambda pts: predict_two_layer(model, pts), args.function, grid)
    out = args.out or "/dev/stdout"
    write_error_grid_csv(out, err)
    print(f"mean_error={err.mean_error!r}", file=sys.stderr)
    print(f"max_error={err.max_error!r}", file=sys.stderr)
    print(f"frac_above_10pct={err.frac_above_10pct!r}", file=sys.stderr)
    return 0


def _cmd_inner_map(args):
    model = load_model(args.model)
    grid = EvalGrid(meshwidth=args.meshwidth)
    write_inner_map_csv(args.out or "/dev/stdout", model, grid)
    return 0


# -----------------------------
# Parser and entry point
# -----------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="deepkern")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for restarts and CV cells")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a two-layer model from a CSV dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("predict", help="evaluate a saved model at points")
    p.add_argument("--model", required=True)
    p.add_argument("--points", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("demo", help="reproduce a comparison experiment")
    p.add_argument("--figure", required=True, choices=_DEMO_FIGURES)
    p.add_argument("--scale", default="desk", choices=("paper", "desk"))
    p.add_argument("--out-dir", default="demo_out")
    p.add_argument("--seed", type=int, default=7041)
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("cv", help="cross-validate (lambda, mu) on a dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("gradcheck", help="verify analytic gradients against differences")
    p.add_argument("--config", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--step", type=float, default=1e-6)
    p.add_argument("--rel-tol", type=float, default=1e-5)
    p.set_defaults(func=_cmd_gradcheck)

    p = sub.add_parser("error-grid", help="pointwise error grid of a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--function", required=True, choices=("h1", "h2"))
    p.add_argument("--meshwidth", type=float, default=1.0 / 50.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_error_grid)

    p = sub.add_parser("inner-map", help="dump the learned inner transformation on a grid")
    p.add_argument("--model", required=True)
    p.add_argument("--meshwidth", type=float, default=1.0 / 50.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_inner_map)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SingularMatrixError, OptimizationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
