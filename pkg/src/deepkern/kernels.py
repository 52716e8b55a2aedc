"""Closed-form scalar and matrix-valued kernels with first derivatives.

Three scalar families are provided:

    poly            k(x, y) = (x.y + 1)^p
    gauss           k(x, y) = exp(-|x - y|^2 / (2 sigma^2))
    tensor_matern   k(x, y) = prod_i kappa_{s-1/2}(|x_i - y_i|) |x_i - y_i|^{s-1/2}

where kappa_a is the modified Bessel function of the second kind.  For
integer order s the per-coordinate factor collapses to the smooth closed
form sqrt(pi/2) * exp(-r) * P_{s-1}(r) with a polynomial P, so no special
function library is needed; the r -> 0 limit is built in.

Matrix-valued (diagonal) kernels come in two flavors: a scalar kernel
scaled by a per-output weight vector, and a diagonal mixture of distinct
scalar kernels.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def bessel_k_half(n, r):
    """Modified Bessel function of the second kind at half-integer order n + 1/2.

    Uses the terminating series K_{n+1/2}(r) = sqrt(pi/(2r)) e^{-r}
    sum_k (n+k)!/(k!(n-k)!) (2r)^{-k}.  Requires r > 0 (the kernel
    evaluation handles the r -> 0 limit separately).
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"order index must be a nonnegative integer, got {n!r}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("bessel_k_half requires r > 0")
    acc = np.zeros_like(r)
    for k in range(int(n) + 1):
        a_nk = math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k))
        acc = acc + a_nk * (2.0 * r) ** (-k)
    out = np.sqrt(np.pi / (2.0 * r)) * np.exp(-r) * acc
    return out if out.ndim else float(out)


@lru_cache(maxsize=None)
def _matern_polys(order):
    """Coefficient arrays (P, P') of the degree-(order-1) Matern polynomial.

    The univariate tensor-Matern factor of order s is
    phi_s(r) = r^{s-1/2} K_{s-1/2}(r) = sqrt(pi/2) exp(-r) P_{s-1}(r)
    with P_n(r) = sum_k (n+k)!/(k!(n-k)!) r^{n-k} / 2^k; P_n(0) gives the
    coincidence limit 2^{s-3/2} Gamma(s-1/2) automatically.
    """
    n = order - 1
    coeffs = np.array(
        [math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) / 2.0**k
         for k in range(n + 1)]
    )
    return coeffs, np.polyder(coeffs) if n > 0 else np.zeros(1)


def _check_pair(kernel, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (kernel.dim,) or y.shape != (kernel.dim,):
        raise ValueError(
            f"points must have shape ({kernel.dim},), got {x.shape} and {y.shape}"
        )
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("kernel arguments must be finite")
    return x, y


def _check_points(kernel, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != kernel.dim:
        raise ValueError(f"points have dimension {X.shape[1]}, kernel expects {kernel.dim}")
    return X


@dataclass(frozen=True)
class PolyKernel:
    """Polynomial kernel (x.y + 1)^p on R^dim."""

    degree: int
    dim: int

    def __post_init__(self):
        if self.degree < 1 or int(self.degree) != self.degree:
            raise ValueError("polynomial degree must be a positive integer")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    family = "poly"

    def __call__(self, x, y):
        x, y = _check_pair(self, x, y)
        return float((x @ y + 1.0) ** self.degree)

    def cross(self, X, Z):
        X, Z = _check_points(self, X), _check_points(self, Z)
        return (X @ Z.T + 1.0) ** self.degree

    def grad2(self, x, y):
        """Gradient of k(x, y) with respect to y."""
        x, y = _check_pair(self, x, y)
        return self.degree * (x @ y + 1.0) ** (self.degree - 1) * x

    def grad2_cross(self, X, Z):
        """(n, m, dim) array of grad2 over all pairs (X_i, Z_j)."""
        X, Z = _check_points(self, X), _check_points(self, Z)
        base = self.degree * (X @ Z.T + 1.0) ** (self.degree - 1)
        return base[:, :, None] * X[:, None, :]


@dataclass(frozen=True)
class GaussKernel:
    """Gaussian kernel exp(-|x - y|^2 / (2 sigma^2)) on R^dim."""

    sigma: float
    dim: int

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise ValueError("sigma must be positive")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    family = "gauss"

    def __call__(self, x, y):
        x, y = _check_pair(self, x, y)
        d = x - y
        return float(np.exp(-(d @ d) / (2.0 * self.sigma**2)))

    def cross(self, X, Z):
        X, Z = _check_points(self, X), _check_points(self, Z)
        sq = np.sum((X[:, None, :] - Z[None, :, :]) ** 2, axis=-1)
        return np.exp(-sq / (2.0 * self.sigma**2))

    def grad2(self, x, y):
        x, y = _check_pair(self, x, y)
        d = x - y
        return float(np.exp(-(d @ d) / (2.0 * self.sigma**2))) * d / self.sigma**2

    def grad2_cross(self, X, Z):
        X, Z = _check_points(self, X), _check_points(self, Z)
        diff = X[:, None, :] - Z[None, :, :]
        k = np.exp(-np.sum(diff**2, axis=-1) / (2.0 * self.sigma**2))
        return k[:, :, None] * diff / self.sigma**2


@dataclass(frozen=True)
class TensorMaternKernel:
    """Tensor product of univariate Matern factors of integer order s >= 1.

    Differentiable away from coordinate coincidences for s = 1 (the
    per-coordinate factor sqrt(pi/2) e^{-r} has a kink at r = 0); the
    derivative there uses the symmetric subgradient 0, which np.sign
    supplies for free.
    """

    order: int
    dim: int

    def __post_init__(self):
        if self.order < 1 or int(self.order) != self.order:
            raise ValueError("Matern order must be a positive integer")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    family = "tensor_matern"

    def _factors(self, R):
        poly, _ = _matern_polys(self.order)
        return SQRT_HALF_PI * np.exp(-R) * np.polyval(poly, R)

    def _dfactors(self, R):
        # d/dr [sqrt(pi/2) e^{-r} P(r)] = sqrt(pi/2) e^{-r} (P'(r) - P(r))
        poly, dpoly = _matern_polys(self.order)
        return SQRT_HALF_PI * np.exp(-R) * (np.polyval(dpoly, R) - np.polyval(poly, R))

    def __call__(self, x, y):
        x, y = _check_pair(self, x, y)
        return float(np.prod(self._factors(np.abs(x - y))))

    def cross(self, X, Z):
        X, Z = _check_points(self, X), _check_points(self, Z)
        R = np.abs(X[:, None, :] - Z[None, :, :])
        return np.prod(self._factors(R), axis=-1)

    def grad2(self, x, y):
        x, y = _check_pair(self, x, y)
        return self.grad2_cross(x[None, :], y[None, :])[0, 0]

    def grad2_cross(self, X, Z):
        X, Z = _check_points(self, X), _check_points(self, Z)
        diff = Z[None, :, :] - X[:, None, :]
        R = np.abs(diff)
        F = self._factors(R)
        dF = self._dfactors(R) * np.sign(diff)
        out = np.empty_like(F)
        for i in range(self.dim):
            others = [j for j in range(self.dim) if j != i]
            out[:, :, i] = dF[:, :, i] * np.prod(F[:, :, others], axis=-1)
        return out


SCALAR_FAMILIES = {
    "poly": PolyKernel,
    "gauss": GaussKernel,
    "tensor_matern": TensorMaternKernel,
}


@dataclass(frozen=True)
class DiagScaledKernel:
    """Matrix-valued kernel K_I(x, y) * diag(a) for a scalar kernel K_I."""

    scalar: object
    weights: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1 or np.any(w <= 0.0):
            raise ValueError("weights must be a vector of positive reals")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    family = "diag_scaled"

    @property
    def out_dim(self):
        return len(self.weights)

    @property
    def dim(self):
        return self.scalar.dim

    def diag_value(self, x, y):
        """Diagonal of the D x D kernel matrix at a single pair."""
        return self.scalar(x, y) * np.asarray(self.weights)

    def eval_matrix(self, x, y):
        return np.diag(self.diag_value(x, y))

    def diag_cross(self, X, Z):
        """(D, n, m) stack of per-output scalar Gram blocks."""
        k = self.scalar.cross(X, Z)
        return np.asarray(self.weights)[:, None, None] * k[None, :, :]


@dataclass(frozen=True)
class DiagMixtureKernel:
    """Diagonal matrix-valued kernel with one scalar kernel per output."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 1:
            raise ValueError("mixture needs at least one component")
        dims = {k.dim for k in comps}
        if len(dims) != 1:
            raise ValueError("mixture components must share the input dimension")
        object.__setattr__(self, "components", comps)

    family = "diag_mixture"

    @property
    def out_dim(self):
        return len(self.components)

    @property
    def dim(self):
        return self.components[0].dim

    def diag_value(self, x, y):
        return np.array([k(x, y) for k in self.components])

    def eval_matrix(self, x, y):
        return np.diag(self.diag_value(x, y))

    def diag_cross(self, X, Z):
        return np.stack([k.cross(X, Z) for k in self.components])


# -----------------------------
# Parameter-dict conversion (config files, model records)
# -----------------------------

def scalar_to_params(kernel):
    if kernel.family == "poly":
        return {"family": "poly", "p": kernel.degree, "dim": kernel.dim}
    if kernel.family == "gauss":
        return {"family": "gauss", "sigma": kernel.sigma, "dim": kernel.dim}
    if kernel.family == "tensor_matern":
        return {"family": "tensor_matern", "s": kernel.order, "dim": kernel.dim}
    raise ValueError(f"unknown scalar kernel {kernel!r}")


def scalar_from_params(params):
    family = params.get("family")
    dim = int(params["dim"])
    if family == "poly":
        return PolyKernel(degree=int(params["p"]), dim=dim)
    if family == "gauss":
        return GaussKernel(sigma=float(params["sigma"]), dim=dim)
    if family == "tensor_matern":
        return TensorMaternKernel(order=int(params["s"]), dim=dim)
    raise ValueError(f"unknown scalar kernel family {family!r}")


def matrix_to_params(kernel):
    if kernel.family == "diag_scaled":
        return {
            "family": "diag_scaled",
            "weights": list(kernel.weights),
            "components": [scalar_to_params(kernel.scalar)],
        }
    if kernel.family == "diag_mixture":
        return {
            "family": "diag_mixture",
            "components": [scalar_to_params(k) for k in kernel.components],
        }
    raise ValueError(f"unknown matrix kernel {kernel!r}")


def matrix_from_params(params):
    family = params.get("family")
    comps = [scalar_from_params(p) for p in params["components"]]
    if family == "diag_scaled":
        if len(comps) != 1:
            raise ValueError("diag_scaled takes exactly one scalar component")
        return DiagScaledKernel(scalar=comps[0], weights=tuple(float(w) for w in params["weights"]))
    if family == "diag_mixture":
        return DiagMixtureKernel(components=tuple(comps))
    raise ValueError(f"unknown matrix kernel family {family!r}")
