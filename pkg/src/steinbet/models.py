"""Target model families: scores, payoff floors, and exact or MCMC samplers.

Each model knows three things about its (possibly unnormalized) density p:

* ``score(x)``            -- grad log p(x), free of the normalizing constant;
* ``payoff_bound(x)``     -- a function M(x) >= -inf_y h(y, x), so the
                             score-kernel payoff normalized by running
                             M-averages is bounded below by -1;
* a sampler               -- exact for the Gaussian and tanh-perturbed
                             families, two-block Gibbs for the RBM.

Bounds may be loosened by a multiplier >= 1; validity is preserved since a
larger M only makes the floor more conservative.

Reproducibility convention: every sampler takes a ``numpy.random.Generator``
(PCG64 is used repo-wide) and identical generators yield identical draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError, SamplerError

__all__ = [
    "GaussianModel",
    "IntractableModel",
    "GaussianBernoulliRbm",
    "structured_rbm",
    "sample",
]

_PROPOSAL_CAP = 10**6  # rejection-sampler proposals allowed per accepted draw


def _rows(x, dim, what="x"):
    """Coerce a single point or a stack of points to (n, d); remember which."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1 or (x.ndim == 0 and dim == 1)
    x = np.atleast_2d(x if x.ndim > 0 else x.reshape(1))
    if x.shape[1] != dim:
        raise ValueError(f"{what} has dimension {x.shape[1]}, model expects {dim}")
    return x, single


def _check_scale(scale):
    if not np.isfinite(scale) or scale < 1.0:
        raise ValueError(f"bound multiplier must be >= 1, got {scale}")
    return float(scale)


@dataclass(frozen=True)
class GaussianModel:
    """Unit-covariance Gaussian with mean vector ``mean`` (any dimension)."""

    mean: np.ndarray

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.mean, dtype=float))
        if m.ndim != 1 or m.size < 1 or not np.isfinite(m).all():
            raise ValueError("mean must be a finite vector")
        object.__setattr__(self, "mean", m)

    @property
    def dim(self) -> int:
        return self.mean.size

    def score(self, x) -> np.ndarray:
        x, single = _rows(x, self.dim)
        s = self.mean - x
        return s[0] if single else s

    def payoff_bound(self, x, scale: float = 1.0):
        """a (1 + a) + 3 with a = ||x - mean||, times the multiplier."""
        scale = _check_scale(scale)
        x, single = _rows(x, self.dim)
        a = np.linalg.norm(x - self.mean, axis=1)
        m = scale * (a * (1.0 + a) + 3.0)
        return float(m[0]) if single else m

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("n must be >= 1")
        return self.mean + rng.standard_normal((n, self.dim))

    def log_unnormalized_density(self, x):
        x, single = _rows(x, self.dim)
        v = -0.5 * np.einsum("ij,ij->i", x - self.mean, x - self.mean)
        return float(v[0]) if single else v


@dataclass(frozen=True)
class IntractableModel:
    """Standard Gaussian on R^3 tilted by tanh perturbations.

    Density proportional to exp(t1*tanh(x1) + t2*tanh(x2) - ||x||^2 / 2);
    the normalizing constant has no closed form, but the score does.  At
    theta = 0 this is exactly N(0, I_3).
    """

    theta: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float).reshape(-1)
        if t.size != 2 or not np.isfinite(t).all():
            raise ValueError("theta must be a finite pair")
        object.__setattr__(self, "theta", t)

    @property
    def dim(self) -> int:
        return 3

    def score(self, x) -> np.ndarray:
        x, single = _rows(x, 3)
        s = -x.copy()
        s[:, :2] += self.theta * (1.0 - np.tanh(x[:, :2]) ** 2)
        if not np.isfinite(s).all():
            raise ModelError("non-finite score")
        return s[0] if single else s

    def payoff_bound(self, x, scale: float = 1.0):
        """(||theta|| + ||s(x)|| + 1) ||s(x)|| + ||theta|| + 1, scaled."""
        scale = _check_scale(scale)
        x, single = _rows(x, 3)
        tn = np.linalg.norm(self.theta)
        sn = np.linalg.norm(self.score(x), axis=1)
        m = scale * ((tn + sn + 1.0) * sn + tn + 1.0)
        return float(m[0]) if single else m

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Exact rejection sampling with a standard Gaussian proposal.

        The tilt is bounded by exp(|t1| + |t2|), so accepting a proposal z
        with probability exp(t1*tanh(z1) + t2*tanh(z2) - |t1| - |t2|) is an
        exact envelope scheme; the acceptance rate is bounded away from 0.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        t1, t2 = self.theta
        budget = _PROPOSAL_CAP * n
        out = np.empty((n, 3))
        got = 0
        used = 0
        chunk = max(64, 2 * n)
        while got < n:
            if used >= budget:
                raise SamplerError(
                    f"rejection sampler used {used} proposals for {got}/{n} draws"
                )
            z = rng.standard_normal((chunk, 3))
            log_acc = t1 * np.tanh(z[:, 0]) + t2 * np.tanh(z[:, 1]) - abs(t1) - abs(t2)
            keep = z[rng.random(chunk) < np.exp(log_acc)]
            used += chunk
            take = min(n - got, keep.shape[0])
            out[got : got + take] = keep[:take]
            got += take
        return out

    def log_unnormalized_density(self, x):
        x, single = _rows(x, 3)
        v = self.theta @ np.tanh(x[:, :2]).T - 0.5 * np.einsum("ij,ij->i", x, x)
        return float(v[0]) if single else v


@dataclass(frozen=True)
class GaussianBernoulliRbm:
    """Restricted Boltzmann machine with Gaussian visibles and +/-1 hiddens.

    Joint density proportional to
    exp(x' W h / 2 + b' x + c' h - ||x||^2 / 2) over x in R^d, h in {-1, 1}^dh.
    Summing out h leaves an unnormalized marginal whose score is available in
    closed form; the log marginal itself factorizes over hidden units, so it
    is cheap for any dh even though the normalizing constant is not.

    ``spectral_bound=True`` uses the exact operator norm of W in the payoff
    bound; the default uses the Frobenius norm, which dominates it and avoids
    an SVD.
    """

    weights: np.ndarray
    visible_bias: np.ndarray
    hidden_bias: np.ndarray
    spectral_bound: bool = False
    _w_norm: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        b = np.atleast_1d(np.asarray(self.visible_bias, dtype=float))
        c = np.atleast_1d(np.asarray(self.hidden_bias, dtype=float))
        if w.ndim != 2 or w.shape != (b.size, c.size):
            raise ValueError(
                f"weights shape {w.shape} incompatible with biases ({b.size}, {c.size})"
            )
        if not (np.isfinite(w).all() and np.isfinite(b).all() and np.isfinite(c).all()):
            raise ValueError("RBM parameters must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "visible_bias", b)
        object.__setattr__(self, "hidden_bias", c)
        norm = (
            float(np.linalg.norm(w, 2)) if self.spectral_bound
            else float(np.linalg.norm(w))
        )
        object.__setattr__(self, "_w_norm", norm)

    @property
    def dim(self) -> int:
        return self.visible_bias.size

    @property
    def hidden_dim(self) -> int:
        return self.hidden_bias.size

    def _activation(self, x):
        return 0.5 * (x @ self.weights) + self.hidden_bias

    def score(self, x) -> np.ndarray:
        x, single = _rows(x, self.dim)
        s = self.visible_bias - x + 0.5 * np.tanh(self._activation(x)) @ self.weights.T
        if not np.isfinite(s).all():
            raise ModelError("non-finite score")
        return s[0] if single else s

    def payoff_bound(self, x, scale: float = 1.0):
        """(||s(x)|| + 1 + q) ||s(x)|| + q + 1 with q = ||W|| sqrt(dh), scaled."""
        scale = _check_scale(scale)
        x, single = _rows(x, self.dim)
        q = self._w_norm * np.sqrt(self.hidden_dim)
        sn = np.linalg.norm(self.score(x), axis=1)
        m = scale * ((sn + 1.0 + q) * sn + q + 1.0)
        return float(m[0]) if single else m

    def sample_gibbs(
        self,
        rng: np.random.Generator,
        n: int,
        burn_in: int = 1000,
        thin: int = 1,
    ) -> np.ndarray:
        """Two-block Gibbs chain, keeping every ``thin``-th state after burn-in.

        One sweep resamples h | x (independent signs with logistic
        probabilities) and then x | h ~ N(b + W h / 2, I).
        """
        if n < 1 or burn_in < 0 or thin < 1:
            raise ValueError("need n >= 1, burn_in >= 0, thin >= 1")
        d, dh = self.dim, self.hidden_dim
        out = np.empty((n, d))
        x = rng.standard_normal(d)
        kept = 0
        sweep = 0
        while kept < n:
            sweep += 1
            p_plus = 1.0 / (1.0 + np.exp(-2.0 * self._activation(x)))
            h = np.where(rng.random(dh) < p_plus, 1.0, -1.0)
            x = self.visible_bias + 0.5 * (self.weights @ h) + rng.standard_normal(d)
            if sweep > burn_in and (sweep - burn_in) % thin == 0:
                out[kept] = x
                kept += 1
        return out

    def log_unnormalized_density(self, x):
        """log sum_h p~(x, h); the sum over hidden units factorizes.

        Uses log(2 cosh(a)) = |a| + log1p(exp(-2|a|)) for overflow safety.
        """
        x, single = _rows(x, self.dim)
        a = np.abs(self._activation(x))
        v = (
            x @ self.visible_bias
            - 0.5 * np.einsum("ij,ij->i", x, x)
            + np.sum(a + np.log1p(np.exp(-2.0 * a)), axis=1)
        )
        return float(v[0]) if single else v


def structured_rbm(
    d: int = 20,
    d_h: int = 5,
    per_hidden: int = 5,
    weight_shift: float = 0.0,
    visible_bias: float = 0.0,
    spectral_bound: bool = False,
) -> GaussianBernoulliRbm:
    """RBM with sparse 0/1 connectivity: hidden unit j drives ``per_hidden``
    consecutive visible units starting at j * (d // d_h), wrapping around,
    so hidden units partition the visibles when d = per_hidden * d_h and
    overlap in a chain (never duplicating a column) when d is smaller.

    ``weight_shift`` adds a constant to every weight entry (including the
    zeros) and ``visible_bias`` fills the visible bias vector; both default
    to the base configuration.
    """
    w = np.zeros((d, d_h))
    stride = max(1, d // d_h)
    for j in range(d_h):
        for k in range(per_hidden):
            w[(j * stride + k) % d, j] = 1.0
    w += weight_shift
    return GaussianBernoulliRbm(
        weights=w,
        visible_bias=np.full(d, float(visible_bias)),
        hidden_bias=np.zeros(d_h),
        spectral_bound=spectral_bound,
    )


def sample(model, rng: np.random.Generator, n: int, burn_in: int = 1000, thin: int = 1):
    """Draw n points from a model, dispatching to its native sampler."""
    if isinstance(model, GaussianBernoulliRbm):
        return model.sample_gibbs(rng, n, burn_in=burn_in, thin=thin)
    return model.sample(rng, n)
