"""scikit-learn style wrappers around the functional API."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ensemble import Distribution, EnsembleConfig
from .experiment import ExperimentConfig, simulate, summarize
from .links import LinkFunction, parse_link
from .spectral import eigenvalues_symmetric
from .validation import check_matrix_stack, check_moment_orders, check_positive_int

__all__ = ["SpectralMomentTransformer", "EnsembleMomentEstimator"]


class SpectralMomentTransformer(TransformerMixin, BaseEstimator):
    """Map symmetric matrices to their normalized spectral moments.

    ``X`` is one ``(N, N)`` matrix or a stack ``(m, N, N)``; ``transform``
    returns an ``(m, len(ks))`` array of ``N^{-(k/2+1)} sum(lambda^k)``.
    """

    def __init__(self, ks=(2, 4, 6)):
        self.ks = ks

    def fit(self, X, y=None):
        check_moment_orders(self.ks)
        X = check_matrix_stack(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        ks = check_moment_orders(self.ks)
        X = check_matrix_stack(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"fitted on N={self.n_features_in_}, got N={X.shape[1]}")
        n = X.shape[1]
        out = np.empty((X.shape[0], len(ks)))
        for i, a in enumerate(X):
            x = eigenvalues_symmetric(a) / np.sqrt(n)
            out[i] = [1.0 if k == 0 else np.sum(x**k) / n for k in ks]
        return out


class EnsembleMomentEstimator(BaseEstimator):
    """Monte Carlo estimate of the limiting moments of one link ensemble.

    ``fit`` takes no data; it simulates ``trials`` matrices of size ``n``.
    """

    def __init__(self, link="T:1:1", n=1000, trials=200, seed=0, ks=(2, 4, 6), distribution="standard_normal", workers=1):
        self.link = link
        self.n = n
        self.trials = trials
        self.seed = seed
        self.ks = ks
        self.distribution = distribution
        self.workers = workers

    def _link(self) -> LinkFunction:
        if isinstance(self.link, LinkFunction):
            return self.link
        if isinstance(self.link, dict):
            return LinkFunction.from_dict(self.link)
        return parse_link(str(self.link))

    def fit(self, X=None, y=None):
        ens = EnsembleConfig(
            link=self._link(),
            n=check_positive_int(self.n, "n", 2),
            distribution=Distribution.parse(self.distribution),
            seed=self.seed,
            trials=check_positive_int(self.trials, "trials"),
        )
        cfg = ExperimentConfig(ensemble=ens, moments=tuple(self.ks), workers=check_positive_int(self.workers, "workers"))
        raw = simulate(cfg)
        self.per_trial_ = raw.per_trial
        self.moments_ = raw.mean
        self.std_errors_ = raw.std_error
        self.reports_ = summarize(raw)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "moments_")
        return self.moments_.copy()
