"""Random field identification: synthesis, spectral estimation and model fitting."""

import json

import numpy as np

from . import _core
from ._core import (
    Periodogram,
    RfidError,
    homogeneity,
    load_periodogram,
    periodogram,
    run_cli,
    sample_orientations,
    schmid_factors,
    set_thread_count,
    voronoi,
)

__all__ = [
    "Periodogram",
    "RfidError",
    "covariance",
    "fit",
    "homogeneity",
    "load_periodogram",
    "model_variance",
    "periodogram",
    "psd",
    "residual_epsilon",
    "run_cli",
    "sample_orientations",
    "schmid_factors",
    "set_thread_count",
    "simulate",
    "voronoi",
]


def _model_text(model):
    return model if isinstance(model, str) else json.dumps(model)


def psd(model, fx, fy):
    fx, fy = np.broadcast_arrays(np.asarray(fx, float), np.asarray(fy, float))
    return _core.psd(_model_text(model), np.ascontiguousarray(fx), np.ascontiguousarray(fy))


def covariance(model, hx, hy):
    hx, hy = np.broadcast_arrays(np.asarray(hx, float), np.asarray(hy, float))
    return _core.covariance(_model_text(model), np.ascontiguousarray(hx), np.ascontiguousarray(hy))


def model_variance(model):
    return _core.model_variance(_model_text(model))


def simulate(model, nx, ny, dx=1.0, dy=1.0, **kw):
    """Realizations as an array of shape (count, ny, nx)."""
    return _core.simulate(_model_text(model), nx, ny, dx, dy, **kw)


def fit(p, families="mixed", **kw):
    """Fit report as a dict; a list of families selects the best by epsilon."""
    if isinstance(families, str):
        families = families.split(",")
    return json.loads(_core.fit(p, list(families), **kw))


def residual_epsilon(p, model, target="psd"):
    return _core.residual_epsilon(p, _model_text(model), target)
