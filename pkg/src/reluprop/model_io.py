"""JSON serialization of models, input distributions, cases and reports.

Schemas (all floats serialized with round-trip-exact ``repr``):

* model: ``{"schema_version": "1", "m": 2, "p": 12, "A": [[...]],
  "c": [...], "beta": [...], "d": 0.0,
  "standardization": {"shift": [...], "scale": [...]}}``
  ("standardization" optional; ``A`` is row-major m x p)
* distribution: ``{"schema_version": "1", "m": 2, "mean": [...],
  "cov": [[...]]}``
* case (for convergence studies): ``{"schema_version": "1",
  "model": <model object>, "dist": <distribution object>}``
* convergence CSV: header ``n,rmse_mean,rmse_variance``, one row per
  grid point.

An input standardization block is folded into the weights at load time
(``A' = diag(1/scale) A``, ``c' = c - A'^T shift``), so propagation and
point evaluation always operate in raw input units.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import RelupropError, SchemaError
from .propagate import GaussianDist, MlpModel

__all__ = [
    "DistFile",
    "ModelFile",
    "gen_dist",
    "gen_model",
    "load_case",
    "load_dist",
    "load_dist_file",
    "load_model",
    "load_model_file",
    "read_convergence_csv",
    "save_case",
    "save_dist_file",
    "save_json",
    "save_model_file",
    "write_convergence_csv",
]

SCHEMA_VERSION = "1"


def _require(data, field, kind, context=""):
    path = f"{context}{field}"
    if field not in data:
        raise SchemaError(f"missing field '{path}'", field=path)
    value = data[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"field '{path}' must be a number", field=path)
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"field '{path}' must be an integer", field=path)
        return value
    if not isinstance(value, kind):
        raise SchemaError(f"field '{path}' has wrong type", field=path)
    return value


def _as_vector(data, field, length, context=""):
    path = f"{context}{field}"
    raw = _require(data, field, list, context)
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError):
        raise SchemaError(f"field '{path}' is not a numeric array", field=path) from None
    if arr.shape != (length,):
        raise SchemaError(
            f"field '{path}' has shape {arr.shape}, expected ({length},)", field=path
        )
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"field '{path}' contains non-finite entries", field=path)
    return arr


def _as_matrix(data, field, rows, cols, context=""):
    path = f"{context}{field}"
    raw = _require(data, field, list, context)
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError):
        raise SchemaError(f"field '{path}' is not a numeric matrix", field=path) from None
    if arr.shape != (rows, cols):
        raise SchemaError(
            f"field '{path}' has shape {arr.shape}, expected ({rows}, {cols})", field=path
        )
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"field '{path}' contains non-finite entries", field=path)
    return arr


def _check_version(data, context=""):
    version = _require(data, "schema_version", str, context)
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {version!r}", field=f"{context}schema_version"
        )


@dataclass(frozen=True)
class ModelFile:
    """Schema-level model: raw weights plus optional input standardization."""

    m: int
    p: int
    a: np.ndarray
    c: np.ndarray
    beta: np.ndarray
    d: float
    standardization: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=np.float64))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=np.float64))
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=np.float64))
        object.__setattr__(self, "d", float(self.d))
        if self.standardization is not None:
            shift, scale = self.standardization
            object.__setattr__(
                self,
                "standardization",
                (np.asarray(shift, dtype=np.float64), np.asarray(scale, dtype=np.float64)),
            )

    @classmethod
    def from_dict(cls, data, context=""):
        _check_version(data, context)
        m = _require(data, "m", int, context)
        p = _require(data, "p", int, context)
        if m < 1 or p < 1:
            raise SchemaError(f"dimensions must be positive, got m={m} p={p}", field=f"{context}m")
        a = _as_matrix(data, "A", m, p, context)
        c = _as_vector(data, "c", p, context)
        beta = _as_vector(data, "beta", p, context)
        d = _require(data, "d", float, context)
        standardization = None
        if "standardization" in data and data["standardization"] is not None:
            block = _require(data, "standardization", dict, context)
            inner = f"{context}standardization."
            shift = _as_vector(block, "shift", m, inner)
            scale = _as_vector(block, "scale", m, inner)
            if np.any(scale <= 0.0):
                raise SchemaError(
                    "field 'standardization.scale' entries must be > 0",
                    field=f"{inner}scale",
                )
            standardization = (shift, scale)
        return cls(m=m, p=p, a=a, c=c, beta=beta, d=d, standardization=standardization)

    def to_dict(self):
        data = {
            "schema_version": SCHEMA_VERSION,
            "m": self.m,
            "p": self.p,
            "A": self.a.tolist(),
            "c": self.c.tolist(),
            "beta": self.beta.tolist(),
            "d": self.d,
        }
        if self.standardization is not None:
            shift, scale = self.standardization
            data["standardization"] = {"shift": shift.tolist(), "scale": scale.tolist()}
        return data

    def to_model(self):
        """Fold any standardization into the first affine stage."""
        if self.standardization is None:
            return MlpModel(w_in=self.a, b_in=self.c, w_out=self.beta, b_out=self.d)
        shift, scale = self.standardization
        w_in = self.a / scale[:, None]
        b_in = self.c - w_in.T @ shift
        return MlpModel(w_in=w_in, b_in=b_in, w_out=self.beta, b_out=self.d)


@dataclass(frozen=True)
class DistFile:
    """Schema-level Gaussian input distribution."""

    m: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "cov", np.asarray(self.cov, dtype=np.float64))

    @classmethod
    def from_dict(cls, data, context=""):
        _check_version(data, context)
        m = _require(data, "m", int, context)
        if m < 1:
            raise SchemaError(f"dimension must be positive, got m={m}", field=f"{context}m")
        mean = _as_vector(data, "mean", m, context)
        cov = _as_matrix(data, "cov", m, m, context)
        return cls(m=m, mean=mean, cov=cov)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "m": self.m,
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
        }

    def to_dist(self, context=""):
        try:
            return GaussianDist(mean=self.mean, cov=self.cov)
        except RelupropError as exc:
            raise SchemaError(f"field '{context}cov' invalid: {exc}", field=f"{context}cov") from exc


def _read_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path} must contain a JSON object")
    return data


def save_json(data, path):
    """Canonical JSON serialization: 2-space indent, repr-exact floats."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2)
        handle.write("\n")


def load_model_file(path):
    return ModelFile.from_dict(_read_json(path))


def load_model(path):
    """Load and validate a model file; standardization is folded in."""
    return load_model_file(path).to_model()


def save_model_file(model_file, path):
    save_json(model_file.to_dict(), path)


def load_dist_file(path):
    return DistFile.from_dict(_read_json(path))


def load_dist(path):
    """Load and validate a Gaussian input distribution."""
    return load_dist_file(path).to_dist()


def save_dist_file(dist_file, path):
    save_json(dist_file.to_dict(), path)


def load_case(path):
    """Load a (dist, model) pair from a case file."""
    data = _read_json(path)
    _check_version(data)
    model = ModelFile.from_dict(_require(data, "model", dict), context="model.").to_model()
    dist = DistFile.from_dict(_require(data, "dist", dict), context="dist.").to_dist(
        context="dist."
    )
    return dist, model


def save_case(model_file, dist_file, path):
    save_json(
        {
            "schema_version": SCHEMA_VERSION,
            "model": model_file.to_dict(),
            "dist": dist_file.to_dict(),
        },
        path,
    )


def gen_model(m, p, seed):
    """Reproducible random model fixture (not a trained network).

    Weight scales follow common initialization practice so hidden
    pre-activations stay O(1): A entries N(0, 1/m), beta N(0, 1/p),
    biases N(0, 0.1^2).
    """
    if m < 1 or p < 1:
        raise SchemaError(f"dimensions must be positive, got m={m} p={p}", field="m")
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 1.0 / math.sqrt(m), size=(m, p))
    beta = rng.normal(0.0, 1.0 / math.sqrt(p), size=p)
    c = rng.normal(0.0, 0.1, size=p)
    d = float(rng.normal(0.0, 0.1))
    return ModelFile(m=m, p=p, a=a, c=c, beta=beta, d=d)


def gen_dist(m, seed, mean_scale=1.0, cov_scale=1.0):
    """Reproducible random Gaussian input fixture with O(1) covariance."""
    rng = np.random.default_rng(seed)
    mean = rng.normal(0.0, mean_scale, size=m)
    b = rng.normal(0.0, 1.0, size=(m, m)) / math.sqrt(m)
    cov = cov_scale * (b @ b.T)
    cov = 0.5 * (cov + cov.T)
    return DistFile(m=m, mean=mean, cov=cov)


def write_convergence_csv(study, path):
    """CSV rows ``n,rmse_mean,rmse_variance`` with repr-exact floats."""
    lines = ["n,rmse_mean,rmse_variance"]
    for n, rmse_mean, rmse_variance in study.rows:
        lines.append(f"{n},{rmse_mean!r},{rmse_variance!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def read_convergence_csv(path):
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0] != "n,rmse_mean,rmse_variance":
        raise SchemaError(f"{path} lacks the convergence CSV header", field="header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 3:
            raise SchemaError(f"malformed CSV row: {line!r}")
        rows.append((int(parts[0]), float(parts[1]), float(parts[2])))
    return rows
