"""Run configuration: JSON parameter records, validation and model construction."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

import numpy as np

from .amplification import Amplification
from .circle import DEFAULT_GRID, CircleBase, TrivialBase
from .exceptions import InvalidInputError
from .metric import Caps
from .models import PodlesModel, PodlesParams, SuqModel, SuqParams, ToeplitzModel

MODELS = ("toeplitz", "suq2", "podles", "circle", "amplification")

_COMMON = {"model", "seed", "samples", "N", "D", "k", "grid", "ideal_degree", "ideal_grid"}
_SPECIFIC = {
    "toeplitz": {"M"},
    "suq2": {"q", "M", "W"},
    "podles": {"q", "c", "M"},
    "circle": set(),
    "amplification": {"base"},
}
_DEFAULT_M = {"toeplitz": 64, "suq2": 64, "podles": 48}


@dataclass(frozen=True)
class RunConfig:
    model: str = "toeplitz"
    q: float = 0.5
    c: float = 2.0
    M: int | None = None
    W: int = 16
    N: int = 8
    D: int = 32
    k: int = 3
    grid: int = DEFAULT_GRID
    ideal_degree: int = 4
    ideal_grid: int = 256
    base: str = "circle"
    seed: int = 0
    samples: int = 10

    @property
    def size(self) -> int:
        return self.M if self.M is not None else _DEFAULT_M.get(self.model, 0)

    def caps(self) -> Caps:
        return Caps(N=self.N, D=self.D, grid=self.grid, ideal_degree=self.ideal_degree, ideal_grid=self.ideal_grid)

    def rng(self) -> np.random.Generator:
        # counter-based bit generator: the stream depends only on the seed
        return np.random.Generator(np.random.Philox(self.seed))

    def echo(self) -> dict:
        """The fields that apply to this model, for reports."""
        allowed = _COMMON | _SPECIFIC[self.model]
        out = {k: v for k, v in asdict(self).items() if k in allowed}
        if "M" in allowed:
            out["M"] = self.size
        return out


_INT_FIELDS = {"M", "W", "N", "D", "k", "grid", "ideal_degree", "ideal_grid", "seed", "samples"}
_FLOAT_FIELDS = {"q", "c"}


def _field_error(name, msg):
    return InvalidInputError(f"field {name!r}: {msg}")


def parse_config(payload: dict, model: str | None = None) -> RunConfig:
    """Validate a JSON parameter record; errors name the offending field."""
    if not isinstance(payload, dict):
        raise InvalidInputError("config must be a JSON object")
    payload = dict(payload)
    if model is not None:
        if payload.get("model", model) != model:
            raise _field_error("model", f"config says {payload['model']!r} but {model!r} was requested")
        payload["model"] = model
    name = payload.get("model", "toeplitz")
    if name not in MODELS:
        raise _field_error("model", f"must be one of {', '.join(MODELS)}")
    allowed = _COMMON | _SPECIFIC[name]
    known = {f.name for f in fields(RunConfig)}
    for key, value in payload.items():
        if key not in known:
            raise _field_error(key, "unknown field")
        if key not in allowed:
            raise _field_error(key, f"does not apply to model {name!r}")
        if key in _INT_FIELDS and (isinstance(value, bool) or not isinstance(value, int)):
            raise _field_error(key, f"must be an integer, got {value!r}")
        if key in _FLOAT_FIELDS and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise _field_error(key, f"must be a number, got {value!r}")
    if payload.get("base", "circle") not in ("circle", "trivial"):
        raise _field_error("base", "must be 'circle' or 'trivial'")
    if payload.get("samples", 1) < 1:
        raise _field_error("samples", "must be >= 1")
    if payload.get("seed", 0) < 0:
        raise _field_error("seed", "must be nonnegative")
    cfg = RunConfig(**payload)
    try:
        cfg.caps()
    except InvalidInputError as exc:
        raise InvalidInputError(f"caps fields (N, D, grid, ideal_degree, ideal_grid): {exc}") from None
    build_instance(cfg)  # surfaces model-level parameter errors
    return cfg


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from None


def suq_params(cfg: RunConfig) -> SuqParams:
    return SuqParams(q=cfg.q, M=cfg.size, W=cfg.W, D=cfg.D, k=cfg.k)


def podles_params(cfg: RunConfig) -> PodlesParams:
    return PodlesParams(q=cfg.q, c=cfg.c, M=cfg.size, k=cfg.k)


def build_instance(cfg: RunConfig):
    """The CQMS named by ``cfg.model`` with its parameters."""
    try:
        if cfg.model == "circle":
            return CircleBase(cfg.grid)
        if cfg.k <= 2:
            raise InvalidInputError(f"k must exceed 2, got {cfg.k}")
        if cfg.model == "amplification":
            base = CircleBase(cfg.grid) if cfg.base == "circle" else TrivialBase()
            return Amplification(base, cfg.k)
        if cfg.model == "toeplitz":
            return ToeplitzModel(cfg.size, cfg.k, cfg.grid)
        if cfg.model == "suq2":
            return SuqModel(suq_params(cfg), cfg.grid)
        return PodlesModel(podles_params(cfg), cfg.grid)
    except InvalidInputError as exc:
        raise InvalidInputError(f"model {cfg.model!r}: {exc}") from None
