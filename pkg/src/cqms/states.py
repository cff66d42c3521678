"""JSON state specifications shared by the CLI and the models.

Accepted payloads:

* ``[[theta, weight], ...]`` or ``{"kind": "atoms", "atoms": [...]}``: atomic circle state;
* ``{"kind": "haar"}``: Haar measure on the circle;
* ``{"kind": "vector", "re": [...], "im": [...], "theta": t}``: vector state of
  a realization (``theta`` picks the point evaluation of circle entries in an
  amplified algebra; omitted means the designated state);
* ``{"kind": "infinity"}``: the state vanishing on the ideal of an amplified algebra;
* ``{"kind": "pullback", "state": inner}``: ``inner`` read against the quotient,
  composed with the quotient map.
"""

from __future__ import annotations

import numpy as np

from .amplification import Amplification, AmplifiedVectorState, InfinityState
from .circle import CircleBase, CircleState, HaarState
from .exceptions import InvalidInputError
from .extension import SplitExtension
from .metric import Caps


def _vector(payload) -> np.ndarray:
    re = np.asarray(payload.get("re", []), dtype=float)
    im = np.asarray(payload.get("im", np.zeros_like(re)), dtype=float)
    if re.ndim != 1 or re.shape != im.shape or re.size == 0:
        raise InvalidInputError("vector state needs equal-length nonempty 're' and 'im' lists")
    return re + 1j * im


def state_from_json(instance, payload, caps: Caps):
    """Parse ``payload`` into something ``instance.covector(., caps)`` accepts."""
    if isinstance(payload, list):
        payload = {"kind": "atoms", "atoms": payload}
    if not isinstance(payload, dict) or "kind" not in payload:
        raise InvalidInputError("state must be a list of [theta, weight] atoms or an object with 'kind'")
    kind = payload["kind"]
    if kind == "pullback":
        if not isinstance(instance, SplitExtension):
            raise InvalidInputError("pullback states need an extension model")
        inner = state_from_json(instance.quotient, payload["state"], caps)
        return instance.pullback(inner, caps)
    if kind in ("atoms", "haar"):
        state = CircleState(payload["atoms"]) if kind == "atoms" else HaarState()
        if isinstance(instance, (CircleBase, SplitExtension)):
            return state
        raise InvalidInputError(f"{kind} states apply to the circle or, pulled back, to extensions")
    if kind == "vector":
        v = _vector(payload)
        if isinstance(instance, Amplification):
            theta = payload.get("theta")
            beta = CircleState.point(theta) if theta is not None and isinstance(instance.base, CircleBase) else None
            return AmplifiedVectorState(v, beta)
        if isinstance(instance, SplitExtension):
            return instance.vector_state(v, caps)
        raise InvalidInputError("vector states apply to amplified or extension models")
    if kind == "infinity":
        if isinstance(instance, Amplification):
            return InfinityState()
        raise InvalidInputError("the infinity state applies to amplified models only")
    raise InvalidInputError(f"unknown state kind {kind!r}")


def state_to_json(state):
    """Inverse of :func:`state_from_json` for the directly describable states."""
    if isinstance(state, CircleState):
        return {"kind": "atoms", "atoms": state.to_pairs()}
    if isinstance(state, HaarState):
        return {"kind": "haar"}
    if isinstance(state, InfinityState):
        return {"kind": "infinity"}
    if isinstance(state, AmplifiedVectorState):
        out = {"kind": "vector", "re": state.v.real.tolist(), "im": state.v.imag.tolist()}
        if isinstance(state.beta, CircleState) and len(state.beta.angles) == 1:
            out["theta"] = float(state.beta.angles[0])
        return out
    raise InvalidInputError(f"no JSON form for {type(state).__name__}")
