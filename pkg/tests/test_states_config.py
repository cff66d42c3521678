import json

import numpy as np
import pytest

from cqms.amplification import Amplification, AmplifiedVectorState, InfinityState
from cqms.checks import Check, run_suite
from cqms.circle import CircleBase, CircleState, HaarState, TrivialBase
from cqms.config import RunConfig, build_instance, load_json, parse_config
from cqms.exceptions import InvalidInputError
from cqms.extension import DualPair
from cqms.metric import Caps
from cqms.models import PodlesModel, SuqModel, ToeplitzModel
from cqms.states import state_from_json, state_to_json

CAPS = Caps(N=2, D=4, grid=256, ideal_degree=2, ideal_grid=128)


# -- states ----------------------------------------------------------------------------


def test_atoms_list_and_object():
    base = CircleBase(256)
    a = state_from_json(base, [[0.0, 0.5], [np.pi, 0.5]], CAPS)
    b = state_from_json(base, {"kind": "atoms", "atoms": [[0.0, 0.5], [np.pi, 0.5]]}, CAPS)
    assert isinstance(a, CircleState)
    np.testing.assert_array_equal(a.covector(4), b.covector(4))
    assert isinstance(state_from_json(base, {"kind": "haar"}, CAPS), HaarState)


def test_vector_state_for_amplification():
    amp = Amplification(CircleBase(256))
    s = state_from_json(amp, {"kind": "vector", "re": [1, 0], "im": [0, 1], "theta": 0.5}, CAPS)
    assert isinstance(s, AmplifiedVectorState)
    assert s.beta.angles[0] == pytest.approx(0.5)
    assert isinstance(state_from_json(amp, {"kind": "infinity"}, CAPS), InfinityState)


def test_vector_state_for_extension():
    model = ToeplitzModel(4, grid=256)
    pair = state_from_json(model, {"kind": "vector", "re": [1, 0, 0, 0]}, CAPS)
    assert isinstance(pair, DualPair)
    assert pair.caps == CAPS


def test_pullback_state_nests():
    pod = PodlesModel(grid=256)
    payload = {"kind": "pullback", "state": {"kind": "pullback", "state": [[0.0, 1.0]]}}
    pair = state_from_json(pod, payload, CAPS)
    assert pair.covector().shape == (pod.param_dim(CAPS),)
    assert not np.any(pair.ideal)


@pytest.mark.parametrize(
    "instance,payload",
    [
        (CircleBase(256), {"kind": "infinity"}),
        (CircleBase(256), {"kind": "pullback", "state": []}),
        (Amplification(TrivialBase()), [[0.0, 1.0]]),
        (ToeplitzModel(4), {"kind": "vector", "re": [1, 0]}),
        (ToeplitzModel(4), {"kind": "vector", "re": [1, 0, 0, 0], "im": [0]}),
        (CircleBase(256), {"kind": "mystery"}),
        (CircleBase(256), "delta"),
        (CircleBase(256), [[0.0, 0.7]]),
    ],
)
def test_invalid_states(instance, payload):
    with pytest.raises(InvalidInputError):
        state_from_json(instance, payload, CAPS)


def test_state_json_round_trip():
    amp = Amplification(CircleBase(256))
    for state in (CircleState([(0.1, 0.25), (2.0, 0.75)]), HaarState(), InfinityState(),
                  AmplifiedVectorState([1.0, 1j], CircleState.point(0.3))):
        payload = json.loads(json.dumps(state_to_json(state)))
        target = amp if not isinstance(state, (CircleState, HaarState)) else CircleBase(256)
        back = state_from_json(target, payload, CAPS)
        np.testing.assert_allclose(target.covector(back, CAPS), target.covector(state, CAPS), atol=1e-15)


# -- config ------------------------------------------------------------------------------


def test_defaults_per_model():
    assert parse_config({}, "toeplitz").size == 64
    assert parse_config({}, "suq2").size == 64
    assert parse_config({}, "podles").size == 48
    assert parse_config({"M": 8}, "podles").size == 8


@pytest.mark.parametrize(
    "payload,model,field",
    [
        ({"colour": 1}, "toeplitz", "colour"),
        ({"W": 4}, "toeplitz", "W"),
        ({"c": 1.0}, "suq2", "c"),
        ({"M": 2.5}, "suq2", "M"),
        ({"q": "half"}, "podles", "q"),
        ({"seed": True}, "circle", "seed"),
        ({"base": "sphere"}, "amplification", "base"),
        ({"samples": 0}, "circle", "samples"),
        ({"model": "podles"}, "suq2", "model"),
    ],
)
def test_field_level_errors(payload, model, field):
    with pytest.raises(InvalidInputError, match=repr(field)):
        parse_config(payload, model)


@pytest.mark.parametrize(
    "payload,model",
    [({"q": 1.5}, "suq2"), ({"c": -1.0}, "podles"), ({"k": 2}, "toeplitz"), ({"D": 128, "grid": 4096}, "circle")],
)
def test_model_level_errors(payload, model):
    with pytest.raises(InvalidInputError):
        parse_config(payload, model)


def test_build_instance_types():
    assert isinstance(build_instance(RunConfig(model="suq2", M=4, W=2)), SuqModel)
    assert isinstance(build_instance(RunConfig(model="podles", M=4)), PodlesModel)
    amp = build_instance(RunConfig(model="amplification", base="trivial"))
    assert isinstance(amp.base, TrivialBase)


def test_rng_depends_only_on_seed():
    a = RunConfig(seed=7).rng().normal(size=5)
    b = RunConfig(seed=7, samples=3).rng().normal(size=5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, RunConfig(seed=8).rng().normal(size=5))


def test_echo_lists_applicable_fields():
    echo = RunConfig(model="circle").echo()
    assert "q" not in echo and "M" not in echo
    assert RunConfig(model="podles").echo()["M"] == 48


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidInputError):
        load_json(str(bad))
    with pytest.raises(InvalidInputError):
        load_json(str(tmp_path / "missing.json"))


# -- checks -------------------------------------------------------------------------------


def test_check_relations():
    assert Check("x", "a", 1.0, 1.0, 0.0).passed
    assert not Check("x", "a", 1.1, 1.0, 0.05).passed
    assert Check("x", "a", 2.0, 1.0, 0.0, ">").passed
    assert Check("x", "a", 0.9, 1.0, 0.1, ">=").passed
    assert not Check("x", "a", float("nan"), 1.0, 1.0).passed
    flagged = Check("x", "a", 1.0, 0.0, 0.1, expected_fail=True)
    assert not flagged.holds and flagged.passed


@pytest.mark.parametrize("model", ["circle", "amplification"])
def test_small_suites_pass(model):
    cfg = parse_config({"D": 4, "grid": 512, "N": 3, "samples": 5}, model)
    checks = run_suite(cfg)
    assert checks and all(c.passed for c in checks)
    assert all(c.anchor for c in checks)
