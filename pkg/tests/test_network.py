"""Unit tests for network/scheme models, document round trips, and the
reduced-form scheme constructors."""

import json
from pathlib import Path

import numpy as np
import pytest

from nncpdf.errors import SchemaError, ShapeMismatch
from nncpdf.network import (
    Network,
    assemble_joint,
    load_network,
    load_scheme,
    make_ddf_scheme,
    make_nnc_scheme,
    network_to_document,
    random_network,
    random_scheme,
    scheme_to_document,
)
from nncpdf.probability import validate_pmf

FIXTURES = Path(__file__).parent / "fixtures"


def test_network_document_round_trip():
    rng = np.random.default_rng(0)
    net = random_network(rng, 3)
    again = load_network(json.loads(json.dumps(network_to_document(net))))
    assert again.N == net.N
    assert again.x_sizes == net.x_sizes
    assert np.allclose(again.channel, net.channel)
    assert again.destinations == net.destinations


def test_scheme_document_round_trip():
    rng = np.random.default_rng(1)
    net = random_network(rng, 3)
    s = random_scheme(rng, net)
    again = load_scheme(json.loads(json.dumps(scheme_to_document(s))))
    assert again.v_sizes == s.v_sizes
    assert np.allclose(again.head, s.head)
    for a, b in zip(again.compressors, s.compressors):
        assert np.allclose(a, b)


def test_load_network_missing_field():
    with pytest.raises(SchemaError):
        load_network({"N": 2})


def test_network_validates_destinations():
    rng = np.random.default_rng(2)
    ch = rng.dirichlet(np.ones(4), size=4).reshape(2, 2, 2, 2)
    with pytest.raises(SchemaError):
        Network(2, (2, 2), (2, 2), ch, frozenset({1}))
    with pytest.raises(SchemaError):
        Network(2, (2, 2), (2, 2), ch, frozenset())


def test_scheme_rejects_inconsistent_shapes():
    rng = np.random.default_rng(3)
    net = random_network(rng, 3)
    s = random_scheme(rng, net)
    with pytest.raises(ShapeMismatch):
        type(s)(
            3, (2, 2), (2, 2), (2, 2), s.head.reshape(-1)[:24],
            s.input_kernels, s.compressors,
        )


def test_assemble_joint_is_valid_pmf():
    rng = np.random.default_rng(4)
    net = random_network(rng, 3)
    s = random_scheme(rng, net)
    j = assemble_joint(net, s)
    validate_pmf(j)
    names = {v.name for v, _ in j.variables}
    assert {"X1", "X2", "X3", "Y2", "Y3", "V2", "U3", "Yhat2"} <= names


def test_make_nnc_scheme_form_and_idempotence():
    rng = np.random.default_rng(5)
    net = random_network(rng, 3)
    s = random_scheme(rng, net)
    nnc = make_nnc_scheme(s)
    assert nnc.is_nnc_form
    again = make_nnc_scheme(nnc)
    assert np.allclose(again.head, nnc.head)


def test_make_ddf_scheme_form():
    rng = np.random.default_rng(6)
    net = random_network(rng, 3)
    s = random_scheme(rng, net)
    ddf = make_ddf_scheme(s)
    assert ddf.is_ddf_form
    # v alphabets mirror the input alphabets and kernels are identity
    assert ddf.v_sizes == tuple(net.x_sizes[1:])
    for ker in ddf.input_kernels:
        assert np.allclose(ker, np.eye(ker.shape[0]))


def test_fixture_documents_load():
    net = load_network(json.loads((FIXTURES / "n3_binary.network.json").read_text()))
    s = load_scheme(json.loads((FIXTURES / "n3_binary.scheme.json").read_text()))
    validate_pmf(assemble_joint(net, s))
