"""JSON serialization: round trips, canonical bytes, and schema rejection."""

import os
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from discjet.base_ring import BaseRingDescriptor
from discjet.errors import SchemaError
from discjet.etale import polymap_from_jet
from discjet.hopf import antipode, coproduct
from discjet.jet_group import jet_from_terms
from discjet.jsonio import (
    antipode_document,
    coproduct_document,
    decode_base,
    decode_coord,
    decode_derivation,
    decode_element,
    decode_fraction,
    decode_jet,
    decode_polymap,
    decode_polynomial,
    decode_rep,
    decode_roof,
    decode_series,
    document,
    document_kind,
    encode_base,
    encode_coord,
    encode_derivation,
    encode_element,
    encode_jet,
    encode_polymap,
    encode_polynomial,
    encode_rep,
    encode_roof,
    encode_series,
    read_json,
    render,
    write_json,
)
from discjet.rep import rep_determinant, rep_jet_standard
from discjet.sampling import (
    random_base,
    random_derivation,
    random_element,
    random_jet,
    random_roof,
)
from discjet.series import TruncatedSeries

Q = BaseRingDescriptor()

seeds = st.integers(0, 10**6)


# -- round trips ------------------------------------------------------------------------


@given(seeds)
def test_base_round_trip(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    assert decode_base(encode_base(base)) == base


def test_symbolic_base_round_trip():
    base = BaseRingDescriptor(symbolic_names=("r2", "s2"))
    assert decode_base(encode_base(base)) == base


@given(seeds)
def test_element_round_trip(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    x = random_element(rng, base)
    assert decode_element(encode_element(x), base) == x


@given(seeds)
def test_series_round_trip(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    g = random_jet(rng, rng.randint(1, 2), rng.randint(1, 3), base)
    for comp in g.truncated_components(g.c):
        assert decode_series(encode_series(comp), base) == comp


@given(seeds)
def test_jet_round_trip(seed):
    rng = random.Random(seed)
    g = random_jet(rng, rng.randint(1, 2), rng.randint(1, 3), random_base(rng))
    assert decode_jet(encode_jet(g)) == g


def test_jet_serializes_at_its_group_order():
    # two representatives of the same class give identical bytes
    base = BaseRingDescriptor(orders=(3,))
    plain = jet_from_terms(1, 2, base, [{(1,): 1, (2,): 1}])
    padded = jet_from_terms(1, 2, base, [{(1,): 1, (2,): 1, (3,): F(7)}])
    assert padded == plain
    assert render(encode_jet(padded)) == render(encode_jet(plain))


@given(seeds)
def test_derivation_round_trip(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    D = random_derivation(rng, rng.randint(1, 2), rng.randint(1, 3), base)
    assert decode_derivation(encode_derivation(D)) == D


@given(seeds)
def test_polymap_round_trip(seed):
    rng = random.Random(seed)
    g = random_jet(rng, rng.randint(1, 2), rng.randint(1, 3), random_base(rng))
    f = polymap_from_jet(g)
    assert decode_polymap(encode_polymap(f)) == f


@given(seeds)
def test_roof_round_trip(seed):
    rng = random.Random(seed)
    roof = random_roof(rng, rng.randint(1, 2), rng.randint(1, 3), random_base(rng))
    back = decode_roof(encode_roof(roof))
    assert back.phi == roof.phi
    assert back.psi == roof.psi
    assert tuple(back.w) == tuple(roof.w)


@pytest.mark.parametrize("n,c", [(1, 1), (1, 3), (2, 2)])
def test_polynomial_and_coord_round_trips(n, c):
    for poly in coproduct(n, c).values():
        assert decode_polynomial(encode_polynomial(poly), n) == poly
    for elem in antipode(n, c).values():
        assert decode_coord(encode_coord(elem), n) == elem


@pytest.mark.parametrize("rep", [rep_jet_standard(1, 3), rep_jet_standard(2, 2), rep_determinant(2, 1)])
def test_rep_round_trip(rep):
    assert decode_rep(encode_rep(rep)) == rep


@given(seeds)
def test_reserialization_is_byte_identical(seed):
    rng = random.Random(seed)
    g = random_jet(rng, rng.randint(1, 2), rng.randint(1, 3), random_base(rng))
    once = render(encode_jet(g))
    again = render(encode_jet(decode_jet(encode_jet(g))))
    assert once == again


# -- fraction text ----------------------------------------------------------------------


def test_fractions_are_exact_text():
    assert decode_fraction("-7/3") == F(-7, 3)
    assert decode_fraction("0") == 0
    assert decode_fraction("2/4") == F(1, 2)  # tolerated on input, normalized on output
    assert encode_element(Q.rational(F(1, 2)))[0]["coef"] == "1/2"


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "1/-2", "--1", "", "03", "1/2.0"])
def test_decimal_and_malformed_numbers_are_rejected(text):
    with pytest.raises(SchemaError):
        decode_fraction(text)


# -- envelopes and shape errors ----------------------------------------------------------


def test_document_envelope():
    doc = document("jet", {"x": 1})
    assert doc["schema"] == "discjet/1"
    assert document_kind(doc) == "jet"
    assert document_kind(doc, {"jet"}) == "jet"
    with pytest.raises(SchemaError):
        document_kind(doc, {"roof"})
    with pytest.raises(SchemaError):
        document_kind({"kind": "jet"})  # missing schema
    with pytest.raises(SchemaError):
        document_kind([1, 2])


def test_jet_shape_errors():
    g = random_jet(random.Random(5), 2, 2, Q)
    good = encode_jet(g)
    with pytest.raises(SchemaError):
        decode_jet({**good, "n": "2"})
    with pytest.raises(SchemaError):
        decode_jet({**good, "n": True})  # bools are not integers here
    with pytest.raises(SchemaError):
        decode_jet({**good, "components": good["components"][:1]})
    with pytest.raises(SchemaError):
        decode_jet("not an object")


def test_derivation_requires_role_tag():
    D = random_derivation(random.Random(5), 1, 2, Q)
    good = encode_derivation(D)
    bad = dict(good)
    del bad["role"]
    with pytest.raises(SchemaError):
        decode_derivation(bad)


def test_roof_requires_convention_tag():
    roof = random_roof(random.Random(5), 1, 2, Q)
    good = encode_roof(roof)
    with pytest.raises(SchemaError):
        decode_roof({**good, "convention": "something_else"})


def test_polynomial_variable_shape_errors():
    poly = coproduct(1, 2)[(0, (2,))]
    good = encode_polynomial(poly)
    bad = [dict(t, vars=[dict(v, e=0) for v in t["vars"]]) for t in good]
    if any(t["vars"] for t in good):
        with pytest.raises(SchemaError):
            decode_polynomial(bad, 1)
    with pytest.raises(SchemaError):
        decode_polynomial([{"vars": [{"alphabet": "a", "k": 1, "J": [2], "e": 1}], "coef": "1"}], 1)
    with pytest.raises(SchemaError):
        decode_polynomial([{"vars": [{"alphabet": "a", "k": 0, "J": [0], "e": 1}], "coef": "1"}], 1)


# -- files -------------------------------------------------------------------------------


def test_write_is_atomic_and_reads_back(tmp_path):
    path = str(tmp_path / "doc.json")
    doc = coproduct_document(1, 3)
    write_json(path, doc)
    assert read_json(path) == doc
    assert os.listdir(tmp_path) == ["doc.json"]  # no stray temp files


def test_read_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_json(str(path))


def test_structure_documents_are_deterministic():
    assert render(coproduct_document(2, 2)) == render(coproduct_document(2, 2))
    assert render(antipode_document(2, 2)) == render(antipode_document(2, 2))
    doc = coproduct_document(1, 2)
    assert doc["kind"] == "coproduct_table"
    ks_js = [(e["k"], tuple(e["J"])) for e in doc["entries"]]
    assert ks_js == sorted(ks_js, key=lambda kj: (kj[0], sum(kj[1]), kj[1]))
