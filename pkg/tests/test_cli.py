"""The command-line front end, exercised through real subprocesses."""

import json
import subprocess
import sys
from fractions import Fraction as F
from importlib import resources

import pytest

from discjet.base_ring import BaseRingDescriptor
from discjet.etale import polymap_from_jet, roof_is_strict, roof_jet
from discjet.hopf import CoordRingElement, Polynomial
from discjet.jet_group import jet_compose, jet_from_terms, jet_invert
from discjet.jsonio import (
    decode_coord,
    decode_derivation,
    decode_element,
    decode_jet,
    document,
    encode_derivation,
    encode_jet,
    encode_rep,
    encode_roof,
    read_json,
    render,
    write_json,
)
from discjet.lie import adjoint, derivation_bracket, derivation_monomial, exp_derivation
from discjet.rep import rep_jet_standard
from discjet.sampling import random_derivation, random_jet, random_roof
import random

Q = BaseRingDescriptor()


def run_cli(*argv, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "discjet.cli", *argv],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == expect, proc.stderr or proc.stdout
    return proc


def jet_file(tmp_path, name, g):
    path = str(tmp_path / name)
    write_json(path, document("jet", encode_jet(g)))
    return path


def derivation_file(tmp_path, name, D):
    path = str(tmp_path / name)
    write_json(path, document("derivation", encode_derivation(D)))
    return path


# -- jet verbs -----------------------------------------------------------------------


def test_invert_worked_example(tmp_path):
    g = jet_from_terms(1, 4, Q, [{(1,): 1, (2,): 1}])  # t + t^2
    out = run_cli("invert", "--in", jet_file(tmp_path, "g.json", g))
    inv = decode_jet(json.loads(out.stdout))
    # t - t^2 + 2 t^3 - 5 t^4
    want = jet_from_terms(1, 4, Q, [{(1,): 1, (2,): -1, (3,): 2, (4,): -5}])
    assert inv == want


def test_compose_symbolic_example(tmp_path):
    base = BaseRingDescriptor(symbolic_names=("r2", "r3", "r4", "s2", "s3", "s4"))
    r2, r3, r4, s2, s3, s4 = (base.generator(i) for i in range(6))
    rho = jet_from_terms(1, 4, base, [{(1,): 1, (2,): r2, (3,): r3, (4,): r4}])
    sigma = jet_from_terms(1, 4, base, [{(1,): 1, (2,): s2, (3,): s3, (4,): s4}])
    out = run_cli(
        "compose",
        "--in",
        jet_file(tmp_path, "rho.json", rho),
        "--in",
        jet_file(tmp_path, "sigma.json", sigma),
    )
    comp = decode_jet(json.loads(out.stdout)).truncated_components(4)[0]
    assert comp.coefficient((2,)) == r2 + s2
    assert comp.coefficient((3,)) == r3 + r2 * s2 * 2 + s3
    assert comp.coefficient((4,)) == r4 + r3 * s2 * 3 + r2 * s2 * s2 + r2 * s3 * 2 + s4


def test_classify_reports_membership(tmp_path):
    base = BaseRingDescriptor(orders=(2,))
    e = base.generator(0)
    g = jet_from_terms(1, 2, base, [{(0,): e, (1,): 2, (2,): 1}])
    out = run_cli("classify", "--in", jet_file(tmp_path, "g.json", g))
    doc = json.loads(out.stdout)
    assert doc["kind"] == "classification"
    assert doc["in_G"] is True
    assert doc["in_K"] is False
    assert doc["in_K_u"] is False
    assert doc["n_levels"] == [False, False]


def test_split_factors_recompose(tmp_path):
    base = BaseRingDescriptor(orders=(3,))
    e = base.generator(0)
    g = jet_from_terms(1, 3, base, [{(0,): e * e, (1,): 3, (2,): 1, (3,): e}])
    out = run_cli("split", "--in", jet_file(tmp_path, "g.json", g))
    doc = json.loads(out.stdout)
    a = [decode_element(x, base) for x in doc["translation"]]
    k = decode_jet(doc["constant_free"])
    A = decode_jet(doc["linear"])
    u = decode_jet(doc["unipotent"])
    assert a == [e * e]
    translation = jet_from_terms(1, 3, base, [{(0,): a[0], (1,): 1}])
    assert jet_compose(translation, k) == g
    assert jet_compose(A, u) == k


# -- structure-map verbs ----------------------------------------------------------------


def test_coproduct_matches_packaged_golden_file(tmp_path):
    out_path = str(tmp_path / "cop.json")
    run_cli("coproduct", "--n", "1", "--c", "4", "--out", out_path)
    stored = resources.files("discjet").joinpath("golden/coproduct_n1_c4.json")
    assert (tmp_path / "cop.json").read_text("utf-8") == stored.read_text("utf-8")


def test_antipode_document_values():
    out = run_cli("antipode", "--n", "1", "--c", "2")
    doc = json.loads(out.stdout)
    values = {tuple(e["J"]): decode_coord(e["value"], 1) for e in doc["entries"]}
    det = CoordRingElement(1, Polynomial.constant(1), 0)
    a2 = CoordRingElement.variable(1, 0, (2,))
    assert values[(1,)] == det.det_shift(1)
    assert values[(2,)] == -a2.det_shift(3)


def test_structure_verbs_need_shape_flags():
    run_cli("coproduct", "--n", "1", expect=2)
    run_cli("antipode", "--c", "2", expect=2)


# -- Lie verbs ---------------------------------------------------------------------------


def test_exp_log_bracket_adjoint(tmp_path):
    rng = random.Random(9)
    D = random_derivation(rng, 2, 2, Q, min_m_order=2)
    E = random_derivation(rng, 2, 2, Q, min_m_order=1)
    k = random_jet(rng, 2, 2, Q, kind="K")
    d_path = derivation_file(tmp_path, "d.json", D)
    e_path = derivation_file(tmp_path, "e.json", E)
    k_path = jet_file(tmp_path, "k.json", k)

    out = run_cli("exp", "--in", d_path)
    flow = decode_jet(json.loads(out.stdout))
    assert flow == exp_derivation(D)

    flow_path = jet_file(tmp_path, "flow.json", flow)
    out = run_cli("log", "--in", flow_path)
    assert decode_derivation(json.loads(out.stdout)) == D

    out = run_cli("bracket", "--in", d_path, "--in", e_path)
    assert decode_derivation(json.loads(out.stdout)) == derivation_bracket(D, E)

    out = run_cli("adjoint", "--in", k_path, "--in", d_path)
    assert decode_derivation(json.loads(out.stdout)) == adjoint(k, D)


def test_exp_frozen_flow(tmp_path):
    D = derivation_monomial(1, 4, Q, (2,), 0)  # t^2 d/dt
    out = run_cli("exp", "--in", derivation_file(tmp_path, "d.json", D))
    flow = decode_jet(json.loads(out.stdout))
    assert flow == jet_from_terms(1, 4, Q, [{(1,): 1, (2,): 1, (3,): 1, (4,): 1}])


# -- roof verbs ----------------------------------------------------------------------------


def test_roof_jet_and_roof_check(tmp_path):
    rng = random.Random(31)
    base = BaseRingDescriptor(orders=(2,))
    roof = random_roof(rng, 1, 3, base, strict=False)
    path = str(tmp_path / "roof.json")
    write_json(path, document("roof", encode_roof(roof)))

    out = run_cli("roof-jet", "--c", "3", "--in", path)
    assert decode_jet(json.loads(out.stdout)) == roof_jet(roof, 3)
    run_cli("roof-jet", "--in", path, expect=2)  # needs --c

    out = run_cli("roof-check", "--c", "3", "--in", path)
    doc = json.loads(out.stdout)
    assert doc["kind"] == "roof_report"
    assert doc["strict"] is False
    assert doc["in_K"] is False
    assert roof_is_strict(roof) is False


# -- representation verbs -------------------------------------------------------------------


def test_rep_bound_standard(tmp_path):
    out = run_cli("rep-bound", "--n", "1", "--c", "2")
    doc = json.loads(out.stdout)
    assert doc["weights"] == [-1, -2]
    assert doc["extension_order"] == 2
    assert doc["factoring_order"] == 2


def test_rep_check_accepts_rep_file(tmp_path):
    rep = rep_jet_standard(2, 1)
    path = str(tmp_path / "rep.json")
    write_json(path, document("representation", encode_rep(rep)))
    out = run_cli("rep-check", "--in", path)
    doc = json.loads(out.stdout)
    assert doc["ok"] is True
    assert doc["failing_entry"] is None
    assert doc["m"] == rep.m


def test_rep_eval_frozen_matrix(tmp_path):
    g = jet_from_terms(1, 2, Q, [{(1,): 1, (2,): 1}])
    out = run_cli("rep-eval", "--n", "1", "--c", "2", "--in", jet_file(tmp_path, "g.json", g))
    doc = json.loads(out.stdout)
    rows = [[decode_element(x, Q) for x in row] for row in doc["rows"]]
    one, zero = Q.one(), Q.zero()
    assert rows == [[one, zero], [-one, one]]


def test_rep_eval_rejects_jets_with_constant_term(tmp_path):
    base = BaseRingDescriptor(orders=(2,))
    e = base.generator(0)
    g = jet_from_terms(1, 2, base, [{(0,): e, (1,): 1}])
    proc = run_cli(
        "rep-eval", "--n", "1", "--c", "2", "--in", jet_file(tmp_path, "g.json", g),
        expect=3,
    )
    assert "precondition violated" in proc.stderr


# -- plumbing: exit codes, flags, determinism ------------------------------------------------


def test_schema_error_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    proc = run_cli("invert", "--in", str(bad), expect=2)
    assert "schema error" in proc.stderr
    run_cli("invert", "--in", str(tmp_path / "missing.json"), expect=2)
    # wrong document kind
    rng = random.Random(4)
    roof = random_roof(rng, 1, 2, Q)
    roof_path = str(tmp_path / "roof.json")
    write_json(roof_path, document("roof", encode_roof(roof)))
    run_cli("classify", "--in", roof_path, expect=2)
    # wrong input count
    run_cli("compose", "--in", roof_path, expect=2)


def test_precondition_exit_code(tmp_path):
    g = jet_from_terms(1, 2, Q, [{(1,): 2}])  # not unipotent
    proc = run_cli("log", "--in", jet_file(tmp_path, "g.json", g), expect=3)
    assert "precondition violated" in proc.stderr


def test_flag_consistency_checks(tmp_path):
    g = jet_from_terms(1, 2, Q, [{(1,): 1, (2,): 1}])
    path = jet_file(tmp_path, "g.json", g)
    run_cli("invert", "--in", path, "--n", "2", expect=2)
    run_cli("invert", "--in", path, "--c", "3", expect=2)
    run_cli("invert", "--in", path, "--base", "[2]", expect=2)
    run_cli("invert", "--in", path, "--n", "1", "--c", "2", "--base", "[]")


def test_stdout_and_file_output_agree(tmp_path):
    g = jet_from_terms(1, 3, Q, [{(1,): 1, (3,): F(1, 2)}])
    path = jet_file(tmp_path, "g.json", g)
    out_path = str(tmp_path / "inv.json")
    stdout = run_cli("invert", "--in", path).stdout
    run_cli("invert", "--in", path, "--out", out_path)
    assert stdout == (tmp_path / "inv.json").read_text("utf-8")
    assert stdout == render(json.loads(stdout))  # canonical bytes


def test_repeated_runs_are_byte_identical(tmp_path):
    first = run_cli("coproduct", "--n", "2", "--c", "2").stdout
    second = run_cli("coproduct", "--n", "2", "--c", "2").stdout
    assert first == second
