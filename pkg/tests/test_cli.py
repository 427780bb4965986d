import json

import pytest

from hopfw.cli import _exit_code, main
from hopfw.formats import (
    FormFileError,
    dump_form,
    dump_presentation,
    form_from_obj,
    form_to_obj,
    load_form,
    load_form_text,
    parse_presentation,
    parse_tensor,
)
from hopfw.forms import (
    MultilinearForm,
    make_bilinear,
    make_orthogonal,
    make_signature,
)
from hopfw.hopf import CheckResult, Status, build_bw, build_hw
from hopfw.ncalg import Generator
from hopfw.exactnum import rat

W2 = MultilinearForm(2, 3, {(1, 1, 2): 1, (1, 2, 1): 1, (2, 1, 1): 1})


@pytest.fixture()
def cyclic2(tmp_path):
    path = tmp_path / "cyclic2.json"
    assert main(["example", "cyclic2", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture()
def sig3(tmp_path):
    path = tmp_path / "sig3.json"
    assert main(["example", "signature-3", "--out", str(path)]) == 0
    return str(path)


# ----------------------------------------------------------------- formats


def test_form_json_round_trip():
    for w in (W2, make_signature(3), W2.scale(rat(1, 2))):
        assert form_from_obj(form_to_obj(w)) == w
        assert load_form_text(dump_form(w)) == w
    assert dump_form(W2).endswith("\n")


def test_form_file_round_trip(tmp_path):
    from hopfw.formats import save_form

    path = tmp_path / "w.json"
    save_form(str(path), W2.scale(rat(-2, 3)))
    assert load_form(str(path)) == W2.scale(rat(-2, 3))


@pytest.mark.parametrize(
    "obj",
    [
        [1, 2],
        {"dim": 2, "arity": 3, "entries": [], "extra": 1},
        {"dim": 2, "arity": 3},
        {"dim": True, "arity": 3, "entries": []},
        {"dim": 2, "arity": "3", "entries": []},
        {"dim": 2, "arity": 3, "entries": {}},
        {"dim": 2, "arity": 3, "entries": [[1, 1, 2]]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 2]}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": (1,), "c": "1", "x": 0}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": "112", "c": "1"}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, True], "c": "1"}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 2], "c": 0.5}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 2], "c": True}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 2], "c": "1/0"}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 2], "c": "x"}]},
        {
            "dim": 2,
            "arity": 3,
            "entries": [
                {"idx": [1, 1, 2], "c": "1"},
                {"idx": [1, 1, 2], "c": "2"},
            ],
        },
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1, 3], "c": "1"}]},
        {"dim": 2, "arity": 3, "entries": [{"idx": [1, 1], "c": "1"}]},
    ],
)
def test_form_from_obj_rejections(obj):
    with pytest.raises(FormFileError):
        form_from_obj(obj)


def test_load_form_text_reports_json_position():
    with pytest.raises(FormFileError, match="line 1 column"):
        load_form_text("{ this is not json")


def test_parse_tensor_round_trip():
    pres = build_hw(W2)
    for g in pres.generators:
        t = pres.structure.delta[g]
        assert parse_tensor(pres.alphabet, t.to_str()) == t
    assert parse_tensor(pres.alphabet, "0").is_zero()
    # scalar factors multiply through on either leg
    t = parse_tensor(pres.alphabet, "2*u[1,1]#3*u[2,2] - u[1,2]#u[2,1]")
    A = pres.alphabet
    w = lambda fam, i, j: A.word([Generator(fam, i, j)])
    assert t.terms[(w("u", 1, 1), w("u", 2, 2))] == 6
    assert t.terms[(w("u", 1, 2), w("u", 2, 1))] == -1


@pytest.mark.parametrize(
    "text",
    [
        "u[1,1]#u[1,1] +",
        "u[1,1]#u[1,1] * u[2,2]#u[2,2]",
        "u[1,1]",
        "u[1,1]#u[1,1]#u[2,2]",
        "(u[1,1]+u[1,2])#u[2,2]",
    ],
)
def test_parse_tensor_rejections(text):
    pres = build_hw(W2)
    with pytest.raises(ValueError):
        parse_tensor(pres.alphabet, text)


def test_presentation_dump_parse_round_trip():
    for pres in (build_hw(W2), build_bw(W2)):
        back = parse_presentation(dump_presentation(pres))
        assert back.kind == pres.kind
        assert (back.n, back.m) == (pres.n, pres.m)
        assert back.generators == pres.generators
        assert back.relation_labels == pres.relation_labels
        assert back.relations == pres.relations
        assert back.structure.delta == pres.structure.delta
        assert back.structure.counit == pres.structure.counit
        assert back.structure.antipode == pres.structure.antipode
        assert back.provenance is None


@pytest.mark.parametrize(
    "text, message",
    [
        ("bogus 1", "unknown line type"),
        ("relation r: u[1,1]", "generators line must precede"),
        ("algebra zz", "unknown algebra kind"),
        ("generators u[1,1]\nrelation u[1,1] - 1", "needs 'label"),
        ("generators u[1,1]\ndelta u[1,1] u[1,1]#u[1,1]", "needs 'generator"),
        ("generators u[1,1]\ncounit u[1,1] -> x", "line 2"),
        ("algebra hw\nn 2\nm 3", "needs algebra, n, m and generators"),
    ],
)
def test_parse_presentation_rejections(text, message):
    with pytest.raises(ValueError, match=message):
        parse_presentation(text)


# --------------------------------------------------------------------- CLI


def test_example_round_trips(tmp_path):
    expected = {
        "cyclic2": W2,
        "signature-3": make_signature(3),
        "orthogonal-2-3": make_orthogonal(2, 3),
        "symplectic2": make_bilinear([[0, 1], [-1, 0]]),
    }
    for name, w in expected.items():
        path = tmp_path / f"{name}.json"
        assert main(["example", name, "--out", str(path)]) == 0
        assert load_form(str(path)) == w
        # the file is well-formed JSON ending in a newline
        text = path.read_text()
        assert text.endswith("\n") and json.loads(text)["entries"]


def test_example_to_stdout(capsys):
    assert main(["example", "cyclic2"]) == 0
    assert load_form_text(capsys.readouterr().out) == W2


def test_example_unknown_name(capsys):
    assert main(["example", "dodecahedral"]) == 3
    assert "unknown example" in capsys.readouterr().err


def test_analyze_preregular_form(cyclic2, capsys):
    assert main(["analyze", cyclic2]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "dim: 2",
        "arity: 3",
        "one_site_nondegenerate: true",
        "all_slots_nondegenerate: true",
        "twist: [[1, 0], [0, 1]]",
        "twist_invertible: true",
        "preregular: true",
        "polar_affine_dimension: 4",
        "self_scale[1/2]: mismatch",
        "self_scale[1/3]: mismatch",
    ]


def test_analyze_alternating_form(sig3, capsys):
    assert main(["analyze", sig3]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "polar_affine_dimension: 18" in out
    # the polar members of the alternating form are the (m-1)!-divided copies
    assert "self_scale[1/2]: member" in out
    assert "self_scale[1/3]: mismatch" in out


def test_analyze_degenerate_form(tmp_path, capsys):
    path = tmp_path / "degen.json"
    path.write_text(dump_form(MultilinearForm(2, 3, {(1, 1, 1): 1})))
    assert main(["analyze", str(path)]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "dim: 2",
        "arity: 3",
        "one_site_nondegenerate: false",
        "all_slots_nondegenerate: false",
        "twist: ambiguous",
        "preregular: false",
        "polar_affine_dimension: none",
    ]


def test_analyze_missing_file(capsys):
    assert main(["analyze", "no-such-file.json"]) == 3
    assert capsys.readouterr().err.startswith("hopfw: error:")


def test_analyze_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ nope")
    assert main(["analyze", str(path)]) == 3
    assert "line 1" in capsys.readouterr().err


def test_present_round_trip_and_determinism(cyclic2, tmp_path, capsys):
    out1 = tmp_path / "hw1.txt"
    out2 = tmp_path / "hw2.txt"
    assert main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(out1)]) == 0
    assert main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    pres = parse_presentation(out1.read_text())
    ref = build_hw(W2)
    assert pres.kind == "hw"
    assert pres.relations == ref.relations
    assert pres.structure.antipode == ref.structure.antipode
    # stdout when --out is omitted
    assert main(["present", "--algebra", "hw", "--form", cyclic2]) == 0
    assert capsys.readouterr().out == out1.read_text()


def test_present_usage_errors(cyclic2, capsys):
    assert main(["present", "--algebra", "ahmn"]) == 3
    assert "needs --m and --n" in capsys.readouterr().err
    assert main(["present", "--algebra", "hw"]) == 3
    assert "needs --form" in capsys.readouterr().err


def test_present_power_sum_and_single_matrix(sig3, tmp_path, capsys):
    assert main(["present", "--algebra", "ahmn", "--m", "3", "--n", "2"]) == 0
    pres = parse_presentation(capsys.readouterr().out)
    assert pres.kind == "ahmn" and len(pres.relations) == 12
    # hww defaults to the canonical polar member of the form
    out = tmp_path / "hww.txt"
    assert main(["present", "--algebra", "hww", "--form", sig3, "--out", str(out)]) == 0
    pres = parse_presentation(out.read_text())
    assert pres.kind == "hww" and len(pres.relations) == 54


def test_gb_nf_pipeline(cyclic2, tmp_path, capsys):
    pres = tmp_path / "hw.txt"
    system1 = tmp_path / "sys1.txt"
    system2 = tmp_path / "sys2.txt"
    assert main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(pres)]) == 0
    assert main(["gb", str(pres), "--degree", "4", "--out", str(system1)]) == 0
    err = capsys.readouterr().err
    assert err.splitlines()[0] == "degree 2: 0 rules"
    assert err.splitlines()[-1] == "degree 4: 15 rules"
    assert main(["gb", str(pres), "--degree", "4", "--out", str(system2)]) == 0
    assert system1.read_bytes() == system2.read_bytes()
    head = system1.read_text().splitlines()[:3]
    assert head == ["system", "degree 4", "complete_through 4"]

    # the defining relation reduces to zero
    assert main(
        ["nf", str(system1), "--poly", "u[1,1]*s[1,1] + u[1,2]*s[2,1] - 1"]
    ) == 0
    assert capsys.readouterr().out == "0\n"
    # a plain generator is already in normal form
    assert main(["nf", str(system1), "--poly", "u[1,1]"]) == 0
    assert capsys.readouterr().out == "u[1,1]\n"


def test_nf_above_bound_is_uncertified(cyclic2, tmp_path, capsys):
    pres = tmp_path / "hw.txt"
    system = tmp_path / "sys.txt"
    main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(pres)])
    main(["gb", str(pres), "--degree", "4", "--out", str(system)])
    capsys.readouterr()
    rc = main(["nf", str(system), "--poly", "u[1,1]*u[1,1]*u[1,1]*u[1,1]*u[1,1]"])
    assert rc == 2
    assert capsys.readouterr().err.startswith("uncertified: degree 5 exceeds")


def test_nf_unknown_generator(cyclic2, tmp_path, capsys):
    pres = tmp_path / "hw.txt"
    system = tmp_path / "sys.txt"
    main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(pres)])
    main(["gb", str(pres), "--degree", "3", "--out", str(system)])
    capsys.readouterr()
    assert main(["nf", str(system), "--poly", "q[1,1]"]) == 3


def test_gb_rejects_nonpositive_degree(cyclic2, tmp_path, capsys):
    pres = tmp_path / "hw.txt"
    main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(pres)])
    capsys.readouterr()
    assert main(["gb", str(pres), "--degree", "0"]) == 3
    assert "--degree must be positive" in capsys.readouterr().err


def test_degree_env_override(cyclic2, tmp_path, capsys, monkeypatch):
    pres = tmp_path / "hw.txt"
    main(["present", "--algebra", "hw", "--form", cyclic2, "--out", str(pres)])
    monkeypatch.setenv("HOPFW_DEFAULT_DEGREE", "3")
    out = tmp_path / "sys.txt"
    assert main(["gb", str(pres), "--out", str(out)]) == 0
    assert "degree 3" in out.read_text().splitlines()[1]
    # an explicit flag wins over the environment
    assert main(["gb", str(pres), "--degree", "4", "--out", str(out)]) == 0
    assert "degree 4" in out.read_text().splitlines()[1]
    capsys.readouterr()
    monkeypatch.setenv("HOPFW_DEFAULT_DEGREE", "zero")
    assert main(["gb", str(pres), "--out", str(out)]) == 3
    assert "not an integer" in capsys.readouterr().err
    monkeypatch.setenv("HOPFW_DEFAULT_DEGREE", "0")
    assert main(["gb", str(pres), "--out", str(out)]) == 3
    assert "must be positive" in capsys.readouterr().err


def test_verify_axioms_bilinear(tmp_path, capsys):
    path = tmp_path / "b.json"
    main(["example", "symplectic2", "--out", str(path)])
    capsys.readouterr()
    rc = main(["verify", "--suite", "axioms", str(path), "--algebra", "hb", "--degree", "4"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "PASS counit:bst[1,1]"
    assert out[-1] == "summary: 32 pass, 0 fail, 0 uncertified"


def test_verify_axioms_uncertified_exit_code(capsys):
    rc = main(
        ["verify", "--suite", "axioms", "--algebra", "ahmn",
         "--m", "3", "--n", "2", "--degree", "3"]
    )
    assert rc == 2
    out = capsys.readouterr().out
    assert "UNCERTIFIED antipode-ideal:rowzero[1,1,2] (needs degree 4, certified 3)" in out
    assert out.strip().splitlines()[-1] == "summary: 32 pass, 0 fail, 12 uncertified"


def test_verify_axioms_form_presentation_appends_left_inverse(cyclic2, capsys):
    rc = main(["verify", "--suite", "axioms", cyclic2, "--algebra", "bw", "--degree", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS leftinv[2,2]" in out
    assert out.strip().splitlines()[-1] == "summary: 20 pass, 0 fail, 0 uncertified"


def test_verify_derived_uses_two_polar_samples(cyclic2, capsys):
    rc = main(["verify", "--suite", "derived", cyclic2, "--degree", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == "PASS sample1:sinw[1,1,1]"
    assert any(l.startswith("PASS sample2:") for l in lines)
    assert lines[-1] == "summary: 64 pass, 0 fail, 0 uncertified"


def test_verify_pair_reduction(cyclic2, capsys):
    rc = main(["verify", "--suite", "pair-reduction", cyclic2, "--degree", "4"])
    assert rc == 0
    assert (
        capsys.readouterr().out.strip().splitlines()[-1]
        == "summary: 8 pass, 0 fail, 0 uncertified"
    )


def test_verify_manin(capsys):
    rc = main(["verify", "--suite", "manin", "--degree", "4"])
    assert rc == 0
    assert (
        capsys.readouterr().out.strip().splitlines()[-1]
        == "summary: 27 pass, 0 fail, 0 uncertified"
    )


def test_verify_manin_rejects_other_forms(cyclic2, capsys):
    assert main(["verify", "--suite", "manin", cyclic2, "--degree", "4"]) == 3
    assert "alternating" in capsys.readouterr().err


def test_verify_diagonal_iso_defaults(capsys):
    rc = main(["verify", "--suite", "diagonal-iso", "--degree", "4"])
    assert rc == 0
    assert (
        capsys.readouterr().out.strip().splitlines()[-1]
        == "summary: 32 pass, 0 fail, 0 uncertified"
    )


def test_verify_bilinear_iso(tmp_path, capsys):
    path = tmp_path / "b.json"
    main(["example", "symplectic2", "--out", str(path)])
    capsys.readouterr()
    rc = main(["verify", "--suite", "bilinear-iso", str(path), "--degree", "4"])
    assert rc == 0
    assert (
        capsys.readouterr().out.strip().splitlines()[-1]
        == "summary: 24 pass, 0 fail, 0 uncertified"
    )


def test_verify_bilinear_iso_needs_arity_two(cyclic2, capsys):
    assert main(["verify", "--suite", "bilinear-iso", cyclic2, "--degree", "4"]) == 3
    assert "arity-2" in capsys.readouterr().err


def test_verify_noninjectivity_exit_codes(capsys):
    rc = main(["verify", "--suite", "noninjectivity", "--degree", "4"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.strip().splitlines()[-1] == "verdict: noninjective certified"
    rc = main(["verify", "--suite", "noninjectivity", "--degree", "3"])
    out = capsys.readouterr().out
    assert rc == 2
    assert out.strip().splitlines()[-1] == "verdict: inconclusive at degree 3"


def test_verify_requires_form_when_no_fallback(capsys):
    assert main(["verify", "--suite", "derived"]) == 3
    assert "needs a form file" in capsys.readouterr().err


def test_argparse_errors_exit_with_usage_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 3


def test_exit_code_ranking():
    ok = CheckResult("a", Status.PASS)
    bad = CheckResult("b", Status.FAIL)
    maybe = CheckResult("c", Status.UNCERTIFIED)
    assert _exit_code([]) == 0
    assert _exit_code([ok]) == 0
    assert _exit_code([ok, maybe]) == 2
    # a refutation outranks an uncertified check
    assert _exit_code([ok, maybe, bad]) == 1


def test_parse_poly_error_becomes_usage_exit(cyclic2, tmp_path, capsys):
    # a malformed presentation file is a usage error, not a crash
    bad = tmp_path / "bad.txt"
    bad.write_text("algebra hw\nn 2\nm 3\nbogus line\n")
    assert main(["gb", str(bad), "--degree", "3"]) == 3
    assert "hopfw: error:" in capsys.readouterr().err
