"""Presentation files: loading, validation, element expressions."""

import json

import pytest

from fullgroups import ValidationError
from fullgroups.fullgroup import commutator, invert, is_identity, multiply, tau
from fullgroups.presentation import Presentation, bundled_names, load, load_bundled


def test_bundled_inventory():
    names = bundled_names()
    for expected in (
        "recursive_shift3",
        "full_shift2",
        "full_shift5",
        "exchange_shift5",
        "stationary_af",
        "binary_odometer",
        "golden_sft",
    ):
        assert expected in names


def test_recursive_shift3_showcase_identities():
    pres = load_bundled("recursive_shift3")
    g, g_fine, h = pres.elements["g"], pres.elements["g_fine"], pres.elements["h"]
    gh, gh_expected = pres.elements["gh"], pres.elements["gh_expected"]
    assert g.equals(g_fine)
    assert gh == gh_expected
    assert multiply(g, h) == gh_expected
    assert tau(pres.bisections["F_swap"]) == gh_expected


def test_expression_grammar():
    pres = load_bundled("recursive_shift3")
    g, h = pres.elements["g"], pres.elements["h"]
    assert pres.eval("g*h") == pres.elements["gh"]
    assert pres.eval("g^-1").equals(invert(g))
    assert pres.eval("[g,h]").equals(commutator(g, h))
    assert pres.eval("tau(F_swap)") == pres.elements["gh_expected"]
    assert is_identity(pres.eval("g*g^-1"))
    assert pres.eval("g^2").equals(multiply(g, g))
    assert pres.eval("(g*h)^-1").equals(invert(multiply(g, h)))
    with pytest.raises(ValidationError):
        pres.eval("nosuch*g")
    with pytest.raises(ValidationError):
        pres.eval("g**h")


def test_corrupted_file_reports_path(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError) as err:
        load(bad)
    assert "broken.json" in str(err.value)


def test_missing_reference_errors():
    with pytest.raises(ValidationError):
        Presentation(
            {
                "space": {"kind": "full_shift", "alphabet": ["0", "1"]},
                "bisections": {},
                "basics": ["nope"],
            }
        )
    with pytest.raises(ValidationError):
        Presentation(
            {
                "space": {"kind": "full_shift", "alphabet": ["0", "1"]},
                "elements": {"bad": {"dom": ["0"], "germ": ["mystery"], "ran": ["1"]}},
            }
        )


def test_partial_tables_rejected_as_elements():
    with pytest.raises(ValidationError):
        Presentation(
            {
                "space": {"kind": "full_shift", "alphabet": ["0", "1"]},
                "elements": {"partial": {"dom": ["0"], "germ": ["id"], "ran": ["1"]}},
            }
        )


def test_all_bundled_presentations_validate():
    for name in bundled_names():
        if name == "fibonacci_cp":
            continue  # quasicrystal parameters, not a groupoid presentation
        pres = load_bundled(name)
        assert pres.space is not None
        for b in pres.basic_bisections():
            assert not b.is_empty()
