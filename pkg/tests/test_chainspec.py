import json
from fractions import Fraction

import pytest

from kmspec import chain_from_dict, load_chain, pi_weights
from kmspec.chainspec import random_conductance_chain
from kmspec.errors import ConfigInvalid


def test_builtin_kinds():
    assert chain_from_dict({"kind": "chebyshev"}).row_exact(0)[1:] == (0, 1)
    assert chain_from_dict({"kind": "pentadiagonal_chebyshev"}).m == 2


def test_decimal_strings_exact(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"kind": "birth_death", "p": [1, 0.625], "q": [0, "0.125"]}))
    chain = load_chain(path)
    assert chain.entry_exact(3, 4) == Fraction(5, 8)
    assert chain.entry_exact(3, 2) == Fraction(1, 8)
    assert chain.entry_exact(3, 3) == Fraction(1, 4)


def test_banded_tail_row():
    q = "1/4"
    chain = chain_from_dict({"kind": "banded", "m": 2,
                             "rows": [[0, 0, 0, 0.5, 0.5], [0, q, q, q, q]],
                             "tail_row": [q, q, 0, q, q]})
    assert chain.row_exact(10) == (Fraction(1, 4),) * 2 + (0,) + (Fraction(1, 4),) * 2
    assert pi_weights(chain, 6).exact == (1, 2, 2, 2, 2, 2)


def test_conductance_kind():
    chain = chain_from_dict({"kind": "conductance", "m": 1, "rows": [[0, 1]], "tail_row": [1, 1]})
    pi_weights(chain, 10)
    assert sum(chain.row_exact(5)) == 1


def test_random_conductance_reproducible():
    a = random_conductance_chain(2, 5)
    b = chain_from_dict({"kind": "random_conductance", "m": 2, "seed": 5})
    assert [a.row_exact(i) for i in range(12)] == [b.row_exact(i) for i in range(12)]


@pytest.mark.parametrize("spec", [
    [],
    {"kind": "weird"},
    {"kind": "birth_death", "p": [], "q": [0]},
    {"kind": "birth_death", "p": ["x"], "q": [0]},
    {"kind": "banded", "m": 0, "rows": [], "tail_row": [1]},
    {"kind": "banded", "m": 1, "rows": [[0, 2, 0]], "tail_row": [0.5, 0, 0.5]},
    {"kind": "conductance", "m": 1, "rows": [[1]], "tail_row": [1, 1]},
])
def test_invalid(spec):
    with pytest.raises(ConfigInvalid):
        chain_from_dict(spec)


def test_bad_files(tmp_path):
    with pytest.raises(ConfigInvalid):
        load_chain(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigInvalid):
        load_chain(bad)


def test_shipped_chains():
    from pathlib import Path
    root = Path(__file__).resolve().parents[1] / "chains"
    for path in sorted(root.glob("*.json")):
        chain = load_chain(path)
        pi_weights(chain, 12)
