import json

import pytest

from twoassoc.core.errors import SchemaError
from twoassoc.core.gen import fill_strata
from twoassoc.core.interchange import dumps, from_dict, load, loads, save, to_dict


def test_saving_a_loaded_file_reproduces_it(diamond_cat):
    labelled = fill_strata(diamond_cat)
    text = dumps(labelled)
    again = loads(text)
    assert dumps(again) == text
    assert set(again.points) == set(labelled.points)
    assert set(again.edges) == set(labelled.edges)
    assert again.cap == labelled.cap and again.bound == labelled.bound


def test_save_and_load(tmp_path, chain_cat):
    path = tmp_path / "chain.json"
    save(chain_cat, path)
    assert dumps(load(path)) == dumps(chain_cat)


def _broken(cat, edit):
    data = json.loads(dumps(cat))
    edit(data)
    return data


def test_unknown_point_id(diamond_cat):
    data = _broken(diamond_cat, lambda d: d['edges'][0]['ends'][0].update(left="ghost"))
    with pytest.raises(SchemaError, match=r"edges\[0\]\.ends\[0\]: unknown point id 'ghost'"):
        from_dict(data)


def test_unknown_field(chain_cat):
    data = _broken(chain_cat, lambda d: d['points'][0].update(x=1))
    with pytest.raises(SchemaError, match=r"points\[0\]: unknown field 'x'"):
        from_dict(data)


def test_bad_magic(chain_cat):
    data = to_dict(chain_cat)
    data['magic'] = "something-else"
    with pytest.raises(SchemaError, match="magic: expected"):
        from_dict(data)


def test_bad_energy(chain_cat):
    data = _broken(chain_cat, lambda d: d['points'][0].update(energy="one"))
    with pytest.raises(SchemaError, match="not a p/q rational"):
        from_dict(data)


def test_not_json():
    with pytest.raises(SchemaError):
        loads("{ not json")


def test_missing_file(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        load(tmp_path / "missing.json")
