from twoassoc.utils.dot_export import export_dot_graph, poset_to_dot

COVERS = {"top": [], "left": ["top"], "right": ["top"]}
DIMS = {"top": 1, "left": 0, "right": 0}


def test_poset_to_dot():
    text = poset_to_dot(COVERS, DIMS, "interval")
    lines = text.splitlines()
    assert lines[0] == 'digraph "interval" {'
    assert lines[-1] == "}"
    assert text.count("rank = same;") == 2
    assert '\ts0 -> s2;' in lines
    assert '\ts1 -> s2;' in lines
    assert '\t\ts2 [label="top"];' in lines


def test_labels_are_quoted():
    text = poset_to_dot({'a "b"': []}, {'a "b"': 0})
    assert 'label="a \\"b\\""' in text


def test_export_dot_graph(tmp_path):
    path = tmp_path / "poset.gv"
    export_dot_graph(COVERS, DIMS, path)
    assert path.read_text(encoding='utf-8') == poset_to_dot(COVERS, DIMS)
