"""Export a face poset for plotting with graphviz' dot

Strata of equal dimension are drawn on one rank, and every covering relation
becomes an edge from the smaller stratum to the one containing it. After
writing the graph to 'poset.gv':

    dot -Tpng -O poset.gv
"""

from pathlib import Path
from typing import Dict, List, Union


def _quote(text: str) -> str:
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def poset_to_dot(covers: Dict[str, List[str]], dims: Dict[str, int], name: str = "poset") -> str:
    """Render covering relations as a DOT digraph

    Args:
        covers (dict): Each stratum mapped to the strata covering it
        dims (dict): Dimension of each stratum
        name (str): Graph name

    Returns:
        str: DOT text with nodes and edges in sorted order
    """
    lines = [f'digraph {_quote(name)} {{', '\tgraph [rankdir=BT];', '\tnode [shape=box, fontsize=10];']
    layers: Dict[int, List[str]] = {}
    for stratum in covers:
        layers.setdefault(dims[stratum], []).append(stratum)
    ids = {stratum: f"s{n}" for n, stratum in enumerate(sorted(covers, key=lambda s: (dims[s], s)))}
    for dim in sorted(layers):
        lines.append('\t{')
        lines.append('\t\trank = same;')
        for stratum in sorted(layers[dim]):
            lines.append(f'\t\t{ids[stratum]} [label={_quote(stratum)}];')
        lines.append('\t}')
    for stratum in sorted(covers, key=lambda s: ids[s]):
        for above in sorted(covers[stratum]):
            if above in ids:
                lines.append(f'\t{ids[stratum]} -> {ids[above]};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def export_dot_graph(covers: Dict[str, List[str]], dims: Dict[str, int], path: Union[str, Path],
                     name: str = "poset") -> None:
    Path(path).write_text(poset_to_dot(covers, dims, name), encoding='utf-8')
