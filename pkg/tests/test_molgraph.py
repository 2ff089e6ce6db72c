import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_c4, read_reference_properties
from molagent.molgraph import (
    AROMATIC,
    SmilesError,
    formula_string,
    molecular_formula,
    parse_smiles,
    perceive_rings,
    write_smiles,
)


def graph(m):
    g = nx.Graph()
    for i, a in enumerate(m.atoms):
        g.add_node(i, el=a.element, q=a.charge, h=a.hydrogens, ar=a.aromatic)
    for b in m.bonds:
        g.add_edge(b.begin, b.end, order=b.order)
    return g


def isomorphic(m1, m2):
    return nx.is_isomorphic(
        graph(m1),
        graph(m2),
        node_match=lambda x, y: x == y,
        edge_match=lambda x, y: x["order"] == y["order"],
    )


def test_methane():
    m = parse_smiles("C")
    assert len(m.atoms) == 1 and m.atoms[0].hydrogens == 4 and perceive_rings(m) == []


def test_benzene():
    m = parse_smiles("c1ccccc1")
    assert all(a.aromatic and a.element == 6 and a.hydrogens == 1 for a in m.atoms)
    assert [len(r) for r in perceive_rings(m)] == [6]
    assert all(b.order == AROMATIC for b in m.bonds)


def test_kekule_benzene_is_aromatic():
    m = parse_smiles("C1=CC=CC=C1")
    assert all(a.aromatic for a in m.atoms)


def test_c4_iteration4_three_aromatic_rings():
    m = parse_smiles("Fc1ccc(S(=O)(=O)Nc2nc3ccccc3s2)cc1C(=O)NC1CCCCC1")
    aromatic = [r for r in m.rings if all(m.atoms[i].aromatic for i in r)]
    assert len(aromatic) == 3
    # independent check: minimum cycle basis of the aromatic subgraph
    g = graph(m).subgraph([i for i, a in enumerate(m.atoms) if a.aromatic])
    assert len(nx.minimum_cycle_basis(g)) == 3


@pytest.mark.parametrize(
    "text,position,fragment",
    [
        ("C(", 2, "unclosed branch"),
        ("", 1, "empty"),
        ("C1CC", 2, "unclosed ring bond"),
        ("Xy", 1, "unknown atom symbol"),
        ("C(C)(C)(C)(C)C", 1, "valence"),
        ("[C", 1, "unclosed bracket"),
        ("CC)", 3, "unmatched closing parenthesis"),
        ("c1cccc1", 1, "kekulize"),
    ],
)
def test_errors_carry_position(text, position, fragment):
    with pytest.raises(SmilesError) as exc:
        parse_smiles(text)
    assert exc.value.position == position
    assert fragment in exc.value.reason
    assert str(exc.value).startswith(f"position {position}: ")


def test_error_messages_are_stable():
    msgs = set()
    for _ in range(3):
        try:
            parse_smiles("C1CC")
        except SmilesError as exc:
            msgs.add(str(exc))
    assert len(msgs) == 1


@pytest.mark.parametrize(
    "smiles,formula",
    [
        ("c1ccccc1", {"C": 6, "H": 6}),
        ("CCO", {"C": 2, "H": 6, "O": 1}),
        ("Nc1ccc(O)cc1", {"C": 6, "H": 7, "N": 1, "O": 1}),
        ("[NH4+]", {"N": 1, "H": 4}),
        ("[Na+].[Cl-]", {"Na": 1, "Cl": 1}),
    ],
)
def test_molecular_formula(smiles, formula):
    assert molecular_formula(parse_smiles(smiles)) == formula


def test_formula_string_hill_order():
    assert formula_string(parse_smiles("NC(=O)c1ccccc1O")) == "C7H7NO2"


def test_naphthalene_rings():
    m = parse_smiles("c1ccc2ccccc2c1")
    assert sorted(len(r) for r in m.rings) == [6, 6]
    assert sorted(len(c) for c in nx.minimum_cycle_basis(graph(m))) == [6, 6]


def test_chain_has_no_rings():
    assert perceive_rings(parse_smiles("CCCC")) == []


def test_bracket_and_special_syntax():
    m = parse_smiles("[13CH3][NH3+]")
    assert m.atoms[0].isotope == 13 and m.atoms[1].charge == 1 and m.atoms[1].hydrogens == 3
    assert len(parse_smiles("C%10CC%10").rings) == 1
    # stereo bonds are accepted and stored
    assert any(b.stereo for b in parse_smiles("F/C=C/F").bonds)


def test_multicomponent():
    m = parse_smiles("CCO.O")
    assert m.components == 2 and molecular_formula(m) == {"C": 2, "H": 8, "O": 2}


def test_azulene_fusion_bond_not_aromatic():
    m = parse_smiles("c1ccc2cccc2cc1")
    fusion = [b for b in m.bonds if sum(1 for r in m.rings if b.begin in r and b.end in r) == 2]
    assert len(fusion) == 1 and fusion[0].order != AROMATIC


@pytest.mark.parametrize("smiles", ["C", "c1ccccc1", "O=C(O)c1ccccc1OC(C)=O", "C1CC2CCC1C2", "[O-][n+]1ccccc1"])
def test_roundtrip_examples(smiles):
    m = parse_smiles(smiles)
    assert isomorphic(m, parse_smiles(write_smiles(m)))


def test_roundtrip_c4_trajectory():
    for _, s, *_ in read_c4():
        if s is None:
            continue
        m = parse_smiles(s)
        assert isomorphic(m, parse_smiles(write_smiles(m))), s


def test_corpus_invariants():
    for row in read_reference_properties():
        m = parse_smiles(row["smiles"])
        # cycle-space dimension
        assert len(m.rings) == len(m.bonds) - len(m.atoms) + m.components, row["smiles"]
        # determinism
        assert graph(m).nodes(data=True) == graph(parse_smiles(row["smiles"])).nodes(data=True)


def test_cubane_ring_basis_size():
    # the cycle rank of cubane is 5; some toolkits report six rings instead
    m = parse_smiles("C12C3C4C1C5C2C3C45")
    assert len(m.rings) == 5 and all(len(r) == 4 for r in m.rings)


# random graphs with single bonds over C/N/O, written by an independent DFS writer
VALENCE = {"C": 4, "N": 3, "O": 2}


@st.composite
def random_molecules(draw):
    n = draw(st.integers(1, 12))
    elements = draw(st.lists(st.sampled_from("CCCNO"), min_size=n, max_size=n))
    degree = [0] * n
    edges = set()
    for i in range(1, n):
        options = [j for j in range(i) if degree[j] < VALENCE[elements[j]]]
        if not options:
            elements[i] = "C"
            options = [j for j in range(i) if degree[j] < 4] or [None]
        j = draw(st.sampled_from(options))
        if j is None:
            continue
        edges.add((j, i))
        degree[i] += 1
        degree[j] += 1
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    for a, b in extra:
        a, b = min(a, b), max(a, b)
        if a == b or (a, b) in edges:
            continue
        if degree[a] < VALENCE[elements[a]] and degree[b] < VALENCE[elements[b]]:
            edges.add((a, b))
            degree[a] += 1
            degree[b] += 1
    return elements, edges


def emit_smiles(elements, edges):
    n = len(elements)
    adj = {i: sorted({b for a, b in edges if a == i} | {a for a, b in edges if b == i}) for i in range(n)}
    seen, parts, labels = set(), [], iter(range(1, 100))
    tree, closures = set(), {}

    def walk(v, parent):
        seen.add(v)
        for w in adj[v]:
            if w == parent:
                continue
            if w not in seen:
                tree.add(frozenset((v, w)))
                walk(w, v)

    for root in range(n):
        if root not in seen:
            walk(root, None)
    ring_edges = [e for e in edges if frozenset(e) not in tree]
    for a, b in ring_edges:
        d = next(labels)
        closures.setdefault(a, []).append(d)
        closures.setdefault(b, []).append(d)

    written = set()

    def write(v):
        written.add(v)
        s = elements[v] + "".join(f"%{d:02d}" for d in closures.get(v, []))
        kids = [w for w in adj[v] if frozenset((v, w)) in tree and w not in written]
        for k, w in enumerate(kids):
            sub = write(w)
            s += sub if k == len(kids) - 1 else f"({sub})"
        return s

    for root in range(n):
        if root not in written:
            parts.append(write(root))
    return ".".join(parts)


@settings(max_examples=150, deadline=None)
@given(random_molecules())
def test_random_graphs_parse_and_roundtrip(mol):
    elements, edges = mol
    text = emit_smiles(elements, edges)
    m = parse_smiles(text)
    assert len(m.atoms) == len(elements) and len(m.bonds) == len(edges)
    expected = nx.Graph()
    expected.add_nodes_from((i, {"el": e}) for i, e in enumerate(elements))
    expected.add_edges_from(edges)
    for i, e in enumerate(elements):
        expected.nodes[i]["h"] = VALENCE[e] - expected.degree(i)
    got = nx.Graph()
    got.add_nodes_from((i, {"el": a.symbol, "h": a.hydrogens}) for i, a in enumerate(m.atoms))
    got.add_edges_from((b.begin, b.end) for b in m.bonds)
    assert nx.is_isomorphic(expected, got, node_match=lambda x, y: x == y)
    assert len(m.rings) == len(m.bonds) - len(m.atoms) + m.components
    assert isomorphic(m, parse_smiles(write_smiles(m)))
