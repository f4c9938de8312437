import pytest

from pillowcase.catalog import CatalogError, builtins, lookup, parse_catalog, resolve
from pillowcase.perms import Perm


def test_builtins():
    table = builtins()
    assert {"gl23", "sl32", "a4xc3", "a4", "c3"} <= set(table)
    assert table["gl23"].group.order == 48
    assert table["sl32"].group.order == 168
    assert table["a4xc3"].group.order == 36


def test_a4xc3_default_triple():
    e = lookup("a4xc3")
    a, b, c = e.generator_perms
    assert list(e.default_triple) == [b * c, a * a * c * c, a * b]


def test_catalog_text_round_trip(tmp_path):
    text = """
# a small catalog
name s3
degree 3
gens (1 2); (1 2 3)
triple (1 2); (1 2 3); (1 3)

name s3xc3
product s3 c3
"""
    path = tmp_path / "cat.txt"
    path.write_text(text)
    entries = resolve(str(path))
    assert [e.name for e in entries] == ["s3", "s3xc3"]
    assert entries[0].default_triple[2] == Perm.from_cycles("(1 3)", 3)
    assert entries[1].group.order == 18


def test_matrix_record():
    entries = parse_catalog("name m\nmatrix p=2 dim=2 gens=[[1,1],[0,1]]; [[0,1],[1,0]]\ntriple 1; 2; 1*2^-1\n")
    assert entries["m"].group.order == 6


@pytest.mark.parametrize("text", [
    "degree 3\n",
    "name x\n",
    "name x\ndegree 3\ngens (1 2)\ncolour red\n",
    "name x\nproduct a b\n",
    "name x\ndegree 3\ngens (1 2 3)\ntriple 1; 1\n",
    "name x\nmatrix p=3 dim=2 gens=[[1,0],[0\n",
])
def test_catalog_errors(text):
    with pytest.raises(CatalogError):
        parse_catalog(text)


def test_unknown_name():
    with pytest.raises(CatalogError):
        resolve("nosuchgroup")
