import pytest
from hypothesis import given, settings, strategies as st

from merkle_traversal.errors import ConfigError
from merkle_traversal.hashing import HashSuite
from merkle_traversal.oracle import FullTree, brute_auth_path, brute_root, verify_path


def leaves(H, seed):
    suite = HashSuite()
    s = suite.prng_seed(seed)
    out = []
    for _ in range(1 << H):
        k, s = suite.prng_next(s)
        out.append(suite.leaf_calc(k))
    return out


def test_root_height_one():
    l0, l1 = leaves(1, b"x")
    assert brute_root(1, b"x") == HashSuite().hash_children(l0, l1)


def test_root_deterministic():
    assert brute_root(5, b"s") == brute_root(5, b"s")
    assert brute_root(5, b"s") != brute_root(5, b"t")


def test_refuses_large_trees():
    with pytest.raises(ConfigError):
        FullTree.build(17, b"s")


def test_full_tree_parents():
    tree = FullTree.build(4, b"s")
    hc = HashSuite().hash_children
    for height in range(1, 5):
        for j, d in enumerate(tree.levels[height]):
            assert d == hc(tree.levels[height - 1][2 * j], tree.levels[height - 1][2 * j + 1])


def test_auth_path_height_one():
    assert [n.digest for n in brute_auth_path(1, b"x", 0)] == [leaves(1, b"x")[1]]


def test_auth_path_h4_i5():
    tree = FullTree.build(4, b"s")
    path = tree.auth_path(5)
    assert [(n.height, n.index) for n in path] == [(0, 4), (1, 3), (2, 0), (3, 1)]
    assert all(n.digest == tree.levels[n.height][n.index] for n in path)
    with pytest.raises(IndexError):
        tree.auth_path(16)


@pytest.mark.parametrize("H", range(0, 11))
def test_every_path_verifies(H):
    tree = FullTree.build(H, b"v")
    for i in range(1 << H):
        assert verify_path(H, i, tree.levels[0][i], tree.auth_path(i), tree.root)


@settings(max_examples=50)
@given(st.integers(1, 8), st.data())
def test_mutations_fail(H, data):
    tree = FullTree.build(H, b"m")
    i = data.draw(st.integers(0, (1 << H) - 1))
    path = [n.digest for n in tree.auth_path(i)]
    leaf = tree.levels[0][i]
    level = data.draw(st.integers(0, H - 1))
    byte = data.draw(st.integers(0, 31))
    bad = list(path)
    flipped = bytearray(bad[level])
    flipped[byte] ^= 1
    bad[level] = bytes(flipped)
    assert not verify_path(H, i, leaf, bad, tree.root)
    assert not verify_path(H, i ^ 1, leaf, path, tree.root)


def test_wrong_path_length():
    tree = FullTree.build(3, b"s")
    with pytest.raises(ValueError):
        verify_path(3, 0, tree.levels[0][0], tree.auth_path(0)[:2], tree.root)
