from graft_lab.decomposition import components, noncap
from graft_lab.harness.generate import CorpusSpec, generate
from graft_lab.kl_decomp import check_ak2part, component_classes, kl_decomposition

from conftest import eids, make, vids


def test_p3_classes(p3):
    kl = kl_decomposition(p3)
    assert kl.factor_components == [vids(p3, "a", "b", "c")]
    assert kl.classes == [vids(p3, "a"), vids(p3, "b"), vids(p3, "c")]


def test_c4_classes(c4):
    kl = kl_decomposition(c4)
    assert len(kl.factor_components) == 1
    assert sorted(kl.classes, key=min) == [vids(c4, "v1", "v3"), vids(c4, "v2", "v4")]
    assert kl.class_of == {0: "v1", 1: "v2", 2: "v1", 3: "v2"}


def test_isolated_vertices_are_singleton_factor_components(k2_empty):
    kl = kl_decomposition(k2_empty)
    assert kl.allowed == 0
    assert kl.factor_components == [vids(k2_empty, "a"), vids(k2_empty, "b")]
    assert kl.classes == kl.factor_components


def test_class_id_uses_smallest_external_label():
    g = make(["z", "y", "x", "w"], [("z", "y"), ("y", "x"), ("x", "w"), ("w", "z")], ["z", "y", "x", "w"])
    kl = kl_decomposition(g)
    assert set(kl.class_of.values()) == {"x", "w"}


def test_component_classes_p3(p3):
    F = eids(p3, "ab", "bc")
    bc = next(K for K in components(p3, F, "a") if K.level == -1)
    cc = component_classes(p3, F, bc)
    assert cc.root_class == vids(p3, "b") and cc.antiroot_class == vids(p3, "a")
    assert cc.root_fragment == vids(p3, "b") and cc.ak_family == [vids(p3, "b")]
    rep = check_ak2part(p3, F, bc, cc)
    assert rep.attachments == {1 << 2: 0}
    c = next(K for K in noncap(p3, F, "b") if K.vertices == vids(p3, "c"))
    cc = component_classes(p3, F, c)
    assert (cc.root_class, cc.antiroot_class, cc.root_fragment) == (vids(p3, "c"), vids(p3, "b"), vids(p3, "c"))


def test_component_classes_c4(c4):
    F = eids(c4, ("v1", "v2"), ("v3", "v4"))
    K = next(K for K in noncap(c4, F, "v1") if K.vertices == vids(c4, "v2"))
    cc = component_classes(c4, F, K)
    assert cc.root_class == vids(c4, "v2", "v4")
    assert cc.antiroot_class == vids(c4, "v1", "v3")
    assert cc.root_fragment == vids(c4, "v2")
    assert check_ak2part(c4, F, K, cc).attachments == {}


def test_classes_are_inside_factor_components_on_corpus():
    for graft in generate(CorpusSpec(max_vertices=5)):
        kl = kl_decomposition(graft)
        covered = 0
        for m in kl.class_masks:
            assert covered & m == 0
            covered |= m
            assert m & ~kl.fc_masks[kl.fc_index[(m & -m).bit_length() - 1]] == 0
        assert covered == graft.graph.all_vertices
