import numpy as np
import pytest

from conftest import FROZEN_SPEC
from texscreen.dataset import (
    Manifest,
    ManifestEntry,
    ManifestError,
    SplitMix64,
    SyntheticSpec,
    filter_group,
    generate_synthetic,
    load_manifest,
    serialize_manifest,
)
from texscreen.features import FeatureKind, extract_feature
from texscreen.imagecore import GrayImage


def _table_shaped_manifest():
    """Two-group layout: 20+20 in group 1, 4+15 in group 2."""
    entries = []
    for i in range(20):
        entries.append(ManifestEntry(f"g1-n{i:02d}", f"g1-n{i:02d}.pgm", -1, 1))
    for i in range(20):
        entries.append(ManifestEntry(f"g1-a{i:02d}", f"g1-a{i:02d}.pgm", 1, 1))
    for i in range(4):
        entries.append(ManifestEntry(f"g2-n{i:02d}", f"g2-n{i:02d}.pgm", -1, 2))
    for i in range(15):
        entries.append(ManifestEntry(f"g2-a{i:02d}", f"g2-a{i:02d}.pgm", 1, 2))
    return Manifest(tuple(entries))


class TestLoadManifest:
    def test_two_valid_lines(self):
        text = "id,path,label,group\na,one.pgm,normal,1\nb,two.pgm,adulterated,2\n"
        manifest = load_manifest(text)
        assert len(manifest) == 2
        assert manifest.entries[0] == ManifestEntry("a", "one.pgm", -1, 1)
        assert manifest.entries[1] == ManifestEntry("b", "two.pgm", 1, 2)

    def test_accepts_bytes(self):
        manifest = load_manifest(b"id,path,label,group\na,x.pgm,normal,1\n")
        assert len(manifest) == 1

    def test_unknown_label_names_line(self):
        text = "id,path,label,group\na,x.pgm,normal,1\nb,y.pgm,fresh,1\n"
        with pytest.raises(ManifestError, match="fresh") as err:
            load_manifest(text)
        assert err.value.line == 3

    def test_duplicate_id_names_line(self):
        text = (
            "id,path,label,group\n"
            "a,1.pgm,normal,1\n"
            "b,2.pgm,normal,1\n"
            "c,3.pgm,adulterated,2\n"
            "a,4.pgm,adulterated,2\n"
        )
        with pytest.raises(ManifestError, match="duplicate") as err:
            load_manifest(text)
        assert err.value.line == 5

    def test_unknown_group_names_line(self):
        with pytest.raises(ManifestError, match="group") as err:
            load_manifest("id,path,label,group\na,x.pgm,normal,3\n")
        assert err.value.line == 2

    def test_missing_field_names_line(self):
        with pytest.raises(ManifestError, match="4 fields") as err:
            load_manifest("id,path,label,group\na,x.pgm,normal\n")
        assert err.value.line == 2

    def test_bad_header_rejected(self):
        with pytest.raises(ManifestError) as err:
            load_manifest("id,file,label,group\na,x.pgm,normal,1\n")
        assert err.value.line == 1

    def test_empty_path_rejected(self):
        with pytest.raises(ManifestError, match="path"):
            load_manifest("id,path,label,group\na,,normal,1\n")

    def test_roundtrip_identity(self):
        manifest = _table_shaped_manifest()
        assert load_manifest(serialize_manifest(manifest)) == manifest


class TestFilterGroup:
    def test_group_one_has_forty(self):
        assert len(filter_group(_table_shaped_manifest(), 1)) == 40

    def test_group_two_has_nineteen(self):
        assert len(filter_group(_table_shaped_manifest(), 2)) == 19

    def test_absent_group_yields_empty(self):
        only_one = Manifest(tuple(e for e in _table_shaped_manifest().entries if e.group == 1))
        assert len(filter_group(only_one, 2)) == 0

    def test_order_preserved(self):
        manifest = _table_shaped_manifest()
        filtered = filter_group(manifest, 2)
        original_order = [e.sample_id for e in manifest.entries if e.group == 2]
        assert [e.sample_id for e in filtered.entries] == original_order

    def test_invalid_group_rejected(self):
        with pytest.raises(ValueError):
            filter_group(_table_shaped_manifest(), 3)


class TestSplitMix64:
    def test_deterministic_stream(self):
        a = SplitMix64(1234)
        b = SplitMix64(1234)
        assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]

    def test_byte_range(self):
        rng = SplitMix64(9)
        values = [rng.next_byte() for _ in range(1000)]
        assert min(values) >= 0 and max(values) <= 255
        assert len(set(values)) > 100  # spread over the byte range

    def test_bounded_draws(self):
        rng = SplitMix64(9)
        assert all(0 <= rng.next_below(7) < 7 for _ in range(200))


class TestGenerateSynthetic:
    def test_same_spec_same_bytes(self):
        images1, manifest1 = generate_synthetic(FROZEN_SPEC)
        images2, manifest2 = generate_synthetic(FROZEN_SPEC)
        assert manifest1 == manifest2
        for a, b in zip(images1, images2):
            assert np.array_equal(a.pixels, b.pixels)

    def test_output_count_and_balance(self, synthetic_benchmark):
        images, manifest, _ = synthetic_benchmark
        assert len(images) == 2 * FROZEN_SPEC.per_class
        labels = [e.label for e in manifest.entries]
        assert labels.count(-1) == labels.count(1) == FROZEN_SPEC.per_class

    def test_pairs_share_gray_histogram_exactly(self, synthetic_benchmark):
        images, manifest, _ = synthetic_benchmark
        by_id = {e.sample_id: img for img, e in zip(images, manifest.entries)}
        for k in range(FROZEN_SPEC.per_class):
            normal = by_id[f"normal-{k:03d}"].pixels
            twin = by_id[f"adulterated-{k:03d}"].pixels
            assert np.array_equal(
                np.bincount(normal.ravel(), minlength=256),
                np.bincount(twin.ravel(), minlength=256),
            )

    def test_pairs_differ_in_lbp_histogram(self, synthetic_benchmark):
        images, manifest, _ = synthetic_benchmark
        by_id = {e.sample_id: img for img, e in zip(images, manifest.entries)}
        for k in range(FROZEN_SPEC.per_class):
            normal = extract_feature(by_id[f"normal-{k:03d}"], FeatureKind.LBP)
            twin = extract_feature(by_id[f"adulterated-{k:03d}"], FeatureKind.LBP)
            assert np.abs(normal.values - twin.values).sum() > 0

    def test_different_seeds_differ(self):
        a, _ = generate_synthetic(SyntheticSpec(seed=1, per_class=2, width=8, height=8))
        b, _ = generate_synthetic(SyntheticSpec(seed=2, per_class=2, width=8, height=8))
        assert any(not np.array_equal(x.pixels, y.pixels) for x, y in zip(a, b))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SyntheticSpec(seed=1, per_class=1, width=8, height=8)
        with pytest.raises(ValueError):
            SyntheticSpec(seed=1, per_class=2, width=4, height=8)
        with pytest.raises(ValueError):
            SyntheticSpec(seed=-1, per_class=2, width=8, height=8)
        with pytest.raises(ValueError):
            SyntheticSpec(seed=1, per_class=2, width=8, height=8, smoothing_radius=-1)

    def test_smoothing_radius_zero_keeps_raw_noise(self):
        images, _ = generate_synthetic(
            SyntheticSpec(seed=5, per_class=2, width=16, height=16, smoothing_radius=0)
        )
        # raw uniform noise spans most of the byte range
        assert images[0].pixels.max() - images[0].pixels.min() > 100


class TestManifestTypes:
    def test_entry_validation(self):
        with pytest.raises(ValueError):
            ManifestEntry("", "x.pgm", 1, 1)
        with pytest.raises(ValueError):
            ManifestEntry("a", "", 1, 1)
        with pytest.raises(ValueError):
            ManifestEntry("a", "x.pgm", 0, 1)
        with pytest.raises(ValueError):
            ManifestEntry("a", "x.pgm", 1, 3)

    def test_manifest_rejects_duplicate_ids(self):
        e = ManifestEntry("a", "x.pgm", 1, 1)
        with pytest.raises(ValueError):
            Manifest((e, e))
