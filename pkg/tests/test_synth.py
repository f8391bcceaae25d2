import json

import numpy as np
import pytest
from scipy.stats import chi2

from scenestats import (
    FilterConfig,
    ImageMeta,
    ItemSizeLaw,
    ScoreBands,
    SynthConfig,
    annotations_to_coco,
    extract_magnitudes,
    filter_scene,
    generate,
    mask_to_bitmap,
    numerosity,
    parse_coco,
)
from scenestats.errors import ConfigurationError
from scenestats.interchange import detection_set_to_json


def small_cfg(**overrides):
    base = dict(n_scenes=50, zipf_alpha=1.8, n_max=8, image_size=(48, 48),
                item_size_law=ItemSizeLaw(base_fraction=0.01, exponent=-1.0,
                                          jitter_sigma=0.1),
                spurious_rate=0.0, seed=11)
    base.update(overrides)
    return SynthConfig(**base)


def test_deterministic_same_seed():
    a_ann, a_det = generate(small_cfg())
    b_ann, b_det = generate(small_cfg())
    assert a_ann == b_ann
    assert a_det == b_det
    # byte-identical serialized corpora
    assert json.dumps(annotations_to_coco(a_ann), sort_keys=True) == \
        json.dumps(annotations_to_coco(b_ann), sort_keys=True)
    assert [detection_set_to_json(d) for d in a_det] == \
        [detection_set_to_json(d) for d in b_det]


def test_different_seed_differs():
    a_ann, _ = generate(small_cfg(seed=1))
    b_ann, _ = generate(small_cfg(seed=2))
    assert a_ann != b_ann


def test_masks_disjoint_and_in_bounds():
    annotations, _ = generate(small_cfg(n_scenes=30, seed=3))
    for scene in annotations:
        total = 0
        union = np.zeros((scene.image.height, scene.image.width), dtype=bool)
        for obj in scene.objects:
            bits = mask_to_bitmap(obj.mask, scene.image)
            assert bits.shape == (scene.image.height, scene.image.width)
            assert not (union & bits).any()  # no overlap between objects
            union |= bits
            total += int(bits.sum())
            x, y, w, h = obj.bbox
            assert 0 <= x and x + w <= scene.image.width
            assert 0 <= y and y + h <= scene.image.height
        assert int(union.sum()) == total


def test_noiseless_corpus_is_identity_under_low_threshold():
    cfg = small_cfg(score_bands=ScoreBands(true_range=(0.5, 1.0),
                                           spurious_range=(0.0, 0.0)))
    annotations, detections = generate(cfg)
    for scene, ds in zip(annotations, detections):
        filtered = filter_scene(ds.detections, ds.image,
                                FilterConfig(threshold=0.22))
        assert numerosity(filtered) == scene.numerosity


def test_spurious_detections_added():
    cfg = small_cfg(spurious_rate=2.0, seed=21)
    annotations, detections = generate(cfg)
    extra = sum(len(d.detections) for d in detections) - \
        sum(s.numerosity for s in annotations)
    assert extra > 0


def test_item_size_means_decrease_with_n():
    cfg = small_cfg(n_scenes=400, zipf_alpha=1.0, n_max=6,
                    item_size_law=ItemSizeLaw(base_fraction=0.02,
                                              exponent=-1.0,
                                              jitter_sigma=0.05),
                    seed=9)
    annotations, _ = generate(cfg)
    by_n: dict[int, list[float]] = {}
    for scene in annotations:
        if scene.numerosity == 0:
            continue
        bitmaps = [mask_to_bitmap(o.mask, scene.image) for o in scene.objects]
        vec = extract_magnitudes(scene.image, bitmaps)
        by_n.setdefault(vec.numerosity, []).append(vec.item_size_rel)
    means = [float(np.mean(by_n[n])) for n in sorted(by_n) if len(by_n[n]) >= 5]
    assert len(means) >= 4
    assert all(b < a for a, b in zip(means, means[1:]))


def test_numerosity_frequencies_match_zipf_chi2():
    cfg = SynthConfig(n_scenes=100_000, zipf_alpha=2.0, n_max=10,
                      image_size=(32, 32),
                      item_size_law=ItemSizeLaw(base_fraction=0.005,
                                                exponent=-1.0,
                                                jitter_sigma=0.0),
                      spurious_rate=0.0, seed=1001)
    annotations, _ = generate(cfg)
    counts = np.zeros(cfg.n_max, dtype=int)
    for scene in annotations:
        counts[scene.numerosity - 1] += 1
    weights = np.arange(1, cfg.n_max + 1, dtype=float) ** -cfg.zipf_alpha
    probs = weights / weights.sum()
    expected = probs * cfg.n_scenes
    stat = float(((counts - expected) ** 2 / expected).sum())
    p = float(chi2.sf(stat, df=cfg.n_max - 1))
    assert p > 0.001


def test_round_trips_through_coco_parser():
    annotations, _ = generate(small_cfg(n_scenes=10, seed=5))
    document = json.dumps(annotations_to_coco(annotations))
    parsed = parse_coco(document)
    assert [s.numerosity for s in parsed.scenes] == \
        [s.numerosity for s in annotations]
    for orig, back in zip(annotations, parsed.scenes):
        for o_obj, b_obj in zip(orig.objects, back.objects):
            a = mask_to_bitmap(o_obj.mask, orig.image)
            b = mask_to_bitmap(b_obj.mask,
                               ImageMeta(id=0, width=orig.image.width,
                                         height=orig.image.height,
                                         source_dataset="coco"))
            assert np.array_equal(a, b)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SynthConfig(n_scenes=0)
    with pytest.raises(ConfigurationError):
        SynthConfig(n_scenes=1, zipf_alpha=-1.0)
    with pytest.raises(ConfigurationError):
        SynthConfig(n_scenes=1, image_size=(2, 2))
    with pytest.raises(ConfigurationError):
        ScoreBands(true_range=(0.9, 0.1))
    with pytest.raises(ConfigurationError):
        ItemSizeLaw(base_fraction=0.0)


def test_packing_failure_raises():
    from scenestats.errors import GenerationError

    cfg = SynthConfig(n_scenes=5, zipf_alpha=0.01, n_max=30,
                      image_size=(5, 5),
                      item_size_law=ItemSizeLaw(base_fraction=1.0,
                                                exponent=0.0,
                                                jitter_sigma=0.0),
                      seed=13)
    with pytest.raises(GenerationError):
        generate(cfg)
