import json

import numpy as np
import pytest

from scenestats import EmbeddingTable, Taxonomy, TaxonomyCategory

# COCO-layout fixture: 3 images, 7 annotations, 2 categories.
# Scene numerosities are 3, 3, 1 by construction.
COCO_FIXTURE = {
    "images": [
        {"id": 1, "width": 20, "height": 10, "file_name": "a.jpg"},
        {"id": 2, "width": 16, "height": 16, "file_name": "b.jpg"},
        {"id": 3, "width": 12, "height": 8, "file_name": "c.jpg"},
    ],
    "annotations": [
        {"id": 11, "image_id": 1, "category_id": 1, "bbox": [1, 1, 4, 4],
         "segmentation": [[1, 1, 5, 1, 5, 5, 1, 5]], "iscrowd": 0},
        {"id": 12, "image_id": 1, "category_id": 1, "bbox": [8, 2, 3, 3],
         "segmentation": {"counts": [82, 3, 7, 3, 7, 3, 95], "size": [10, 20]},
         "iscrowd": 0},
        {"id": 13, "image_id": 1, "category_id": 2, "bbox": [0, 0, 1, 1],
         "segmentation": {"counts": "01W6", "size": [10, 20]}, "iscrowd": 1},
        {"id": 21, "image_id": 2, "category_id": 1, "bbox": [0, 0, 2, 2],
         "segmentation": [[0, 0, 2, 0, 2, 2, 0, 2]], "iscrowd": 0},
        {"id": 22, "image_id": 2, "category_id": 1, "bbox": [4, 4, 2, 2],
         "segmentation": [[4, 4, 6, 4, 6, 6, 4, 6]], "iscrowd": 0},
        {"id": 23, "image_id": 2, "category_id": 2, "bbox": [8, 8, 4, 4],
         "segmentation": [[8, 8, 12, 8, 12, 12, 8, 12]], "iscrowd": 0},
        {"id": 31, "image_id": 3, "category_id": 1, "bbox": [2, 2, 6, 4]},
    ],
    "categories": [
        {"id": 1, "name": "dog", "supercategory": "animal"},
        {"id": 2, "name": "ball", "supercategory": "toy"},
    ],
}

VOC_FIXTURE = """<annotation>
  <filename>scene01.jpg</filename>
  <size><width>500</width><height>375</height><depth>3</depth></size>
  <object>
    <name>person</name>
    <bndbox><xmin>10</xmin><ymin>20</ymin><xmax>110</xmax><ymax>220</ymax></bndbox>
  </object>
  <object>
    <name>tvmonitor</name>
    <bndbox><xmin>200</xmin><ymin>50</ymin><xmax>320</xmax><ymax>170</ymax></bndbox>
  </object>
</annotation>
"""


@pytest.fixture
def coco_document():
    return json.dumps(COCO_FIXTURE)


@pytest.fixture
def voc_document():
    return VOC_FIXTURE


@pytest.fixture
def taxonomy():
    return Taxonomy(categories=(
        TaxonomyCategory(id=1, name="dog", supercategory="animal", kind="things"),
        TaxonomyCategory(id=2, name="cat", supercategory="animal", kind="things"),
        TaxonomyCategory(id=3, name="sky", supercategory="background", kind="stuff"),
    ))


@pytest.fixture
def embeddings():
    return EmbeddingTable({
        "dog": [1.0, 0.0, 0.0],
        "cat": [0.0, 1.0, 0.0],
        "sky": [0.0, 0.0, 1.0],
        "pup": [0.9, 0.1, 0.0],
        "cloud": [0.1, 0.0, 0.95],
        "light": [0.4, 0.4, 0.2],
        "traffic": [0.2, 0.7, 0.1],
    })


def random_bitmap(rng: np.random.Generator, height: int, width: int,
                  density: float | None = None) -> np.ndarray:
    if density is None:
        density = float(rng.random())
    return rng.random((height, width)) < density
