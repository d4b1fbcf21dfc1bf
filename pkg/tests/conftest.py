import json

import numpy as np
import pytest

from topoprobe.cloud import PointCloud


@pytest.fixture
def unit_square() -> PointCloud:
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return PointCloud(pts)


def write_npy(path, arr):
    np.save(path, np.asarray(arr, dtype=np.float64))
    return path


def write_manifest(path, entries, model_name="model", accuracies=None):
    doc = {
        "manifest_version": 1,
        "model_name": model_name,
        "entries": entries,
    }
    if accuracies is not None:
        doc["accuracies"] = accuracies
    path.write_text(json.dumps(doc))
    return path
