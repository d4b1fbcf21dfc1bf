import numpy as np


def make_image_dataset(root, classes, n_per_class, shape=(3, 16, 16), seed=0):
    """One subdirectory per class, one float32 .npy array per sample."""
    rng = np.random.default_rng(seed)
    for label in classes:
        d = root / label
        d.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            np.save(d / f"sample{i:04d}.npy", rng.normal(size=shape).astype(np.float32))
    return root


def make_token_dataset(root, classes, n_per_class, length=12, vocab=32, seed=0):
    """One subdirectory per class, one int64 token-id vector per sample."""
    rng = np.random.default_rng(seed)
    for label in classes:
        d = root / label
        d.mkdir(parents=True, exist_ok=True)
        for i in range(n_per_class):
            ids = rng.integers(0, vocab, size=length).astype(np.int64)
            np.save(d / f"sample{i:04d}.npy", ids)
    return root
