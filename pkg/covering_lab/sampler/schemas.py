from dataclasses import dataclass

import numpy as np

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """
    Path-keyed random stream.

    The output depends only on (seed, path): a stream is rebuilt from a
    SeedSequence whose spawn key is the path, so replica 3 / generation 5
    draws the same numbers no matter which other streams were used first.
    """
    seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if any(p < 0 for p in self.path):
            raise ValueError("stream path entries must be non-negative")

    def derive(self, child: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(child),))

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=self.path)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def key(self) -> np.uint64:
        return self.seed_sequence().generate_state(1, dtype=np.uint64)[0]
