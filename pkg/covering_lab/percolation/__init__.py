from covering_lab.percolation.schemas import PercIntersection, PercOutcome, PercParams
from covering_lab.percolation.service import (extinction_prob_oracle, perc_intersect_dim, percolate,
                                              survival_frequency, survival_prob_at_depth)

__all__ = [
    "PercIntersection", "PercOutcome", "PercParams", "extinction_prob_oracle", "perc_intersect_dim", "percolate",
    "survival_frequency", "survival_prob_at_depth",
]
