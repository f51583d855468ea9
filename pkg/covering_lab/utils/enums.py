# Shared string enums; values are what reports and configs carry.
from enum import Enum


class Provenance(str, Enum):
    THEORY = "theory"
    EMPIRICAL = "empirical"


class Verdict(str, Enum):
    AVOID_AS = "AvoidAS"
    HIT_AS_HAUSDORFF = "HitAS_Hausdorff"
    HIT_AS_PACKING = "HitAS_Packing"
    INDETERMINATE = "Indeterminate"

    @property
    def hits(self) -> bool:
        return self in (Verdict.HIT_AS_HAUSDORFF, Verdict.HIT_AS_PACKING)


class ConditionStatus(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


class Command(str, Enum):
    PREDICT = "predict"
    COVER_DIM = "cover-dim"
    HIT = "hit"
    INTERSECT_DIM = "intersect-dim"
    BAD_CASE = "bad-case"
    ROTATE = "rotate"
    PERCOLATE = "percolate"
