"""Patient-level train/dev/test splitting."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import Corpus

# The leftover patients from flooring go to these folds, in this order.
_REMAINDER_ORDER = (0, 2, 1)


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: Fraction = Fraction(1, 2)
    dev_fraction: Fraction = Fraction(1, 4)
    test_fraction: Fraction = Fraction(1, 4)
    seed: int = 0

    def __post_init__(self):
        fracs = tuple(Fraction(f).limit_denominator(10**6) for f in self.fractions)
        object.__setattr__(self, "train_fraction", fracs[0])
        object.__setattr__(self, "dev_fraction", fracs[1])
        object.__setattr__(self, "test_fraction", fracs[2])
        if any(f <= 0 for f in fracs):
            raise SplitError(f"split fractions must be positive: {fracs}")
        if sum(fracs) != 1:
            raise SplitError(f"split fractions must sum to 1, got {float(sum(fracs))}")
        if not 0 <= self.seed < 2**64:
            raise SplitError("seed must be an unsigned 64-bit integer")

    @property
    def fractions(self):
        return (self.train_fraction, self.dev_fraction, self.test_fraction)


def fold_sizes(n_patients: int, spec: SplitSpec) -> tuple[int, int, int]:
    """Patient counts per fold: floor each share, then hand out the remainder.

    >>> fold_sizes(87, SplitSpec())
    (44, 21, 22)
    """
    sizes = [math.floor(f * n_patients) for f in spec.fractions]
    leftover = n_patients - sum(sizes)
    for i in range(leftover):
        sizes[_REMAINDER_ORDER[i % 3]] += 1
    # every fold gets at least one patient when there are enough to go round
    for i in range(3):
        if sizes[i] == 0 and n_patients >= 3:
            donor = max(range(3), key=lambda j: (sizes[j], -j))
            sizes[donor] -= 1
            sizes[i] += 1
    return tuple(sizes)


def split_by_patient(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    patients = corpus.patient_ids
    if len(patients) < 3:
        raise SplitError(f"need at least 3 patients to split, found {len(patients)}")
    rng = random.Random(spec.seed)
    rng.shuffle(patients)
    n_train, n_dev, _ = fold_sizes(len(patients), spec)
    fold_of = {}
    for i, p in enumerate(patients):
        fold_of[p] = 0 if i < n_train else 1 if i < n_train + n_dev else 2
    folds = ([], [], [])
    for doc in corpus.documents:
        folds[fold_of[doc.patient_id]].append(doc)
    return tuple(Corpus(tuple(f)) for f in folds)
