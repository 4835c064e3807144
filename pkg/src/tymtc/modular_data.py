"""The ModularData container and its JSON form.

JSON layout::

    {"labels": [...], "dims": [z, ...], "theta": [z, ...], "S": [[z, ...], ...]}

where each z is ``{"order": M, "coeffs": ["p/q", ...]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import lcm

import numpy as np

from .cyclotomic import CyclotomicArray, CyclotomicNumber
from .errors import ArityError


@dataclass
class ModularData:
    labels: list
    dims: list  # CyclotomicNumber per label
    theta: list  # CyclotomicNumber per label (roots of unity)
    S: CyclotomicArray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.labels)
        if len(self.dims) != k or len(self.theta) != k or self.S.shape != (k, k):
            raise ArityError("labels, dims, theta and S disagree in size")
        self.labels = [str(x) for x in self.labels]

    @property
    def rank(self) -> int:
        return len(self.labels)

    @cached_property
    def global_dim(self) -> CyclotomicNumber:
        return sum((d * d for d in self.dims), CyclotomicNumber.zero())

    @property
    def T(self) -> list:
        return self.theta

    @cached_property
    def field_order(self) -> int:
        orders = [self.S.order] + [z.order for z in self.dims] + [z.order for z in self.theta]
        return reduce(lcm, orders, 1)

    def index(self, label: str) -> int:
        return self.labels.index(str(label))

    def unit_index(self) -> int:
        return 0

    def dims_array(self) -> CyclotomicArray:
        return CyclotomicArray.from_numbers(self.dims, self.field_order)

    def theta_array(self) -> CyclotomicArray:
        return CyclotomicArray.from_numbers(self.theta, self.field_order)

    def S_matrix(self) -> CyclotomicArray:
        return self.S.embed(self.field_order)

    def entry(self, i: int, j: int) -> CyclotomicNumber:
        return self.S[i, j]

    def restricted(self, idx) -> "ModularData":
        idx = list(idx)
        num = self.S.num[np.ix_(idx, idx)]
        return ModularData(
            [self.labels[i] for i in idx],
            [self.dims[i] for i in idx],
            [self.theta[i] for i in idx],
            CyclotomicArray(self.S.order, num.copy(), self.S.den),
            dict(self.meta),
        )

    def permuted(self, perm) -> "ModularData":
        return self.restricted(perm)

    def with_S(self, S: CyclotomicArray) -> "ModularData":
        return ModularData(list(self.labels), list(self.dims), list(self.theta), S, dict(self.meta))

    # -- equality and serialization ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ModularData):
            return NotImplemented
        return (
            self.labels == other.labels
            and all(a == b for a, b in zip(self.dims, other.dims))
            and all(a == b for a, b in zip(self.theta, other.theta))
            and self.S.equals(other.S)
        )

    def to_json_obj(self) -> dict:
        S = self.S
        rows = [[S[i, j].to_json() for j in range(self.rank)] for i in range(self.rank)]
        obj = {
            "labels": list(self.labels),
            "dims": [d.to_json() for d in self.dims],
            "theta": [t.to_json() for t in self.theta],
            "S": rows,
        }
        if self.meta:
            obj["meta"] = self.meta
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1, sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ModularData":
        for key in ("labels", "dims", "theta", "S"):
            if key not in obj:
                raise ValueError(f"modular data JSON is missing {key!r}")
        dims = [CyclotomicNumber.from_json(z) for z in obj["dims"]]
        theta = [CyclotomicNumber.from_json(z) for z in obj["theta"]]
        S = CyclotomicArray.from_numbers([[CyclotomicNumber.from_json(z) for z in row] for row in obj["S"]])
        return cls(list(obj["labels"]), dims, theta, S, dict(obj.get("meta", {})))

    @classmethod
    def from_json(cls, text: str) -> "ModularData":
        return cls.from_json_obj(json.loads(text))
