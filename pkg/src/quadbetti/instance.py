"""Instance files: JSON with dense symmetric matrices of rational strings.

    {"n": 2, "forms": [[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]], ...],
     "seed": 7, "epsilon": "1/8", "p": [[...]]}

Only ``n`` and ``forms`` are required.  Integers are accepted for
entries; floats are rejected so that no precision is silently lost.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .errors import InputError
from .qform import QForm, QuadricSystem, as_fraction, fraction_str

GEN_MAX_DENOMINATOR = 64


@dataclass(frozen=True)
class Instance:
    system: QuadricSystem
    seed: Optional[int] = None
    epsilon: Optional[Fraction] = None
    p: Optional[QForm] = None
    name: str = ""

    def to_dict(self) -> dict:
        out: dict = {"n": self.system.n, "forms": [_matrix_out(q) for q in self.system.forms]}
        if self.name:
            out["name"] = self.name
        if self.seed is not None:
            out["seed"] = self.seed
        if self.epsilon is not None:
            out["epsilon"] = fraction_str(self.epsilon)
        if self.p is not None:
            out["p"] = _matrix_out(self.p)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _matrix_out(q: QForm):
    return [[fraction_str(a) for a in row] for row in q.matrix()]


def _matrix_in(raw: Any, dim: int, what: str) -> QForm:
    if not isinstance(raw, list) or len(raw) != dim or any(not isinstance(r, list) or len(r) != dim for r in raw):
        raise InputError(f"{what}: expected a {dim}x{dim} matrix")
    try:
        return QForm.from_matrix([[as_fraction(a) for a in row] for row in raw])
    except InputError as exc:
        raise InputError(f"{what}: {exc}") from None


def parse_instance(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance must be a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'n' must be a positive integer")
    forms = data.get("forms")
    if not isinstance(forms, list) or not forms:
        raise InputError("'forms' must be a nonempty list of matrices")
    system = QuadricSystem(n, tuple(_matrix_in(f, n + 1, f"form {i}") for i, f in enumerate(forms)))
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise InputError("'seed' must be an integer")
    eps = data.get("epsilon")
    if eps is not None:
        eps = as_fraction(eps)
        if eps < 0:
            raise InputError("'epsilon' must be nonnegative")
    p = data.get("p")
    if p is not None:
        p = _matrix_in(p, n + 1, "p")
    name = data.get("name", "")
    return Instance(system, seed, eps, p, str(name))


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return parse_instance(data)


def load(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return loads(text)


def random_entry(rng: random.Random) -> Fraction:
    d = rng.randint(1, GEN_MAX_DENOMINATOR)
    return Fraction(rng.randint(-d, d), d)


def random_system(seed: int, k: int, n: int) -> QuadricSystem:
    """k random symmetric matrices, entries in [-1, 1] with denominator <= 64."""
    if k < 1 or n < 1:
        raise InputError("need k, n >= 1")
    rng = random.Random(seed)
    forms = []
    for _ in range(k):
        rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for i in range(n + 1):
            for j in range(i + 1):
                rows[i][j] = rows[j][i] = random_entry(rng)
        forms.append(QForm.from_matrix(rows))
    return QuadricSystem(n, tuple(forms))


def generate(seed: int, k: int, n: int) -> Instance:
    return Instance(random_system(seed, k, n), seed=seed, name=f"random-k{k}-n{n}-s{seed}")
