"""Skolem IRI minting and the injectable clock.

Statements, concepts, and preference nodes get stable addressable IRIs of
the form ``<owner-namespace>/<kind>/<uuid>`` instead of blank nodes.
"""

from __future__ import annotations

import random
import uuid
from typing import Optional

from .terms import Iri


class IdMinter:
    """Seedable uuid4-based minter scoped to one owner namespace."""

    def __init__(self, namespace: Iri, seed: Optional[int] = None):
        self.namespace = namespace.value.rstrip("/")
        self._rng = random.Random(seed) if seed is not None else None

    def mint(self, kind: str) -> Iri:
        if self._rng is not None:
            u = uuid.UUID(int=self._rng.getrandbits(128), version=4)
        else:
            u = uuid.uuid4()
        return Iri(f"{self.namespace}/{kind}/{u}")
