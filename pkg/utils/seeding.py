"""
Derivación determinista de semillas

Toda la aleatoriedad nace de una semilla raíz que se divide por etiquetas fijas.
"""

import hashlib

import numpy as np


def derive_seed(root_seed: int, label: str) -> int:
    """Semilla de 32 bits derivada de (semilla raíz, etiqueta) vía SHA-256"""
    digest = hashlib.sha256(f"{int(root_seed)}:{label}".encode('utf-8')).digest()
    return int.from_bytes(digest[:4], 'little')


def make_rng(root_seed: int, label: str) -> np.random.Generator:
    """Generador numpy para una etapa concreta"""
    return np.random.default_rng(derive_seed(root_seed, label))
