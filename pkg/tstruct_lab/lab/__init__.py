from .generators import enumerate_filtrations, random_complex, random_free_complex
from .fixtures import Fixture, run_fixture, worked_examples

__all__ = [
    "enumerate_filtrations",
    "Fixture",
    "random_complex",
    "random_free_complex",
    "run_fixture",
    "worked_examples",
]
