"""Shared helpers for the test modules."""

from foundalog.cli import corpus_dir, load_program


def corpus_program(name: str, *declare: str):
    """A corpus program with command-line style declaration overrides."""
    return load_program(str(corpus_dir() / f"{name}.fl"), list(declare))
