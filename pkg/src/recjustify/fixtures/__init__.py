"""Packaged data files: behavioral test graphs under axioms/."""
