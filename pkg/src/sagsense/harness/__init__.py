"""Experiment configs, Monte-Carlo runner, CSV output and the command line."""
