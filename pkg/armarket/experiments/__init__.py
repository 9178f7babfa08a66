"""Experiment configuration, runner, artifact I/O and the command line."""
