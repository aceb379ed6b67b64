"""Scenario harness: configuration, scenario builders, the simulation
runner, and CSV metrics output."""
