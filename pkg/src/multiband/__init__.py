"""Robust linear and combinatorial optimization under multi-band uncertainty.

Modules
-------
model
    Nominal problems, band schemes, profiles, scenarios, JSON interchange.
oracle
    Exhaustive reference implementations used to test everything else.
simplexmilp
    Self-contained two-phase simplex and branch & bound.
reformulation
    Compact robust counterpart plus rhs/cost uncertainty liftings.
flowsep
    Min-cost-flow robustness checking and cut extraction.
cpdriver
    Cutting-plane driver: master solve, separate, add cuts, repeat.
robust01
    Robust binary programs with cost uncertainty via candidate dual sweeps.
probbound
    Data-driven probabilistic violation bounds from coefficient samples.
cli
    `multiband` command-line front end.
"""

from .model import (
    BandPartition,
    BandScheme,
    Instance,
    InstanceError,
    NominalProblem,
    Profile,
    Scenario,
    ScenarioError,
    ScenarioViolation,
    canonicalize_scenario,
    compute_profile,
    dominates,
    dump_instance,
    instance_violations,
    load_instance,
    parse_instance,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BandPartition",
    "BandScheme",
    "Instance",
    "InstanceError",
    "NominalProblem",
    "Profile",
    "Scenario",
    "ScenarioError",
    "ScenarioViolation",
    "canonicalize_scenario",
    "compute_profile",
    "dominates",
    "dump_instance",
    "instance_violations",
    "load_instance",
    "parse_instance",
    "validate_scenario",
    "__version__",
]
