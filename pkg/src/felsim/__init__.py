"""felsim: deterministic discrete-event simulator of content-centric
networking with fog-enabled edge learning.

The package is organised around a single-threaded event engine
(:mod:`felsim.engine`) driving CCN forwarding state (:mod:`felsim.ccn`)
over a 5G-style topology (:mod:`felsim.topology`).  Learning agents in
:mod:`felsim.fel` turn observed traffic into caching strategies, and
:mod:`felsim.mobility` adds handover and link selection.  The harness
subpackage builds the canned scenarios and writes CSV metrics.
"""

__version__ = "0.1.0"

from .harness.config import ScenarioConfig, parse_config, serialize_config  # noqa: E402
from .harness.metrics import MetricsTable, write_table  # noqa: E402
from .harness.runner import ArmSimulation, run_scenario  # noqa: E402
from .harness.scenarios import build_scenario, scenario_a, scenario_b, scenario_c  # noqa: E402

__all__ = [
    "ArmSimulation",
    "MetricsTable",
    "ScenarioConfig",
    "build_scenario",
    "parse_config",
    "run_scenario",
    "scenario_a",
    "scenario_b",
    "scenario_c",
    "serialize_config",
    "write_table",
    "__version__",
]
