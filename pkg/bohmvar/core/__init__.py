from .core import main, job  # NOQA
from .scenario_run import ScenarioRun, run_scenario, EXIT_OK,\
    EXIT_CONFIG_ERROR, EXIT_IDENTITY_FAILED, EXIT_DIVERGING  # NOQA
