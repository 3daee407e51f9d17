# This file makes the workflow directory a Python package
from breakage_fvm.workflow.config import (
    RunConfig,
    StudyConfig,
    config_from_dict,
    load_config,
    parse_config,
    serialize_config,
)
from breakage_fvm.workflow.study_workflow import (
    LevelPlan,
    LevelResult,
    StudyWorkflow,
    plan_time_step,
    run_single,
    run_study,
    seed_check,
)
from breakage_fvm.workflow.output import write_report, write_series

__all__ = [
    'RunConfig',
    'StudyConfig',
    'parse_config',
    'load_config',
    'config_from_dict',
    'serialize_config',
    'StudyWorkflow',
    'LevelPlan',
    'LevelResult',
    'plan_time_step',
    'run_study',
    'run_single',
    'seed_check',
    'write_report',
    'write_series',
]
