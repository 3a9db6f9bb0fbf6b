from .report import ExperimentException, ExperimentReport, write_report
from .priming import PrimingItem, default_priming_items, load_priming_items, run_priming
from .bias_probe import GenderProbe, cross_model_correlation, default_gender_probe, load_gender_probe, run_bias_probe
