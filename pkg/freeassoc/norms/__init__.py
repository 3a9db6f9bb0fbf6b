from .norms_table import (NormRow, NormsTable, DatasetStats, NormsException, parse_norms_csv, write_norms_csv,
                          dataset_stats, REPETITIONS)
from .preprocess import preprocess, PreprocessReport
