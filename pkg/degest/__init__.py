__title__ = 'degest'
__author__ = 'Garrett Pennington'
__license__ = 'MIT'
__version__ = '0.1.0'

from .config import EstimatorConfig
from .estimators import all_advice, coin_toss, mean_est, no_advice, threshold_advice
from .graph import Graph, build_graph, ground_truth, partition_by_threshold, read_edge_list
from .oracle import QueryOracle
