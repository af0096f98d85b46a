import logging
import time

from .errors import SearchTimeout

logger = logging.getLogger(__name__)

# Reading the clock on every node costs more than it is worth
TIME_CHECK_INTERVAL = 1024


class SearchMonitor:
    """Watch a branch-and-bound for its deadline and keep its node statistics.

    The search calls `visit_node` once per node. Every TIME_CHECK_INTERVAL nodes the monitor
    looks at the clock and raises SearchTimeout once the time limit has passed; the search
    catches it at the top and reports whatever incumbent it holds.
    """

    def __init__(self, time_limit, clock=time.monotonic, verbose=False):
        self._clock = clock
        self._started = clock()
        self._deadline = self._started + time_limit
        self._verbose = verbose
        self.nodes = 0
        self.prunes = 0
        self.incumbents = 0

    def visit_node(self):
        self.nodes += 1
        if self.nodes % TIME_CHECK_INTERVAL == 0:
            if self._verbose:
                logger.debug("nodes=%d prunes=%d incumbents=%d",
                             self.nodes, self.prunes, self.incumbents)
            if self._clock() >= self._deadline:
                raise SearchTimeout(f"Time limit reached after {self.nodes} nodes")

    def record_prune(self):
        self.prunes += 1

    def record_incumbent(self, score):
        self.incumbents += 1
        if self._verbose:
            logger.debug("incumbent %d at node %d: %s", self.incumbents, self.nodes, score)

    def elapsed(self):
        return self._clock() - self._started
